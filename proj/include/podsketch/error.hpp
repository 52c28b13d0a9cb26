#ifndef PODSKETCH_ERROR_HPP
#define PODSKETCH_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace podsketch {

// Broad failure classes; the CLI maps each one to its own exit code.
enum class ErrorKind {
    parameter,     // argument outside its domain (k > min(m,n), delta >= 1, ...)
    format,        // malformed input file
    degenerate,    // probability distribution with zero total mass
    numerical      // backend failed to converge
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error(ErrorKind::parameter, what) {}
};

class DegenerateDistribution : public Error {
public:
    explicit DegenerateDistribution(const std::string& what) : Error(ErrorKind::degenerate, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class FormatError : public Error {
public:
    FormatError(const std::string& what, std::uint64_t offset)
        : Error(ErrorKind::format, what + " (byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace podsketch

#endif  // PODSKETCH_ERROR_HPP
