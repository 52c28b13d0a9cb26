#ifndef PODSKETCH_PODM_HPP
#define PODSKETCH_PODM_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "podsketch/matrix.hpp"

namespace podsketch {

//
// PODM binary matrix layout (all little-endian):
//
//   offset 0   "PODM"
//   offset 4   u32 version (= 1)
//   offset 8   u64 rows
//   offset 16  u64 cols
//   offset 24  rows*cols binary64 values, column-major
//
inline constexpr std::uint32_t kPodmVersion = 1;
inline constexpr std::uint64_t kPodmHeaderBytes = 24;

struct PodmHeader {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
};

void write_podm(std::ostream& out, const DenseMatrix& a);
void write_podm(const std::filesystem::path& path, const DenseMatrix& a);

// Reads and validates the header; the stream is left at the first value.
// offset is the absolute byte position of the header (used in error messages).
PodmHeader read_podm_header(std::istream& in, std::uint64_t offset = 0);

// Reads count binary64 values starting at the current stream position.
void read_podm_values(std::istream& in, double* dst, std::uint64_t count, std::uint64_t offset);

DenseMatrix read_podm(std::istream& in, std::uint64_t offset = 0);
DenseMatrix read_podm(const std::filesystem::path& path);

//
// PODF factor file: a PODM-encoded U, then u64 count + count binary64 sigma
// values, then a u8 flag (1 when V follows) and optionally a PODM-encoded V.
//
void write_podf(const std::filesystem::path& path, const TruncatedFactor& factor);
TruncatedFactor read_podf(const std::filesystem::path& path);

enum class FileKind { podm, podf, unknown };

// A PODF file opens with a PODM block, so the two are told apart by whether
// bytes follow the leading matrix.
FileKind sniff_file_kind(const std::filesystem::path& path);

// One matrix row per line, comma-separated decimal literals.
DenseMatrix read_csv(std::istream& in);
DenseMatrix read_csv(const std::filesystem::path& path);

}  // namespace podsketch

#endif  // PODSKETCH_PODM_HPP
