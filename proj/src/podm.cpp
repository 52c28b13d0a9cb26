#include "podsketch/podm.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "podsketch/error.hpp"

namespace podsketch {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'O', 'D', 'M'};

template <typename T>
void put_le(std::ostream& out, T value)
{
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu);
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, std::uint64_t offset, const char* what)
{
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw FormatError(std::string("truncated input while reading ") + what, offset);
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return static_cast<T>(value);
}

void put_doubles(std::ostream& out, const double* src, std::uint64_t count)
{
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(src), static_cast<std::streamsize>(count * sizeof(double)));
    } else {
        for (std::uint64_t i = 0; i < count; ++i)
            put_le(out, std::bit_cast<std::uint64_t>(src[i]));
    }
}

}  // namespace

void write_podm(std::ostream& out, const DenseMatrix& a)
{
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kPodmVersion);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(a.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(a.cols()));
    put_doubles(out, a.data(), static_cast<std::uint64_t>(a.size()));
}

void write_podm(const std::filesystem::path& path, const DenseMatrix& a)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ParameterError("cannot open " + path.string() + " for writing");
    write_podm(out, a);
    if (!out)
        throw ParameterError("write failed: " + path.string());
}

PodmHeader read_podm_header(std::istream& in, std::uint64_t offset)
{
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != 4)
        throw FormatError("truncated input while reading magic", offset);
    if (magic != kMagic)
        throw FormatError("bad magic, expected PODM", offset);
    const auto version = get_le<std::uint32_t>(in, offset + 4, "version");
    if (version != kPodmVersion)
        throw FormatError("unsupported PODM version " + std::to_string(version), offset + 4);
    PodmHeader header;
    header.rows = get_le<std::uint64_t>(in, offset + 8, "rows");
    header.cols = get_le<std::uint64_t>(in, offset + 16, "cols");
    return header;
}

void read_podm_values(std::istream& in, double* dst, std::uint64_t count, std::uint64_t offset)
{
    const auto bytes = static_cast<std::streamsize>(count * sizeof(double));
    in.read(reinterpret_cast<char*>(dst), bytes);
    if (in.gcount() != bytes) {
        const auto got = static_cast<std::uint64_t>(std::max<std::streamsize>(in.gcount(), 0));
        throw FormatError("truncated matrix data", offset + got);
    }
    if constexpr (std::endian::native != std::endian::little) {
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint64_t raw = 0;
            std::memcpy(&raw, dst + i, sizeof raw);
            std::uint64_t swapped = 0;
            for (int b = 0; b < 8; ++b)
                swapped |= ((raw >> (8 * b)) & 0xffu) << (8 * (7 - b));
            dst[i] = std::bit_cast<double>(swapped);
        }
    }
}

DenseMatrix read_podm(std::istream& in, std::uint64_t offset)
{
    const PodmHeader header = read_podm_header(in, offset);
    DenseMatrix a(static_cast<Index>(header.rows), static_cast<Index>(header.cols));
    read_podm_values(in, a.data(), header.rows * header.cols, offset + kPodmHeaderBytes);
    for (Index i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a.data()[i]))
            throw FormatError("non-finite matrix value",
                              offset + kPodmHeaderBytes + static_cast<std::uint64_t>(i) * sizeof(double));
    }
    return a;
}

DenseMatrix read_podm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParameterError("cannot open " + path.string());
    return read_podm(in, 0);
}

void write_podf(const std::filesystem::path& path, const TruncatedFactor& factor)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ParameterError("cannot open " + path.string() + " for writing");
    write_podm(out, factor.u);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(factor.sigma.size()));
    put_doubles(out, factor.sigma.data(), static_cast<std::uint64_t>(factor.sigma.size()));
    put_le<std::uint8_t>(out, factor.v ? 1 : 0);
    if (factor.v)
        write_podm(out, *factor.v);
    if (!out)
        throw ParameterError("write failed: " + path.string());
}

TruncatedFactor read_podf(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParameterError("cannot open " + path.string());
    TruncatedFactor factor;
    factor.u = read_podm(in, 0);
    std::uint64_t offset = kPodmHeaderBytes + static_cast<std::uint64_t>(factor.u.size()) * 8;
    const auto count = get_le<std::uint64_t>(in, offset, "sigma count");
    offset += 8;
    if (count != static_cast<std::uint64_t>(factor.u.cols()))
        throw FormatError("sigma count does not match U column count", offset - 8);
    factor.sigma.resize(static_cast<Index>(count));
    read_podm_values(in, factor.sigma.data(), count, offset);
    offset += count * 8;
    const auto has_v = get_le<std::uint8_t>(in, offset, "V flag");
    offset += 1;
    if (has_v > 1)
        throw FormatError("bad V flag", offset - 1);
    if (has_v == 1) {
        DenseMatrix v = read_podm(in, offset);
        if (v.cols() != factor.u.cols())
            throw FormatError("V column count does not match U", offset);
        factor.v = std::move(v);
    }
    return factor;
}

FileKind sniff_file_kind(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParameterError("cannot open " + path.string());
    try {
        const PodmHeader header = read_podm_header(in, 0);
        const auto expected = kPodmHeaderBytes + header.rows * header.cols * 8;
        const auto size = static_cast<std::uint64_t>(std::filesystem::file_size(path));
        if (size == expected)
            return FileKind::podm;
        if (size > expected)
            return FileKind::podf;
        return FileKind::unknown;
    } catch (const FormatError&) {
        return FileKind::unknown;
    }
}

DenseMatrix read_csv(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::uint64_t offset = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::uint64_t line_start = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<double> values;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(field, &used);
            } catch (const std::exception&) {
                throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + field + "'",
                                  line_start);
            }
            if (field.find_first_not_of(" \t", used) != std::string::npos)
                throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + field + "'",
                                  line_start);
            values.push_back(x);
        }
        if (!line.empty() && line.back() == ',')
            throw FormatError("line " + std::to_string(line_no) + ": trailing comma", line_start);
        if (!rows.empty() && values.size() != rows.front().size())
            throw FormatError("line " + std::to_string(line_no) + ": ragged row (" +
                                  std::to_string(values.size()) + " fields, expected " +
                                  std::to_string(rows.front().size()) + ")",
                              line_start);
        rows.push_back(std::move(values));
    }
    if (rows.empty())
        throw FormatError("empty CSV input", 0);
    DenseMatrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    check_finite(a);
    return a;
}

DenseMatrix read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open " + path.string());
    return read_csv(in);
}

}  // namespace podsketch
