#include "mtb/grid_field.hpp"

#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace mtb {
namespace {

constexpr const char* kMagic = "MTB1";

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t to_le(std::uint64_t x)
{
    if constexpr (std::endian::native == std::endian::big)
        return __builtin_bswap64(x);
    return x;
}

std::int64_t parse_dim(const std::string& token, const char* name)
{
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (token.empty() || *end != '\0' || errno != 0 || v < 1)
        throw FieldFormatError(std::string("header field ") + name + ": expected positive integer, got '" + token + "'");
    return v;
}

double parse_spacing(const std::string& token, const char* name)
{
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || *end != '\0' || !std::isfinite(v) || v <= 0.0)
        throw FieldFormatError(std::string("header field ") + name + ": expected positive real, got '" + token + "'");
    return v;
}

} // namespace

std::string serialize_field(const GridField& field, FieldEncoding encoding)
{
    for (std::int64_t v = 0; v < field.size(); ++v) {
        if (!std::isfinite(field[v]))
            throw std::invalid_argument("refusing to write non-finite value at vertex " + std::to_string(v));
    }
    const auto& d = field.dims();
    const auto& s = field.spacing();
    std::string out = std::string(kMagic) + ' ' + std::to_string(d.nx) + ' ' + std::to_string(d.ny) + ' ' +
                      std::to_string(d.nz) + ' ' + format_double(s[0]) + ' ' + format_double(s[1]) + ' ' +
                      format_double(s[2]) + ' ' + (encoding == FieldEncoding::Text ? "text" : "f64le") + '\n';
    if (encoding == FieldEncoding::Text) {
        for (std::int64_t v = 0; v < field.size(); ++v) {
            out += format_double(field[v]);
            out += ((v + 1) % d.nx == 0) ? '\n' : ' ';
        }
    } else {
        const std::size_t offset = out.size();
        out.resize(offset + 8 * static_cast<std::size_t>(field.size()));
        for (std::int64_t v = 0; v < field.size(); ++v) {
            const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(field[v]));
            std::memcpy(out.data() + offset + 8 * static_cast<std::size_t>(v), &bits, 8);
        }
    }
    return out;
}

void write_field(const GridField& field, const std::string& path, FieldEncoding encoding)
{
    const std::string bytes = serialize_field(field, encoding);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os)
        throw IoError("write failed for '" + path + "'");
}

GridField parse_field(std::span<const char> bytes)
{
    const auto* nl = static_cast<const char*>(std::memchr(bytes.data(), '\n', bytes.size()));
    if (nl == nullptr)
        throw FieldFormatError("header: missing newline terminator");
    const std::string header(bytes.data(), nl);
    std::istringstream hs(header);
    std::vector<std::string> tok{std::istream_iterator<std::string>(hs), std::istream_iterator<std::string>()};
    if (tok.empty() || tok[0] != kMagic)
        throw FieldFormatError("header field magic: expected 'MTB1'");
    if (tok.size() != 8)
        throw FieldFormatError("header: expected 8 fields, got " + std::to_string(tok.size()));

    const Dims dims{parse_dim(tok[1], "nx"), parse_dim(tok[2], "ny"), parse_dim(tok[3], "nz")};
    const std::array<double, 3> spacing{parse_spacing(tok[4], "sx"), parse_spacing(tok[5], "sy"),
                                        parse_spacing(tok[6], "sz")};
    const std::int64_t n = dims.size();
    const std::size_t payload = static_cast<std::size_t>(nl - bytes.data()) + 1;

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    if (tok[7] == "f64le") {
        const std::size_t expected = 8 * static_cast<std::size_t>(n);
        const std::size_t got = bytes.size() - payload;
        if (got != expected)
            throw FieldFormatError("payload length mismatch at byte offset " + std::to_string(payload) + ": expected " +
                                   std::to_string(expected) + " bytes, got " + std::to_string(got));
        for (std::int64_t v = 0; v < n; ++v) {
            std::uint64_t bits;
            std::memcpy(&bits, bytes.data() + payload + 8 * static_cast<std::size_t>(v), 8);
            const double x = std::bit_cast<double>(to_le(bits));
            if (!std::isfinite(x))
                throw FieldFormatError("non-finite value at byte offset " +
                                       std::to_string(payload + 8 * static_cast<std::size_t>(v)));
            values.push_back(x);
        }
    } else if (tok[7] == "text") {
        const std::string body(bytes.data() + payload, bytes.size() - payload);
        const char* p = body.c_str();
        const char* end = p + body.size();
        while (true) {
            while (p < end && std::isspace(static_cast<unsigned char>(*p)))
                ++p;
            if (p >= end)
                break;
            const std::size_t offset = payload + static_cast<std::size_t>(p - body.c_str());
            char* stop = nullptr;
            const double x = std::strtod(p, &stop);
            if (stop == p || (stop < end && !std::isspace(static_cast<unsigned char>(*stop))))
                throw FieldFormatError("malformed number at byte offset " + std::to_string(offset));
            if (!std::isfinite(x))
                throw FieldFormatError("non-finite value at byte offset " + std::to_string(offset));
            if (static_cast<std::int64_t>(values.size()) == n)
                throw FieldFormatError("payload length mismatch at byte offset " + std::to_string(offset) +
                                       ": more than " + std::to_string(n) + " values");
            values.push_back(x);
            p = stop;
        }
        if (static_cast<std::int64_t>(values.size()) != n)
            throw FieldFormatError("payload length mismatch: header declares " + std::to_string(n) + " values, found " +
                                   std::to_string(values.size()));
    } else {
        throw FieldFormatError("header field encoding: expected 'text' or 'f64le', got '" + tok[7] + "'");
    }

    try {
        return GridField(dims, spacing, std::move(values));
    } catch (const std::invalid_argument& e) {
        throw FieldFormatError(e.what());
    }
}

GridField load_field(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open field file '" + path + "'");
    const std::string bytes{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    return parse_field(bytes);
}

} // namespace mtb
