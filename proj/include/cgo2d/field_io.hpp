#pragma once
// Serialization: the BKGRID1 binary field format, CSV exports with fixed column
// schemas, and plain-text key=value sidecars.  All text output is deterministic:
// doubles are printed with %.17g (17 significant digits, round-trip exact for
// IEEE-754 binary64) and no locale, timestamp, or pointer data is emitted.
//
// BKGRID1 layout (little-endian):
//   bytes 0..6   magic "BKGRID1"
//   u32          n_side
//   u32          pad_factor
//   f64 pairs    interleaved re, im for every node in row-major order

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cgo2d/grid.hpp"

namespace cgo2d {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

constexpr char kBkgridMagic[7] = {'B', 'K', 'G', 'R', 'I', 'D', '1'};

inline void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline void put_f64_le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int s = 0; s < 64; s += 8) out.push_back(static_cast<char>((bits >> s) & 0xff));
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | p[b];
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace detail

inline void write_bkgrid1(const std::string& path, const GridSpec& spec, const Field& field) {
    const std::size_t expected =
        static_cast<std::size_t>(spec.n_side) * spec.pad_factor * spec.n_side * spec.pad_factor;
    if (field.size() != expected) throw std::invalid_argument("write_bkgrid1: field size mismatch");
    std::string bytes;
    bytes.reserve(sizeof(detail::kBkgridMagic) + 8 + field.size() * 16);
    bytes.append(detail::kBkgridMagic, sizeof(detail::kBkgridMagic));
    detail::put_u32_le(bytes, static_cast<std::uint32_t>(spec.n_side));
    detail::put_u32_le(bytes, static_cast<std::uint32_t>(spec.pad_factor));
    for (const Complex& v : field) {
        detail::put_f64_le(bytes, v.real());
        detail::put_f64_le(bytes, v.imag());
    }
    detail::write_file(path, bytes);
}

inline std::pair<GridSpec, Field> read_bkgrid1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < sizeof(detail::kBkgridMagic) + 8 ||
        std::memcmp(bytes.data(), detail::kBkgridMagic, sizeof(detail::kBkgridMagic)) != 0)
        throw std::runtime_error("not a BKGRID1 file: " + path);
    const unsigned char* p = bytes.data() + sizeof(detail::kBkgridMagic);
    GridSpec spec;
    spec.n_side = static_cast<int>(detail::get_u32_le(p));
    spec.pad_factor = static_cast<int>(detail::get_u32_le(p + 4));
    if (spec.n_side <= 0 || spec.pad_factor <= 0)
        throw std::runtime_error("BKGRID1 header out of range: " + path);
    const std::size_t count =
        static_cast<std::size_t>(spec.n_side) * spec.pad_factor * spec.n_side * spec.pad_factor;
    if (bytes.size() != sizeof(detail::kBkgridMagic) + 8 + count * 16)
        throw std::runtime_error("BKGRID1 payload size mismatch: " + path);
    Field field(count);
    p += 8;
    for (std::size_t k = 0; k < count; ++k) {
        field[k] = Complex(detail::get_f64_le(p), detail::get_f64_le(p + 8));
        p += 16;
    }
    return {spec, field};
}

/// CSV export of a sampled field: one row per node, columns x, y, re, im.
inline void write_field_csv(const std::string& path, const Grid& g, const Field& field) {
    if (field.size() != g.size()) throw std::invalid_argument("write_field_csv: size mismatch");
    std::string out = "x,y,re,im\n";
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            const Complex v = field[g.index(i, j)];
            out += format_double(g.coord(i));
            out += ',';
            out += format_double(g.coord(j));
            out += ',';
            out += format_double(v.real());
            out += ',';
            out += format_double(v.imag());
            out += '\n';
        }
    }
    detail::write_file(path, out);
}

/// Generic CSV writer: fixed header, rows of preformatted cells.
inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows,
                      const std::vector<std::pair<std::string, std::string>>& metadata = {}) {
    std::string out;
    for (const auto& [k, v] : metadata) out += "# " + k + " = " + v + "\n";
    out += header;
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c];
        }
        out += '\n';
    }
    detail::write_file(path, out);
}

/// Plain-text key=value sidecar (one entry per line, insertion order preserved).
inline void write_sidecar(const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    detail::write_file(path, out);
}

}  // namespace cgo2d
