#pragma once
// Shared helpers for the unit tests.
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cgo2d/grid.hpp"

namespace test_util {

inline double rel_l2_masked(const cgo2d::Grid& g, const cgo2d::Field& a, const cgo2d::Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t k : g.masked_indices()) {
        num += std::norm(a[k] - b[k]);
        den += std::norm(b[k]);
    }
    return std::sqrt(num / den);
}

inline double max_abs_masked(const cgo2d::Grid& g, const cgo2d::Field& f) {
    double m = 0.0;
    for (std::size_t k : g.masked_indices()) m = std::max(m, std::abs(f[k]));
    return m;
}

inline double max_abs_diff_masked(const cgo2d::Grid& g, const cgo2d::Field& a,
                                  const cgo2d::Field& b) {
    double m = 0.0;
    for (std::size_t k : g.masked_indices()) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

/// Fresh scratch directory under the system temp root.
inline std::string scratch_dir(const std::string& tag) {
    auto path = std::filesystem::temp_directory_path() / ("cgo2d_test_" + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
    return path.string();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace test_util
