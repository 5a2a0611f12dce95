#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "nonspam/config.hpp"
#include "nonspam/frame.hpp"
#include "nonspam/pgm.hpp"

namespace nonspam::testing {

inline std::string data_path(const std::string& name) { return std::string(NONSPAM_TEST_DATA) + "/" + name; }

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> names = {"camera64.pgm", "coins64.pgm",  "moon48x80.pgm",
                                                 "checker64.pgm", "ramp64.pgm", "disk64_16bit.pgm"};
  return names;
}

inline SpatioTemporalFilter default_filter(std::size_t rows, std::size_t cols, Config config = {}) {
  return build_filter(config, PixelGrid(rows, cols));
}

inline Image uniform_image(const PixelGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_image(grid, rng);
}

inline double max_abs_diff(const RealArray& a, const RealArray& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(const RealArray& a) {
  double d = 0.0;
  for (double v : a.values()) d = std::max(d, std::abs(v));
  return d;
}

inline double norm2(const RealArray& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

inline double rel_diff(const RealArray& a, const RealArray& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s) / norm2(b);
}

inline double mean_square(const Image& f) {
  double s = 0.0;
  for (double v : f.pixels.values()) s += v * v;
  return s / static_cast<double>(f.pixels.size());
}

/// Direct O(n^2) circular convolution: out(k) = sum_i kernel(k - i) f(i).
inline RealArray brute_force_convolve(const RealArray& kernel, const RealArray& f) {
  const std::size_t rows = f.rows();
  const std::size_t cols = f.cols();
  RealArray out(rows, cols, 0.0);
  for (std::size_t kr = 0; kr < rows; ++kr)
    for (std::size_t kc = 0; kc < cols; ++kc) {
      double sum = 0.0;
      for (std::size_t ir = 0; ir < rows; ++ir)
        for (std::size_t ic = 0; ic < cols; ++ic)
          sum += kernel((kr + rows - ir) % rows, (kc + cols - ic) % cols) * f(ir, ic);
      out(kr, kc) = sum;
    }
  return out;
}

}  // namespace nonspam::testing
