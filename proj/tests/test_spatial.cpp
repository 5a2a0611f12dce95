#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nonspam/config.hpp"
#include "nonspam/error.hpp"
#include "nonspam/spatial.hpp"
#include "test_util.hpp"

namespace nonspam {
namespace {

using testing::max_abs;
using testing::max_abs_diff;

TEST(Gaussian, PeakValue) {
  EXPECT_NEAR(eval_gaussian2d(0, 0, 1.5), 0.0707355302630646, 1e-15);
}

TEST(Gaussian, Isotropic) {
  for (double dx : {0.5, 1.0, 3.0}) {
    for (double dy : {0.0, 2.0, -1.0}) {
      EXPECT_EQ(eval_gaussian2d(dx, dy, 0.7), eval_gaussian2d(-dx, dy, 0.7));
      EXPECT_EQ(eval_gaussian2d(dx, dy, 0.7), eval_gaussian2d(dy, dx, 0.7));
    }
  }
}

TEST(Gaussian, UnitMassOnLargeTorus) {
  const RealArray k = sample_kernel_grid(1.5, PixelGrid(64, 64));
  double sum = 0.0;
  for (double v : k.values()) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Gaussian, RejectsNonPositiveWidth) {
  EXPECT_THROW(eval_gaussian2d(0, 0, 0.0), DomainError);
  EXPECT_THROW(eval_gaussian2d(NAN, 0, 1.0), DomainError);
}

TEST(KernelGrid, PeakAtOriginAndTorusSymmetry) {
  const PixelGrid grid(9, 12);
  const RealArray k = sample_kernel_grid(1.2, grid);
  EXPECT_EQ(max_abs(k), k(0, 0));
  for (std::size_t c = 0; c < grid.cols; ++c) EXPECT_EQ(k(1, c), k(grid.rows - 1, c));
  for (std::size_t r = 0; r < grid.rows; ++r) EXPECT_EQ(k(r, 3), k(r, grid.cols - 3));
}

TEST(KernelGrid, DegenerateGrid) {
  const RealArray k = sample_kernel_grid(0.5, PixelGrid(1, 1));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_DOUBLE_EQ(k[0], 1.0 / (2.0 * std::numbers::pi * 0.25));
}

TEST(KernelGrid, EmptyGridRejected) { EXPECT_THROW(PixelGrid(0, 4), DomainError); }

TEST(BuildPhi, ZeroWeightsGiveZeroKernel) {
  const RetinaParams p;
  TemporalWeights w{{0.0}, {0.0}, {0.0}};
  const auto filter = build_phi(p, w, PixelGrid(16, 16));
  EXPECT_EQ(max_abs(filter.kernels()[0]), 0.0);
}

TEST(BuildPhi, EqualWeightsGivePureDog) {
  const RetinaParams p;
  const double limit = asymptotic_weight(p);
  TemporalWeights w{{1.0}, {limit}, {limit}};
  const PixelGrid grid(16, 16);
  const auto filter = build_phi(p, w, grid);
  EXPECT_LE(max_abs_diff(filter.kernels()[0], dog_limit(p, grid)), 1e-16);
}

TEST(BuildPhi, DcValuesFollowWeights) {
  const RetinaParams p;
  Config config;
  const FineTimeGrid time_grid = config.time_grid();
  const auto profile = temporal_profile(p, time_grid);
  auto bins = resolve_time_bins(config, profile);
  // An early bin where the center still dominates, ahead of the default ones.
  bins.insert(bins.begin(), 0.002);
  const auto w = integrate_weights(profile.center, profile.surround, time_grid, bins);
  const auto filter = build_phi(p, w, PixelGrid(64, 64));

  // sigma_c = 0.5 is undersampled, so its lattice mass exceeds 1 noticeably.
  auto mass = [](double sigma) {
    const RealArray k = sample_kernel_grid(sigma, PixelGrid(64, 64));
    double sum = 0.0;
    for (double v : k.values()) sum += v;
    return sum;
  };
  const double mass_c = mass(p.sigma_c);
  const double mass_s = mass(p.sigma_s);
  EXPECT_GT(mass_c, 1.02);
  EXPECT_NEAR(mass_s, 1.0, 1e-9);
  for (std::size_t j = 0; j < filter.bins(); ++j) {
    const double dc = filter.spectra()[j](0, 0).real();
    EXPECT_NEAR(dc, p.w_C * w.rc[j] * mass_c - p.w_S * w.rs[j] * mass_s, 1e-12) << "bin " << j;
  }
  EXPECT_GT(filter.spectra()[0](0, 0).real(), 0.0);
  const double limit_dc = asymptotic_weight(p) * (p.w_C * mass_c - p.w_S * mass_s);
  for (std::size_t j = 2; j < filter.bins(); ++j) {
    const double before = std::abs(filter.spectra()[j - 1](0, 0).real() - limit_dc);
    const double now = std::abs(filter.spectra()[j](0, 0).real() - limit_dc);
    EXPECT_LT(now, before) << "bin " << j;
  }
}

TEST(BuildPhi, LinearInWeights) {
  const RetinaParams p;
  TemporalWeights w{{0.01, 0.02}, {0.31, 0.27}, {0.12, 0.26}};
  TemporalWeights doubled = w;
  for (auto& v : doubled.rc) v *= 2.0;
  for (auto& v : doubled.rs) v *= 2.0;
  const PixelGrid grid(12, 10);
  const auto a = build_phi(p, w, grid);
  const auto b = build_phi(p, doubled, grid);
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(b.kernels()[j][i], 2.0 * a.kernels()[j][i], 1e-15 * std::abs(b.kernels()[j][i]));
    }
  }
}

TEST(BuildPhi, SpectraAreRealAndAggregatePositive) {
  const auto filter = testing::default_filter(64, 64);
  for (const auto& spectrum : filter.spectra()) {
    for (const auto& v : spectrum.values()) ASSERT_LE(std::abs(v.imag()), 1e-12);
  }
  for (double s : filter.aggregate_spectrum().values()) ASSERT_GT(s, 0.0);
}

TEST(BuildPhi, KernelsAreEven) {
  const auto filter = testing::default_filter(10, 7);
  const auto& k = filter.kernels().back();
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 7; ++c) {
      EXPECT_EQ(k(r, c), k((10 - r) % 10, c));
      EXPECT_EQ(k(r, c), k(r, (7 - c) % 7));
    }
}

TEST(DogLimit, UnitFeedbackVanishes) {
  RetinaParams p;
  p.w_C = 1.0;
  EXPECT_EQ(max_abs(dog_limit(p, PixelGrid(8, 8))), 0.0);
}

TEST(DogLimit, CenterValue) {
  const RetinaParams p;
  const RealArray dog = dog_limit(p, PixelGrid(32, 32));
  const double expected =
      0.25 * (0.75 / (2.0 * std::numbers::pi * 0.25) - 1.0 / (2.0 * std::numbers::pi * 2.25));
  EXPECT_NEAR(dog(0, 0), expected, 1e-15);
  EXPECT_NEAR(dog(0, 0), 0.10168232475315535, 1e-14);
}

TEST(DogLimit, FinalDefaultBinMatches) {
  const RetinaParams p;
  const PixelGrid grid(64, 64);
  const auto filter = testing::default_filter(64, 64);
  const RealArray dog = dog_limit(p, grid);
  EXPECT_LE(max_abs_diff(filter.kernels().back(), dog), 1e-3 * max_abs(dog));
}

TEST(SpectrumCut, Layout) {
  const auto filter = testing::default_filter(8, 8);
  std::ostringstream out;
  write_spectrum_cut_csv(out, filter);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "freq_index,bin_1,bin_2,bin_3,bin_4,bin_5");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8u);
}

}  // namespace
}  // namespace nonspam
