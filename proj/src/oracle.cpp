#include "nonspam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nonspam/error.hpp"
#include "nonspam/frame.hpp"
#include "nonspam/reconstruction.hpp"

namespace nonspam {

DenseOracleReport dense_oracle_check(const SpatioTemporalFilter& filter, std::uint64_t seed) {
  const PixelGrid& grid = filter.grid();
  if (grid.size() > 1024) {
    throw ScaleGuardError("dense oracle refused: " + std::to_string(grid.size()) + " pixels exceed 1024");
  }
  const Eigen::MatrixXd phi = dense_frame_matrix(filter);
  const std::size_t n = grid.size();

  std::mt19937_64 rng(seed);
  const Image image = random_image(grid, rng);
  const ActivationTensor acts = analyze(image, filter);

  DenseOracleReport report;
  const Eigen::VectorXd dense_coeffs = phi * flatten(image.pixels);
  for (std::size_t j = 0; j < acts.bins(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = std::abs(dense_coeffs(static_cast<Eigen::Index>(j * n + i)) - acts.coeffs[j][i]);
      report.analysis_max_abs_error = std::max(report.analysis_max_abs_error, diff);
    }
  }

  const Eigen::MatrixXd gram = phi.transpose() * phi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  const auto aggregate = filter.aggregate_spectrum().values();
  std::vector<double> spectrum(aggregate.begin(), aggregate.end());
  std::sort(eig.begin(), eig.end());
  std::sort(spectrum.begin(), spectrum.end());
  const double scale = spectrum.back();
  for (std::size_t i = 0; i < n; ++i) {
    report.eigenvalue_max_rel_error = std::max(report.eigenvalue_max_rel_error, std::abs(eig[i] - spectrum[i]) / scale);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv(0);
  const double sigma_min = sv(sv.size() - 1);
  const auto [alpha, beta] = frame_bounds_tight(filter);
  report.alpha_rel_error = std::abs(sigma_min * sigma_min - alpha) / alpha;
  report.beta_rel_error = std::abs(sigma_max * sigma_max - beta) / beta;

  Eigen::VectorXd stacked(static_cast<Eigen::Index>(n * acts.bins()));
  for (std::size_t j = 0; j < acts.bins(); ++j) {
    for (std::size_t i = 0; i < n; ++i) stacked(static_cast<Eigen::Index>(j * n + i)) = acts.coeffs[j][i];
  }
  const Eigen::VectorXd pinv = phi.completeOrthogonalDecomposition().solve(stacked);
  const Eigen::VectorXd dual = flatten(dual_solve(acts, filter).pixels);
  report.pinv_rel_error = (pinv - dual).norm() / dual.norm();
  return report;
}

}  // namespace nonspam
