#pragma once

#include <cstdint>

#include "nonspam/spatial.hpp"

namespace nonspam {

/// Dense-matrix cross-check of the spectral code paths.
struct DenseOracleReport {
  double analysis_max_abs_error = 0.0;   // |Phi f - analyze(f)|_inf
  double eigenvalue_max_rel_error = 0.0; // sorted eig(Phi^T Phi) vs sorted S, relative to max S
  double alpha_rel_error = 0.0;          // sigma_min^2 vs alpha_tight
  double beta_rel_error = 0.0;           // sigma_max^2 vs beta_tight
  double pinv_rel_error = 0.0;           // least-squares solve vs dual_solve, relative 2-norm
};

/// Runs the dense oracle on one pseudo-random image. Refuses grids with more
/// than 1024 pixels (the Gram eigen-solve is cubic in n).
DenseOracleReport dense_oracle_check(const SpatioTemporalFilter& filter, std::uint64_t seed);

}  // namespace nonspam
