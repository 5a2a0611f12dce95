#include "nonspam/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nonspam/csv.hpp"
#include "nonspam/error.hpp"

namespace nonspam {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string(name) + " must be finite and strictly positive");
  }
}

}  // namespace

std::vector<std::string> RetinaParams::validate() const {
  require_positive(tau_C, "tau_C");
  require_positive(tau_S, "tau_S");
  require_positive(tau_G, "tau_G");
  require_positive(sigma_c, "sigma_c");
  require_positive(sigma_s, "sigma_s");
  if (!std::isfinite(w_C) || !std::isfinite(w_S)) throw DomainError("weights w_C and w_S must be finite");

  std::vector<std::string> warnings;
  if (w_C == 1.0) {
    warnings.emplace_back("w_C = 1: the asymptotic filter is identically zero");
  } else if (!(w_C > 0.0 && w_C < 1.0)) {
    warnings.emplace_back("w_C outside (0, 1): the asymptotic DoG limit is not the retinal one");
  }
  return warnings;
}

FineTimeGrid::FineTimeGrid(double dt, double t_max) : dt_(dt), t_max_(t_max) {
  if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("time step dt must be positive");
  if (!std::isfinite(t_max) || t_max < dt) throw DomainError("time horizon t_max must be at least dt");
  // Guard against t_max/dt landing just below an integer.
  samples_ = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
}

double eval_gamma(double t, double tau, unsigned n) {
  if (!std::isfinite(t) || !std::isfinite(tau)) throw DomainError("eval_gamma: non-finite argument");
  if (tau <= 0.0) throw DomainError("eval_gamma: tau must be positive");
  if (t < 0.0) return 0.0;
  if (n == 0) return std::exp(-t / tau) / tau;
  if (t == 0.0) return 0.0;
  const double x = t / tau;
  return std::exp(static_cast<double>(n) * std::log(x) - x) / tau;
}

std::vector<double> causal_convolve(std::span<const double> a, std::span<const double> b, double dt) {
  if (a.size() != b.size()) throw DimensionError("causal_convolve: operands differ in length");
  const std::size_t count = a.size();
  std::vector<double> out(count, 0.0);
  for (std::size_t k = 1; k < count; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i <= k; ++i) sum += a[i] * b[k - i];
    sum -= 0.5 * (a[0] * b[k] + a[k] * b[0]);
    out[k] = dt * sum;
  }
  return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, double dt) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t k = 1; k < x.size(); ++k) out[k] = out[k - 1] + 0.5 * dt * (x[k - 1] + x[k]);
  return out;
}

namespace {

std::vector<double> sample_gamma(const FineTimeGrid& grid, double tau, unsigned n) {
  std::vector<double> out(grid.samples());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = eval_gamma(grid.time(k), tau, n);
  return out;
}

}  // namespace

std::vector<double> eval_center_T(const RetinaParams& params, const FineTimeGrid& grid) {
  params.validate();
  const double tau_min = std::min({params.tau_C, params.tau_S, params.tau_G});
  if (grid.dt() > tau_min / 10.0) {
    throw PrecisionError("time grid too coarse: dt = " + format_number(grid.dt()) +
                         " exceeds a tenth of the smallest time constant " + format_number(tau_min));
  }

  std::vector<double> center = sample_gamma(grid, params.tau_G, params.gamma_order_n);
  if (params.w_C != 0.0) {
    const std::vector<double> exp_C = sample_gamma(grid, params.tau_C, 0);
    const std::vector<double> smoothed = causal_convolve(center, exp_C, grid.dt());
    for (std::size_t k = 0; k < center.size(); ++k) center[k] -= params.w_C * smoothed[k];
  }
  return center;
}

std::vector<double> eval_surround_temporal(std::span<const double> center, const RetinaParams& params,
                                           const FineTimeGrid& grid) {
  if (center.size() != grid.samples()) {
    throw DimensionError("eval_surround_temporal: center kernel length " + std::to_string(center.size()) +
                         " does not match the grid (" + std::to_string(grid.samples()) + ")");
  }
  const std::vector<double> exp_S = sample_gamma(grid, params.tau_S, 0);
  return causal_convolve(center, exp_S, grid.dt());
}

TemporalWeights integrate_weights(std::span<const double> center, std::span<const double> surround,
                                  const FineTimeGrid& grid, std::span<const double> time_bins) {
  if (center.size() != grid.samples() || surround.size() != grid.samples()) {
    throw DimensionError("integrate_weights: kernel lengths do not match the grid");
  }
  for (std::size_t j = 0; j < time_bins.size(); ++j) {
    const double t = time_bins[j];
    if (!std::isfinite(t) || t < 0.0 || t > grid.t_max() * (1.0 + 1e-12)) {
      throw RangeError("time bin " + format_number(t) + " s lies outside [0, " + format_number(grid.t_max()) +
                       "]");
    }
    if (j > 0 && !(t > time_bins[j - 1])) throw RangeError("time bins must be strictly increasing");
  }

  const std::vector<double> cum_c = cumulative_trapezoid(center, grid.dt());
  const std::vector<double> cum_s = cumulative_trapezoid(surround, grid.dt());
  const std::size_t last = grid.samples() - 1;

  auto interpolate = [&](const std::vector<double>& cum, double t) {
    const double pos = t / grid.dt();
    std::size_t k = static_cast<std::size_t>(std::floor(pos));
    if (k >= last) {
      if (last == 0) return cum[0];
      k = last - 1;
    }
    const double frac = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
    if (frac == 0.0) return cum[k];
    if (frac == 1.0) return cum[k + 1];
    return cum[k] + frac * (cum[k + 1] - cum[k]);
  };

  TemporalWeights weights;
  weights.time_bins.assign(time_bins.begin(), time_bins.end());
  weights.rc.reserve(time_bins.size());
  weights.rs.reserve(time_bins.size());
  for (double t : time_bins) {
    weights.rc.push_back(interpolate(cum_c, t));
    weights.rs.push_back(interpolate(cum_s, t));
  }
  return weights;
}

TemporalProfile temporal_profile(const RetinaParams& params, const FineTimeGrid& grid) {
  TemporalProfile profile;
  profile.center = eval_center_T(params, grid);
  profile.surround = eval_surround_temporal(profile.center, params, grid);
  profile.rc = cumulative_trapezoid(profile.center, grid.dt());
  profile.rs = cumulative_trapezoid(profile.surround, grid.dt());
  return profile;
}

double asymptotic_weight(const RetinaParams& params) {
  return std::tgamma(static_cast<double>(params.gamma_order_n) + 1.0) * (1.0 - params.w_C);
}

double convergence_time(const TemporalProfile& profile, const RetinaParams& params, const FineTimeGrid& grid,
                        double eps) {
  if (!std::isfinite(eps) || eps <= 0.0) throw DomainError("convergence tolerance must be positive");
  const double limit = asymptotic_weight(params);
  if (limit == 0.0) throw DomainError("asymptotic weight is zero; relative convergence is undefined");

  const double bound = eps * std::abs(limit);
  for (std::size_t k = 0; k < grid.samples(); ++k) {
    const double residual = std::max(std::abs(profile.rc[k] - limit), std::abs(profile.rs[k] - limit));
    if (residual <= bound) return grid.time(k);
  }
  const std::size_t last = grid.samples() - 1;
  const double residual =
      std::max(std::abs(profile.rc[last] - limit), std::abs(profile.rs[last] - limit)) / std::abs(limit);
  throw NotConvergedError("temporal weights did not converge within t_max = " + format_number(grid.t_max()) +
                              " s at relative tolerance " + format_number(eps),
                          residual);
}

double convergence_time(const RetinaParams& params, const FineTimeGrid& grid, double eps) {
  return convergence_time(temporal_profile(params, grid), params, grid, eps);
}

std::vector<double> uniform_time_bins(double horizon, std::size_t m) {
  if (m == 0) throw DomainError("at least one time bin is required");
  if (!std::isfinite(horizon) || horizon <= 0.0) throw DomainError("time-bin horizon must be positive");
  std::vector<double> bins(m);
  for (std::size_t j = 0; j < m; ++j) bins[j] = horizon * static_cast<double>(j + 1) / static_cast<double>(m);
  return bins;
}

void write_temporal_csv(std::ostream& out, const TemporalProfile& profile, const FineTimeGrid& grid) {
  out << "time_s,T,TS,RC,RS\n";
  for (std::size_t k = 0; k < grid.samples(); ++k) {
    out << format_number(grid.time(k)) << ',' << format_number(profile.center[k]) << ','
        << format_number(profile.surround[k]) << ',' << format_number(profile.rc[k]) << ','
        << format_number(profile.rs[k]) << '\n';
  }
}

}  // namespace nonspam
