#pragma once

#include <cstdint>
#include <optional>

#include "fracdrift/regularity_lab.hpp"
#include "fracdrift/stationary_solver.hpp"

namespace fracdrift {

/// (-Delta)^{alpha/2} u + (-Delta)^{beta/2}(u^2) = f with 0 < beta < alpha.
struct ToyConfig : SolverConfig {
  ToyConfig() { alpha = 1.0; }
  double beta = 0.5;

  /// Throws Parameter unless 0 < beta < alpha, plus the SolverConfig checks.
  void validate() const;
};

/// ||Lambda^alpha u + Lambda^beta(u^2) - f||_2 / max(||f||_2, 1e-300).
double toy_residual(const RealField& u, const RealField& f, const ToyConfig& cfg);

/// Picard iteration of u = -Lambda^{beta-alpha}(u^2) + Lambda^{-alpha} f.
/// No weak-norm quantities are computed: lorentz_norms stays empty, gate and
/// ball_radius unset.
SolveReport toy_solve(const RealField& f, const ToyConfig& cfg, const std::optional<RealField>& start = std::nullopt);

/// synthesize_source -> toy_solve -> slope fits, with ladder step alpha - beta.
RegularityReport toy_gain_experiment(double gamma, const Grid& grid, double amplitude, const ToyConfig& cfg,
                                     std::uint64_t seed = 1);

}  // namespace fracdrift
