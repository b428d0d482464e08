#include "fracdrift/toy_model.hpp"

#include <algorithm>
#include <cmath>

#include "fracdrift/spectral.hpp"

namespace fracdrift {

namespace {

Symbol power_symbol(const Grid& grid, double order) {
  return Symbol::radial(grid, [order](double k) { return std::pow(k, order); }, 0.0);
}

RealField lifted(const RealField& f, const Symbol& m) {
  return inverse_transform(apply_symbol(forward_transform(f), m));
}

// f - Lambda^beta(u^2), the right side of Lambda^alpha u = f - N(u).
RealField forcing_minus_nonlinear(const RealField& u, const RealField& f, const ToyConfig& cfg) {
  return f - lifted(pointwise_product(u, u, cfg.dealiased), power_symbol(u.grid(), cfg.beta));
}

}  // namespace

void ToyConfig::validate() const {
  SolverConfig::validate();
  if (!(beta > 0.0 && beta < alpha))
    throw Error(ErrorCode::Parameter, "toy model needs 0 < beta < alpha");
}

double toy_residual(const RealField& u, const RealField& f, const ToyConfig& cfg) {
  require_same_grid(u.grid(), f.grid(), "toy_residual");
  const RealField r = lifted(u, power_symbol(u.grid(), cfg.alpha)) - forcing_minus_nonlinear(u, f, cfg);
  return lebesgue_norm(r, 2.0) / std::max(lebesgue_norm(f, 2.0), 1e-300);
}

SolveReport toy_solve(const RealField& f, const ToyConfig& cfg, const std::optional<RealField>& start) {
  cfg.validate();
  if (start) require_same_grid(f.grid(), start->grid(), "toy_solve start");
  const Grid& grid = f.grid();
  SolveReport rep(grid);
  RealField source = f;
  if (std::abs(f.mean()) > 1e-14 * std::max(f.max_abs(), 1e-300)) {
    rep.warnings.push_back("source has nonzero mean; the mean mode has no preimage and is dropped");
    source = mean_zero(f);
  }
  if (cfg.alpha > 1.0) rep.warnings.push_back("alpha > 1 lies outside the toy regime beta < alpha <= 1");

  const Symbol smoothing = power_symbol(grid, cfg.beta - cfg.alpha);
  rep.u0 = inv_frac_laplacian(source, cfg.alpha);
  detail::FixedPointProblem prob;
  prob.map = [&](const RealField& v) {
    return rep.u0 - lifted(pointwise_product(v, v, cfg.dealiased), smoothing);
  };
  prob.residual = [&](const RealField& v) { return toy_residual(v, source, cfg); };
  detail::run_fixed_point(rep, start ? *start : rep.u0, prob, cfg);
  return rep;
}

RegularityReport toy_gain_experiment(double gamma, const Grid& grid, double amplitude, const ToyConfig& cfg,
                                     std::uint64_t seed) {
  cfg.validate();
  const RealField f = synthesize_source(gamma, amplitude, seed, grid);
  decay_exponent(shell_energies(forward_transform(f)));
  const SolveReport sol = toy_solve(f, cfg);
  RegularityReport rep = compare_regularity(f, sol.u, cfg.alpha);
  rep.iterations = sol.iterations;
  rep.residual = sol.residual;
  rep.warnings = sol.warnings;
  rep.ladder = evaluate_ladder(sol.u, forcing_minus_nonlinear(sol.u, f, cfg), cfg.alpha, cfg.alpha - cfg.beta,
                               std::max(0.0, rep.s_star_f - kLadderMargin), 2.0);
  for (double sigma : {0.25, 0.5, 0.75}) rep.holder.push_back({sigma, holder_quotient(sol.u, sigma)});
  return rep;
}

}  // namespace fracdrift
