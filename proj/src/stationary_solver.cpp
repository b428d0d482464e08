#include "fracdrift/stationary_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdrift/function_spaces.hpp"

namespace fracdrift {

namespace {

constexpr double kTiny = 1e-300;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::Parameter, "alpha must be positive");
  if (!(p >= 1.0)) throw Error(ErrorCode::Parameter, "p must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::Parameter, "tol must be positive");
  if (max_iters < 1) throw Error(ErrorCode::Parameter, "max_iters must be >= 1");
}

double young_constant_lp(int n, double alpha, double p) {
  const double p_min = n / ((n + 1.0) - alpha);
  if (!(alpha > 1.0 && alpha < n + 1.0) || !(p > p_min) || std::isinf(p))
    throw Error(ErrorCode::Parameter, "Young constant C1(p) requires n/((n+1)-alpha) < p < inf, got p = " + fmt(p));
  return p * (n / (alpha - 1.0)) * (n * p / (p * ((n + 1.0) - alpha) - n));
}

GateRecord smallness_gate(const RealField& f, const DriftOperator& A, const SolverConfig& cfg) {
  cfg.validate();
  require_same_grid(f.grid(), A.grid(), "smallness_gate");
  const int n = f.grid().dim();
  const double alpha = cfg.alpha;
  if (!(alpha > 1.0 && alpha < n + 1.0))
    throw Error(ErrorCode::Parameter, "smallness gate needs 1 < alpha < n+1 (weak-norm exponent n/(alpha-1))");
  const double p_min = n / ((n + 1.0) - alpha);
  if (!(cfg.p > p_min))
    throw Error(ErrorCode::Parameter, "smallness gate needs p > n/((n+1)-alpha) = " + fmt(p_min));

  GateRecord g;
  if (!(alpha < n / 2.0 + 1.0))
    g.warnings.push_back("alpha = " + fmt(alpha) + " is outside (1, n/2+1): no existence result covers this range");
  const double weak_p = n / (alpha - 1.0);
  if (cfg.p < 2.0 || cfg.p > 3.0 * weak_p)
    g.warnings.push_back("p = " + fmt(cfg.p) + " lies outside [2, 3n/(alpha-1)]; the L^p bound is reached only indirectly");

  const RealField u0 = inv_frac_laplacian(mean_zero(f), alpha);
  g.u0_lorentz = lorentz_norm(u0, weak_p, kInf);
  g.u0_lebesgue = lebesgue_norm(u0, cfg.p);
  g.R = std::max(g.u0_lorentz, g.u0_lebesgue);

  g.C_K = kernel_weak_norm(KernelOperator(f.grid(), alpha)).weak_norm;
  g.C_A = drift_lipschitz_constant(A, weak_p, kInf);

  // Young exponents of the weak-norm estimate: target n/(alpha-1), kernel
  // n/((n+1)-alpha), product n/(2(alpha-1)).
  const double p1 = n / ((n + 1.0) - alpha);
  const double p2 = n / (2.0 * (alpha - 1.0));
  g.C1_lorentz = p2 > 1.0 ? g.C_young * weak_p * (p1 / (p1 - 1.0)) * (p2 / (p2 - 1.0)) : kInf;
  g.C1_of_p = g.C_young * young_constant_lp(n, alpha, cfg.p);
  // C1(p) = c p^2/(a p - n) is convex with one minimum, so its sup over the
  // compact interval sits at an endpoint.
  if (2.0 > p_min)
    g.M_alpha = g.C_young * std::max(young_constant_lp(n, alpha, 2.0), young_constant_lp(n, alpha, 3.0 * weak_p));
  else
    g.M_alpha = kInf;

  g.C_alpha_n = g.C1_lorentz * g.C_K * g.C_A;
  g.eta1 = 1.0 / (8.0 * g.C_alpha_n);
  g.eta2 = 1.0 / (4.0 * g.M_alpha * g.C_K * g.C_A);
  if (!std::isfinite(g.C1_lorentz) || !std::isfinite(g.M_alpha)) {
    g.eta1 = std::isfinite(g.C1_lorentz) ? g.eta1 : 0.0;
    g.eta2 = std::isfinite(g.M_alpha) ? g.eta2 : 0.0;
    g.warnings.push_back("Young constants are infinite for this alpha; the gate cannot pass");
  }
  g.pass = g.R <= std::min(g.eta1, g.eta2);
  return g;
}

double residual(const RealField& u, const RealField& f, const DriftOperator& A, double alpha, bool dealiased) {
  require_same_grid(u.grid(), f.grid(), "residual");
  RealField r = frac_laplacian(u, alpha) + nonlinear_term(u, A, dealiased) - f;
  return lebesgue_norm(r, 2.0) / std::max(lebesgue_norm(f, 2.0), kTiny);
}

RealField picard_map(const RealField& u, const RealField& u0, const DriftOperator& A,
                     const KernelOperator& K, bool dealiased) {
  if (A.is_zero()) return u0;
  const VectorField a = A.apply(u);
  VectorField flux;
  for (const auto& aj : a) flux.push_back(pointwise_product(u, aj, dealiased));
  return apply_kernel(K, flux) + u0;
}

SolveReport picard_solve(const RealField& f, const DriftOperator& A, const SolverConfig& cfg,
                         const std::optional<RealField>& start) {
  cfg.validate();
  require_same_grid(f.grid(), A.grid(), "picard_solve");
  if (start) require_same_grid(f.grid(), start->grid(), "picard_solve start");
  const Grid& grid = f.grid();
  const int n = grid.dim();
  const double alpha = cfg.alpha;

  SolveReport rep(grid);
  RealField source = f;
  if (std::abs(f.mean()) > 1e-14 * std::max(f.max_abs(), kTiny)) {
    rep.warnings.push_back("source has nonzero mean; the mean mode has no preimage and is dropped");
    source = mean_zero(f);
  }

  if (!(alpha > 1.0 && alpha < n / 2.0 + 1.0))
    rep.warnings.push_back("alpha outside (1, n/2+1): convergence is not covered by the existence theory");
  const bool track_lorentz = alpha > 1.0 && alpha < n + 1.0;
  const double weak_p = track_lorentz ? n / (alpha - 1.0) : 0.0;

  if (track_lorentz && cfg.p > n / ((n + 1.0) - alpha)) {
    rep.gate = smallness_gate(source, A, cfg);
    for (const auto& w : rep.gate->warnings) rep.warnings.push_back("gate: " + w);
    if (!rep.gate->pass) {
      if (cfg.enforce_gate)
        throw GateError("source radius R = " + fmt(rep.gate->R) + " exceeds min(eta1, eta2) = " +
                            fmt(std::min(rep.gate->eta1, rep.gate->eta2)),
                        *rep.gate);
      rep.warnings.push_back("smallness gate not met; iterating anyway (advisory)");
    }
  } else {
    if (cfg.enforce_gate)
      throw Error(ErrorCode::GateRejected, "smallness gate undefined for these (alpha, p)");
    rep.warnings.push_back("smallness gate undefined for these (alpha, p); skipped");
  }

  const KernelOperator K(grid, alpha);
  rep.u0 = inv_frac_laplacian(source, alpha);
  detail::FixedPointProblem prob;
  prob.map = [&](const RealField& v) { return picard_map(v, rep.u0, A, K, cfg.dealiased); };
  prob.residual = [&](const RealField& v) { return residual(v, source, A, alpha, cfg.dealiased); };
  if (track_lorentz) prob.lorentz = [=](const RealField& v) { return lorentz_norm(v, weak_p, kInf); };
  detail::run_fixed_point(rep, start ? *start : rep.u0, prob, cfg);
  if (track_lorentz) rep.ball_radius = lorentz_norm(rep.u - rep.u0, weak_p, kInf);
  return rep;
}

namespace detail {

void run_fixed_point(SolveReport& rep, RealField u, const FixedPointProblem& prob, const SolverConfig& cfg) {
  auto record = [&](const RealField& v) {
    if (prob.lorentz) rep.lorentz_norms.push_back(prob.lorentz(v));
    rep.lp_norms.push_back(lebesgue_norm(v, cfg.p));
    rep.residuals.push_back(prob.residual(v));
  };
  record(u);

  int growth_streak = 0;
  double rel_update = kInf;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    RealField next = prob.map(u);
    rep.iterations = it;
    if (!next.all_finite()) {
      rep.u = u;
      rep.residual = rep.residuals.back();
      throw SolveError(ErrorCode::Divergence, "Picard iterate became non-finite at iteration " + std::to_string(it),
                       std::move(rep));
    }
    const double upd = lebesgue_norm(next - u, cfg.p);
    const double size = lebesgue_norm(next, cfg.p);
    rel_update = size > 0.0 ? upd / size : upd;
    if (!rep.updates.empty() && rep.updates.back() > 0.0) rep.contraction_ratios.push_back(upd / rep.updates.back());
    rep.updates.push_back(upd);
    u = std::move(next);
    record(u);

    growth_streak = upd > 10.0 * rep.updates.front() ? growth_streak + 1 : 0;
    if (growth_streak >= 3) {
      rep.u = u;
      rep.residual = rep.residuals.back();
      throw SolveError(ErrorCode::Divergence,
                       "Picard updates exceeded 10x the first update for 3 consecutive iterations", std::move(rep));
    }
    if (rel_update <= cfg.tol && rep.residuals.back() <= 100.0 * cfg.tol) {
      rep.converged = true;
      break;
    }
  }

  rep.u = u;
  rep.residual = rep.residuals.back();
  if (!rep.converged) {
    std::ostringstream os;
    os << "no convergence after " << cfg.max_iters << " iterations (relative update " << rel_update
       << ", residual " << rep.residual << ")";
    throw SolveError(ErrorCode::NonConvergence, os.str(), std::move(rep));
  }
}

}  // namespace detail

}  // namespace fracdrift
