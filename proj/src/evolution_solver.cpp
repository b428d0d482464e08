#include "fracdrift/evolution_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracdrift/function_spaces.hpp"
#include "fracdrift/spectral.hpp"

namespace fracdrift {

namespace {

Symbol dissipation_symbol(const Grid& grid, double alpha) {
  return Symbol::radial(grid, [alpha](double k) { return std::pow(k, alpha); }, 0.0);
}

}  // namespace

double phi1(double z) noexcept {
  if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return std::expm1(z) / z;
}

RealField heat_propagate(const RealField& f, double t, double alpha) {
  if (!(t >= 0.0)) throw Error(ErrorCode::Parameter, "heat_propagate: t must be >= 0");
  if (!(alpha > 0.0)) throw Error(ErrorCode::Parameter, "heat_propagate: alpha must be positive");
  if (t == 0.0) return f;
  const auto m = Symbol::radial(f.grid(), [=](double k) { return std::exp(-t * std::pow(k, alpha)); }, 1.0);
  return inverse_transform(apply_symbol(forward_transform(f), m));
}

std::vector<double> heat_kernel_gradient_scaling(const Grid& grid, double alpha, double q,
                                                 const std::vector<double>& t_grid) {
  if (!(q >= 1.0)) throw Error(ErrorCode::Parameter, "heat_kernel_gradient_scaling: q must be >= 1");
  if (!(alpha > 0.0)) throw Error(ErrorCode::Parameter, "heat_kernel_gradient_scaling: alpha must be positive");
  const int n = grid.dim();
  const double exponent = (1.0 + n * (1.0 - (std::isinf(q) ? 0.0 : 1.0 / q))) / alpha;
  // Delta at the origin: unit mass, so its transform is L^{-n} on every mode.
  SpectralField delta(grid);
  for (auto& c : delta.modes()) c = Complex(1.0 / grid.volume(), 0.0);

  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error(ErrorCode::Parameter, "heat_kernel_gradient_scaling: t must be positive");
    if (std::pow(t, 1.0 / alpha) < 2.0 * grid.spacing())
      throw Error(ErrorCode::Resolution, "kernel width t^{1/alpha} is below two grid cells");
    const auto m = Symbol::radial(grid, [=](double k) { return std::exp(-t * std::pow(k, alpha)); }, 1.0);
    const RealField kernel = inverse_transform(apply_symbol(delta, m));
    out.push_back(lebesgue_norm(magnitude(gradient(kernel)), q) * std::pow(t, exponent));
  }
  return out;
}

WeightedSup weighted_sup_diagnostic(const RealField& g, double alpha, double p,
                                    const std::vector<double>& t_grid) {
  const int n = g.grid().dim();
  WeightedSup w;
  const SpectralField G = forward_transform(g);
  for (double t : t_grid) {
    if (!(t > 0.0)) throw Error(ErrorCode::Parameter, "weighted_sup_diagnostic: t must be positive");
    const auto m = Symbol::radial(g.grid(), [=](double k) { return std::exp(-t * std::pow(k, alpha)); }, 1.0);
    const double v = std::pow(t, n / (alpha * p)) * inverse_transform(apply_symbol(G, m)).max_abs();
    w.value = std::max(w.value, v);
  }
  const double gp = lebesgue_norm(g, p);
  w.ratio = gp > 0.0 ? w.value / gp : 0.0;
  return w;
}

EvolveResult evolve(const RealField& v0, const RealField& g, const DriftOperator& A, double alpha,
                    double T, double dt, const EvolveOptions& opts) {
  require_same_grid(v0.grid(), g.grid(), "evolve");
  require_same_grid(v0.grid(), A.grid(), "evolve");
  if (!(dt > 0.0)) throw Error(ErrorCode::Parameter, "evolve: dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw Error(ErrorCode::Parameter, "evolve: T must be finite and >= 0");
  if (!(alpha > 0.0)) throw Error(ErrorCode::Parameter, "evolve: alpha must be positive");
  if (opts.save_every < 1) throw Error(ErrorCode::Parameter, "evolve: save_every must be >= 1");
  if (!v0.all_finite() || !g.all_finite()) throw Error(ErrorCode::InvalidInput, "evolve: non-finite input");

  const Grid& grid = v0.grid();
  const int n = grid.dim();
  const long nsteps = T == 0.0 ? 0 : static_cast<long>(std::ceil(T / dt - 1e-9));
  const double h = nsteps > 0 ? T / nsteps : dt;

  const Symbol lam = dissipation_symbol(grid, alpha);
  double lam_max = 0.0;
  for (const auto& c : lam.values()) lam_max = std::max(lam_max, c.real());
  if (h * lam_max > 700.0)
    throw Error(ErrorCode::Parameter, "evolve: dt * max|k|^alpha exceeds 700; reduce dt");

  std::vector<Complex> decay(lam.values().size()), gain(lam.values().size());
  for (std::size_t i = 0; i < decay.size(); ++i) {
    const double z = -h * lam[i].real();
    decay[i] = std::exp(z);
    gain[i] = h * phi1(z);
  }
  const Symbol E(grid, std::move(decay));
  const Symbol P(grid, std::move(gain));
  const SpectralField Gh = forward_transform(g);

  EvolveResult res;
  Trajectory& traj = res.trajectory;
  traj.alpha = alpha;
  traj.dt = h;
  ETDiagnostics& d = res.diagnostics;
  const double weight_exp = n / (alpha * opts.p);

  auto observe = [&](long step, const RealField& v) {
    const double t = step * h;
    d.sup_lp = std::max(d.sup_lp, lebesgue_norm(v, opts.p));
    if (step > 0) d.weighted_sup_linf = std::max(d.weighted_sup_linf, std::pow(t, weight_exp) * v.max_abs());
    if (step % opts.save_every == 0 || step == nsteps) {
      traj.times.push_back(t);
      traj.states.push_back(v);
    }
    if (opts.observer) opts.observer(t, v);
  };

  RealField v = v0;
  SpectralField V = forward_transform(v0);
  observe(0, v);
  for (long step = 1; step <= nsteps; ++step) {
    const std::string where = "state became non-finite at t = " + std::to_string(step * h);
    SpectralField rhs = Gh;
    if (!A.is_zero()) {
      // an overflowing product surfaces as a non-finite transform input
      RealField nl(grid);
      try {
        nl = nonlinear_term(v, A, opts.dealiased);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidInput) throw;
        throw BlowUpError(where, std::move(traj));
      }
      if (!nl.all_finite()) throw BlowUpError(where, std::move(traj));
      rhs -= forward_transform(nl);
    }
    SpectralField next = apply_symbol(V, E);
    next += apply_symbol(rhs, P);
    bool finite = true;
    for (const auto& c : next.modes())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        finite = false;
        break;
      }
    if (!finite)
      throw BlowUpError(where, std::move(traj));
    V = std::move(next);
    v = inverse_transform(V);
    observe(step, v);
  }
  d.et_norm = d.sup_lp + d.weighted_sup_linf;
  return res;
}

double stationarity_check(const RealField& u, const RealField& f, const DriftOperator& A,
                          double alpha, double T, double dt, bool dealiased) {
  double drift = 0.0;
  EvolveOptions opts;
  opts.dealiased = dealiased;
  opts.save_every = std::numeric_limits<int>::max();
  opts.observer = [&](double, const RealField& v) { drift = std::max(drift, (v - u).max_abs()); };
  evolve(u, f, A, alpha, T, dt, opts);
  return drift / std::max(u.max_abs(), 1e-300);
}

}  // namespace fracdrift
