#include "fracdrift/regularity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracdrift/spectral.hpp"

namespace fracdrift {

namespace {

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

RealField lift(const RealField& f, double order) {
  const auto m = Symbol::radial(f.grid(), [order](double k) { return std::pow(k, order); }, 0.0);
  return inverse_transform(apply_symbol(forward_transform(f), m));
}

double l2_gap(const RealField& a, const RealField& b) {
  const double scale = std::max(lebesgue_norm(a, 2.0), 1e-300);
  return lebesgue_norm(a - b, 2.0) / scale;
}

std::uint64_t phase_hash(std::uint64_t seed, const Wavevector& w) {
  std::uint64_t h = mix64(seed ^ 0x5eedf00dULL);
  for (int j = 0; j < w.dim; ++j) h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(w.index[j])));
  return h;
}

// Representative of the pair {k, -k}: first nonzero signed index positive.
bool canonical(const Wavevector& w) {
  for (int j = 0; j < w.dim; ++j)
    if (w.index[j] != 0) return w.index[j] > 0;
  return true;
}

}  // namespace

RealField synthesize_source(double gamma, double amplitude, std::uint64_t seed, const Grid& grid) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::Parameter, "synthesize_source: gamma must be positive");
  if (!(amplitude > 0.0)) throw Error(ErrorCode::Parameter, "synthesize_source: amplitude must be positive");
  SpectralField F(grid);
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (!in_dealias_band(grid, i)) continue;
    const Wavevector w = wavevector_at(grid, i);
    if (w.is_zero() || !canonical(w)) continue;
    const double theta = 2.0 * std::numbers::pi * unit_interval(phase_hash(seed, w));
    const Complex c = std::polar(amplitude * std::pow(w.norm(), -gamma), theta);
    F[i] = c;
    F[grid.negate(i)] = std::conj(c);
  }
  return inverse_transform(F);
}

LadderDecomposition ladder_decomposition(double s, double alpha, double step) {
  if (!(step > 0.0))
    throw Error(ErrorCode::UnsupportedRange, "ladder step must be positive (alpha <= 1 is an open case)");
  LadderDecomposition d;
  d.step = step;
  const double total = s + alpha;
  d.k = static_cast<int>(std::floor(total / step + 1e-9));
  d.eps = total - d.k * step;
  if (d.eps < 1e-9 * step) d.eps = 0.0;
  return d;
}

LadderRecord evaluate_ladder(const RealField& u, const RealField& forcing_minus_nonlinear, double alpha,
                             double step, double s, double r) {
  require_same_grid(u.grid(), forcing_minus_nonlinear.grid(), "evaluate_ladder");
  LadderRecord rec;
  rec.s = s;
  rec.r = r;
  rec.alpha = alpha;
  rec.decomposition = ladder_decomposition(s, alpha, step);

  auto rung = [&](int j, double order) {
    LadderRung g;
    g.j = j;
    g.order = order;
    const RealField lhs = lift(u, order);
    const RealField rhs = lift(forcing_minus_nonlinear, order - alpha);
    g.identity_residual = l2_gap(lhs, rhs);
    g.sobolev_norm = lebesgue_norm(lhs, r);
    rec.rungs.push_back(g);
  };
  for (int j = 1; j <= rec.decomposition.k; ++j) rung(j, j * step);
  if (rec.decomposition.eps > 0.0) rung(rec.decomposition.k + 1, s + alpha);
  return rec;
}

LadderRecord bootstrap_ladder(const RealField& u, const RealField& f, const DriftOperator& A, double alpha,
                              double s, double r, bool dealiased) {
  if (!(alpha > 1.0))
    throw Error(ErrorCode::UnsupportedRange,
                "bootstrap ladder needs alpha > 1: the gain for 0 < alpha <= 1 is an open question");
  return evaluate_ladder(u, f - nonlinear_term(u, A, dealiased), alpha, alpha - 1.0, s, r);
}

RegularityReport compare_regularity(const RealField& f, const RealField& u, double alpha) {
  require_same_grid(f.grid(), u.grid(), "compare_regularity");
  RegularityReport rep;
  rep.expected_gain = alpha;
  rep.shells_f = shell_energies(forward_transform(f));
  rep.s_star_f = decay_exponent(rep.shells_f);
  rep.shells_u = shell_energies(forward_transform(u));
  rep.s_star_u = decay_exponent(rep.shells_u);
  rep.gain = rep.s_star_u - rep.s_star_f;
  rep.optimality_margin = rep.s_star_u - (rep.s_star_f + alpha);
  return rep;
}

RegularityReport measure_gain(const RealField& f, const DriftOperator& A, const SolverConfig& cfg) {
  // Fit the source first so an unresolvable spectrum fails before the solve.
  decay_exponent(shell_energies(forward_transform(f)));
  const SolveReport sol = picard_solve(f, A, cfg);
  RegularityReport rep = compare_regularity(f, sol.u, cfg.alpha);
  rep.iterations = sol.iterations;
  rep.residual = sol.residual;
  rep.warnings = sol.warnings;

  if (cfg.alpha > 1.0)
    rep.ladder = bootstrap_ladder(sol.u, mean_zero(f), A, cfg.alpha, std::max(0.0, rep.s_star_f - kLadderMargin),
                                  2.0, cfg.dealiased);
  else
    rep.warnings.push_back("ladder skipped: alpha <= 1");
  for (double sigma : {0.25, 0.5, 0.75}) rep.holder.push_back({sigma, holder_quotient(sol.u, sigma)});
  return rep;
}

double leibniz_check(const RealField& g, const RealField& h, double alpha, double p, double p1, double p2,
                     double q1, double q2) {
  require_same_grid(g.grid(), h.grid(), "leibniz_check");
  const double target = reciprocal(p);
  if (std::abs(target - reciprocal(p1) - reciprocal(p2)) > 1e-12 ||
      std::abs(target - reciprocal(q1) - reciprocal(q2)) > 1e-12)
    throw Error(ErrorCode::Parameter, "leibniz_check: need 1/p = 1/p1 + 1/p2 = 1/q1 + 1/q2");
  RealField gh = g;
  for (std::size_t i = 0; i < gh.size(); ++i) gh[i] *= h[i];
  const double num = lebesgue_norm(lift(gh, alpha), p);
  const double den = lebesgue_norm(lift(g, alpha), p1) * lebesgue_norm(h, p2) +
                     lebesgue_norm(g, q1) * lebesgue_norm(lift(h, alpha), q2);
  if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / den;
}

double holder_quotient(const RealField& u, double sigma) {
  const Grid& grid = u.grid();
  const int N = grid.points();
  double best = 0.0;
  for (int d : {1, 2, 4, 8, 16}) {
    const int shift = d % N;
    const int cells = std::min(shift, N - shift);
    if (cells == 0) continue;
    const double denom = std::pow(cells * grid.spacing(), sigma);
    for (int axis = 0; axis < grid.dim(); ++axis) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        auto idx = grid.unravel(i);
        idx[axis] += shift;
        const double diff = std::abs(u[i] - u[grid.ravel(idx)]);
        best = std::max(best, diff / denom);
      }
    }
  }
  return best;
}

}  // namespace fracdrift
