#include "fracdrift/function_spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "fracdrift/error.hpp"
#include "fracdrift/spectral.hpp"

namespace fracdrift {

namespace {

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

double RearrangementProfile::distribution(double lambda) const noexcept {
  // values are non-increasing: count entries strictly above lambda.
  auto it = std::partition_point(values.begin(), values.end(), [&](double v) { return v > lambda; });
  auto n = static_cast<std::size_t>(it - values.begin());
  return n == 0 ? 0.0 : measures[n - 1];
}

double RearrangementProfile::operator()(double t) const noexcept {
  auto it = std::upper_bound(measures.begin(), measures.end(), t);
  if (it == measures.end()) return 0.0;
  return values[static_cast<std::size_t>(it - measures.begin())];
}

double ShellSpectrum::total() const noexcept {
  double s = unbinned;
  for (double e : shells) s += e;
  return s;
}

double lebesgue_norm(const RealField& f, double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::Parameter, "lebesgue_norm: p must be >= 1");
  if (std::isinf(p)) return f.max_abs();
  // Scale by the max to keep large p from overflowing.
  const double m = f.max_abs();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : f.samples()) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

RearrangementProfile rearrangement(const RealField& f) {
  RearrangementProfile prof;
  prof.values.reserve(f.size());
  for (double v : f.samples()) prof.values.push_back(std::abs(v));
  std::sort(prof.values.begin(), prof.values.end(), std::greater<>());
  prof.measures.resize(f.size());
  const double h = f.grid().cell_volume();
  for (std::size_t i = 0; i < f.size(); ++i) prof.measures[i] = h * static_cast<double>(i + 1);
  return prof;
}

double lorentz_norm(const RearrangementProfile& profile, double p, double q) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(ErrorCode::Parameter, "lorentz_norm: p must lie in (1, inf)");
  if (!(q >= 1.0)) throw Error(ErrorCode::Parameter, "lorentz_norm: q must be >= 1");
  const auto& v = profile.values;
  const auto& mu = profile.measures;
  if (std::isinf(q)) {
    // sup over each step is approached at its right end.
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) best = std::max(best, std::pow(mu[i], 1.0 / p) * v[i]);
    return best;
  }
  // (q/p) int_a^b t^{q/p - 1} dt = b^{q/p} - a^{q/p}
  const double r = q / p;
  const double vmax = v.empty() ? 0.0 : v.front();
  if (vmax == 0.0) return 0.0;
  double s = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double cur = std::pow(mu[i], r);
    s += std::pow(v[i] / vmax, q) * (cur - prev);
    prev = cur;
  }
  return vmax * std::pow(s, 1.0 / q);
}

double lorentz_norm(const RealField& f, double p, double q) {
  return lorentz_norm(rearrangement(f), p, q);
}

double sobolev_norm(const RealField& f, double s, double r) {
  const auto m = Symbol::radial(f.grid(), [s](double k) { return std::pow(k, s); }, 0.0);
  return lebesgue_norm(inverse_transform(apply_symbol(forward_transform(f), m)), r);
}

ShellSpectrum shell_energies(const SpectralField& F) {
  const Grid& g = F.grid();
  const int nshell = std::bit_width(static_cast<unsigned>(g.points() / 2)) - 1;
  ShellSpectrum S;
  S.shells.assign(static_cast<std::size_t>(nshell), 0.0);
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto w = wavevector_at(g, i);
    if (w.is_zero()) continue;
    double n2 = 0.0;
    for (int j = 0; j < g.dim(); ++j) n2 += static_cast<double>(w.index[j]) * w.index[j];
    const double e = std::norm(F[i]);
    // band j holds 4^j <= |s|^2 < 4^{j+1}, decided in exact integer arithmetic
    int band = 0;
    auto n2i = static_cast<long long>(n2);
    while ((4LL << (2 * band)) <= n2i) ++band;
    if (band < nshell)
      S.shells[static_cast<std::size_t>(band)] += e;
    else
      S.unbinned += e;
  }
  return S;
}

FitWindow decay_fit_window(std::size_t shell_count) noexcept {
  return {2, static_cast<int>(shell_count) - 2};
}

double decay_exponent(const ShellSpectrum& S) {
  const auto win = decay_fit_window(S.shells.size());
  std::vector<double> xs, ys;
  for (int j = win.first; j <= win.last; ++j) {
    const double e = S.shells[static_cast<std::size_t>(j)];
    if (e > kShellEnergyFloor) {
      xs.push_back(j);
      ys.push_back(std::log2(e));
    }
  }
  if (xs.size() < 4)
    throw Error(ErrorCode::InsufficientResolution,
                "decay_exponent: fewer than 4 active shells in the fit window");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -0.5 * slope;
}

double check_interpolation(const RealField& f, double p1, double p2, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw Error(ErrorCode::Parameter, "check_interpolation: theta must lie in (0,1)");
  if (!(p1 >= 1.0 && p1 < p2)) throw Error(ErrorCode::Parameter, "check_interpolation: need 1 <= p1 < p2 <= inf");
  const double inv_p = (1.0 - theta) * reciprocal(p1) + theta * reciprocal(p2);
  const double p = 1.0 / inv_p;
  const double num = lebesgue_norm(f, p);
  const double den = std::pow(lebesgue_norm(f, p1), 1.0 - theta) * std::pow(lebesgue_norm(f, p2), theta);
  if (den == 0.0) return num == 0.0 ? 1.0 : kInf;
  return num / den;
}

RealField convolve(const RealField& g, const RealField& h) {
  require_same_grid(g.grid(), h.grid(), "convolve");
  auto G = forward_transform(g);
  auto H = forward_transform(h);
  const double vol = g.grid().volume();
  for (std::size_t i = 0; i < G.size(); ++i) G[i] *= vol * H[i];
  G.symmetrize();
  return inverse_transform(G);
}

double check_young(const RealField& g, const RealField& h, double p1, double p2) {
  if (!(p1 >= 1.0) || !(p2 >= 1.0)) throw Error(ErrorCode::Parameter, "check_young: exponents must be >= 1");
  const double inv_p = reciprocal(p1) + reciprocal(p2) - 1.0;
  if (inv_p < -1e-14 || inv_p > 1.0 + 1e-14)
    throw Error(ErrorCode::Parameter, "check_young: 1 + 1/p = 1/p1 + 1/p2 has no p in [1, inf]");
  const double p = inv_p <= 0.0 ? kInf : 1.0 / inv_p;
  const double num = lebesgue_norm(convolve(g, h), p);
  const double den = lebesgue_norm(g, p1) * lebesgue_norm(h, p2);
  if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / den;
}

}  // namespace fracdrift
