#include "fracdrift/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <sstream>

#include "fracdrift/error.hpp"
#include "fracdrift/function_spaces.hpp"
#include "fracdrift/symbol_expression.hpp"

namespace fracdrift {

namespace {

void require_positive_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::Parameter, std::string(where) + ": alpha must be positive");
}

// Tabulated once per grid and axis; gradient and divergence run every time step.
const Symbol& derivative_symbol(const Grid& grid, int axis) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double, int>, Symbol> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(grid.dim(), grid.points(), grid.side(), axis);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, Symbol::tabulate(grid, [axis](const Wavevector& w) { return Complex(0.0, w.k[axis]); },
                                             0.0)).first;
  return it->second;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

RealField frac_laplacian(const RealField& f, double alpha) {
  require_positive_alpha(alpha, "frac_laplacian");
  auto m = Symbol::radial(f.grid(), [alpha](double k) { return std::pow(k, alpha); }, 0.0);
  return inverse_transform(apply_symbol(forward_transform(f), m));
}

RealField inv_frac_laplacian(const RealField& f, double alpha) {
  require_positive_alpha(alpha, "inv_frac_laplacian");
  auto m = Symbol::radial(f.grid(), [alpha](double k) { return std::pow(k, -alpha); }, 0.0);
  return inverse_transform(apply_symbol(forward_transform(f), m));
}

VectorField gradient(const RealField& f) {
  const auto F = forward_transform(f);
  VectorField out;
  for (int j = 0; j < f.grid().dim(); ++j)
    out.push_back(inverse_transform(apply_symbol(F, derivative_symbol(f.grid(), j))));
  return out;
}

RealField divergence(const VectorField& w) {
  if (w.empty()) throw Error(ErrorCode::Shape, "divergence: empty vector field");
  const Grid& grid = w.front().grid();
  if (static_cast<int>(w.size()) != grid.dim())
    throw Error(ErrorCode::Dimension, "divergence: component count differs from dimension");
  SpectralField acc(grid);
  for (int j = 0; j < grid.dim(); ++j) {
    require_same_grid(grid, w[j].grid(), "divergence");
    acc += apply_symbol(forward_transform(w[j]), derivative_symbol(grid, j));
  }
  return inverse_transform(acc);
}

RealField magnitude(const VectorField& w) {
  if (w.empty()) throw Error(ErrorCode::Shape, "magnitude: empty vector field");
  RealField out(w.front().grid());
  for (const auto& c : w) {
    require_same_grid(out.grid(), c.grid(), "magnitude");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
  }
  for (auto& v : out.samples()) v = std::sqrt(v);
  return out;
}

// DriftOperator ---------------------------------------------------------------

DriftOperator::DriftOperator(Grid grid, std::vector<Symbol> components, std::string name,
                             std::optional<double> declared_lipschitz,
                             std::optional<double> declared_sobolev_bound)
    : grid_(grid),
      components_(std::move(components)),
      name_(std::move(name)),
      declared_lipschitz_(declared_lipschitz),
      declared_sobolev_bound_(declared_sobolev_bound) {
  if (static_cast<int>(components_.size()) != grid_.dim())
    throw Error(ErrorCode::Dimension, "drift operator needs one component per dimension");
  for (const auto& c : components_) require_same_grid(grid_, c.grid(), "DriftOperator");

  is_zero_ = true;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const auto w = wavevector_at(grid_, i);
    const std::size_t neg = grid_.negate(i);
    bool on_nyquist = false;
    for (int j = 0; j < grid_.dim(); ++j) on_nyquist |= (2 * w.index[j] == -grid_.points());
    double div = 0.0, scale = 0.0;
    Complex sum{};
    for (int j = 0; j < grid_.dim(); ++j) {
      const Complex m = components_[j][i];
      if (m != Complex{}) is_zero_ = false;
      if (w.is_zero() && m != Complex{})
        throw Error(ErrorCode::Parameter, "drift symbol must vanish at k=0");
      sum += w.k[j] * m;
      scale = std::max(scale, std::abs(m));
      // Odd symbols cannot be Hermitian on Nyquist planes; apply_symbol
      // projects those modes onto their Hermitian part.
      if (!on_nyquist && std::abs(components_[j][neg] - std::conj(m)) > 1e-12 * std::max(1.0, std::abs(m)))
        throw Error(ErrorCode::Parameter, "drift symbol " + std::to_string(j + 1) +
                                              " is not Hermitian-compatible");
    }
    div = std::abs(sum);
    if (div > 1e-12 * w.norm() * std::max(scale, 1e-300) && div > 0.0)
      throw Error(ErrorCode::Parameter, "drift symbol is not divergence-free");
  }
}

DriftOperator DriftOperator::sqg(const Grid& grid) {
  if (grid.dim() != 2) throw Error(ErrorCode::Dimension, "the SQG drift is defined for n = 2 only");
  std::vector<Symbol> c;
  c.push_back(Symbol::tabulate(grid, [](const Wavevector& w) { return Complex(0.0, -w.k[1] / w.norm()); }, 0.0));
  c.push_back(Symbol::tabulate(grid, [](const Wavevector& w) { return Complex(0.0, w.k[0] / w.norm()); }, 0.0));
  return DriftOperator(grid, std::move(c), "sqg", 1.0, 1.0);
}

DriftOperator DriftOperator::zero(const Grid& grid) {
  std::vector<Symbol> c(static_cast<std::size_t>(grid.dim()), Symbol(grid));
  return DriftOperator(grid, std::move(c), "zero", 0.0, 0.0);
}

DriftOperator DriftOperator::from_expressions(const Grid& grid, const std::vector<std::string>& exprs) {
  if (static_cast<int>(exprs.size()) != grid.dim())
    throw Error(ErrorCode::Dimension, "drift needs " + std::to_string(grid.dim()) + " symbol expressions, got " +
                                          std::to_string(exprs.size()));
  std::vector<Symbol> c;
  std::string name = "symbols:";
  for (std::size_t j = 0; j < exprs.size(); ++j) {
    auto e = SymbolExpression::parse(exprs[j], grid.dim());
    c.push_back(Symbol::tabulate(grid, e.as_multiplier(), 0.0));
    name += (j ? "; " : " ") + exprs[j];
  }
  return DriftOperator(grid, std::move(c), name);
}

DriftOperator DriftOperator::from_config(const Grid& grid, const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "sqg") return sqg(grid);
  if (s == "zero" || s == "none") return zero(grid);
  const std::string prefix = "symbols:";
  if (s.rfind(prefix, 0) == 0) {
    std::vector<std::string> exprs;
    std::stringstream ss(s.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ';')) exprs.push_back(trim(item));
    return from_expressions(grid, exprs);
  }
  throw Error(ErrorCode::Config, "drift must be 'sqg', 'zero' or 'symbols: e1; e2 ...', got '" + spec + "'");
}

std::vector<SpectralField> DriftOperator::apply(const SpectralField& U) const {
  require_same_grid(grid_, U.grid(), "DriftOperator::apply");
  std::vector<SpectralField> out;
  for (const auto& c : components_) out.push_back(apply_symbol(U, c));
  return out;
}

VectorField DriftOperator::apply(const RealField& u) const {
  const auto parts = apply(forward_transform(u));
  VectorField out;
  for (const auto& p : parts) out.push_back(inverse_transform(p));
  return out;
}

VectorField sqg_drift(const RealField& u) {
  return DriftOperator::sqg(u.grid()).apply(u);
}

// KernelOperator --------------------------------------------------------------

KernelOperator::KernelOperator(Grid grid, double alpha) : grid_(grid), alpha_(alpha) {
  require_positive_alpha(alpha, "KernelOperator");
  const int n = grid.dim();
  if (!(alpha > 1.0 && alpha < n + 1.0)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " lies outside (1, " << n + 1
       << "): the kernel is not locally integrable in physical space";
    warning_ = os.str();
  }
  for (int j = 0; j < n; ++j)
    components_.push_back(
        Symbol::tabulate(grid, [alpha, j](const Wavevector& w) { return symbol(alpha, j, w); }, 0.0));
}

Complex KernelOperator::symbol(double alpha, int axis, const Wavevector& w) {
  return Complex(0.0, -w.k[axis] / std::pow(w.norm(), alpha));
}

RealField apply_kernel(const KernelOperator& K, const VectorField& w) {
  const Grid& grid = K.grid();
  if (static_cast<int>(w.size()) != grid.dim())
    throw Error(ErrorCode::Dimension, "apply_kernel: component count differs from dimension");
  SpectralField acc(grid);
  for (int j = 0; j < grid.dim(); ++j) {
    require_same_grid(grid, w[j].grid(), "apply_kernel");
    acc += apply_symbol(forward_transform(w[j]), K.components()[j]);
  }
  return inverse_transform(acc);
}

VectorField materialize_kernel(const KernelOperator& K) {
  const Grid& grid = K.grid();
  VectorField out;
  for (const auto& c : K.components()) {
    SpectralField F(grid, std::vector<Complex>(c.values().begin(), c.values().end()));
    F *= 1.0 / grid.volume();
    F.symmetrize();
    out.push_back(inverse_transform(F));
  }
  return out;
}

KernelWeakNorm kernel_weak_norm(const KernelOperator& K) {
  const Grid& grid = K.grid();
  const int n = grid.dim();
  const double alpha = K.alpha();
  if (!(alpha > 1.0 && alpha < n + 1.0))
    throw Error(ErrorCode::Parameter, "kernel_weak_norm: alpha must lie in (1, n+1)");

  KernelWeakNorm out;
  out.lorentz_p = n / ((n + 1.0) - alpha);
  out.expected_slope = alpha - (n + 1.0);
  const RealField mag = magnitude(materialize_kernel(K));
  out.weak_norm = lorentz_norm(mag, out.lorentz_p, kInf);

  // Radial fit on log-spaced bins between 4 cells and L/4.
  const double h = grid.spacing();
  const double rmin = 4.0 * h;
  const double rmax = 0.25 * grid.side();
  constexpr int kBins = 16;
  std::vector<double> sum_logr(kBins, 0.0), sum_logk(kBins, 0.0);
  std::vector<int> count(kBins, 0);
  const double lo = std::log(rmin), span = std::log(rmax) - lo;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = grid.signed_index(idx[j]) * h;
      r2 += x * x;
    }
    const double r = std::sqrt(r2);
    if (r < rmin || r > rmax || mag[i] <= 0.0) continue;
    int b = static_cast<int>((std::log(r) - lo) / span * kBins);
    b = std::clamp(b, 0, kBins - 1);
    sum_logr[b] += std::log(r);
    sum_logk[b] += std::log(mag[i]);
    ++count[b];
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (int b = 0; b < kBins; ++b) {
    if (count[b] == 0) continue;
    const double x = sum_logr[b] / count[b];
    const double y = sum_logk[b] / count[b];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1.0;
  }
  if (m < 2.0) throw Error(ErrorCode::InsufficientResolution, "kernel_weak_norm: no radii in the fit range");
  out.decay_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

// Nonlinear term ----------------------------------------------------------------

RealField nonlinear_term(const RealField& u, const DriftOperator& A, bool dealiased) {
  require_same_grid(u.grid(), A.grid(), "nonlinear_term");
  if (A.is_zero()) return RealField(u.grid());
  const VectorField a = A.apply(u);
  VectorField flux;
  for (const auto& aj : a) flux.push_back(pointwise_product(u, aj, dealiased));
  return divergence(flux);
}

RealField advective_term(const RealField& u, const DriftOperator& A, bool dealiased) {
  require_same_grid(u.grid(), A.grid(), "advective_term");
  RealField out(u.grid());
  if (A.is_zero()) return out;
  const VectorField a = A.apply(u);
  const VectorField grad = gradient(u);
  for (std::size_t j = 0; j < a.size(); ++j) out += pointwise_product(a[j], grad[j], dealiased);
  return out;
}

// Lipschitz diagnostics -----------------------------------------------------------

double lipschitz_ratio(const DriftOperator& A, const RealField& u1, const RealField& u2, double p1,
                       double q1) {
  require_same_grid(u1.grid(), u2.grid(), "lipschitz_ratio");
  const RealField diff = u1 - u2;
  const double den = lorentz_norm(diff, p1, q1);
  if (den == 0.0) throw Error(ErrorCode::DegenerateInput, "lipschitz_ratio: identical inputs");
  const VectorField a1 = A.apply(u1);
  const VectorField a2 = A.apply(u2);
  VectorField d;
  for (std::size_t j = 0; j < a1.size(); ++j) d.push_back(a1[j] - a2[j]);
  return lorentz_norm(magnitude(d), p1, q1) / den;
}

double estimate_lipschitz_constant(const DriftOperator& A, double p1, double q1, int probes,
                                   std::uint64_t seed) {
  const Grid& grid = A.grid();
  const int band = std::max(1, grid.points() / 3);
  double best = 0.0;
  for (int i = 0; i < probes; ++i) {
    const auto u1 = random_band_limited_field(grid, mix64(seed + 2 * static_cast<std::uint64_t>(i)), band);
    const auto u2 = random_band_limited_field(grid, mix64(seed + 2 * static_cast<std::uint64_t>(i) + 1), band);
    best = std::max(best, lipschitz_ratio(A, u1, u2, p1, q1));
  }
  return best;
}

double drift_lipschitz_constant(const DriftOperator& A, double p1, double q1) {
  if (auto c = A.declared_lipschitz()) return *c;
  return estimate_lipschitz_constant(A, p1, q1);
}

}  // namespace fracdrift
