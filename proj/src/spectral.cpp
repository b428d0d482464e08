#include "fracdrift/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "fracdrift/error.hpp"

namespace fracdrift {

namespace {

// Planning is not thread-safe in FFTW; execution of an existing plan on
// caller-owned arrays is. Plans are made unaligned and out-of-place so they
// apply to any std::vector storage.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  Plans get(const Grid& grid) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(grid.dim(), grid.points());
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    int dims[Grid::kMaxDim];
    for (int j = 0; j < grid.dim(); ++j) dims[j] = grid.points();
    auto* in = fftw_alloc_complex(grid.size());
    auto* out = fftw_alloc_complex(grid.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.forward = fftw_plan_dft(grid.dim(), dims, in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft(grid.dim(), dims, in, out, FFTW_BACKWARD, flags);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, Plans> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Wavevector wavevector_at(const Grid& grid, std::size_t flat) noexcept {
  Wavevector w;
  w.dim = grid.dim();
  auto idx = grid.unravel(flat);
  for (int j = 0; j < grid.dim(); ++j) {
    w.index[j] = grid.signed_index(idx[j]);
    w.k[j] = grid.wavenumber(w.index[j]);
  }
  return w;
}

Symbol::Symbol(Grid grid) : grid_(grid), values_(grid.size(), Complex{}) {}

Symbol::Symbol(Grid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error(ErrorCode::Shape, "symbol size does not match grid");
}

Symbol Symbol::tabulate(const Grid& grid, const Multiplier& m, Complex at_zero) {
  if (!std::isfinite(at_zero.real()) || !std::isfinite(at_zero.imag()))
    throw Error(ErrorCode::MultiplierDomain, "multiplier value at k=0 is not finite");
  std::vector<Complex> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto w = wavevector_at(grid, i);
    if (w.is_zero()) {
      values[i] = at_zero;
      continue;
    }
    Complex v = m(w);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::MultiplierDomain, "multiplier is not finite at a nonzero wavevector");
    values[i] = v;
  }
  return Symbol(grid, std::move(values));
}

Symbol Symbol::radial(const Grid& grid, const std::function<double(double)>& m, double at_zero) {
  return tabulate(grid, [&](const Wavevector& w) { return Complex(m(w.norm()), 0.0); }, at_zero);
}

Symbol Symbol::identity(const Grid& grid) {
  return Symbol(grid, std::vector<Complex>(grid.size(), Complex(1.0, 0.0)));
}

Symbol& Symbol::operator*=(const Symbol& other) {
  require_same_grid(grid_, other.grid_, "Symbol *=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}

SpectralField forward_transform(const RealField& f) {
  if (!f.all_finite()) throw Error(ErrorCode::InvalidInput, "forward_transform: non-finite samples");
  const Grid& grid = f.grid();
  std::vector<Complex> in(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) in[i] = Complex(f[i], 0.0);
  std::vector<Complex> out(grid.size());
  auto plans = PlanCache::instance().get(grid);
  fftw_execute_dft(plans.forward, as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
  SpectralField F(grid, std::move(out));
  F.symmetrize();
  return F;
}

RealField inverse_transform(const SpectralField& F) {
  const Grid& grid = F.grid();
  const double scale = F.max_abs();
  if (F.hermitian_defect() > 1e-12 * scale)
    throw Error(ErrorCode::Asymmetry, "inverse_transform: spectrum is not Hermitian-symmetric");
  std::vector<Complex> in(F.modes().begin(), F.modes().end());
  std::vector<Complex> out(grid.size());
  auto plans = PlanCache::instance().get(grid);
  fftw_execute_dft(plans.backward, as_fftw(in.data()), as_fftw(out.data()));
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = out[i].real();
  return RealField(grid, std::move(samples));
}

SpectralField apply_symbol(const SpectralField& F, const Symbol& m) {
  require_same_grid(F.grid(), m.grid(), "apply_symbol");
  SpectralField out(F.grid());
  for (std::size_t i = 0; i < F.size(); ++i) out[i] = m[i] * F[i];
  out.symmetrize();
  return out;
}

SpectralField apply_multiplier(const SpectralField& F, const Multiplier& m, Complex at_zero) {
  return apply_symbol(F, Symbol::tabulate(F.grid(), m, at_zero));
}

bool in_dealias_band(const Grid& grid, std::size_t flat) noexcept {
  auto idx = grid.unravel(flat);
  for (int j = 0; j < grid.dim(); ++j)
    if (3 * std::abs(grid.signed_index(idx[j])) > grid.points()) return false;
  return true;
}

namespace {

const std::vector<char>& dealias_mask(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<char>> masks;
  std::lock_guard lock(mutex);
  auto [it, fresh] = masks.try_emplace({grid.dim(), grid.points()});
  if (fresh) {
    it->second.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) it->second[i] = in_dealias_band(grid, i) ? 1 : 0;
  }
  return it->second;
}

}  // namespace

SpectralField dealias(const SpectralField& F) {
  const auto& mask = dealias_mask(F.grid());
  SpectralField out = F;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!mask[i]) out[i] = Complex{};
  return out;
}

RealField pointwise_product(const RealField& f, const RealField& g, bool dealiased) {
  require_same_grid(f.grid(), g.grid(), "pointwise_product");
  if (!dealiased) {
    RealField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
    return out;
  }
  RealField a = inverse_transform(dealias(forward_transform(f)));
  RealField b = inverse_transform(dealias(forward_transform(g)));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return inverse_transform(dealias(forward_transform(a)));
}

RealField mean_zero(const RealField& f) {
  RealField out = f;
  const double m = f.mean();
  for (auto& v : out.samples()) v -= m;
  return out;
}

}  // namespace fracdrift

namespace fracdrift {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

RealField random_band_limited_field(const Grid& grid, std::uint64_t seed, int max_index) {
  SpectralField F(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto w = wavevector_at(grid, i);
    if (w.is_zero()) continue;
    bool inside = true;
    std::uint64_t key = mix64(seed);
    for (int j = 0; j < grid.dim(); ++j) {
      if (std::abs(w.index[j]) > max_index || 2 * std::abs(w.index[j]) >= grid.points()) inside = false;
      key = mix64(key ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(w.index[j]) + 0x10000));
    }
    if (!inside) continue;
    // Box-Muller from two hashed uniforms.
    const double u1 = 1.0 - unit_interval(mix64(key));
    const double u2 = unit_interval(mix64(key + 1));
    const double r = std::sqrt(-2.0 * std::log(u1));
    F[i] = Complex(r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2));
  }
  F.symmetrize();
  return inverse_transform(F);
}

}  // namespace fracdrift
