#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "fracdrift/fields.hpp"
#include "fracdrift/grid.hpp"

namespace fracdrift {

/// A lattice wavevector of the torus: signed indices and physical components.
struct Wavevector {
  int dim = 0;
  std::array<int, Grid::kMaxDim> index{};
  std::array<double, Grid::kMaxDim> k{};

  double norm() const noexcept {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += k[j] * k[j];
    return std::sqrt(s);
  }
  bool is_zero() const noexcept {
    for (int j = 0; j < dim; ++j)
      if (index[j] != 0) return false;
    return true;
  }
};

Wavevector wavevector_at(const Grid& grid, std::size_t flat) noexcept;

/// Fourier multiplier evaluated at nonzero wavevectors.
using Multiplier = std::function<Complex(const Wavevector&)>;

/// A multiplier tabulated on every mode of a grid.
class Symbol {
 public:
  explicit Symbol(Grid grid);
  Symbol(Grid grid, std::vector<Complex> values);

  /// Evaluates m at each nonzero wavevector; the k=0 entry is `at_zero`.
  /// Throws MultiplierDomain when m is non-finite at a nonzero mode.
  static Symbol tabulate(const Grid& grid, const Multiplier& m, Complex at_zero);
  /// Radial real symbol m(|k|), k=0 entry is `at_zero`.
  static Symbol radial(const Grid& grid, const std::function<double(double)>& m,
                       double at_zero);
  static Symbol identity(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  Symbol& operator*=(const Symbol& other);
  friend Symbol operator*(Symbol a, const Symbol& b) { return a *= b; }

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Normalized DFT; k=0 mode equals the mean. Output is exactly Hermitian.
/// Throws InvalidInput on non-finite samples.
SpectralField forward_transform(const RealField& f);

/// Exact inverse of forward_transform. Throws Asymmetry when the input
/// departs from Hermitian symmetry by more than 1e-12 of its largest mode.
RealField inverse_transform(const SpectralField& F);

/// out(k) = m(k) * F(k), re-symmetrized so that the output stays Hermitian
/// (self-conjugate Nyquist modes keep only the Hermitian part).
SpectralField apply_multiplier(const SpectralField& F, const Multiplier& m, Complex at_zero);
SpectralField apply_symbol(const SpectralField& F, const Symbol& m);

/// Zeroes every mode with some axis index |s| > N/3.
SpectralField dealias(const SpectralField& F);
bool in_dealias_band(const Grid& grid, std::size_t flat) noexcept;

/// Cellwise product. With `dealiased`, both factors and the result are
/// truncated to the 2/3 band, so band-limited inputs multiply alias-free.
RealField pointwise_product(const RealField& f, const RealField& g, bool dealiased = true);

/// Removes the k=0 mode.
RealField mean_zero(const RealField& f);

}  // namespace fracdrift

namespace fracdrift {

/// Deterministic random mean-zero field whose modes lie in |s_j| <= max_index
/// on every axis, with complex Gaussian-like coefficients of unit scale.
/// The same seed and max_index give the same function on any grid whose
/// band contains max_index.
RealField random_band_limited_field(const Grid& grid, std::uint64_t seed, int max_index);

/// splitmix64 finalizer; the project's portable hash/RNG primitive.
std::uint64_t mix64(std::uint64_t x) noexcept;
/// Uniform double in [0, 1) from a 64-bit word.
double unit_interval(std::uint64_t bits) noexcept;

}  // namespace fracdrift
