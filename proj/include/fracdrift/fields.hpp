#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "fracdrift/grid.hpp"

namespace fracdrift {

using Complex = std::complex<double>;

/// Physical samples of a scalar field, one per grid cell.
class RealField {
 public:
  explicit RealField(Grid grid);
  RealField(Grid grid, std::vector<double> samples);

  /// Samples fn at every cell position.
  static RealField from_function(const Grid& grid,
                                 const std::function<double(std::span<const double>)>& fn);
  static RealField constant(const Grid& grid, double value);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

  bool all_finite() const noexcept;
  double mean() const noexcept;
  double max_abs() const noexcept;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double scale) noexcept;

 private:
  Grid grid_;
  std::vector<double> samples_;
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double scale, RealField a);

/// Fourier coefficients of a real field, full n-dimensional layout.
///
/// Coefficients are normalized so that f(x) = sum_k F(k) exp(i k.x); the k=0
/// mode is the mean of f.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> modes);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> modes() const noexcept { return modes_; }
  std::span<Complex> modes() noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const Complex& operator[](std::size_t i) const { return modes_[i]; }
  Complex& operator[](std::size_t i) { return modes_[i]; }

  /// Largest |F(k) - conj(F(-k))| over all modes.
  double hermitian_defect() const noexcept;
  /// Replaces F by (F(k) + conj(F(-k)))/2, making the symmetry exact.
  void symmetrize() noexcept;
  /// Sum of |F(k)|^2 over all modes.
  double energy() const noexcept;
  double max_abs() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex scale) noexcept;

 private:
  Grid grid_;
  std::vector<Complex> modes_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Complex scale, SpectralField a);

}  // namespace fracdrift
