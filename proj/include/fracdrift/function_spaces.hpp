#pragma once

#include <limits>
#include <vector>

#include "fracdrift/fields.hpp"

namespace fracdrift {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Decreasing rearrangement g* of |g| on a grid: g*(t) = values[i] for
/// t in [measures[i-1], measures[i]), with measures[-1] = 0.
struct RearrangementProfile {
  std::vector<double> values;
  std::vector<double> measures;

  /// Measure of {|g| > lambda}.
  double distribution(double lambda) const noexcept;
  /// g*(t) for t >= 0.
  double operator()(double t) const noexcept;
};

/// Energies of the dyadic bands 2^j <= |k|/k0 < 2^{j+1}, j = 0 .. log2(N/2)-1,
/// where k0 = 2*pi/L. Modes beyond the last band (grid corners) are collected
/// in `unbinned`; shells + unbinned = total mean-zero energy.
struct ShellSpectrum {
  std::vector<double> shells;
  double unbinned = 0.0;

  double total() const noexcept;
};

/// (sum |f_i|^p cellvol)^{1/p}; p = kInf gives max |f_i|. Throws for p < 1.
double lebesgue_norm(const RealField& f, double p);

RearrangementProfile rearrangement(const RealField& f);

/// Lorentz quasi-norm ((q/p) int (t^{1/p} g*)^q dt/t)^{1/q}, or
/// sup_t t^{1/p} g*(t) when q = kInf, integrated exactly on the step profile.
double lorentz_norm(const RearrangementProfile& profile, double p, double q);
double lorentz_norm(const RealField& f, double p, double q);

/// L^r norm of (-Delta)^{s/2} f (mean annihilated).
double sobolev_norm(const RealField& f, double s, double r);

ShellSpectrum shell_energies(const SpectralField& F);

/// First and last shell index used by decay_exponent for this many shells.
struct FitWindow {
  int first;
  int last;
};
FitWindow decay_fit_window(std::size_t shell_count) noexcept;

inline constexpr double kShellEnergyFloor = 1e-28;

/// Regularity exponent s* from the least-squares slope of log2(shell energy)
/// over the fit window: s* = -slope/2. Throws InsufficientResolution when fewer
/// than four window shells carry energy above kShellEnergyFloor.
double decay_exponent(const ShellSpectrum& S);

/// ||f||_p / (||f||_{p1}^{1-theta} ||f||_{p2}^theta), 1/p = (1-theta)/p1 + theta/p2.
double check_interpolation(const RealField& f, double p1, double p2, double theta);

/// Circular convolution (g*h)(x) = int g(y) h(x-y) dy on the torus.
RealField convolve(const RealField& g, const RealField& h);

/// ||g*h||_p / (||g||_{p1} ||h||_{p2}) with 1 + 1/p = 1/p1 + 1/p2.
double check_young(const RealField& g, const RealField& h, double p1, double p2);

}  // namespace fracdrift
