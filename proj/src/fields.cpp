#include "fracdrift/fields.hpp"

#include <algorithm>
#include <cmath>

#include "fracdrift/error.hpp"

namespace fracdrift {

RealField::RealField(Grid grid) : grid_(grid), samples_(grid.size(), 0.0) {}

RealField::RealField(Grid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size())
    throw Error(ErrorCode::Shape, "sample count does not match grid size");
}

RealField RealField::from_function(const Grid& grid,
                                   const std::function<double(std::span<const double>)>& fn) {
  RealField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.position(i);
    out.samples_[i] = fn(std::span<const double>(x.data(), grid.dim()));
  }
  return out;
}

RealField RealField::constant(const Grid& grid, double value) {
  return RealField(grid, std::vector<double>(grid.size(), value));
}

bool RealField::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

double RealField::mean() const noexcept {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s / static_cast<double>(samples_.size());
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_grid(grid_, other.grid_, "RealField +=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_grid(grid_, other.grid_, "RealField -=");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

RealField& RealField::operator*=(double scale) noexcept {
  for (double& v : samples_) v *= scale;
  return *this;
}

RealField operator+(RealField a, const RealField& b) { return a += b; }
RealField operator-(RealField a, const RealField& b) { return a -= b; }
RealField operator*(double scale, RealField a) { return a *= scale; }

SpectralField::SpectralField(Grid grid) : grid_(grid), modes_(grid.size(), Complex{}) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> modes)
    : grid_(grid), modes_(std::move(modes)) {
  if (modes_.size() != grid_.size())
    throw Error(ErrorCode::Shape, "mode count does not match grid size");
}

double SpectralField::hermitian_defect() const noexcept {
  const auto& neg = negation_table(grid_);
  double d = 0.0;
  for (std::size_t i = 0; i < modes_.size(); ++i)
    d = std::max(d, std::norm(modes_[i] - std::conj(modes_[neg[i]])));
  return std::sqrt(d);
}

void SpectralField::symmetrize() noexcept {
  const auto& neg = negation_table(grid_);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    std::size_t j = neg[i];
    if (j < i) continue;
    if (j == i) {
      modes_[i] = Complex(modes_[i].real(), 0.0);
    } else {
      Complex a = 0.5 * (modes_[i] + std::conj(modes_[j]));
      modes_[i] = a;
      modes_[j] = std::conj(a);
    }
  }
}

double SpectralField::energy() const noexcept {
  double s = 0.0;
  for (const auto& c : modes_) s += std::norm(c);
  return s;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : modes_) m = std::max(m, std::norm(c));
  return std::sqrt(m);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField +=");
  for (std::size_t i = 0; i < modes_.size(); ++i) modes_[i] += other.modes_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_, "SpectralField -=");
  for (std::size_t i = 0; i < modes_.size(); ++i) modes_[i] -= other.modes_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex scale) noexcept {
  for (auto& c : modes_) c *= scale;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Complex scale, SpectralField a) { return a *= scale; }

}  // namespace fracdrift
