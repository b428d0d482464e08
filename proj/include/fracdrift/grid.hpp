#pragma once

#include <array>
#include <cstddef>
#include <vector>
#include <numbers>

namespace fracdrift {

/// Periodic torus [0, L)^n sampled with N points per axis.
///
/// Samples and modes are stored row-major with axis 0 slowest. Mode index i
/// on an axis maps to the signed wavenumber index s in [-N/2, N/2) and the
/// physical wavenumber s * 2*pi/L.
class Grid {
 public:
  static constexpr int kMaxDim = 3;

  Grid(int dim, int points, double side = 2.0 * std::numbers::pi);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  double side() const noexcept { return side_; }

  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return side_ / points_; }
  double cell_volume() const noexcept { return cell_volume_; }
  double volume() const noexcept { return volume_; }
  /// 2*pi/L.
  double base_wavenumber() const noexcept { return base_wavenumber_; }

  int signed_index(int i) const noexcept { return i < points_ / 2 ? i : i - points_; }
  double wavenumber(int signed_idx) const noexcept { return signed_idx * base_wavenumber_; }

  std::array<int, kMaxDim> unravel(std::size_t flat) const noexcept;
  std::size_t ravel(const std::array<int, kMaxDim>& idx) const noexcept;

  /// Flat index of the mode at -k (grid negation, modulo N).
  std::size_t negate(std::size_t flat) const noexcept;

  /// Physical coordinate of a sample along each axis.
  std::array<double, kMaxDim> position(std::size_t flat) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.points_ == b.points_ && a.side_ == b.side_;
  }

 private:
  int dim_;
  int points_;
  double side_;
  std::size_t size_;
  double cell_volume_;
  double volume_;
  double base_wavenumber_;
};

/// negate(i) for every flat index, computed once per (dim, N) and shared.
const std::vector<std::size_t>& negation_table(const Grid& grid);

/// Throws a shape error unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace fracdrift
