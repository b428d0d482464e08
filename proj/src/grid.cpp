#include "fracdrift/grid.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "fracdrift/error.hpp"

namespace fracdrift {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::Asymmetry: return "asymmetry";
    case ErrorCode::MultiplierDomain: return "multiplier-domain";
    case ErrorCode::Shape: return "shape";
    case ErrorCode::Parameter: return "parameter";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::InsufficientResolution: return "insufficient-resolution";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::BlowUp: return "blow-up";
    case ErrorCode::UnsupportedRange: return "unsupported-range";
    case ErrorCode::GateRejected: return "gate-rejected";
    case ErrorCode::Io: return "io";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

Grid::Grid(int dim, int points, double side) : dim_(dim), points_(points), side_(side) {
  if (dim < 1 || dim > kMaxDim)
    throw Error(ErrorCode::Dimension, "grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  if (points < 8 || !std::has_single_bit(static_cast<unsigned>(points)))
    throw Error(ErrorCode::Parameter,
                "points per axis must be a power of two >= 8, got " + std::to_string(points));
  if (!(side > 0.0) || !std::isfinite(side))
    throw Error(ErrorCode::Parameter, "torus side length must be positive and finite");
  size_ = 1;
  for (int j = 0; j < dim; ++j) size_ *= static_cast<std::size_t>(points);
  cell_volume_ = std::pow(side / points, dim);
  volume_ = std::pow(side, dim);
  base_wavenumber_ = 2.0 * std::numbers::pi / side;
}

std::array<int, Grid::kMaxDim> Grid::unravel(std::size_t flat) const noexcept {
  std::array<int, kMaxDim> idx{};
  for (int j = dim_ - 1; j >= 0; --j) {
    idx[j] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

std::size_t Grid::ravel(const std::array<int, kMaxDim>& idx) const noexcept {
  std::size_t flat = 0;
  for (int j = 0; j < dim_; ++j) {
    int i = idx[j] % points_;
    if (i < 0) i += points_;
    flat = flat * points_ + static_cast<std::size_t>(i);
  }
  return flat;
}

std::size_t Grid::negate(std::size_t flat) const noexcept {
  auto idx = unravel(flat);
  for (int j = 0; j < dim_; ++j) idx[j] = (points_ - idx[j]) % points_;
  return ravel(idx);
}

std::array<double, Grid::kMaxDim> Grid::position(std::size_t flat) const noexcept {
  auto idx = unravel(flat);
  std::array<double, kMaxDim> x{};
  for (int j = 0; j < dim_; ++j) x[j] = idx[j] * spacing();
  return x;
}

const std::vector<std::size_t>& negation_table(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<std::size_t>> tables;
  std::lock_guard lock(mutex);
  auto [it, fresh] = tables.try_emplace({grid.dim(), grid.points()});
  if (fresh) {
    it->second.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) it->second[i] = grid.negate(i);
  }
  return it->second;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!(a == b)) throw Error(ErrorCode::Shape, std::string(where) + ": fields live on different grids");
}

}  // namespace fracdrift
