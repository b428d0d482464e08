#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracdrift/fields.hpp"
#include "fracdrift/spectral.hpp"

namespace fracdrift {

using VectorField = std::vector<RealField>;

/// (-Delta)^{alpha/2}: multiplier |k|^alpha, mean annihilated.
RealField frac_laplacian(const RealField& f, double alpha);
/// (-Delta)^{-alpha/2}: multiplier |k|^{-alpha}, zero at k=0.
RealField inv_frac_laplacian(const RealField& f, double alpha);

/// Spectral gradient (multipliers i k_j).
VectorField gradient(const RealField& f);
/// Spectral divergence sum_j i k_j w_j.
RealField divergence(const VectorField& w);
/// Pointwise Euclidean magnitude of a vector field.
RealField magnitude(const VectorField& w);

/// The drift A(.) as a vector of Fourier multipliers on one grid.
///
/// Symbols must be divergence-free (sum_j k_j m_j(k) = 0) and
/// Hermitian-compatible (m_j(-k) = conj m_j(k)); construction rejects
/// anything else. The k=0 entry of every component is zero.
class DriftOperator {
 public:
  DriftOperator(Grid grid, std::vector<Symbol> components, std::string name,
                std::optional<double> declared_lipschitz = std::nullopt,
                std::optional<double> declared_sobolev_bound = std::nullopt);

  /// A_1 = -d_2 (-Delta)^{-1/2}, A_2 = d_1 (-Delta)^{-1/2} (n = 2 only).
  static DriftOperator sqg(const Grid& grid);
  /// A = 0: switches the nonlinearity off.
  static DriftOperator zero(const Grid& grid);
  /// One expression per component, see SymbolExpression.
  static DriftOperator from_expressions(const Grid& grid, const std::vector<std::string>& exprs);
  /// "sqg", "zero", or "symbols: <expr_1>; ...; <expr_n>".
  static DriftOperator from_config(const Grid& grid, const std::string& spec);

  VectorField apply(const RealField& u) const;
  std::vector<SpectralField> apply(const SpectralField& U) const;

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  const std::vector<Symbol>& components() const noexcept { return components_; }
  const std::string& name() const noexcept { return name_; }
  bool is_zero() const noexcept { return is_zero_; }

  /// C_A in ||A(u1)-A(u2)|| <= C_A ||u1-u2||, when known a priori.
  std::optional<double> declared_lipschitz() const noexcept { return declared_lipschitz_; }
  /// C in ||A(u)||_{W^{s,r}} <= C ||u||_{W^{s,r}}, when known a priori.
  std::optional<double> declared_sobolev_bound() const noexcept { return declared_sobolev_bound_; }

 private:
  Grid grid_;
  std::vector<Symbol> components_;
  std::string name_;
  std::optional<double> declared_lipschitz_;
  std::optional<double> declared_sobolev_bound_;
  bool is_zero_ = false;
};

/// Both SQG drift components of u (n = 2).
VectorField sqg_drift(const RealField& u);

/// K_alpha = (K_{alpha,1}, ..., K_{alpha,n}), the convolution kernel of
/// -(-Delta)^{-alpha/2} div. Under f(x) = sum F(k) e^{ik.x} its symbol is
/// m_j(k) = -i k_j / |k|^alpha, zero at k = 0; homogeneous of degree 1-alpha.
class KernelOperator {
 public:
  KernelOperator(Grid grid, double alpha);

  static Complex symbol(double alpha, int axis, const Wavevector& w);

  double alpha() const noexcept { return alpha_; }
  const Grid& grid() const noexcept { return grid_; }
  const std::vector<Symbol>& components() const noexcept { return components_; }
  /// Set when alpha lies outside (1, n+1), where K_alpha is not locally integrable.
  const std::optional<std::string>& range_warning() const noexcept { return warning_; }

 private:
  Grid grid_;
  double alpha_;
  std::vector<Symbol> components_;
  std::optional<std::string> warning_;
};

/// sum_j K_{alpha,j} * w_j.
RealField apply_kernel(const KernelOperator& K, const VectorField& w);

struct KernelWeakNorm {
  double weak_norm = 0.0;     ///< ||K_alpha||_{L^{p,inf}}, p = n/((n+1)-alpha): empirical C_K
  double lorentz_p = 0.0;
  double decay_slope = 0.0;   ///< fitted log|K| vs log r slope; expected alpha-(n+1)
  double expected_slope = 0.0;
};

/// Materializes K_alpha on the grid and measures its weak-Lebesgue norm and
/// radial decay. Throws Parameter unless 1 < alpha < n+1.
KernelWeakNorm kernel_weak_norm(const KernelOperator& K);

/// Physical-space components of K_alpha, K_j(x) = L^{-n} sum_k m_j(k) e^{ik.x}.
VectorField materialize_kernel(const KernelOperator& K);

/// div(u A(u)) with dealiased products.
RealField nonlinear_term(const RealField& u, const DriftOperator& A, bool dealiased = true);
/// A(u) . grad u with dealiased products; equals nonlinear_term when div A(u) = 0.
RealField advective_term(const RealField& u, const DriftOperator& A, bool dealiased = true);

/// L^{p1,q1}(|A(u1)-A(u2)|) / L^{p1,q1}(u1-u2). Lebesgue norm when p1 == q1.
/// Throws DegenerateInput when u1 == u2.
double lipschitz_ratio(const DriftOperator& A, const RealField& u1, const RealField& u2, double p1,
                       double q1);

/// Max of lipschitz_ratio over random band-limited probe pairs.
double estimate_lipschitz_constant(const DriftOperator& A, double p1, double q1, int probes = 64,
                                   std::uint64_t seed = 1);

/// Declared C_A when present, otherwise the empirical estimate.
double drift_lipschitz_constant(const DriftOperator& A, double p1, double q1);

}  // namespace fracdrift
