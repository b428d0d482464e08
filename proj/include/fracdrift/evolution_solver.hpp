#pragma once

#include <functional>
#include <vector>

#include "fracdrift/error.hpp"
#include "fracdrift/fields.hpp"
#include "fracdrift/operators.hpp"

namespace fracdrift {

/// Saved states of an evolution run. times[0] = 0 and spacing is uniform.
struct Trajectory {
  std::vector<double> times;
  std::vector<RealField> states;
  double alpha = 0.0;
  double dt = 0.0;  ///< step actually used (T divided by the step count)
};

/// E_T diagnostics: sup_t ||v||_p, sup_{t>0} t^{n/(alpha p)} ||v||_inf and their sum.
struct ETDiagnostics {
  double sup_lp = 0.0;
  double weighted_sup_linf = 0.0;
  double et_norm = 0.0;
};

struct EvolveOptions {
  double p = 2.0;
  int save_every = 1;  ///< keep every k-th state; the final state is always kept
  bool dealiased = true;
  /// Called after every step (and once at t = 0) with the current state.
  std::function<void(double t, const RealField& v)> observer;
};

struct EvolveResult {
  Trajectory trajectory;
  ETDiagnostics diagnostics;
};

/// Raised when the state stops being finite; carries the steps taken so far.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& message, Trajectory partial)
      : Error(ErrorCode::BlowUp, message), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

/// Multiplier exp(-t |k|^alpha); the mean is preserved. Throws Parameter for t < 0.
RealField heat_propagate(const RealField& f, double t, double alpha);

/// phi_1(z) = (e^z - 1)/z, phi_1(0) = 1; series for |z| < 1e-4.
double phi1(double z) noexcept;

/// For each t: ||grad p_alpha(t)||_{L^q} t^{(1+n(1-1/q))/alpha}, with the
/// periodized kernel materialized on `grid`. Throws Resolution when the
/// kernel width t^{1/alpha} is below two cells.
std::vector<double> heat_kernel_gradient_scaling(const Grid& grid, double alpha, double q,
                                                 const std::vector<double>& t_grid);

struct WeightedSup {
  double value = 0.0;  ///< max_t t^{n/(alpha p)} ||p_alpha(t) * g||_inf
  double ratio = 0.0;  ///< value / ||g||_p, 0 when g = 0
};

WeightedSup weighted_sup_diagnostic(const RealField& g, double alpha, double p,
                                    const std::vector<double>& t_grid);

/// Exponential-Euler integration of dv/dt + (-Delta)^{alpha/2} v + div(v A(v)) = g
/// from v0 over [0, T]. Throws Parameter when dt <= 0, T < 0 or
/// dt max|k|^alpha > 700, and BlowUpError on a non-finite state.
EvolveResult evolve(const RealField& v0, const RealField& g, const DriftOperator& A, double alpha,
                    double T, double dt, const EvolveOptions& opts = {});

/// max_t ||v(t) - u||_inf / max(||u||_inf, 1e-300) for the run started at u with forcing f.
double stationarity_check(const RealField& u, const RealField& f, const DriftOperator& A,
                          double alpha, double T, double dt, bool dealiased = true);

}  // namespace fracdrift
