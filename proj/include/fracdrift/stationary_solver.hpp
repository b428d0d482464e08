#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdrift/error.hpp"
#include "fracdrift/fields.hpp"
#include "fracdrift/operators.hpp"

namespace fracdrift {

struct SolverConfig {
  double alpha = 1.5;
  double p = 2.0;  ///< Lebesgue exponent of the update norm and diagnostics
  int max_iters = 100;
  double tol = 1e-10;  ///< relative L^p update tolerance
  bool dealiased = true;
  bool enforce_gate = false;

  /// Throws Parameter on tol <= 0, max_iters < 1 or alpha <= 0.
  void validate() const;
};

/// Smallness-gate record: source radius against the contraction thresholds.
struct GateRecord {
  double R = 0.0;               ///< max(||u0||_{L^{n/(alpha-1),inf}}, ||u0||_{L^p})
  double u0_lorentz = 0.0;
  double u0_lebesgue = 0.0;
  double C_K = 0.0;             ///< empirical weak norm of K_alpha
  double C_A = 0.0;             ///< drift Lipschitz constant at (n/(alpha-1), inf)
  double C_young = 1.0;         ///< unnamed absolute constant of the Young bounds, fixed to 1
  double C1_lorentz = 0.0;      ///< Young constant for the weak-norm contraction estimate
  double C1_of_p = 0.0;         ///< p-dependent Young constant for the L^p bound
  double M_alpha = 0.0;         ///< sup of C1(p) over p in [2, 3n/(alpha-1)]
  double C_alpha_n = 0.0;       ///< C1_lorentz * C_K * C_A
  double eta1 = 0.0;            ///< 1 / (8 C_alpha_n)
  double eta2 = 0.0;            ///< 1 / (4 M_alpha C_K C_A)
  bool pass = false;            ///< R <= min(eta1, eta2)
  std::vector<std::string> warnings;
};

struct SolveReport {
  explicit SolveReport(const Grid& grid) : u(grid), u0(grid) {}

  RealField u;
  RealField u0;
  std::vector<double> lorentz_norms;   ///< per iterate, L^{n/(alpha-1),inf}; empty when not tracked
  std::vector<double> lp_norms;        ///< per iterate, L^p
  std::vector<double> updates;         ///< ||u_{m+1} - u_m||_{L^p} per iteration
  std::vector<double> contraction_ratios;  ///< updates[m] / updates[m-1]
  std::vector<double> residuals;       ///< relative equation residual per iterate
  double residual = 0.0;
  std::optional<double> ball_radius;   ///< ||u - u0||_{L^{n/(alpha-1),inf}}
  std::optional<GateRecord> gate;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Raised on divergence or non-convergence; carries the partial report.
class SolveError : public Error {
 public:
  SolveError(ErrorCode code, const std::string& message, SolveReport report)
      : Error(code, message), report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Raised when enforce_gate is set and the smallness gate fails.
class GateError : public Error {
 public:
  GateError(const std::string& message, GateRecord gate)
      : Error(ErrorCode::GateRejected, message), gate_(std::move(gate)) {}
  const GateRecord& gate() const noexcept { return gate_; }

 private:
  GateRecord gate_;
};

/// Young-inequality constant for the L^p bound of the Picard iterates,
/// C p (n/(alpha-1)) (n p / (p((n+1)-alpha) - n)), with C = 1.
/// Throws Parameter when p <= n/((n+1)-alpha).
double young_constant_lp(int n, double alpha, double p);

GateRecord smallness_gate(const RealField& f, const DriftOperator& A, const SolverConfig& cfg);

/// ||(-Delta)^{alpha/2}u + div(u A(u)) - f||_2 / max(||f||_2, 1e-300).
double residual(const RealField& u, const RealField& f, const DriftOperator& A, double alpha,
                bool dealiased = true);

/// One application of u -> K_alpha * (u A(u)) + u0.
RealField picard_map(const RealField& u, const RealField& u0, const DriftOperator& A,
                     const KernelOperator& K, bool dealiased);

/// Iterates u_m = K_alpha * (u_{m-1} A(u_{m-1})) + u0 from u0 = (-Delta)^{-alpha/2} f,
/// or from `start` when given (the map keeps the same u0).
SolveReport picard_solve(const RealField& f, const DriftOperator& A, const SolverConfig& cfg,
                         const std::optional<RealField>& start = std::nullopt);

namespace detail {

/// A fixed-point problem u = map(u) with its equation residual. `lorentz`
/// is left empty when no weak-norm tracking applies.
struct FixedPointProblem {
  std::function<RealField(const RealField&)> map;
  std::function<double(const RealField&)> residual;
  std::function<double(const RealField&)> lorentz;
};

/// Runs the Picard loop from `u` with the shared convergence, divergence and
/// non-convergence rules, filling the per-iterate series of `rep`.
void run_fixed_point(SolveReport& rep, RealField u, const FixedPointProblem& prob, const SolverConfig& cfg);

}  // namespace detail

}  // namespace fracdrift
