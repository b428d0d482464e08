#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracdrift/function_spaces.hpp"
#include "fracdrift/operators.hpp"
#include "fracdrift/stationary_solver.hpp"

namespace fracdrift {

/// f(k) = amplitude |k|^{-gamma} e^{i theta(k)} on the nonzero modes of the
/// 2/3 band, with seeded phases that depend only on (seed, k). Its shell
/// decay exponent is gamma - n/2.
RealField synthesize_source(double gamma, double amplitude, std::uint64_t seed, const Grid& grid);

/// s + alpha = k * step + eps with k maximal and 0 <= eps < step.
struct LadderDecomposition {
  int k = 0;
  double eps = 0.0;
  double step = 0.0;
};

LadderDecomposition ladder_decomposition(double s, double alpha, double step);

struct LadderRung {
  int j = 0;               ///< rung number; the closing rung at s+alpha has j = k+1
  double order = 0.0;      ///< Sobolev order of this rung
  double identity_residual = 0.0;  ///< relative L^2 gap between the two sides
  double sobolev_norm = 0.0;       ///< ||u||_{W^{order,r}}
};

struct LadderRecord {
  double s = 0.0;
  double r = 2.0;
  double alpha = 0.0;
  LadderDecomposition decomposition;
  std::vector<LadderRung> rungs;
};

/// Rungs of the identity Lambda^order u = Lambda^{order-alpha} (f - N(u)) at
/// orders j*step, j = 1..k, closed by order s+alpha when eps > 0.
/// `forcing_minus_nonlinear` is f - N(u) for whatever equation u solves.
LadderRecord evaluate_ladder(const RealField& u, const RealField& forcing_minus_nonlinear, double alpha,
                             double step, double s, double r);

/// Ladder for the drift equation, step alpha - 1. Throws UnsupportedRange for alpha <= 1.
LadderRecord bootstrap_ladder(const RealField& u, const RealField& f, const DriftOperator& A, double alpha,
                              double s, double r, bool dealiased = true);

struct HolderSample {
  double sigma = 0.0;
  double quotient = 0.0;
};

struct RegularityReport {
  double s_star_f = 0.0;
  double s_star_u = 0.0;
  double gain = 0.0;
  double expected_gain = 0.0;
  double optimality_margin = 0.0;  ///< s_star_u - (s_star_f + alpha)
  std::optional<LadderRecord> ladder;
  std::vector<HolderSample> holder;
  ShellSpectrum shells_f;
  ShellSpectrum shells_u;
  int iterations = 0;
  double residual = 0.0;
  std::vector<std::string> warnings;
};

/// The ladder is walked from s*(f) minus this margin, where the source still
/// has finite norm.
inline constexpr double kLadderMargin = 0.5;

/// Fills the shell spectra, fitted exponents, gain and margin from a source and a solution.
RegularityReport compare_regularity(const RealField& f, const RealField& u, double alpha);

/// Solves the drift equation for f and compares the fitted decay exponents of f and u.
RegularityReport measure_gain(const RealField& f, const DriftOperator& A, const SolverConfig& cfg);

/// ||Lambda^alpha(gh)||_p / (||Lambda^alpha g||_{p1} ||h||_{p2} + ||g||_{q1} ||Lambda^alpha h||_{q2}).
/// Throws Parameter unless 1/p = 1/p1 + 1/p2 = 1/q1 + 1/q2.
double leibniz_check(const RealField& g, const RealField& h, double alpha, double p, double p1, double p2,
                     double q1, double q2);

/// max |u(x) - u(y)| / |x - y|^sigma over axis-aligned pairs 1, 2, 4, 8, 16 cells apart
/// (torus distance, physical units).
double holder_quotient(const RealField& u, double sigma);

}  // namespace fracdrift
