#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string>

namespace fracdrift::cli {

/// Flat key=value run configuration. Lines starting with '#' and text after
/// a '#' are comments.
struct RunConfig {
  int n = 2;
  int N = 128;
  double L = 2.0 * std::numbers::pi;
  double alpha = 1.5;
  std::optional<double> beta;
  double p = 2.0;
  std::optional<double> gamma;
  double amplitude = 1e-3;
  std::uint64_t seed = 1;
  double T = 1.0;
  double dt = 1e-3;
  double tol = 1e-10;
  int max_iters = 100;
  std::string drift = "sqg";
  bool dealiased = true;
  bool enforce_gate = false;
  std::string output_dir = "out";

  std::set<std::string> keys;  ///< keys present in the file
};

/// Throws Error(Config) naming the offending line or key.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Range checks shared by every command; throws Error(Config).
void validate_run_config(const RunConfig& cfg);

}  // namespace fracdrift::cli
