#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracdrift/error.hpp"
#include "fracdrift/grid.hpp"

namespace fracdrift::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
  throw Error(ErrorCode::Config, "config key '" + key + "': " + what + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) bad(key, v, "expected a finite number");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "expected an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, v, "expected true or false");
}

int to_int(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < -1000000000LL || x > 1000000000LL) bad(key, v, "integer out of range");
  return static_cast<int>(x);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::Config, "config line " + std::to_string(lineno) + ": empty key");
    if (!cfg.keys.insert(key).second) throw Error(ErrorCode::Config, "config key '" + key + "' given twice");

    if (key == "n") cfg.n = to_int(key, value);
    else if (key == "N") cfg.N = to_int(key, value);
    else if (key == "L") cfg.L = to_double(key, value);
    else if (key == "alpha") cfg.alpha = to_double(key, value);
    else if (key == "beta") cfg.beta = to_double(key, value);
    else if (key == "p") cfg.p = to_double(key, value);
    else if (key == "gamma") cfg.gamma = to_double(key, value);
    else if (key == "amplitude") cfg.amplitude = to_double(key, value);
    else if (key == "seed") {
      const long long s = to_integer(key, value);
      if (s < 0) bad(key, value, "seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "T") cfg.T = to_double(key, value);
    else if (key == "dt") cfg.dt = to_double(key, value);
    else if (key == "tol") cfg.tol = to_double(key, value);
    else if (key == "max_iters") cfg.max_iters = to_int(key, value);
    else if (key == "drift") {
      if (value.empty()) bad(key, value, "expected sqg, zero or symbols: ...");
      cfg.drift = value;
    } else if (key == "dealiased") cfg.dealiased = to_bool(key, value);
    else if (key == "enforce_gate") cfg.enforce_gate = to_bool(key, value);
    else if (key == "output_dir") {
      if (value.empty()) bad(key, value, "expected a directory");
      cfg.output_dir = value;
    } else
      throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

void validate_run_config(const RunConfig& cfg) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorCode::Config, "config key '" + key + "': " + why);
  };
  try {
    Grid(cfg.n, cfg.N, cfg.L);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, std::string("grid (n, N, L): ") + e.what());
  }
  if (!(cfg.alpha > 0.0)) fail("alpha", "must be positive");
  if (cfg.beta && !(*cfg.beta > 0.0 && *cfg.beta < cfg.alpha)) fail("beta", "must satisfy 0 < beta < alpha");
  if (!(cfg.p >= 1.0)) fail("p", "must be >= 1");
  if (cfg.gamma && !(*cfg.gamma > 0.0)) fail("gamma", "must be positive");
  if (!(cfg.amplitude >= 0.0)) fail("amplitude", "must be >= 0");
  if (!(cfg.T >= 0.0)) fail("T", "must be >= 0");
  if (!(cfg.dt > 0.0)) fail("dt", "must be positive");
  if (!(cfg.tol > 0.0)) fail("tol", "must be positive");
  if (cfg.max_iters < 1) fail("max_iters", "must be >= 1");
}

}  // namespace fracdrift::cli
