#include <doctest.h>

#include <numbers>

#include "fracdrift/error.hpp"
#include "fracdrift/function_spaces.hpp"
#include "fracdrift/evolution_solver.hpp"
#include "fracdrift/regularity_lab.hpp"
#include "fracdrift/stationary_solver.hpp"
#include "oracles.hpp"

using namespace fracdrift;

namespace {

// Heat flow of an explicit cosine sum, term by term.
RealField heat_of(const Grid& g, oracle::TrigSum s, double t, double alpha) {
  const double k0 = 2.0 * oracle::kPi / g.side();
  for (auto& term : s.terms) {
    double k2 = 0.0;
    for (int j = 0; j < g.dim(); ++j) k2 += k0 * k0 * term.k[j] * term.k[j];
    term.amp *= std::exp(-t * std::pow(std::sqrt(k2), alpha));
  }
  return s.sample(g);
}

double mean_of(const RealField& f) {
  double s = 0.0;
  for (double v : f.samples()) s += v;
  return s / static_cast<double>(f.size());
}

RealField cos1(const Grid& g) {
  return RealField::from_function(g, [](auto x) { return std::cos(x[0]); });
}

}  // namespace

TEST_CASE("phi1") {
  CHECK(phi1(0.0) == 1.0);
  for (double z : {-1e-6, 5e-5, -3e-4, -0.5, -20.0, 1.0}) CHECK(phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-13));
}

TEST_CASE("fractional heat semigroup") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 1 + trial % 3;
    const Grid g(dim, dim == 3 ? 16 : 32, rng.uniform(2.0, 10.0));
    const auto s = oracle::random_trig_sum(dim, 5, 4, rng, rng.uniform(-1.0, 1.0));
    const auto f = s.sample(g);
    const double alpha = rng.uniform(0.5, 2.0);
    const double t1 = rng.uniform(0.0, 0.5), t2 = rng.uniform(0.0, 0.5);

    CHECK(oracle::max_abs_diff(heat_propagate(f, t1, alpha), heat_of(g, s, t1, alpha)) < 1e-12);
    CHECK(oracle::max_abs_diff(heat_propagate(heat_propagate(f, t1, alpha), t2, alpha),
                               heat_propagate(f, t1 + t2, alpha)) < 1e-12);
    CHECK(mean_of(heat_propagate(f, t1, alpha)) == doctest::Approx(mean_of(f)).epsilon(1e-12));
    CHECK(oracle::max_abs_diff(heat_propagate(f, 0.0, alpha), f) < 1e-13);
  }
  CHECK_THROWS_AS(heat_propagate(cos1(Grid(1, 16)), -0.1, 1.0), Error);
}

TEST_CASE("gradient of the heat kernel scales self-similarly") {
  const Grid g(2, 512, 32.0);
  const std::vector<double> ts{0.05, 0.1, 0.2, 0.5, 1.0};

  // Gaussian case: ||grad p(t)||_1 t^{1/2} = E|X| / (2 sqrt t) with X ~ N(0, 2t I_2).
  for (double v : heat_kernel_gradient_scaling(g, 2.0, 1.0, ts))
    CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(0.01));

  for (double q : {1.0, 2.0, kInf}) {
    const auto v = heat_kernel_gradient_scaling(g, 1.5, q, ts);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    CHECK(*hi / *lo <= 1.1);
  }
  CHECK_THROWS_AS(heat_kernel_gradient_scaling(g, 1.5, 1.0, {1e-4}), Error);
}

TEST_CASE("weighted sup diagnostic") {
  const Grid g(2, 32);
  const std::vector<double> ts{0.1, 0.5, 1.0, 2.0};
  const auto zero = weighted_sup_diagnostic(RealField(g), 1.5, 2.0, ts);
  CHECK(zero.value == 0.0);
  CHECK(zero.ratio == 0.0);

  // constants are invariant under the flow
  const auto c = weighted_sup_diagnostic(RealField::constant(g, 3.0), 1.5, 2.0, ts);
  CHECK(c.value == doctest::Approx(3.0 * std::pow(2.0, 2.0 / 3.0)).epsilon(1e-12));
  CHECK(c.ratio == doctest::Approx(c.value / (3.0 * 2.0 * oracle::kPi)).epsilon(1e-12));

  oracle::Rng rng(4);
  const auto f = oracle::noise_field(g, rng);
  RealField shifted(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unravel(i);
    idx[0] += 5;
    idx[1] -= 3;
    shifted[i] = f[g.ravel(idx)];
  }
  const auto a = weighted_sup_diagnostic(f, 1.5, 2.0, ts);
  const auto b = weighted_sup_diagnostic(shifted, 1.5, 2.0, ts);
  CHECK(b.value == doctest::Approx(a.value).epsilon(1e-12));
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
  CHECK(weighted_sup_diagnostic(2.5 * f, 1.5, 2.0, ts).ratio == doctest::Approx(a.ratio).epsilon(1e-12));
}

TEST_CASE("linear evolution is exact") {
  const Grid g(2, 32);
  const auto Z = DriftOperator::zero(g);

  SUBCASE("free decay") {
    const auto r = evolve(cos1(g), RealField(g), Z, 1.5, 1.0, 1e-2);
    CHECK(oracle::max_abs_diff(r.trajectory.states.back(), std::exp(-1.0) * cos1(g)) < 1e-8);
    oracle::Rng rng(8);
    const auto s = oracle::random_trig_sum(2, 8, 6, rng);
    const auto r2 = evolve(s.sample(g), RealField(g), Z, 1.2, 0.7, 0.05);
    CHECK(oracle::max_abs_diff(r2.trajectory.states.back(), heat_propagate(s.sample(g), 0.7, 1.2)) < 1e-12);
  }
  SUBCASE("constant forcing from rest") {
    // v(T) = (1 - e^{-T|k|^alpha}) / |k|^alpha cos(k.x)
    const auto f = RealField::from_function(g, [](auto x) { return std::cos(x[0]) + 0.5 * std::sin(2 * x[0] + x[1]); });
    const auto r = evolve(RealField(g), f, Z, 1.5, 0.8, 0.01);
    const double m5 = std::pow(5.0, 0.75);
    const auto want = RealField::from_function(g, [&](auto x) {
      return (1 - std::exp(-0.8)) * std::cos(x[0]) + 0.5 * (1 - std::exp(-0.8 * m5)) / m5 * std::sin(2 * x[0] + x[1]);
    });
    CHECK(oracle::max_abs_diff(r.trajectory.states.back(), want) < 1e-12);
  }
}

TEST_CASE("first-order convergence in time") {
  const Grid g(2, 32);
  const auto A = DriftOperator::sqg(g);
  oracle::Rng rng(21);
  const auto v0 = 0.5 * oracle::random_trig_sum(2, 4, 5, rng).sample(g);
  std::vector<RealField> finals;
  for (double dt : {0.05, 0.025, 0.0125, 0.00625}) finals.push_back(evolve(v0, RealField(g), A, 1.5, 0.5, dt).trajectory.states.back());
  // successive differences shrink by the order of the scheme
  const double e1 = lebesgue_norm(finals[0] - finals[1], 2.0);
  const double e2 = lebesgue_norm(finals[1] - finals[2], 2.0);
  const double e3 = lebesgue_norm(finals[2] - finals[3], 2.0);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("trajectory bookkeeping") {
  const Grid g(2, 16);
  const auto A = DriftOperator::sqg(g);
  const auto v0 = 0.1 * cos1(g);

  SUBCASE("save cadence and observer") {
    EvolveOptions opts;
    opts.save_every = 3;
    int calls = 0;
    opts.observer = [&](double, const RealField&) { ++calls; };
    const auto r = evolve(v0, RealField(g), A, 1.5, 1.0, 0.1, opts);
    CHECK(calls == 11);
    REQUIRE(r.trajectory.times.size() == 5);
    CHECK(r.trajectory.times[1] == doctest::Approx(0.3));
    CHECK(r.trajectory.times.back() == doctest::Approx(1.0));
    CHECK(r.trajectory.dt == doctest::Approx(0.1));
  }
  SUBCASE("step is shortened to divide T") {
    const auto r = evolve(v0, RealField(g), A, 1.5, 1.0, 0.3);
    CHECK(r.trajectory.times.size() == 5);
    CHECK(r.trajectory.dt == doctest::Approx(0.25));
  }
  SUBCASE("T = 0 keeps only the initial state") {
    const auto r = evolve(v0, RealField(g), A, 1.5, 0.0, 0.1);
    REQUIRE(r.trajectory.states.size() == 1);
    CHECK(oracle::max_abs_diff(r.trajectory.states[0], v0) == 0.0);
  }
  SUBCASE("diagnostics") {
    const auto r = evolve(v0, RealField(g), A, 1.5, 1.0, 0.1);
    const auto& d = r.diagnostics;
    CHECK(std::isfinite(d.et_norm));
    CHECK(d.sup_lp == doctest::Approx(lebesgue_norm(v0, 2.0)));
    CHECK(d.weighted_sup_linf > 0.0);
    CHECK(d.et_norm == doctest::Approx(d.sup_lp + d.weighted_sup_linf));
  }
  SUBCASE("argument errors") {
    CHECK_THROWS_AS(evolve(v0, RealField(g), A, 1.5, 1.0, 0.0), Error);
    CHECK_THROWS_AS(evolve(v0, RealField(g), A, 1.5, -1.0, 0.1), Error);
    CHECK_THROWS_AS(evolve(v0, RealField(g), A, 2.0, 100.0, 10.0), Error);
  }
}

TEST_CASE("blow-up keeps the partial trajectory") {
  const Grid g(2, 16);
  const auto v0 = 1e200 * RealField::from_function(g, [](auto x) { return std::cos(x[0]) + std::sin(x[1]); });
  try {
    evolve(v0, RealField(g), DriftOperator::sqg(g), 1.5, 1.0, 0.1);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.code() == ErrorCode::BlowUp);
    REQUIRE(!e.partial().states.empty());
    CHECK(e.partial().states.front().all_finite());
  }
}

TEST_CASE("stationary solutions stay put") {
  const Grid g(2, 64);
  const auto A = DriftOperator::sqg(g);
  const auto f = synthesize_source(2.0, 1e-3, 2, g);
  const auto sol = picard_solve(f, A, {});
  CHECK(stationarity_check(sol.u, f, A, 1.5, 1.0, 0.01) <= 1e-6);
  const auto bumped = sol.u + 0.5 * sol.u0;
  CHECK(stationarity_check(bumped, f, A, 1.5, 1.0, 0.01) > 1e-2);
}
