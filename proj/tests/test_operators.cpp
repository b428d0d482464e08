#include <doctest.h>

#include "fracdrift/error.hpp"
#include "fracdrift/function_spaces.hpp"
#include "fracdrift/operators.hpp"
#include "oracles.hpp"

using namespace fracdrift;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidInput;
}

RealField cos_field(const Grid& g, int k1, int k2 = 0) {
  return RealField::from_function(g, [=](auto x) { return std::cos(k1 * x[0] + (g.dim() > 1 ? k2 * x[1] : 0.0)); });
}

}  // namespace

TEST_CASE("fractional Laplacian and its inverse") {
  const Grid g(1, 64);
  const auto c2 = cos_field(g, 2);
  CHECK(oracle::max_abs_diff(frac_laplacian(c2, 1.0), 2.0 * c2) < 1e-13);
  CHECK(oracle::max_abs_diff(inv_frac_laplacian(c2, 1.0), 0.5 * c2) < 1e-15);
  CHECK(frac_laplacian(RealField::constant(g, 3.0), 0.7).max_abs() == 0.0);
  CHECK(code_of([&] { frac_laplacian(c2, 0.0); }) == ErrorCode::Parameter);
  CHECK(code_of([&] { inv_frac_laplacian(c2, -1.0); }) == ErrorCode::Parameter);

  oracle::Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const Grid g2(2, 32, rng.uniform(1.0, 8.0));
    const auto f = oracle::noise_field(g2, rng);
    const double alpha = rng.uniform(0.2, 2.8);
    const auto back = frac_laplacian(inv_frac_laplacian(f, alpha), alpha);
    const auto mz = mean_zero(f);
    CHECK(oracle::max_abs_diff(back, mz) <= 1e-12 * mz.max_abs());
    CHECK(std::abs(inv_frac_laplacian(f, alpha).mean()) < 1e-14);
  }
}

TEST_CASE("alpha = 2 converges to centered differences at second order") {
  oracle::Rng rng(8);
  const auto sum = oracle::random_trig_sum(2, 3, 5, rng);
  std::vector<double> err;
  for (int N : {64, 128, 256}) {
    const Grid g(2, N);
    const auto f = sum.sample(g);
    err.push_back(oracle::max_abs_diff(frac_laplacian(f, 2.0), oracle::fd_neg_laplacian(f)));
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double rate = std::log2(err[i] / err[i + 1]);
    CHECK(rate == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("SQG drift") {
  const Grid g(2, 32);
  const auto a = sqg_drift(cos_field(g, 1));
  CHECK(a[0].max_abs() < 1e-15);
  const auto msin = RealField::from_function(g, [](auto x) { return -std::sin(x[0]); });
  CHECK(oracle::max_abs_diff(a[1], msin) < 1e-15);

  oracle::Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto u = oracle::noise_field(g, rng);
    const auto w = sqg_drift(u);
    CHECK(divergence(w).max_abs() <= 1e-10 * sobolev_norm(u, 1.0, 2.0));
  }
  // Odd symbols drop the self-conjugate Nyquist modes, so the isometry is
  // checked on fields without Nyquist content.
  for (int t = 0; t < 100; ++t) {
    const auto u = oracle::random_trig_sum(2, 15, 20, rng, 0.4).sample(g);
    const auto w = sqg_drift(u);
    const double lhs = std::sqrt(std::pow(oracle::l2(w[0]), 2) + std::pow(oracle::l2(w[1]), 2));
    CHECK(std::abs(lhs - oracle::l2(mean_zero(u))) <= 1e-10 * lhs);
  }
  CHECK(code_of([] { sqg_drift(RealField(Grid(3, 8))); }) == ErrorCode::Dimension);
  CHECK(code_of([] { DriftOperator::sqg(Grid(1, 8)); }) == ErrorCode::Dimension);
}

TEST_CASE("drift operators from symbol expressions") {
  const Grid g(2, 32);
  const auto sym = DriftOperator::from_config(g, "symbols: -i*k2/|k| ; i*k1/|k|");
  const auto sqg = DriftOperator::sqg(g);
  for (int j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(std::abs(sym.components()[j][i] - sqg.components()[j][i]) < 1e-15);
  CHECK(!sym.declared_lipschitz());
  CHECK(DriftOperator::from_config(g, " zero ").is_zero());

  // Not divergence-free.
  CHECK(code_of([&] { DriftOperator::from_config(g, "symbols: i*k1/|k|; 0"); }) == ErrorCode::Parameter);
  // Real odd symbol: m(-k) = -m(k) is not the conjugate.
  CHECK(code_of([&] { DriftOperator::from_config(g, "symbols: k2/|k|; -k1/|k|"); }) == ErrorCode::Parameter);
  CHECK(code_of([&] { DriftOperator::from_config(g, "rotational"); }) == ErrorCode::Config);
  CHECK(code_of([&] { DriftOperator::from_config(g, "symbols: i*k2/|k|"); }) == ErrorCode::Dimension);
}

TEST_CASE("kernel application") {
  SUBCASE("gradient of cos(2 x1) at alpha = 1") {
    const Grid g(2, 32);
    const auto out = apply_kernel(KernelOperator(g, 1.0), gradient(cos_field(g, 2)));
    CHECK(oracle::max_abs_diff(out, 2.0 * cos_field(g, 2)) < 1e-14);
  }
  SUBCASE("equals -(-Delta)^{-alpha/2} div") {
    oracle::Rng rng(19);
    for (double alpha : {1.2, 1.5, 1.8, 2.5}) {
      const Grid g(2, 32);
      const VectorField w{oracle::noise_field(g, rng), oracle::noise_field(g, rng)};
      const auto a = apply_kernel(KernelOperator(g, alpha), w);
      const auto b = -1.0 * inv_frac_laplacian(divergence(w), alpha);
      CHECK(oracle::max_abs_diff(a, b) <= 1e-12 * b.max_abs());
    }
  }
  SUBCASE("divergence-free input is annihilated") {
    oracle::Rng rng(20);
    const Grid g(2, 32);
    const auto u = oracle::noise_field(g, rng);
    const auto out = apply_kernel(KernelOperator(g, 1.5), sqg_drift(u));
    CHECK(out.max_abs() <= 1e-10 * u.max_abs());
  }
  SUBCASE("symbol homogeneity of degree 1 - alpha") {
    const Grid g(3, 16);
    for (double alpha : {1.2, 1.5, 1.8, 3.3}) {
      double worst = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto w = wavevector_at(g, i);
        if (w.is_zero()) continue;
        Wavevector w2 = w;
        for (int j = 0; j < 3; ++j) w2.k[j] *= 2.0;
        for (int j = 0; j < 3; ++j) {
          const Complex m = KernelOperator::symbol(alpha, j, w);
          if (m == Complex{}) continue;
          worst = std::max(worst, std::abs(KernelOperator::symbol(alpha, j, w2) / m - std::pow(2.0, 1 - alpha)));
        }
      }
      CHECK(worst <= 1e-14);
    }
  }
  SUBCASE("range warning") {
    CHECK(KernelOperator(Grid(2, 8), 3.5).range_warning().has_value());
    CHECK(!KernelOperator(Grid(2, 8), 1.5).range_warning().has_value());
  }
}

TEST_CASE("kernel weak norm and physical decay") {
  double prev_slope = -10.0;
  for (double alpha : {1.2, 1.5, 1.8, 2.4, 2.8}) {
    CAPTURE(alpha);
    const auto r = kernel_weak_norm(KernelOperator(Grid(2, 256), alpha));
    CHECK(r.expected_slope == doctest::Approx(alpha - 3.0));
    if (alpha < 2.0) CHECK(std::abs(r.decay_slope - r.expected_slope) <= 0.1 * std::abs(r.expected_slope));
    CHECK(r.decay_slope > prev_slope);
    CHECK(r.decay_slope < 0.0);
    prev_slope = r.decay_slope;
    CHECK(std::isfinite(r.weak_norm));
    CHECK(r.weak_norm > 0.0);
  }
  const double coarse = kernel_weak_norm(KernelOperator(Grid(2, 128), 1.5)).weak_norm;
  const double fine = kernel_weak_norm(KernelOperator(Grid(2, 256), 1.5)).weak_norm;
  CHECK(std::abs(fine / coarse - 1.0) <= 0.15);
  CHECK(code_of([] { kernel_weak_norm(KernelOperator(Grid(2, 16), 3.2)); }) == ErrorCode::Parameter);
}

TEST_CASE("nonlinear term") {
  const Grid g(2, 64);
  const auto A = DriftOperator::sqg(g);
  CHECK(nonlinear_term(cos_field(g, 1), A).max_abs() <= 1e-12);
  CHECK(nonlinear_term(RealField::constant(g, 2.0), A).max_abs() <= 1e-14);
  CHECK(nonlinear_term(cos_field(g, 3, 1), DriftOperator::zero(g)).max_abs() == 0.0);

  oracle::Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const auto u = oracle::random_trig_sum(2, 10, 10, rng).sample(g);
    const auto div_form = nonlinear_term(u, A);
    const auto adv_form = advective_term(u, A);
    CHECK(oracle::max_abs_diff(div_form, adv_form) <= 1e-8 * std::max(div_form.max_abs(), 1e-300));
  }
}

TEST_CASE("Lipschitz ratios") {
  const Grid g(2, 32);
  const auto A = DriftOperator::sqg(g);
  oracle::Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    const auto u1 = oracle::noise_field(g, rng), u2 = oracle::noise_field(g, rng);
    CHECK(lipschitz_ratio(A, u1, u2, 2.0, 2.0) <= 1 + 1e-8);
    const RealField zero(g);
    CHECK(lipschitz_ratio(A, u1, 2.0 * u1, 3.0, kInf) ==
          doctest::Approx(lipschitz_ratio(A, zero, u1, 3.0, kInf)).epsilon(1e-12));
  }
  for (const auto& c : A.apply(RealField(g))) CHECK(c.max_abs() == 0.0);
  const auto u = oracle::noise_field(g, rng);
  CHECK(code_of([&] { lipschitz_ratio(A, u, u, 2.0, 2.0); }) == ErrorCode::DegenerateInput);

  CHECK(drift_lipschitz_constant(A, 4.0, kInf) == 1.0);
  const auto sym = DriftOperator::from_config(g, "symbols: -i*k2/|k|; i*k1/|k|");
  const double est = estimate_lipschitz_constant(sym, 2.0, 2.0, 16);
  CHECK(est <= 1 + 1e-8);
  CHECK(est > 0.9);
}
