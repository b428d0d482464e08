#include <doctest.h>

#include <bit>
#include <cstring>

#include "fracdrift/error.hpp"
#include "fracdrift/field_io.hpp"
#include "fracdrift/spectral.hpp"
#include "oracles.hpp"

using namespace fracdrift;
using oracle::kPi;

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

double rel_sup(const RealField& a, const RealField& b) {
  return oracle::max_abs_diff(a, b) / std::max(b.max_abs(), 1e-300);
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const Grid g(2, 16, 3.0);
  CHECK(g.size() == 256);
  CHECK(g.cell_volume() == doctest::Approx(std::pow(3.0 / 16, 2)).epsilon(1e-15));
  CHECK(g.signed_index(7) == 7);
  CHECK(g.signed_index(8) == -8);
  CHECK(g.wavenumber(3) == doctest::Approx(3 * 2 * kPi / 3.0));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.negate(g.negate(i)) == i);

  CHECK(code_of([] { Grid(4, 16); }) == ErrorCode::Dimension);
  CHECK(code_of([] { Grid(2, 12); }) == ErrorCode::Parameter);
  CHECK(code_of([] { Grid(2, 4); }) == ErrorCode::Parameter);
  CHECK(code_of([] { Grid(2, 16, 0.0); }) == ErrorCode::Parameter);
}

TEST_CASE("forward transform of simple fields") {
  SUBCASE("constant lands on the mean mode") {
    const Grid g(2, 16);
    const auto F = forward_transform(RealField::constant(g, 2.5));
    CHECK(F[0].real() == doctest::Approx(2.5).epsilon(1e-15));
    for (std::size_t i = 1; i < F.size(); ++i) CHECK(std::abs(F[i]) < 1e-15);
  }
  SUBCASE("cosine gives a conjugate pair of modulus 1/2") {
    const Grid g(1, 32, 5.0);
    const auto f = RealField::from_function(g, [](auto x) { return std::cos(2 * kPi * x[0] / 5.0); });
    const auto F = forward_transform(f);
    CHECK(std::abs(F[1]) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(F[31]) == doctest::Approx(0.5).epsilon(1e-14));
    double rest = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i)
      if (i != 1 && i != 31) rest = std::max(rest, std::abs(F[i]));
    CHECK(rest < 1e-15);
  }
  SUBCASE("non-finite samples are refused") {
    const Grid g(1, 8);
    RealField f(g);
    f[3] = std::nan("");
    CHECK(code_of([&] { forward_transform(f); }) == ErrorCode::InvalidInput);
  }
}

TEST_CASE("forward transform agrees with a direct DFT") {
  oracle::Rng rng(11);
  for (auto [n, N] : {std::pair{1, 16}, {2, 8}, {2, 16}, {3, 8}}) {
    CAPTURE(n);
    CAPTURE(N);
    const Grid g(n, N);
    const auto f = oracle::noise_field(g, rng);
    const auto F = forward_transform(f);
    const auto D = oracle::direct_dft(f);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      err = std::max(err, std::abs(F[i] - D[i]));
      scale = std::max(scale, std::abs(D[i]));
    }
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("roundtrip, Parseval and Hermitian symmetry") {
  oracle::Rng rng(5);
  for (int n : {1, 2, 3}) {
    for (int N : {32, 64, 128}) {
      CAPTURE(n);
      CAPTURE(N);
      const Grid g(n, N, 1.0 + rng.uniform(0.0, 6.0));
      const auto f = oracle::noise_field(g, rng);
      const auto F = forward_transform(f);
      CHECK(F.hermitian_defect() == 0.0);
      CHECK(rel_sup(inverse_transform(F), f) <= 1e-12);
      const double phys = oracle::l2(f) * oracle::l2(f);
      const double spec = g.volume() * F.energy();
      CHECK(std::abs(phys - spec) <= 1e-10 * phys);
    }
  }
}

TEST_CASE("inverse transform") {
  const Grid g(2, 16);
  CHECK(inverse_transform(SpectralField(g)).max_abs() == 0.0);

  SpectralField F(g);
  const std::size_t k = g.ravel({2, 1, 0});
  F[k] = 0.5;
  F[g.negate(k)] = 0.5;
  const auto expected = RealField::from_function(g, [](auto x) { return std::cos(2 * x[0] + x[1]); });
  CHECK(oracle::max_abs_diff(inverse_transform(F), expected) < 1e-14);

  F[k] = Complex(0.5, 0.1);
  CHECK(code_of([&] { inverse_transform(F); }) == ErrorCode::Asymmetry);
}

TEST_CASE("multipliers") {
  const Grid g(1, 32);
  const auto c2 = RealField::from_function(g, [](auto x) { return std::cos(2 * x[0]); });
  const auto C2 = forward_transform(c2);

  SUBCASE("unit multiplier is the identity") {
    const auto out = apply_multiplier(C2, [](const Wavevector&) { return Complex(1.0); }, 1.0);
    CHECK(oracle::max_abs_diff(inverse_transform(out), c2) < 1e-15);
  }
  SUBCASE("|k| scales cos(2x) by 2") {
    const auto out = apply_multiplier(C2, [](const Wavevector& w) { return Complex(w.norm()); }, 0.0);
    CHECK(oracle::max_abs_diff(inverse_transform(out), 2.0 * c2) < 1e-14);
  }
  SUBCASE("singular multiplier without a k=0 value") {
    CHECK(code_of([&] {
            apply_multiplier(C2, [](const Wavevector& w) { return Complex(1.0 / (w.k[0] - 1.0)); }, 0.0);
          }) == ErrorCode::MultiplierDomain);
  }
}

TEST_CASE("Riesz transforms square-sum to minus the identity on mean-zero fields") {
  oracle::Rng rng(3);
  const Grid g(2, 32);
  const auto f = mean_zero(oracle::random_trig_sum(2, 10, 12, rng, 0.7).sample(g));
  const auto F = forward_transform(f);
  SpectralField acc(g);
  for (int j = 0; j < 2; ++j) {
    const Multiplier r = [j](const Wavevector& w) { return Complex(0.0, w.k[j] / w.norm()); };
    acc += apply_multiplier(apply_multiplier(F, r, 0.0), r, 0.0);
  }
  CHECK(oracle::max_abs_diff(inverse_transform(acc), -1.0 * f) < 1e-13);
}

TEST_CASE("Hermitian-compatible multipliers keep the spectrum Hermitian") {
  oracle::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g(2, 16);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    const Multiplier m = [a, b](const Wavevector& w) { return Complex(a * w.norm(), b * w.k[0]); };
    const auto out = apply_multiplier(forward_transform(oracle::noise_field(g, rng)), m, 0.0);
    CHECK(out.hermitian_defect() <= 1e-14 * out.max_abs());
  }
}

TEST_CASE("pointwise product") {
  const Grid g(1, 32);
  const auto c1 = RealField::from_function(g, [](auto x) { return std::cos(x[0]); });

  CHECK(oracle::max_abs_diff(pointwise_product(c1, RealField::constant(g, 1.0)), c1) < 1e-15);

  const auto sq = pointwise_product(c1, c1);
  const auto expected = RealField::from_function(g, [](auto x) { return 0.5 + 0.5 * std::cos(2 * x[0]); });
  CHECK(oracle::max_abs_diff(sq, expected) < 1e-15);

  CHECK(code_of([&] { pointwise_product(c1, RealField(Grid(1, 16))); }) == ErrorCode::Shape);
}

TEST_CASE("dealiased product equals the brute-force mode convolution") {
  oracle::Rng rng(21);
  for (int n : {1, 2}) {
    const int N = n == 1 ? 64 : 32;
    const Grid g(n, N);
    // Factors in the band |s| <= N/6 keep the product inside the 2/3 band.
    const auto a = oracle::random_trig_sum(n, N / 6, 6, rng, 0.3);
    const auto b = oracle::random_trig_sum(n, N / 6, 6, rng, -0.2);
    const auto prod = pointwise_product(a.sample(g), b.sample(g));
    const auto ref = oracle::synthesize(g, oracle::convolve_modes(oracle::modes_of(a), oracle::modes_of(b)));
    CHECK(oracle::max_abs_diff(prod, ref) <= 1e-12 * ref.max_abs());
  }
}

TEST_CASE("dealias projection") {
  const Grid g(2, 32);
  oracle::Rng rng(4);
  const auto band = oracle::random_trig_sum(2, 10, 8, rng).sample(g);
  const auto B = forward_transform(band);
  CHECK(oracle::max_abs_diff(inverse_transform(dealias(B)), band) < 1e-14);

  SpectralField nyq(g);
  nyq[g.ravel({16, 0, 0})] = 1.0;
  CHECK(inverse_transform(dealias(nyq)).max_abs() == 0.0);

  for (int t = 0; t < 10; ++t) {
    const auto F = forward_transform(oracle::noise_field(g, rng));
    const auto D = dealias(F);
    CHECK(D.energy() <= F.energy());
    const auto DD = dealias(D);
    for (std::size_t i = 0; i < D.size(); ++i) CHECK(DD[i] == D[i]);
  }
}

TEST_CASE("band-limited random fields are resolution independent") {
  const Grid coarse(2, 32), fine(2, 64);
  const auto a = random_band_limited_field(coarse, 9, 8);
  const auto b = random_band_limited_field(fine, 9, 8);
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto idx = coarse.unravel(i);
    for (int j = 0; j < 2; ++j) idx[j] *= 2;
    err = std::max(err, std::abs(a[i] - b[fine.ravel(idx)]));
  }
  CHECK(err < 1e-13 * a.max_abs());
  CHECK(std::abs(a.mean()) < 1e-15);
}

TEST_CASE("FRQS dumps") {
  oracle::Rng rng(77);
  const Grid g(3, 8, 1.25);
  const auto f = oracle::noise_field(g, rng);
  const std::string bytes = encode_frqs(f);
  REQUIRE(bytes.size() == 4 + 4 + 4 + 4 + 8 + 8 * g.size());
  CHECK(bytes.substr(0, 4) == "FRQS");
  auto u32 = [&](std::size_t at) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + 3])) << 24;
  };
  CHECK(u32(4) == kFrqsVersion);
  CHECK(u32(8) == 3);
  CHECK(u32(12) == 8);

  const RealField back = decode_frqs(bytes);
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(std::bit_cast<std::uint64_t>(back[i]) == std::bit_cast<std::uint64_t>(f[i]));
  CHECK(encode_frqs(back) == bytes);

  std::string bad = bytes;
  bad[0] = 'X';
  CHECK(code_of([&] { decode_frqs(bad); }) == ErrorCode::Io);
  CHECK(code_of([&] { decode_frqs(bytes.substr(0, bytes.size() - 3)); }) == ErrorCode::Io);
}
