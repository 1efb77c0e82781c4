#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hrs/errors.hpp"
#include "hrs/source_models.hpp"
#include "oracles.hpp"

using hrs::Complex;
using hrs::SourceProfile;

namespace {

SourceProfile sine_on_unit_interval(std::size_t nodes) {
  std::vector<double> x(nodes);
  std::vector<Complex> v(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    x[i] = static_cast<double>(i) / static_cast<double>(nodes - 1);
    v[i] = std::sin(oracle::kPi * x[i]);
  }
  return SourceProfile::tabulated(x, v);
}

}  // namespace

TEST(SourceProfile, BumpVanishesOutsideSupport) {
  const auto f = SourceProfile::bump(4);
  EXPECT_EQ(f(0.05), Complex(0.0, 0.0));
  EXPECT_EQ(f(0.0), Complex(0.0, 0.0));
  EXPECT_EQ(f(0.95), Complex(0.0, 0.0));
  EXPECT_EQ(f(1.0), Complex(0.0, 0.0));
}

TEST(SourceProfile, BumpPeakMatchesClosedForm) {
  const auto f = SourceProfile::bump(4, {0.1, 0.9}, 2.5);
  const oracle::Bump ref{0.1, 0.9, 4, 2.5};
  const double closed = ref.c() * std::pow(0.4 * 0.4, 4);
  EXPECT_NEAR(f(0.5).real(), closed, 1e-14);
  EXPECT_NEAR(closed, 2.5, 1e-14);
}

TEST(SourceProfile, BumpAgreesWithOracleEverywhere) {
  const auto f = SourceProfile::bump(6, {0.2, 0.7}, 0.3);
  const oracle::Bump ref{0.2, 0.7, 6, 0.3};
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    EXPECT_NEAR(f(x).real(), ref(x), 1e-15) << "x=" << x;
    EXPECT_EQ(f(x).imag(), 0.0);
  }
}

TEST(SourceProfile, SupportInvariance) {
  const std::vector<SourceProfile> profiles = {
      SourceProfile::bump(4, {0.3, 0.6}),
      SourceProfile::modulated_bump(3, 25.0, 0.4, {0.3, 0.6}),
      SourceProfile::squared(SourceProfile::bump(2, {0.3, 0.6})),
      SourceProfile::bump(4, {0.3, 0.6}) - 2.0 * SourceProfile::bump(5, {0.35, 0.55}),
  };
  for (const auto& p : profiles) {
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      if (x >= 0.3 && x <= 0.6) continue;
      EXPECT_EQ(p(x), Complex(0.0, 0.0)) << "x=" << x;
    }
  }
}

TEST(SourceProfile, TabulatedReturnsStoredValuesAtNodes) {
  const std::vector<double> x{0.1, 0.25, 0.5, 0.8};
  const std::vector<Complex> v{{1.0, 0.0}, {-2.0, 0.5}, {0.125, 3.0}, {4.0, -1.0}};
  const auto f = SourceProfile::tabulated(x, v);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(f(x[i]), v[i]);
  EXPECT_EQ(f(0.375), 0.5 * (v[1] + v[2]));
  EXPECT_EQ(f(0.05), Complex(0.0, 0.0));
  EXPECT_FALSE(f.is_real());
}

TEST(SourceProfile, EvaluationOutsideUnitIntervalThrows) {
  const auto f = SourceProfile::bump(4);
  EXPECT_THROW(f(-0.01), hrs::DomainError);
  EXPECT_THROW(f(1.5), hrs::DomainError);
  EXPECT_THROW(SourceProfile::zero()(std::nan("")), hrs::DomainError);
}

TEST(SourceProfile, InvalidConstruction) {
  EXPECT_THROW(SourceProfile::bump(4, {0.0, 0.5}), hrs::DomainError);
  EXPECT_THROW(SourceProfile::bump(4, {0.6, 0.5}), hrs::DomainError);
  EXPECT_THROW(SourceProfile::bump(0), hrs::DomainError);
  EXPECT_THROW(SourceProfile::bump(3, {}, 1.0, 4), hrs::SmoothnessError);
  EXPECT_THROW(SourceProfile::tabulated({0.2, 0.1}, {1.0, 2.0}), hrs::DomainError);
  EXPECT_THROW(SourceProfile::tabulated({0.1, 0.2}, {1.0, 2.0}, 2), hrs::SmoothnessError);
}

TEST(SourceProfile, LinearCombinationIsPointwise) {
  const auto f = SourceProfile::bump(4);
  const auto g = SourceProfile::modulated_bump(4, 12.0, 0.3, {0.2, 0.85}, 0.7);
  const auto h = Complex(2.0, -1.0) * f - g;
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    const Complex expect = Complex(2.0, -1.0) * f(x) - g(x);
    EXPECT_NEAR(std::abs(h(x) - expect), 0.0, 1e-15);
  }
  EXPECT_FALSE(h.is_real());
  EXPECT_EQ(h.smoothness(), 4);
}

TEST(SourceProfile, ComplexFromPartsAndParity) {
  const auto re = SourceProfile::bump(4);
  const auto im = SourceProfile::bump(2, {0.3, 0.6});
  const auto z = SourceProfile::complex_from_parts(re, im);
  EXPECT_EQ(z(0.45), Complex(re(0.45).real(), im(0.45).real()));
  const double xs[] = {0.5};
  EXPECT_THROW(z.sample_real(xs), hrs::ParityError);
  EXPECT_THROW(SourceProfile::complex_from_parts(z, re), hrs::ParityError);
}

TEST(SourceProfile, SquaredProfile) {
  const auto s = SourceProfile::bump(3, {0.2, 0.9}, 0.6);
  const auto g = SourceProfile::squared(s);
  for (double x : {0.1, 0.3, 0.55, 0.77}) EXPECT_EQ(g(x), s(x) * s(x));
}

TEST(SobolevNorm, ZeroProfileIsZeroForAnyOrder) {
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(hrs::sobolev_norm_estimate(SourceProfile::zero(), n), 0.0);
}

TEST(SobolevNorm, SineOnFullInterval) {
  EXPECT_NEAR(hrs::l2_norm(sine_on_unit_interval(4097)), std::sqrt(0.5), 1e-6);
}

TEST(SobolevNorm, BumpSecondOrderMatchesExactPolynomialIntegral) {
  const auto f = SourceProfile::bump(4);
  const oracle::Bump ref{0.1, 0.9, 4, 1.0};
  const double exact = std::sqrt(ref.sobolev_norm2(2));
  EXPECT_NEAR(hrs::sobolev_norm_estimate(f, 2), exact, 1e-3 * exact);
  // The fourth derivative jumps at the support ends; the stencil smears the jump.
  EXPECT_NEAR(*f.sobolev_bound(), std::sqrt(ref.sobolev_norm2(4)),
              2e-2 * std::sqrt(ref.sobolev_norm2(4)));
}

TEST(SobolevNorm, OrderAboveSmoothnessThrows) {
  EXPECT_THROW(hrs::sobolev_norm_estimate(SourceProfile::bump(2), 3), hrs::SmoothnessError);
  EXPECT_THROW(hrs::sobolev_norm_estimate(SourceProfile::bump(4, {}, 1.0, 1), 2),
               hrs::SmoothnessError);
}

TEST(SourcePair, SimulationRequiresRealNonnegativeSigma) {
  hrs::SourcePair ok{SourceProfile::bump(4), SourceProfile::bump(4)};
  EXPECT_NO_THROW(ok.require_simulatable());
  hrs::SourcePair negative{SourceProfile::zero(), -1.0 * SourceProfile::bump(4)};
  EXPECT_THROW(negative.require_simulatable(), hrs::DomainError);
  hrs::SourcePair complex{SourceProfile::zero(),
                          SourceProfile::complex_from_parts(SourceProfile::bump(4),
                                                            SourceProfile::bump(2))};
  EXPECT_THROW(complex.require_simulatable(), hrs::ParityError);
}
