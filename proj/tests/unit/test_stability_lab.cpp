#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hrs/errors.hpp"
#include "hrs/stability_lab.hpp"
#include "oracles.hpp"

using hrs::Channel;
using hrs::Complex;
using hrs::Extension;
using hrs::SourcePair;
using hrs::SourceProfile;

namespace {

constexpr double kPi = std::numbers::pi;

SourcePair mean_only(const SourceProfile& f) { return {f, SourceProfile::zero()}; }

const SourceProfile kF1 = SourceProfile::bump(4, {0.1, 0.9}, 1.0);
const SourceProfile kF2 = SourceProfile::bump(4, {0.2, 0.8}, 0.8);

}  // namespace

TEST(HalfLineTrapezoid, IntegratesConstantsExactly) {
  const std::vector<double> c(40, 2.5);
  EXPECT_DOUBLE_EQ(hrs::half_line_trapezoid(c, 0.25), 2.5 * 10.0);
  EXPECT_EQ(hrs::half_line_trapezoid({}, 0.25), 0.0);
}

TEST(Epsilon12, ConstantIntegrandExample) {
  // 4 kappa^2 (|v0|^2 + |v1|^2) = 2 everywhere gives eps1 = sqrt(2K).
  hrs::DiscrepancyData d;
  for (double k : hrs::uniform_kappas(0.05, 8.0)) {
    hrs::DiscrepancyPoint p;
    p.kappa = k;
    p.v0 = Complex(0.0, 1.0 / (2.0 * k));
    p.v1 = 1.0 / (2.0 * k);
    d.push_back(p);
  }
  const auto e = hrs::epsilon12(d, 8.0);
  EXPECT_NEAR(e.eps1, 4.0, 1e-12);
  EXPECT_EQ(e.eps2, 0.0);
  EXPECT_THROW(hrs::epsilon12(d, 9.0), hrs::GridMismatchError);
}

TEST(Epsilon3, SingleModeExample) {
  hrs::DiscrepancyData d;
  for (double k : hrs::mode_kappas(3)) {
    hrs::DiscrepancyPoint p;
    p.kappa = k;
    d.push_back(p);
  }
  d[1].v0 = Complex(0.5 / (2.0 * kPi), 9.0);  // imaginary part ignored
  EXPECT_NEAR(hrs::epsilon3(d, 3), 1.0, 1e-15);
  try {
    hrs::epsilon3(d, 5);
    FAIL();
  } catch (const hrs::IncompleteDataError& e) {
    EXPECT_EQ(e.missing_modes(), (std::vector<int>{4, 5}));
  }
}

TEST(WavenumberGrids, Shapes) {
  EXPECT_EQ(hrs::uniform_kappas(0.05, 16.0).size(), 320u);
  EXPECT_DOUBLE_EQ(hrs::uniform_kappas(0.05, 16.0).back(), 16.0);
  EXPECT_THROW(hrs::uniform_kappas(0.3, 1.0), hrs::GridMismatchError);
  EXPECT_EQ(hrs::low_kappas(0.01).size(), 99u);
  EXPECT_DOUBLE_EQ(hrs::mode_kappas(2)[1], 2.0 * kPi);
}

TEST(Plancherel, MeanAndVarianceChannels) {
  hrs::QuadratureOptions opt;
  opt.grid_cells = 2048;
  const SourcePair a{kF1, SourceProfile::bump(4, {0.1, 0.9}, 0.6)};
  const SourcePair b{kF2, SourceProfile::bump(4, {0.2, 0.9}, 0.3)};
  const auto mean = hrs::plancherel_check(a, b, Channel::mean, 100.0, opt, 1e-3);
  EXPECT_TRUE(mean.holds) << mean.detail;
  const auto var = hrs::plancherel_check(a, b, Channel::variance, 100.0, opt, 1e-3);
  EXPECT_TRUE(var.holds) << var.detail;
  // The right-hand side against the independent quadrature.
  const oracle::Bump o1{0.1, 0.9, 4, 1.0}, o2{0.2, 0.8, 4, 0.8};
  const double d2 = oracle::integrate([&](double x) { return std::pow(o1(x) - o2(x), 2); }, 0.0,
                                      1.0, 200, 20);
  EXPECT_NEAR(mean.rhs, d2, 1e-9 * d2);
}

TEST(SineParseval, CorrectedIdentity) {
  const auto r = hrs::sine_parseval_check(kF1, kF2, 200, std::size_t{1} << 13, 1e-4);
  EXPECT_TRUE(r.holds) << r.detail;
  // Without the factor 2 the sum sits at half the norm.
  EXPECT_NEAR(0.5 * r.lhs / r.rhs, 0.5, 1e-4);
}

TEST(SineParseval, EnergyEqualsOracleCoefficients) {
  const oracle::Bump o1{0.1, 0.9, 4, 1.0}, o2{0.2, 0.8, 4, 0.8};
  double want = 0.0;
  for (int j = 1; j <= 30; ++j) {
    want += std::pow(o1.sine_coefficient(j) - o2.sine_coefficient(j), 2);
  }
  EXPECT_NEAR(hrs::sine_mode_energy(kF1, kF2, 30), want, 1e-10 * want);
}

TEST(TailBound, HoldsAndDecays) {
  const auto a = SourceProfile::bump(6, {0.1, 0.9});
  const auto b = SourceProfile::bump(6, {0.2, 0.7}, 0.7);
  hrs::QuadratureOptions opt;
  opt.grid_cells = 2048;
  const auto r5 = hrs::tail_bound_check(a, b, 5.0, 2, 200.0, Channel::mean, opt);
  EXPECT_TRUE(r5.holds) << r5.lhs << " vs " << r5.rhs;
  const auto r10 = hrs::tail_bound_check(a, b, 10.0, 2, 200.0, Channel::mean, opt);
  EXPECT_TRUE(r10.holds);
  // The bound itself scales as s^{-3}.
  EXPECT_NEAR(r5.rhs / r10.rhs, 8.0, 1e-12);
  EXPECT_GT(r5.lhs, r10.lhs);
  const auto rv = hrs::tail_bound_check(a, b, 5.0, 2, 50.0, Channel::variance, opt);
  EXPECT_TRUE(rv.holds) << rv.lhs << " vs " << rv.rhs;
}

TEST(TailBound, RejectsExcessOrder) {
  const auto rough = SourceProfile::bump(1);
  EXPECT_THROW(hrs::tail_bound_check(rough, SourceProfile::zero(), 5.0, 2, 50.0),
               hrs::SmoothnessError);
  EXPECT_THROW(hrs::tail_bound_check(kF1, kF2, 5.0, 2, 20.0), hrs::DomainError);
  EXPECT_THROW(hrs::sine_tail_check(kF1, kF2, 10, 2, 50), hrs::DomainError);
}

TEST(SineTail, HoldsAndDecays) {
  const auto a = SourceProfile::bump(6, {0.1, 0.9});
  const auto b = SourceProfile::bump(6, {0.2, 0.7}, 0.7);
  const auto t10 = hrs::sine_tail_check(a, b, 10, 2, 200, std::size_t{1} << 12);
  const auto t20 = hrs::sine_tail_check(a, b, 20, 2, 400, std::size_t{1} << 12);
  EXPECT_TRUE(t10.holds) << t10.lhs << " vs " << t10.rhs;
  EXPECT_TRUE(t20.holds) << t20.lhs << " vs " << t20.rhs;
  EXPECT_NEAR(t10.rhs / t20.rhs, 8.0, 1e-12);
  EXPECT_GT(t10.lhs, t20.lhs);
}

TEST(EntireExtension, VanishesForIdenticalSources) {
  const SourcePair a{kF1, kF2};
  for (auto which : {Extension::I1, Extension::I2}) {
    EXPECT_EQ(hrs::entire_extension_eval(a, a, {3.0, 1.0}, which), Complex(0.0, 0.0));
  }
}

TEST(EntireExtension, RealAxisMatchesEpsilonIntegral) {
  const SourcePair a{kF1, SourceProfile::bump(4, {0.1, 0.9}, 0.6)};
  const SourcePair b{kF2, SourceProfile::bump(4, {0.2, 0.9}, 0.3)};
  hrs::ExtensionOptions opt;
  opt.grid_cells = 256;
  opt.t_intervals = 400;
  for (auto which : {Extension::I1, Extension::I2}) {
    const auto r = hrs::extension_real_axis_check(a, b, 3.0, which, opt);
    EXPECT_TRUE(r.holds) << r.name << " " << r.lhs << " vs " << r.rhs;
  }
}

TEST(EntireExtension, ConjugateSymmetryForRealSources) {
  const SourcePair a = mean_only(kF1), b = mean_only(kF2);
  hrs::ExtensionOptions opt;
  opt.grid_cells = 256;
  opt.t_intervals = 200;
  const auto up = hrs::entire_extension_eval(a, b, {4.0, 2.0}, Extension::I1, opt);
  const auto down = hrs::entire_extension_eval(a, b, {4.0, -2.0}, Extension::I1, opt);
  EXPECT_NEAR(std::abs(up - std::conj(down)), 0.0, 1e-12 * std::abs(up));
}

TEST(EntireExtension, SectorBoundHolds) {
  const SourcePair a{kF1, SourceProfile::bump(4, {0.1, 0.9}, 0.6)};
  const SourcePair b{kF2, SourceProfile::bump(4, {0.2, 0.9}, 0.3)};
  hrs::ExtensionOptions opt;
  opt.grid_cells = 256;
  opt.t_intervals = 400;
  for (auto which : {Extension::I1, Extension::I2}) {
    const auto reports = hrs::entire_bound_check(a, b, which, 10, 20.0, 3, opt);
    ASSERT_EQ(reports.size(), 10u);
    for (const auto& r : reports) EXPECT_TRUE(r.holds) << r.name << " " << r.detail;
  }
}

TEST(Isometry, MatchesQuadrature) {
  hrs::IsometryOptions opt;
  opt.samples = 20000;
  opt.grid_cells = 256;
  opt.master_seed = 11;
  const auto r = hrs::isometry_check(SourceProfile::bump(4), opt);
  EXPECT_TRUE(r.report.holds) << r.report.detail;
  const auto g = oracle::Bump{0.1, 0.9, 4, 1.0}.squared();
  EXPECT_NEAR(std::abs(r.quadrature - g.transform(2.0 * kPi)), 0.0, 1e-8);
}

TEST(Sweep, ExactBandSweepIsMonotone) {
  hrs::SweepConfig c;
  c.truth = {kF1, SourceProfile::bump(4, {0.1, 0.9}, 0.5)};
  c.values = {4, 8, 16, 32};
  c.grid_cells = 512;
  c.dkappa = 0.1;
  c.low_spacing = 0.1;
  c.modes = 4;
  c.points = 401;
  const auto rows = hrs::sweep(c);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].l2_error, rows[i - 1].l2_error);
    EXPECT_EQ(rows[i].parameter, "K");
  }
  for (const auto& r : rows) {
    EXPECT_EQ(r.eps.eps1, 0.0);
    EXPECT_EQ(r.eps.eps3, 0.0);
    EXPECT_TRUE(r.eps4_ok);
    EXPECT_EQ(r.wall_ms, 0.0);
  }
}

TEST(Sweep, EpsilonsGrowWithDataAgainstAnotherReference) {
  hrs::SweepConfig c;
  c.truth = mean_only(kF1);
  c.reference = mean_only(kF2);
  c.parameter = hrs::SweepParameter::modes;
  c.target = hrs::ReconstructionTarget::onesided;
  c.values = {2, 4, 8, 16};
  c.grid_cells = 512;
  c.band = 2.0;
  c.dkappa = 0.1;
  c.low_spacing = 0.1;
  c.points = 401;
  const auto rows = hrs::sweep(c);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].l2_error, rows[i - 1].l2_error);
    EXPECT_GE(rows[i].eps.eps3, rows[i - 1].eps.eps3);
    EXPECT_EQ(rows[i].eps.eps1, rows[0].eps.eps1);
  }
  EXPECT_GT(rows[0].eps.eps4, 0.0);
}

TEST(Sweep, RejectsInvalidValues) {
  hrs::SweepConfig c;
  c.truth = mean_only(kF1);
  c.parameter = hrs::SweepParameter::samples;
  c.values = {100};
  EXPECT_THROW(hrs::sweep(c), hrs::DomainError);
  c.parameter = hrs::SweepParameter::modes;
  c.values = {2.5};
  EXPECT_THROW(hrs::sweep(c), hrs::DomainError);
  c.values = {};
  EXPECT_THROW(hrs::sweep(c), hrs::DomainError);
}
