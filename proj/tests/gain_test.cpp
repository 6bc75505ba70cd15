#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "micromaser/gain.hpp"

using namespace micromaser;

namespace {

using CMatrix3 = Eigen::Matrix3cd;

// exp(-i H t) by scaling and squaring of a Taylor series; shares nothing
// with the eigendecomposition route.
CMatrix3 propagator_oracle(const Matrix3& h, double t) {
  const CMatrix3 a = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const CMatrix3 scaled = a / std::ldexp(1.0, squarings);
  CMatrix3 term = CMatrix3::Identity();
  CMatrix3 sum = CMatrix3::Identity();
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

EmissionProbabilities oracle_kernel(std::size_t k, double gtau, double delta) {
  const auto u = propagator_oracle(
      build_sector(SectorIndex(static_cast<long>(k) + 2), delta).entries, gtau);
  return {std::norm(u(0, 0)), std::norm(u(1, 0)), std::norm(u(2, 0))};
}

}  // namespace

TEST(KernelUnitary, IdentityAtZeroTime) {
  for (std::size_t k : {0u, 1u, 7u, 150u}) {
    const auto p = kernel_unitary(k, 0.0, 0.0);
    EXPECT_NEAR(p.p0, 1.0, 1e-15);
    EXPECT_NEAR(p.p1, 0.0, 1e-15);
    EXPECT_NEAR(p.p2, 0.0, 1e-15);
  }
}

// U11 = 2/3 + cos(sqrt6 t)/3, U31 = -sqrt2/3 + sqrt2 cos(sqrt6 t)/3 at t = pi/sqrt6.
TEST(KernelUnitary, AnalyticPointInVacuum) {
  const double t = std::numbers::pi / std::sqrt(6.0);
  const auto o = oracle_kernel(0, t, 0.0);
  EXPECT_NEAR(o.p0, 1.0 / 9.0, 1e-13);
  EXPECT_NEAR(o.p1, 0.0, 1e-13);
  EXPECT_NEAR(o.p2, 8.0 / 9.0, 1e-13);

  const auto p = kernel_unitary(0, t, 0.0);
  EXPECT_NEAR(p.p0, 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(p.p1, 0.0, 1e-12);
  EXPECT_NEAR(p.p2, 8.0 / 9.0, 1e-12);
}

TEST(KernelUnitary, AgreesWithMatrixExponential) {
  for (double delta : {0.0, 1.0, 100.0, 300.0}) {
    for (double gtau : {0.1, 1.0, 2.5, 7.0}) {
      for (std::size_t k : {0u, 1u, 2u, 10u, 60u}) {
        const auto o = oracle_kernel(k, gtau, delta);
        const auto p = kernel_unitary(k, gtau, delta);
        EXPECT_NEAR(p.p0, o.p0, 1e-9) << k << ' ' << gtau << ' ' << delta;
        EXPECT_NEAR(p.p1, o.p1, 1e-9);
        EXPECT_NEAR(p.p2, o.p2, 1e-9);
      }
    }
  }
}

TEST(KernelUnitary, LargeDetuningSuppressesIntermediateLevel) {
  const auto o = oracle_kernel(0, 1.0, 300.0);
  EXPECT_LT(o.p1, 1e-3);
  EXPECT_LT(kernel_unitary(0, 1.0, 300.0).p1, 1e-3);
}

TEST(KernelClosedForm, ZeroTimeIsIdentity) {
  const auto p = kernel_closed_form(0, 0.0);
  EXPECT_NEAR(p.p0, 1.0, 1e-15);
  EXPECT_NEAR(p.p1, 0.0, 1e-15);
  EXPECT_NEAR(p.p2, 0.0, 1e-15);
  for (std::size_t k = 0; k <= 100; ++k) {
    EXPECT_NEAR(kernel_closed_form(k, 0.0).p0, 1.0, 1e-14) << k;
  }
}

TEST(KernelClosedForm, AnalyticPoint) {
  const auto p = kernel_closed_form(0, std::numbers::pi / std::sqrt(6.0));
  EXPECT_NEAR(p.p0, 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(p.p1, 0.0, 1e-12);
  EXPECT_NEAR(p.p2, 8.0 / 9.0, 1e-12);
}

// Sector 3 has x2^2 = x3^2 = 1/5 and lambda_+ - lambda_- = 2 sqrt(10).
TEST(KernelClosedForm, SinglePhotonDepositFromOnePhoton) {
  for (double gtau : {0.3, 0.7, 1.9, 12.0}) {
    const double expected = 0.2 * (1.0 - std::cos(2.0 * std::sqrt(10.0) * gtau));
    EXPECT_NEAR(oracle_kernel(1, gtau, 0.0).p1, expected, 1e-12);
    EXPECT_NEAR(kernel_closed_form(1, gtau).p1, expected, 1e-13);
  }
}

TEST(KernelClosedForm, MatchesUnitaryRoute) {
  double worst = 0.0;
  for (double gtau : {0.1, 0.5, 1.0, 2.5, 4.0, 40.0}) {
    for (std::size_t k = 0; k <= 100; ++k) {
      const auto u = kernel_unitary(k, gtau, 0.0);
      const auto c = kernel_closed_form(k, gtau);
      worst = std::max({worst, std::abs(u.p0 - c.p0), std::abs(u.p1 - c.p1),
                        std::abs(u.p2 - c.p2)});
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(KernelOneAtom, TransitProbabilities) {
  const double half_pi = std::numbers::pi / 2.0;
  EXPECT_NEAR(kernel_one_atom(0, half_pi).p1, 1.0, 1e-15);
  EXPECT_NEAR(kernel_one_atom(3, half_pi).p1, 0.0, 1e-15);
  EXPECT_NEAR(kernel_one_atom(0, std::numbers::pi / 4.0).p1, 0.5, 1e-15);
  const auto p = kernel_one_atom(5, 0.37);
  EXPECT_DOUBLE_EQ(p.p0 + p.p1, 1.0);
  EXPECT_EQ(p.p2, 0.0);
}

TEST(BuildKernel, TabulatesPerVariant) {
  const auto idle = build_kernel({Variant::dicke_pair, 100.0, 0.1, 0.0, 0.0}, 40);
  EXPECT_EQ(idle.n_max(), 40u);
  for (double x : idle.p0) EXPECT_NEAR(x, 1.0, 1e-14);

  const auto one = build_kernel({Variant::one_atom, 200.0, 0.1, 1.3, 0.0}, 40);
  for (double x : one.p2) EXPECT_EQ(x, 0.0);

  const auto detuned =
      build_kernel({Variant::two_photon_detuned, 100.0, 0.1, 2.0, 300.0}, 50);
  EXPECT_LT(*std::max_element(detuned.p1.begin(), detuned.p1.end()), 1e-2);

  EXPECT_THROW(build_kernel({Variant::dicke_pair, 1.0, 0.0, 1.0, 0.0}, 0), ConfigError);
  EXPECT_THROW(build_kernel({Variant::dicke_pair, 1.0, 0.0, 1.0, 5.0}, 10), ConfigError);
}

TEST(KernelProperties, ConservationAcrossGrid) {
  for (double delta : {0.0, 100.0, 150.0, 300.0}) {
    for (double gtau : {0.0, 0.1, 0.5, 1.0, 2.5, 4.0, 10.0, 40.0}) {
      for (std::size_t k = 0; k <= 200; ++k) {
        const auto p = kernel_unitary(k, gtau, delta);
        ASSERT_NEAR(p.p0 + p.p1 + p.p2, 1.0, 1e-12);
        ASSERT_GE(p.p0, -1e-15);
        ASSERT_GE(p.p1, -1e-15);
        ASSERT_GE(p.p2, -1e-15);
        ASSERT_LE(std::max({p.p0, p.p1, p.p2}), 1.0 + 1e-12);
      }
    }
  }
}

TEST(KernelProperties, RandomizedBoundsAndConservation) {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> kd(0, 2000);
  std::uniform_real_distribution<double> td(0.0, 60.0), dd(0.0, 500.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = kd(rng);
    const double gtau = td(rng), delta = dd(rng);
    const auto p = kernel_unitary(k, gtau, delta);
    ASSERT_NEAR(p.p0 + p.p1 + p.p2, 1.0, 1e-12) << k << ' ' << gtau << ' ' << delta;
    const auto q = kernel_one_atom(k, gtau);
    ASSERT_NEAR(q.p0 + q.p1, 1.0, 1e-15);
    ASSERT_GE(q.p1, 0.0);
  }
}

// The envelope of the intermediate-level population over interaction time
// shrinks with detuning. At a single fixed time the detuned Rabi
// oscillation makes the comparison non-monotone.
TEST(KernelProperties, DetuningSuppressesIntermediateEnvelope) {
  for (std::size_t k = 0; k <= 10; ++k) {
    double prev = 2.0;
    for (double delta : {0.0, 100.0, 300.0}) {
      double envelope = 0.0;
      for (int i = 0; i <= 4000; ++i) {
        envelope = std::max(envelope, kernel_unitary(k, i * 1e-3, delta).p1);
      }
      EXPECT_LE(envelope, prev) << "k=" << k << " delta=" << delta;
      prev = envelope;
    }
  }
}

TEST(KernelProperties, PairDiffersFromTwoSingleAtoms) {
  double largest = 0.0;
  for (std::size_t k = 0; k <= 30; ++k) {
    for (double gtau : {0.3, 0.8, 1.5, 2.5}) {
      const auto pair = kernel_unitary(k, gtau, 0.0);
      const double single = kernel_one_atom(k, gtau).p1;
      largest = std::max(largest, std::abs(pair.p1 + 2.0 * pair.p2 - 2.0 * single));
    }
  }
  EXPECT_GT(largest, 0.1);
}
