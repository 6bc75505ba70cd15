#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "micromaser/generator.hpp"

using namespace micromaser;

namespace {

std::vector<ModelSpec> spec_grid() {
  std::vector<ModelSpec> out;
  for (double gtau : {0.0, 0.3, 1.7, 4.0}) {
    for (double nbar : {0.0, 0.1, 2.0}) {
      out.push_back({Variant::dicke_pair, 100.0, nbar, gtau, 0.0});
      out.push_back({Variant::one_atom, 200.0, nbar, gtau, 0.0});
      out.push_back({Variant::two_photon_detuned, 100.0, nbar, gtau, 150.0});
    }
  }
  return out;
}

}  // namespace

TEST(LossRates, VacuumIsDarkWithoutThermalPhotons) {
  const auto g = loss_rates(0.0, 10);
  std::vector<double> p(11, 0.0);
  p[0] = 1.0;
  for (double x : g.apply(p)) EXPECT_EQ(x, 0.0);
}

TEST(LossRates, SinglePhotonDecays) {
  const auto g = loss_rates(0.0, 10);
  std::vector<double> p(11, 0.0);
  p[1] = 1.0;
  const auto dp = g.apply(p);
  EXPECT_DOUBLE_EQ(dp[1], -1.0);
  EXPECT_DOUBLE_EQ(dp[0], 1.0);
}

TEST(LossRates, BoseDetailedBalance) {
  const auto g = loss_rates(0.1, 10);
  const double up = g.at(1, 0), down = g.at(0, 1);
  EXPECT_DOUBLE_EQ(up, 0.1);
  EXPECT_DOUBLE_EQ(down, 1.1);
  EXPECT_NEAR(up / down, 1.0 / 11.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.diag(3), -(3.0 + 0.1 + 2.0 * 3.0 * 0.1));
}

TEST(GainRates, VanishWithoutInteraction) {
  const ModelSpec spec{Variant::dicke_pair, 100.0, 0.0, 0.0, 0.0};
  const auto g = gain_rates(build_kernel(spec, 30), spec.pump);
  for (std::size_t j = 0; j <= 30; ++j) {
    EXPECT_NEAR(g.diag(j), 0.0, 1e-12);
    EXPECT_NEAR(g.lower1(j), 0.0, 1e-12);
    EXPECT_NEAR(g.lower2(j), 0.0, 1e-12);
  }
}

TEST(GainRates, OneAtomHasNoDoubleJumps) {
  const ModelSpec spec{Variant::one_atom, 200.0, 0.0, 1.1, 0.0};
  const auto g = gain_rates(build_kernel(spec, 30), spec.pump);
  for (std::size_t j = 0; j <= 30; ++j) EXPECT_EQ(g.lower2(j), 0.0);
}

TEST(GainRates, InteriorColumnsConserve) {
  const ModelSpec spec{Variant::dicke_pair, 100.0, 0.0, 2.2, 0.0};
  const auto k = build_kernel(spec, 40);
  const auto g = gain_rates(k, spec.pump);
  for (std::size_t j = 0; j + 2 <= 40; ++j) {
    EXPECT_NEAR(g.column_sum(j), 0.0, 1e-12 * spec.pump);
  }
}

TEST(Assemble, Fig3aSpecAtLargeTruncation) {
  const ModelSpec spec{Variant::dicke_pair, 100.0, 0.1, 25.0 / std::sqrt(100.0), 0.0};
  const auto a = assemble(spec, 512);
  EXPECT_EQ(a.size(), 513u);
}

TEST(Assemble, RejectsBadInput) {
  EXPECT_THROW(assemble({Variant::dicke_pair, 1.0, 0.1, 1.0, 0.0}, 3), ConfigError);
  EXPECT_THROW(assemble({Variant::dicke_pair, -1.0, 0.1, 1.0, 0.0}, 10), ConfigError);
  EXPECT_THROW(assemble({Variant::dicke_pair, 1.0, -0.1, 1.0, 0.0}, 10), ConfigError);
  EXPECT_THROW(assemble({Variant::one_atom, 1.0, 0.1, 1.0, 3.0}, 10), ConfigError);
}

TEST(AssembleProperties, ColumnSumsSignsAndBand) {
  const std::size_t n_max = 60;
  for (const auto& spec : spec_grid()) {
    const auto a = assemble(spec, n_max);
    const double scale = std::max(1.0, spec.pump);
    for (std::size_t j = 0; j <= n_max; ++j) {
      if (j + 2 <= n_max) {
        EXPECT_NEAR(a.column_sum(j), 0.0, 1e-12 * scale) << "col " << j;
      }
      // Truncated columns lose exactly the dropped rates.
      EXPECT_NEAR(a.column_sum(j) + a.dropped(j), 0.0, 1e-12 * scale * (1.0 + j));
      EXPECT_LE(a.diag(j), 0.0);
      EXPECT_GE(a.lower1(j), 0.0);
      EXPECT_GE(a.lower2(j), 0.0);
      EXPECT_GE(a.upper1(j), 0.0);
      for (std::size_t i = 0; i <= n_max; ++i) {
        if (i + 1 < j || i > j + 2) EXPECT_EQ(a.at(i, j), 0.0);
      }
    }
    if (spec.gtau > 0.0 && spec.variant != Variant::one_atom) {
      EXPECT_GT(a.dropped(n_max - 1), 0.0);
    }
  }
}
