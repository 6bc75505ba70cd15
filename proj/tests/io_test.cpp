#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "micromaser/io.hpp"

using namespace micromaser;

TEST(FormatReal, RoundTripsExactly) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::strtod(io::format_real(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(io::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_real(0.0), "0");
}

TEST(SweepCsv, HeaderAndRows) {
  std::ostringstream os;
  SweepRow ok{0.5, 1.25, 0.75, 64, 1e-16, true, ""};
  SweepRow bad{1.0, 0.0, 0.0, 0, 0.0, false, "boom"};
  io::write_sweep_csv(os, {ok, bad});
  EXPECT_EQ(os.str(),
            "D,mean_n,v,n_max,residual,status\n"
            "0.5,1.25,0.75,64,9.9999999999999998e-17,ok\n"
            "1,0,0,0,0,failed\n");
}

TEST(DistributionCsv, StopsAtNegligibleTail) {
  std::ostringstream os;
  PhotonDistribution d{{0.5, 0.25, 0.25, 1e-16, 0.0}};
  io::write_distribution_csv(os, d, {"mean_n=0.75"});
  EXPECT_EQ(os.str(), "# mean_n=0.75\nn,P\n0,0.5\n1,0.25\n2,0.25\n");
}
