#pragma once

// CSV emission. Floats use 17 significant digits so that values round-trip
// exactly; lines end in LF.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "micromaser/steady.hpp"

namespace micromaser::io {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline constexpr const char* kSweepHeader = "D,mean_n,v,n_max,residual,status";
inline constexpr const char* kDistributionHeader = "n,P";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << format_real(r.D) << ',' << format_real(r.mean_n) << ','
       << format_real(r.v) << ',' << r.n_max_used << ','
       << format_real(r.residual) << ',' << (r.ok ? "ok" : "failed") << '\n';
  }
}

// Rows stop at the last n with P_n above `floor`.
inline void write_distribution_csv(std::ostream& os, const PhotonDistribution& d,
                                   const std::vector<std::string>& comments,
                                   double floor = 1e-15) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << kDistributionHeader << '\n';
  std::size_t last = 0;
  for (std::size_t n = 0; n < d.p.size(); ++n) {
    if (d.p[n] > floor) last = n;
  }
  for (std::size_t n = 0; n <= last && n < d.p.size(); ++n) {
    os << n << ',' << format_real(d.p[n]) << '\n';
  }
}

}  // namespace micromaser::io
