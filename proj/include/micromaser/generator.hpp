#pragma once

// Coarse-grained rate matrix for P(n) on the truncated space 0..n_max.
// Column j holds the rates out of state j; the band is two below the
// diagonal (gain) and one above it (loss).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "micromaser/gain.hpp"
#include "micromaser/model.hpp"

namespace micromaser {

class Generator {
 public:
  explicit Generator(std::size_t n_max)
      : n_max_(n_max),
        lower2_(n_max + 1, 0.0),
        lower1_(n_max + 1, 0.0),
        diag_(n_max + 1, 0.0),
        upper1_(n_max + 1, 0.0),
        dropped_(n_max + 1, 0.0) {}

  std::size_t n_max() const { return n_max_; }
  std::size_t size() const { return n_max_ + 1; }

  // A(j+2, j), A(j+1, j), A(j, j), A(j-1, j); out-of-range slots stay zero.
  double lower2(std::size_t j) const { return lower2_[j]; }
  double lower1(std::size_t j) const { return lower1_[j]; }
  double diag(std::size_t j) const { return diag_[j]; }
  double upper1(std::size_t j) const { return upper1_[j]; }
  // Rate out of column j into states above n_max (truncation loss).
  double dropped(std::size_t j) const { return dropped_[j]; }

  double at(std::size_t row, std::size_t col) const {
    if (row == col) return diag_[col];
    if (row == col + 1) return lower1_[col];
    if (row == col + 2) return lower2_[col];
    if (row + 1 == col) return upper1_[col];
    return 0.0;
  }

  // Adds `rate` for the jump col -> row. Jumps leaving 0..n_max are dropped
  // from the matrix but remembered per column.
  void add_jump(std::size_t col, std::size_t row, double rate) {
    if (row > n_max_) {
      dropped_[col] += rate;
      return;
    }
    if (row == col + 1) {
      lower1_[col] += rate;
    } else if (row == col + 2) {
      lower2_[col] += rate;
    } else if (row + 1 == col) {
      upper1_[col] += rate;
    }
  }
  void add_diag(std::size_t col, double rate) { diag_[col] += rate; }

  double column_sum(std::size_t j) const {
    return lower2_[j] + lower1_[j] + diag_[j] + upper1_[j];
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (std::size_t j = 0; j <= n_max_; ++j) {
      m = std::max({m, std::abs(lower2_[j]), std::abs(lower1_[j]),
                    std::abs(diag_[j]), std::abs(upper1_[j])});
    }
    return m;
  }

  // A * p
  std::vector<double> apply(std::span<const double> p) const {
    std::vector<double> out(size(), 0.0);
    for (std::size_t j = 0; j <= n_max_; ++j) {
      const double x = p[j];
      if (x == 0.0) continue;
      out[j] += diag_[j] * x;
      if (j + 1 <= n_max_) out[j + 1] += lower1_[j] * x;
      if (j + 2 <= n_max_) out[j + 2] += lower2_[j] * x;
      if (j >= 1) out[j - 1] += upper1_[j] * x;
    }
    return out;
  }

  Generator& operator+=(const Generator& other) {
    for (std::size_t j = 0; j <= n_max_; ++j) {
      lower2_[j] += other.lower2_[j];
      lower1_[j] += other.lower1_[j];
      diag_[j] += other.diag_[j];
      upper1_[j] += other.upper1_[j];
      dropped_[j] += other.dropped_[j];
    }
    return *this;
  }

 private:
  std::size_t n_max_;
  std::vector<double> lower2_, lower1_, diag_, upper1_, dropped_;
};

// dP_n/dt|gain = N [(p0(n)-1) P_n + p1(n-1) P_{n-1} + p2(n-2) P_{n-2}]
inline Generator gain_rates(const EmissionKernel& kernel, double pump) {
  const std::size_t n_max = kernel.n_max();
  Generator g(n_max);
  for (std::size_t j = 0; j <= n_max; ++j) {
    g.add_diag(j, pump * (kernel.p0[j] - 1.0));
    g.add_jump(j, j + 1, pump * kernel.p1[j]);
    g.add_jump(j, j + 2, pump * kernel.p2[j]);
  }
  return g;
}

// Thermal reservoir damping, time in units of 1/(2 kappa).
inline Generator loss_rates(double nbar_th, std::size_t n_max) {
  if (!(nbar_th >= 0.0)) {
    throw ConfigError("thermal photon number must be >= 0");
  }
  Generator g(n_max);
  for (std::size_t j = 0; j <= n_max; ++j) {
    const double n = static_cast<double>(j);
    g.add_diag(j, -(n + nbar_th + 2.0 * n * nbar_th));
    if (j >= 1) g.add_jump(j, j - 1, (nbar_th + 1.0) * n);
    g.add_jump(j, j + 1, nbar_th * (n + 1.0));
  }
  return g;
}

inline Generator assemble(const EmissionKernel& kernel, const ModelSpec& spec) {
  Generator a = gain_rates(kernel, spec.pump);
  a += loss_rates(spec.nbar_th, kernel.n_max());
  return a;
}

inline Generator assemble(const ModelSpec& spec, std::size_t n_max) {
  spec.validate();
  if (n_max < 4) {
    throw ConfigError("generator needs n_max >= 4");
  }
  return assemble(build_kernel(spec, n_max), spec);
}

}  // namespace micromaser
