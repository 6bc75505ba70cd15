#pragma once

// Per-transit emission kernel: probability that one injection event leaves
// 0, 1 or 2 extra photons in a cavity that held k photons.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "micromaser/model.hpp"
#include "micromaser/sector.hpp"

namespace micromaser {

struct EmissionProbabilities {
  double p0 = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

struct EmissionKernel {
  Variant variant = Variant::dicke_pair;
  double gtau = 0.0;
  double delta = 0.0;
  std::vector<double> p0, p1, p2;  // indexed by initial photon number

  std::size_t n_max() const { return p0.empty() ? 0 : p0.size() - 1; }
  EmissionProbabilities at(std::size_t k) const { return {p0[k], p1[k], p2[k]}; }
};

// Propagates |1,k> (both atoms up, k photons) through sector k+2 with
// U = sum_j exp(-i lambda_j gtau) v_j v_j^T and reads off the populations of
// the three basis states.
inline EmissionProbabilities kernel_unitary(std::size_t k, double gtau,
                                            double delta) {
  const auto h = build_sector(SectorIndex(static_cast<long>(k) + 2), delta);
  const auto es = eigensystem_general(h);

  std::complex<double> amp[3] = {0.0, 0.0, 0.0};
  for (int j = 0; j < 3; ++j) {
    const std::complex<double> phase = std::polar(1.0, -es.lambdas(j) * gtau);
    const double overlap = es.vectors(0, j);
    for (int r = 0; r < 3; ++r) {
      amp[r] += phase * (es.vectors(r, j) * overlap);
    }
  }
  return {std::norm(amp[0]), std::norm(amp[1]), std::norm(amp[2])};
}

// Resonant closed form built from the dressed-state components. The
// no-emission weight uses (n+2)/(2n+3) = (x_1^{(n+2)})^2, which makes it
// reduce to 1 at gtau = 0.
inline EmissionProbabilities kernel_closed_form(std::size_t k, double gtau) {
  EmissionProbabilities out;

  {  // p0(k): sector n+2 with n = k
    const double n = static_cast<double>(k);
    const auto es = eigensystem_resonant(SectorIndex(static_cast<long>(k) + 2));
    const double x1 = es.vectors(0, 0), x2 = es.vectors(0, 1),
                 x3 = es.vectors(0, 2);
    const double lp = es.lambdas(1), lm = es.lambdas(2);
    const double a = (n + 2.0) / (2.0 * n + 3.0);
    const double b = (n + 1.0) / (4.0 * n + 6.0);
    out.p0 = a * x1 * x1 + b * (x2 * x2 + x3 * x3) -
             2.0 * std::sqrt(a * b) *
                 (x1 * x2 * std::cos(lp * gtau) + x1 * x3 * std::cos(lm * gtau)) +
             2.0 * b * x2 * x3 * std::cos((lp - lm) * gtau);
  }
  {  // p1(k): sector k+2, i.e. Theta_2 at n = k+1
    const auto es = eigensystem_resonant(SectorIndex(static_cast<long>(k) + 2));
    const double x2 = es.vectors(0, 1), x3 = es.vectors(0, 2);
    const double lp = es.lambdas(1), lm = es.lambdas(2);
    out.p1 = 0.5 * (x2 * x2 + x3 * x3) - x2 * x3 * std::cos((lp - lm) * gtau);
  }
  {  // p2(k): sector n = k+2
    const double n = static_cast<double>(k) + 2.0;
    const auto es = eigensystem_resonant(SectorIndex(static_cast<long>(k) + 2));
    const double x1 = es.vectors(0, 0), x2 = es.vectors(0, 1),
                 x3 = es.vectors(0, 2);
    const double lp = es.lambdas(1), lm = es.lambdas(2);
    out.p2 = (n - 1.0) / (2.0 * n - 1.0) * x1 * x1 +
             n / (4.0 * n - 2.0) * (x2 * x2 + x3 * x3) +
             std::sqrt(2.0 * n * (n - 1.0)) / (2.0 * n - 1.0) *
                 (x1 * x2 * std::cos(lp * gtau) + x1 * x3 * std::cos(lm * gtau)) +
             2.0 * n / (4.0 * n - 2.0) * x2 * x3 * std::cos((lp - lm) * gtau);
  }
  return out;
}

// Jaynes-Cummings transit: p1 = sin^2(gtau sqrt(k+1)).
inline EmissionProbabilities kernel_one_atom(std::size_t k, double gtau) {
  const double s = std::sin(gtau * std::sqrt(static_cast<double>(k) + 1.0));
  const double p1 = s * s;
  return {1.0 - p1, p1, 0.0};
}

inline EmissionKernel build_kernel(const ModelSpec& spec, std::size_t n_max) {
  spec.validate();
  if (n_max < 1) {
    throw ConfigError("kernel table needs n_max >= 1");
  }
  EmissionKernel kernel{spec.variant, spec.gtau, spec.delta, {}, {}, {}};
  kernel.p0.resize(n_max + 1);
  kernel.p1.resize(n_max + 1);
  kernel.p2.resize(n_max + 1);
  for (std::size_t k = 0; k <= n_max; ++k) {
    const auto p = spec.variant == Variant::one_atom
                       ? kernel_one_atom(k, spec.gtau)
                       : kernel_unitary(k, spec.gtau, spec.delta);
    kernel.p0[k] = p.p0;
    kernel.p1[k] = p.p1;
    kernel.p2[k] = p.p2;
  }
  return kernel;
}

}  // namespace micromaser
