#pragma once

// Reference solutions used to cross-check the steady-state solver. None of
// these share code with solve_truncated.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "micromaser/errors.hpp"
#include "micromaser/gain.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/model.hpp"
#include "micromaser/steady.hpp"

namespace micromaser {

// Bose-Einstein distribution on 0..n_max, renormalized after truncation.
inline PhotonDistribution thermal_distribution(double nbar, std::size_t n_max) {
  PhotonDistribution d;
  d.p.resize(n_max + 1);
  const double ratio = nbar / (1.0 + nbar);
  double w = 1.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    d.p[n] = w;
    w *= ratio;
  }
  const double total = std::accumulate(d.p.begin(), d.p.end(), 0.0);
  for (double& x : d.p) x /= total;
  return d;
}

// Product-form stationary law of the one-atom birth-death chain:
//   P_n / P_{n-1} = [nbar n + N sin^2(gtau sqrt n)] / [(nbar + 1) n]
// accumulated in log space.
inline PhotonDistribution one_atom_detailed_balance(const ModelSpec& spec,
                                                    std::size_t n_max) {
  spec.validate();
  if (spec.variant != Variant::one_atom) {
    throw ConfigError("detailed balance applies to the one-atom model only");
  }
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> logp(n_max + 1, neg_inf);
  logp[0] = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n);
    const double s = std::sin(spec.gtau * std::sqrt(nn));
    const double up = spec.nbar_th * nn + spec.pump * s * s;
    if (up <= 0.0 || logp[n - 1] == neg_inf) break;
    logp[n] = logp[n - 1] + std::log(up) - std::log((spec.nbar_th + 1.0) * nn);
  }
  const double peak = *std::max_element(logp.begin(), logp.end());
  PhotonDistribution d;
  d.p.resize(n_max + 1);
  double total = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    d.p[n] = logp[n] == neg_inf ? 0.0 : std::exp(logp[n] - peak);
    total += d.p[n];
  }
  for (double& x : d.p) x /= total;
  return d;
}

struct RelaxOptions {
  double tol = 1e-12;       // target ||A P||_inf
  double first_step = 0.0;  // 0: 1e-3 over the loss-rate spectral bound
  double growth = 2.0;
  double max_step = 1e12;
  std::size_t max_steps = 100000;
};

struct RelaxResult {
  PhotonDistribution distribution;
  double residual = 0.0;
  std::size_t steps = 0;
};

// Backward-Euler relaxation of dP/dt = A P with a geometrically growing
// step. (I - hA) is strictly column diagonally dominant, so the banded
// elimination below needs no pivoting. Mass lost through the truncated top
// columns is renormalized after each step.
inline RelaxResult ode_relax(const Generator& a, PhotonDistribution start,
                             const RelaxOptions& opt = {}) {
  const std::size_t size = a.size();
  if (start.p.size() != size) {
    throw ConfigError("initial distribution does not match generator size");
  }
  auto residual_of = [&](const std::vector<double>& p) {
    double r = 0.0;
    for (double x : a.apply(p)) r = std::max(r, std::abs(x));
    return r;
  };

  std::vector<double> p = std::move(start.p);
  double h = opt.first_step;
  if (!(h > 0.0)) {
    h = 1e-3 / std::max(1.0, a.max_abs_entry());
  }

  std::vector<double> l2(size), l1(size), d(size), up(size), rhs(size);
  RelaxResult out;
  double res = residual_of(p);
  while (!(res < opt.tol)) {
    if (out.steps >= opt.max_steps) {
      throw NonConvergence("ODE relaxation exceeded the step limit");
    }
    // Row i of (I - hA): cols i-2 .. i+1.
    for (std::size_t i = 0; i < size; ++i) {
      l2[i] = i >= 2 ? -h * a.lower2(i - 2) : 0.0;
      l1[i] = i >= 1 ? -h * a.lower1(i - 1) : 0.0;
      d[i] = 1.0 - h * a.diag(i);
      up[i] = i + 1 < size ? -h * a.upper1(i + 1) : 0.0;
      rhs[i] = p[i];
    }
    for (std::size_t j = 0; j + 1 < size; ++j) {
      const double f1 = l1[j + 1] / d[j];
      d[j + 1] -= f1 * up[j];
      rhs[j + 1] -= f1 * rhs[j];
      if (j + 2 < size) {
        const double f2 = l2[j + 2] / d[j];
        l1[j + 2] -= f2 * up[j];
        rhs[j + 2] -= f2 * rhs[j];
      }
    }
    p[size - 1] = rhs[size - 1] / d[size - 1];
    for (std::size_t i = size - 1; i-- > 0;) {
      p[i] = (rhs[i] - up[i] * p[i + 1]) / d[i];
    }
    double total = 0.0;
    for (double& x : p) {
      x = std::max(x, 0.0);
      total += x;
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw NonConvergence("ODE relaxation lost all probability mass");
    }
    for (double& x : p) x /= total;

    ++out.steps;
    h = std::min(h * opt.growth, opt.max_step);
    res = residual_of(p);
  }
  out.residual = res;
  out.distribution.p = std::move(p);
  return out;
}

struct TrajectoryConfig {
  ModelSpec spec;
  std::uint64_t seed = 1;
  double t_end = 5e4;    // photon lifetimes
  double burn_in = 5e2;
  double sample_stride = 1e3;  // length of one batch for error estimates
  std::size_t initial_photons = 0;
};

struct MonteCarloResult {
  PhotonDistribution distribution;
  std::vector<double> p_stderr;
  double mean_n = 0.0;
  double mean_stderr = 0.0;
  double v = 0.0;
  double v_stderr = 0.0;
  std::size_t batches = 0;
  std::uint64_t events = 0;
};

// Continuous-time jump process for the photon number: injections at rate N
// deposit 0/1/2 photons drawn from the emission kernel at the current n
// (instantaneous transit), thermal jumps at the reservoir rates. Occupancy
// is time-averaged after burn-in; standard errors come from batch means.
inline MonteCarloResult monte_carlo(const TrajectoryConfig& cfg) {
  const ModelSpec& spec = cfg.spec;
  spec.validate();
  if (!(cfg.t_end > cfg.burn_in) || !(cfg.burn_in > 0.0)) {
    throw ConfigError("trajectory needs t_end > burn_in > 0");
  }
  if (!(cfg.sample_stride > 0.0)) {
    throw ConfigError("sample_stride must be > 0");
  }
  const auto batches = static_cast<std::size_t>(
      std::floor((cfg.t_end - cfg.burn_in) / cfg.sample_stride));
  if (batches < 2) {
    throw ConfigError("need at least two batches after burn-in");
  }
  const double t_stop = cfg.burn_in + static_cast<double>(batches) * cfg.sample_stride;

  std::size_t table_n = std::max<std::size_t>(
      64, static_cast<std::size_t>(4.0 * spec.pump) + cfg.initial_photons);
  EmissionKernel kernel = build_kernel(spec, table_n);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::vector<double>> occupancy(batches);
  auto deposit = [&](std::size_t b, std::size_t n, double dt) {
    auto& hist = occupancy[b];
    if (hist.size() <= n) hist.resize(n + 1, 0.0);
    hist[n] += dt;
  };
  // Splits the sojourn [t0, t1) in state n across burn-in and batch bins.
  auto record = [&](std::size_t n, double t0, double t1) {
    t0 = std::max(t0, cfg.burn_in);
    t1 = std::min(t1, t_stop);
    while (t0 < t1) {
      const auto b = static_cast<std::size_t>((t0 - cfg.burn_in) / cfg.sample_stride);
      if (b >= batches) break;
      const double bin_end = cfg.burn_in + static_cast<double>(b + 1) * cfg.sample_stride;
      const double seg_end = std::min(t1, bin_end);
      deposit(b, n, seg_end - t0);
      t0 = seg_end;
    }
  };

  MonteCarloResult out;
  std::size_t n = cfg.initial_photons;
  double t = 0.0;
  const double up_coef = spec.nbar_th;
  const double down_coef = spec.nbar_th + 1.0;
  while (t < t_stop) {
    const double nn = static_cast<double>(n);
    const double r_pump = spec.pump;
    const double r_down = down_coef * nn;
    const double r_up = up_coef * (nn + 1.0);
    const double total = r_pump + r_down + r_up;
    if (!(total > 0.0)) {  // vacuum with no pump and no reservoir photons
      record(n, t, t_stop);
      break;
    }
    const double wait = -std::log1p(-unit(rng)) / total;
    record(n, t, t + wait);
    t += wait;
    if (t >= t_stop) break;
    ++out.events;

    const double u = unit(rng) * total;
    if (u < r_pump) {
      if (n > kernel.n_max()) {
        table_n = std::max(2 * table_n, n + 1);
        kernel = build_kernel(spec, table_n);
      }
      const double w = unit(rng);
      if (w < kernel.p1[n]) {
        n += 1;
      } else if (w < kernel.p1[n] + kernel.p2[n]) {
        n += 2;
      }
    } else if (u < r_pump + r_down) {
      n -= 1;
    } else {
      n += 1;
    }
  }

  // Per-batch normalized histograms and moments.
  std::size_t width = 0;
  for (const auto& h : occupancy) width = std::max(width, h.size());
  std::vector<double> batch_mean(batches), batch_v(batches);
  std::vector<std::vector<double>> batch_p(batches, std::vector<double>(width, 0.0));
  for (std::size_t b = 0; b < batches; ++b) {
    PhotonDistribution d;
    d.p.assign(width, 0.0);
    std::copy(occupancy[b].begin(), occupancy[b].end(), d.p.begin());
    for (double& x : d.p) x /= cfg.sample_stride;
    const auto m = moments(d);
    batch_mean[b] = m.mean_n;
    batch_v[b] = m.v;
    batch_p[b] = std::move(d.p);
  }

  out.batches = batches;
  out.distribution.p.assign(width, 0.0);
  for (const auto& bp : batch_p) {
    for (std::size_t k = 0; k < width; ++k) out.distribution.p[k] += bp[k];
  }
  for (double& x : out.distribution.p) x /= static_cast<double>(batches);
  const auto pooled = moments(out.distribution);
  out.mean_n = pooled.mean_n;
  out.v = pooled.v;

  const double nb = static_cast<double>(batches);
  auto stderr_of = [&](auto&& value_of, double center) {
    double ss = 0.0;
    for (std::size_t b = 0; b < batches; ++b) {
      const double dev = value_of(b) - center;
      ss += dev * dev;
    }
    return std::sqrt(ss / (nb - 1.0) / nb);
  };
  out.mean_stderr = stderr_of([&](std::size_t b) { return batch_mean[b]; }, out.mean_n);
  const double v_center = std::accumulate(batch_v.begin(), batch_v.end(), 0.0) / nb;
  out.v_stderr = stderr_of([&](std::size_t b) { return batch_v[b]; }, v_center);
  out.p_stderr.assign(width, 0.0);
  for (std::size_t k = 0; k < width; ++k) {
    out.p_stderr[k] = stderr_of([&](std::size_t b) { return batch_p[b][k]; },
                                out.distribution.p[k]);
  }
  return out;
}

}  // namespace micromaser
