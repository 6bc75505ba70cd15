#pragma once

// Steady state of the truncated master equation: the last balance equation
// is replaced by normalization and the bordered banded system is solved
// directly. solve_adaptive grows n_max until the moments stop moving.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "micromaser/errors.hpp"
#include "micromaser/generator.hpp"
#include "micromaser/model.hpp"

namespace micromaser {

struct PhotonDistribution {
  std::vector<double> p;  // P(0..n_max)

  std::size_t n_max() const { return p.empty() ? 0 : p.size() - 1; }
};

struct Moments {
  double mean_n = 0.0;
  double v = 0.0;  // sqrt(Var(n) / <n>)
  std::size_t n_max_used = 0;
  double residual = 0.0;
  double tail_mass = 0.0;
};

struct TruncatedSolution {
  PhotonDistribution distribution;
  double residual = 0.0;       // ||A P||_inf with the unmodified generator
  double most_negative = 0.0;  // smallest raw entry before clamping
};

// Probability mass above 0.9 * n_max.
inline double tail_mass(const PhotonDistribution& d) {
  const double cut = 0.9 * static_cast<double>(d.n_max());
  double mass = 0.0;
  for (std::size_t n = 0; n < d.p.size(); ++n) {
    if (static_cast<double>(n) > cut) mass += d.p[n];
  }
  return mass;
}

inline Moments moments(const PhotonDistribution& d) {
  double mean = 0.0;
  for (std::size_t n = 0; n < d.p.size(); ++n) {
    mean += static_cast<double>(n) * d.p[n];
  }
  double var = 0.0;
  for (std::size_t n = 0; n < d.p.size(); ++n) {
    const double dev = static_cast<double>(n) - mean;
    var += dev * dev * d.p[n];
  }
  Moments m;
  m.mean_n = mean;
  m.v = mean > 0.0 ? std::sqrt(var / mean) : 0.0;
  m.n_max_used = d.n_max();
  m.tail_mass = tail_mass(d);
  return m;
}

// The last balance equation is replaced by normalization, which is the same
// as fixing P_{n_max} = 1, eliminating upward from n = 0 and rescaling.
// Pivots are taken as the total outflow of the reduced column (off-diagonal
// rates plus truncation loss) instead of the updated diagonal, so every
// operation adds non-negative terms and small tail probabilities keep full
// relative precision. A zero pivot at column j means states 0..j form a
// closed class; the stationary law is then supported there.
inline TruncatedSolution solve_truncated(const Generator& a) {
  const std::size_t n = a.n_max();
  const std::size_t size = n + 1;

  // Row i entries A(i,i-1), A(i,i-2), A(i,i+1); the loss row tracks the
  // reduced truncation outflow of each column.
  std::vector<double> l1(size + 2, 0.0), l2(size + 2, 0.0), up(size, 0.0);
  std::vector<double> loss(size, 0.0), pivot(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    if (i >= 1) l1[i] = a.lower1(i - 1);
    if (i >= 2) l2[i] = a.lower2(i - 2);
    if (i + 1 < size) up[i] = a.upper1(i + 1);
    loss[i] = a.dropped(i);
  }

  std::size_t top = n;  // highest state carrying probability
  for (std::size_t j = 0; j < n; ++j) {
    const double out = l1[j + 1] + l2[j + 2] + loss[j];
    pivot[j] = out;
    if (out == 0.0) {
      top = j;
      break;
    }
    const double r = up[j] / out;
    l1[j + 2] += l2[j + 2] * r;
    loss[j + 1] += loss[j] * r;
  }

  std::vector<double> x(size, 0.0);
  x[top] = 1.0;
  for (std::size_t i = top; i-- > 0;) {
    x[i] = up[i] * x[i + 1] / pivot[i];
    if (x[i] > 1e250) {  // rescale; entries far above the mode may underflow to 0
      for (std::size_t k = i; k <= top; ++k) x[k] *= 1e-250;
    }
  }

  double total = 0.0;
  for (double v : x) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw SolverFailure("steady-state elimination produced no probability mass");
  }

  TruncatedSolution out;
  out.most_negative = *std::min_element(x.begin(), x.end());
  if (out.most_negative < 0.0 || !std::all_of(x.begin(), x.end(), [](double v) {
        return std::isfinite(v);
      })) {
    throw SolverFailure("steady-state solution is not a probability vector");
  }
  for (double& v : x) v /= total;

  const auto ax = a.apply(x);
  out.residual = 0.0;
  for (double r : ax) out.residual = std::max(out.residual, std::abs(r));
  out.distribution.p = std::move(x);
  return out;
}

struct AdaptiveOptions {
  double tol = 1e-8;
  std::size_t n_max0 = 0;  // 0 selects default_n_max0(spec)
  std::size_t n_max_cap = 20000;
  double tail_limit = 1e-12;
};

inline std::size_t default_n_max0(const ModelSpec& spec) {
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(4.0 * spec.pump)));
}

struct SteadyState {
  PhotonDistribution distribution;
  Moments moments;
  double generator_scale = 0.0;  // max |A_ij| of the accepted truncation
  double most_negative = 0.0;
};

inline SteadyState solve_at(const ModelSpec& spec, std::size_t n_max) {
  const auto a = assemble(spec, n_max);
  const auto sol = solve_truncated(a);
  SteadyState s{sol.distribution, moments(sol.distribution), a.max_abs_entry(),
                sol.most_negative};
  s.moments.residual = sol.residual;
  return s;
}

// ||A P||_inf must stay below this fraction of max |A_ij|.
inline constexpr double kResidualRelBound = 1e-10;

namespace detail {
inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}
}  // namespace detail

// Solves at n_max0, then at ceil(1.5 n_max) repeatedly. A solution is
// accepted once the next larger truncation reproduces its moments to `tol`
// and its own tail mass is below `tail_limit`.
inline SteadyState solve_adaptive(const ModelSpec& spec,
                                  const AdaptiveOptions& opt = {}) {
  spec.validate();
  if (!(opt.tol > 0.0)) throw ConfigError("tolerance must be > 0");
  std::size_t n_max = opt.n_max0 ? opt.n_max0 : default_n_max0(spec);
  n_max = std::max<std::size_t>(n_max, 4);
  if (n_max > opt.n_max_cap) {
    throw NonConvergence("initial n_max exceeds the cap");
  }

  SteadyState prev = solve_at(spec, n_max);
  for (;;) {
    const auto next_n = static_cast<std::size_t>(
        std::ceil(1.5 * static_cast<double>(n_max)));
    if (next_n > opt.n_max_cap) {
      throw NonConvergence("truncation did not converge below n_max = " +
                           std::to_string(opt.n_max_cap));
    }
    SteadyState cur = solve_at(spec, next_n);
    if (prev.moments.tail_mass < opt.tail_limit &&
        detail::close_rel(prev.moments.mean_n, cur.moments.mean_n, opt.tol) &&
        detail::close_rel(prev.moments.v, cur.moments.v, opt.tol)) {
      return prev;
    }
    prev = std::move(cur);
    n_max = next_n;
  }
}

struct SweepRow {
  double D = 0.0;
  double mean_n = 0.0;
  double v = 0.0;
  std::size_t n_max_used = 0;
  double residual = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepOptions {
  AdaptiveOptions adaptive;
  unsigned threads = 1;
};

inline SweepRow sweep_point(const ModelSpec& tmpl, double D,
                            const AdaptiveOptions& opt) {
  SweepRow row;
  row.D = D;
  try {
    const auto spec = at_pump_parameter(tmpl, D);
    const auto s = solve_adaptive(spec, opt);
    row.mean_n = s.moments.mean_n;
    row.v = s.moments.v;
    row.n_max_used = s.moments.n_max_used;
    row.residual = s.moments.residual;
    row.ok = s.moments.residual < kResidualRelBound * s.generator_scale;
    if (!row.ok) row.error = "residual above bound";
  } catch (const Error& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

// Each worker handles one contiguous block of D values and warm-starts
// n_max from the previous point in its block, so output depends only on
// the inputs and the thread count.
inline std::vector<SweepRow> sweep(const ModelSpec& tmpl,
                                   std::span<const double> D_values,
                                   const SweepOptions& opt = {}) {
  if (!std::is_sorted(D_values.begin(), D_values.end())) {
    throw ConfigError("D values must be sorted ascending");
  }
  tmpl.validate();
  if (!(tmpl.pump > 0.0)) throw ConfigError("sweep requires a positive pump rate");

  std::vector<SweepRow> rows(D_values.size());
  const std::size_t base_n0 =
      opt.adaptive.n_max0 ? opt.adaptive.n_max0 : default_n_max0(tmpl);

  auto run_block = [&](std::size_t begin, std::size_t end) {
    std::size_t warm = base_n0;
    for (std::size_t i = begin; i < end; ++i) {
      AdaptiveOptions a = opt.adaptive;
      a.n_max0 = std::max(base_n0, warm);
      rows[i] = sweep_point(tmpl, D_values[i], a);
      if (rows[i].ok) warm = rows[i].n_max_used;
    }
  };

  const std::size_t count = D_values.size();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(opt.threads, count));
  if (workers == 1) {
    run_block(0, count);
    return rows;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back(run_block, begin, end);
  }
  pool.clear();
  return rows;
}

}  // namespace micromaser
