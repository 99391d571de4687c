// search.hpp
// Multi-start coordinate ascent over angle vectors. Each coordinate step is
// a coarse scan over one period followed by golden-section refinement inside
// the best scan cell.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace qdiag::detail {

struct SearchResult {
  double value = -INFINITY;
  std::vector<double> angles;
};

// Maximizes f along coordinate k, assuming f is a single-harmonic sinusoid of
// period 2*pi in that coordinate (true for every objective used here): the
// best of kScan samples lies within half a cell of the maximum, so the cell on
// either side brackets a unimodal stretch.
template <class F>
double maximize_coordinate(const F& f, std::vector<double>& x, std::size_t k, double current) {
  constexpr int kScan = 12;
  constexpr double kCell = 2.0 * std::numbers::pi / kScan;
  const double origin = x[k];
  double best_t = origin, best_v = current;
  for (int s = 1; s < kScan; ++s) {
    x[k] = origin + s * kCell;
    const double v = f(std::span<const double>(x));
    if (v > best_v) best_v = v, best_t = x[k];
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double lo = best_t - kCell, hi = best_t + kCell;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  x[k] = x1;
  double f1 = f(std::span<const double>(x));
  x[k] = x2;
  double f2 = f(std::span<const double>(x));
  while (hi - lo > 1e-11) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      x[k] = x2;
      f2 = f(std::span<const double>(x));
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      x[k] = x1;
      f1 = f(std::span<const double>(x));
    }
  }
  const double t = f1 > f2 ? x1 : x2;
  const double v = std::max(f1, f2);
  if (v > best_v) {
    x[k] = std::remainder(t, 2.0 * std::numbers::pi);
    return v;
  }
  x[k] = best_t;
  return best_v;
}

// Cyclic coordinate ascent from x; stops after `iters` sweeps or once a
// sweep gains less than 1e-15.
template <class F>
double coordinate_ascent(const F& f, std::vector<double>& x, int iters) {
  double v = f(std::span<const double>(x));
  for (int it = 0; it < iters; ++it) {
    const double before = v;
    for (std::size_t k = 0; k < x.size(); ++k) v = maximize_coordinate(f, x, k, v);
    if (v - before < 1e-15) break;
  }
  return v;
}

// Runs coordinate ascent from every seed, then from `restarts` uniformly
// random starting points drawn from a generator seeded with `seed`. Restart i
// draws the same angles whatever the total restart count, so raising
// `restarts` can only raise the result.
template <class F>
SearchResult multistart_maximize(const F& f, std::size_t dims, std::span<const std::vector<double>> seeds,
                                 int restarts, int iters, std::uint64_t seed) {
  SearchResult best;
  auto consider = [&](std::vector<double> x) {
    const double v = coordinate_ascent(f, x, iters);
    if (v > best.value) best.value = v, best.angles = std::move(x);
  };
  for (const auto& s : seeds) consider(s);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(dims);
    for (double& a : x) a = angle(rng);
    consider(std::move(x));
  }
  return best;
}

}  // namespace qdiag::detail
