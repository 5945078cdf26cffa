#pragma once

#include "hlmax/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hlmax {

/// Var over [a..b] when a window is given, otherwise over all of Z. For
/// constant tails the latter is the variation over the explicit block
/// extended by one site on each side.
inline Rational total_variation(const DiscreteFunction& f, std::optional<IntRange> window = std::nullopt) {
  IntRange r;
  if (window) {
    r = *window;
  } else {
    if (f.values().empty()) return Rational(0);
    r = IntRange{f.support_start() - 1, f.support_end()};
  }
  Rational total(0);
  for (std::int64_t i = r.first; i < r.last; ++i) total += abs(f(i + 1) - f(i));
  return total;
}

inline Rational variation_over_sites(std::span<const Rational> values) {
  if (values.size() < 2) throw std::invalid_argument("variation_over_sites needs at least two values");
  Rational total(0);
  for (std::size_t i = 1; i < values.size(); ++i) total += abs(values[i] - values[i - 1]);
  return total;
}

/// Three sites p < r < q with v_p < v_r > v_q.
template <typename Site>
struct Peak {
  Site p;
  Site r;
  Site q;
  Rational vp;
  Rational vr;
  Rational vq;

  Rational variation() const { return Rational(2) * vr - vp - vq; }
  bool well_formed() const { return p < r && r < q && vp < vr && vq < vr; }
};

/// Chain of peaks sharing endpoints: q_i = p_{i+1}.
template <typename Site>
struct PeakSystem {
  std::vector<Peak<Site>> peaks;

  Rational variation() const {
    Rational total(0);
    for (const auto& pk : peaks) total += pk.variation();
    return total;
  }

  bool well_formed() const {
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      if (!peaks[i].well_formed()) return false;
      if (i > 0 && !(peaks[i - 1].q == peaks[i].p)) return false;
    }
    return true;
  }
};

/// Split of the variation over a finite ordered site set into a monotone
/// head, a system of peaks and a monotone tail.
///
/// rise_index (k) is the first index with v_k < v_{k+1}, fall_index (j) the
/// last index with v_j < v_{j-1}; both are 0-based. When k < j:
///   head_drop = v_first - v_k, tail_rise = v_last - v_j
/// otherwise there is no system and
///   head_drop = v_first - v_j, tail_rise = v_last - v_k.
template <typename Site>
struct Decomposition {
  std::size_t rise_index = 0;
  std::size_t fall_index = 0;
  Rational head_drop;
  std::optional<PeakSystem<Site>> system;
  Rational tail_rise;

  Rational bound() const { return head_drop + (system ? system->variation() : Rational(0)) + tail_rise; }
};

template <typename Site>
Decomposition<Site> decompose(std::span<const Rational> values, std::span<const Site> sites) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("decompose needs at least two values");
  if (sites.size() != n) throw std::invalid_argument("decompose: sites and values differ in length");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(sites[i - 1] < sites[i])) throw std::invalid_argument("decompose: sites must be strictly increasing");
  }

  std::size_t k = n - 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (values[i] < values[i + 1]) {
      k = i;
      break;
    }
  }
  std::size_t j = 0;
  for (std::size_t i = n - 1; i >= 1; --i) {
    if (values[i] < values[i - 1]) {
      j = i;
      break;
    }
  }

  Decomposition<Site> out;
  out.rise_index = k;
  out.fall_index = j;
  if (k >= j) {
    out.head_drop = values[0] - values[j];
    out.tail_rise = values[n - 1] - values[k];
  } else {
    out.head_drop = values[0] - values[k];
    out.tail_rise = values[n - 1] - values[j];
    PeakSystem<Site> system;
    std::size_t p = k;
    while (true) {
      std::size_t m = p + 1;
      while (!(values[m + 1] < values[m])) ++m;  // a fall exists before j
      std::size_t q = m + 1;
      while (q < j && !(values[q + 1] > values[q])) ++q;
      if (q > j) q = j;
      system.peaks.push_back(Peak<Site>{sites[p], sites[m], sites[q], values[p], values[m], values[q]});
      if (q == j) break;
      p = q;
    }
    out.system = std::move(system);
  }

  const Rational total = variation_over_sites(values);
  if (total != out.bound() || (out.system && !out.system->well_formed())) {
    throw std::logic_error("decompose: postcondition failed");
  }
  return out;
}

template <typename Site>
Decomposition<Site> decompose(const std::vector<Rational>& values, const std::vector<Site>& sites) {
  return decompose<Site>(std::span<const Rational>(values), std::span<const Site>(sites));
}

/// A site a in interval with f(a) <= bound. Scans windows centred at center
/// (default: the midpoint), largest first, until one averages at most bound,
/// then returns its smallest site of minimal value. nullopt means no centred
/// window qualifies, which cannot happen when bound = M f(center).
inline std::optional<std::int64_t> find_smaller_point(const DiscreteFunction& f, const Rational& bound, const IntRange& interval,
                                                      std::optional<std::int64_t> center = std::nullopt) {
  if (interval.first > interval.last) throw std::invalid_argument("find_smaller_point: empty interval");
  const std::int64_t c = center.value_or(interval.first + (interval.last - interval.first) / 2);
  if (!interval.contains(c)) throw std::invalid_argument("find_smaller_point: center outside interval");
  for (std::int64_t radius = std::min(c - interval.first, interval.last - c); radius >= 0; --radius) {
    if (f.sum_over(c - radius, c + radius) > bound * Rational(2 * radius + 1)) continue;
    std::int64_t best = c - radius;
    for (std::int64_t i = c - radius + 1; i <= c + radius; ++i) {
      if (f(i) < f(best)) best = i;
    }
    return best;
  }
  return std::nullopt;
}

/// Continuous counterpart on the open interval (lo, hi): windows centred at
/// center are halved until one averages at most bound; the returned site is
/// the midpoint of a lowest piece inside it.
inline std::optional<Rational> find_smaller_point(const StepFunction& f, const Rational& bound, const Rational& lo, const Rational& hi,
                                                  std::optional<Rational> center = std::nullopt) {
  if (!(lo < hi)) throw std::invalid_argument("find_smaller_point: empty interval");
  const Rational c = center.value_or((lo + hi) / Rational(2));
  if (!(lo < c && c < hi)) throw std::invalid_argument("find_smaller_point: center outside interval");
  Rational half = min(c - lo, hi - c) / Rational(2);
  for (int attempt = 0; attempt < 128; ++attempt, half = half / Rational(2)) {
    const ContinuousWindow w{c - half, c + half};
    if (average_step(f, w) > bound) continue;
    std::optional<Rational> site;
    std::optional<Rational> lowest;
    f.for_each_piece_in(w.left, w.right, [&](const Rational& a, const Rational& b, const Rational& v) {
      if (!lowest || v < *lowest) {
        lowest = v;
        site = (a + b) / Rational(2);
      }
    });
    return site;
  }
  return std::nullopt;
}

}  // namespace hlmax
