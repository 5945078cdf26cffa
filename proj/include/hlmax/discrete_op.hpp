#pragma once

// Discrete nontangential maximal operator
//
//   M^a f(x) = sup { avg of f over [y-R .. y+R] : R >= 0, |x - y| <= budget(R) }
//
// with budget(R) = ceil(a R) (or floor(a R)). a = 0 is the centered operator
// and a = 1 with ceil is the uncentered one restricted to odd windows.
//
// For zero tails the supremum is a maximum over finitely many windows: any
// window of radius R averages at most mass / (2R + 1), so once a candidate
// value v is known every radius beyond search_radius_bound(v) can be skipped.
// Nonzero tails make the supremum a limit in general; we return a certified
// enclosure [value, enclosure_upper] instead.

#include "hlmax/core.hpp"
#include "hlmax/parallel.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hlmax {

enum class Attainment { Window, ShrinkingLimit, TailLimit };

inline const char* to_string(Attainment a) {
  switch (a) {
    case Attainment::Window: return "window";
    case Attainment::ShrinkingLimit: return "shrinking_limit";
    case Attainment::TailLimit: return "tail_limit";
  }
  return "?";
}

/// Value of a maximal function at one point together with where the
/// supremum comes from. When the evaluation is a non-tight enclosure,
/// value <= true supremum <= enclosure_upper.
template <typename Window>
struct PointEvaluation {
  Rational value;
  std::optional<Window> window;
  Attainment source = Attainment::Window;
  Rational enclosure_upper;

  bool attained_at_tail_limit() const { return source == Attainment::TailLimit; }
  bool exact() const { return enclosure_upper == value; }
};

using DiscreteEvaluation = PointEvaluation<DiscreteWindow>;

/// Integer deviation budget for a window of radius R.
///
/// For integer offsets |x - y| <= a R holds iff |x - y| <= floor(a R), so
/// ExactReal and Floor admit the same windows.
class DeviationBudget {
 public:
  explicit DeviationBudget(const OperatorParams& params) : alpha_(params.alpha), rounding_(params.rounding) {
    params.validate();
    fast_ = alpha_.is_inline();
    if (fast_) {
      num_ = alpha_.inline_num();
      den_ = alpha_.inline_den();
    }
  }

  std::int64_t operator()(std::int64_t radius) const {
    if (fast_) {
      const detail::i128 p = static_cast<detail::i128>(num_) * radius;
      const detail::i128 b = rounding_ == Rounding::Ceil ? (p + den_ - 1) / den_ : p / den_;
      return clamp(b);
    }
    const Rational scaled = alpha_ * Rational(radius);
    const BigInt b = rounding_ == Rounding::Ceil ? scaled.ceil() : scaled.floor();
    return b > BigInt(kCap) ? kCap : b.convert_to<std::int64_t>();
  }

 private:
  static constexpr std::int64_t kCap = std::int64_t{1} << 60;
  static std::int64_t clamp(detail::i128 v) { return v > kCap ? kCap : static_cast<std::int64_t>(v); }

  Rational alpha_;
  Rounding rounding_;
  bool fast_ = false;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Whether the window w takes part in the supremum defining M^a f(x).
inline bool admissible(std::int64_t x, const DiscreteWindow& w, const OperatorParams& params) {
  const std::int64_t offset = x > w.center ? x - w.center : w.center - x;
  if (params.rounding == Rounding::ExactReal) return Rational(offset) <= params.alpha * Rational(w.radius);
  return offset <= DeviationBudget(params)(w.radius);
}

/// Limit superior of admissible window averages as the radius grows:
/// (A + B)/2 + min(a, 1) |B - A| / 2 for tails A (left) and B (right).
/// Independent of x and of the rounding mode.
inline Rational tail_limit(const DiscreteFunction& f, const OperatorParams& params) {
  const Rational& a = f.left_tail();
  const Rational& b = f.right_tail();
  const Rational weight = min(params.alpha, Rational(1));
  return (a + b) / Rational(2) + weight * abs(b - a) / Rational(2);
}

/// Smallest R_max with 2 R_max + 1 >= mass / current_best. Every window of
/// larger radius averages strictly less than current_best.
inline std::int64_t search_radius_bound(const DiscreteFunction& f, std::int64_t /*x*/, const Rational& current_best,
                                        const OperatorParams& /*params*/) {
  if (!f.has_zero_tails()) throw std::invalid_argument("search_radius_bound requires zero tails");
  if (current_best.sign() <= 0) throw std::invalid_argument("search_radius_bound requires current_best > 0");
  const BigInt c = (f.mass() / current_best).ceil();
  if (c <= 0) return 0;
  return BigInt(c / 2).convert_to<std::int64_t>();
}

namespace detail {

struct FastInts {
  using Int = std::int64_t;
  using Wide = __int128;
  static Int from(const BigInt& v) { return v.convert_to<std::int64_t>(); }
  static std::int64_t narrow(const Wide& v) { return v > (Wide(1) << 62) ? (std::int64_t{1} << 62) : static_cast<std::int64_t>(v); }
  static BigInt big(const Wide& v) { return to_big(v); }
};

struct BigInts {
  using Int = BigInt;
  using Wide = BigInt;
  static Int from(const BigInt& v) { return v; }
  static std::int64_t narrow(const Wide& v) {
    static const BigInt cap = BigInt(1) << 62;
    return v > cap ? (std::int64_t{1} << 62) : v.convert_to<std::int64_t>();
  }
  static BigInt big(const Wide& v) { return v; }
};

/// f scaled by the common denominator of its values and tails, as integers
/// over the explicit block [start .. end).
template <typename Ints>
struct ScaledFunction {
  using Int = typename Ints::Int;
  using Wide = typename Ints::Wide;

  std::int64_t start = 0;
  std::int64_t end = 0;
  std::vector<Int> prefix;  // prefix[k] = sum of the first k scaled values
  Int left = 0;
  Int right = 0;
  BigInt scale = 1;

  ScaledFunction(const DiscreteFunction& f, const BigInt& common_den, const std::vector<BigInt>& scaled_values,
                 const BigInt& scaled_left, const BigInt& scaled_right)
      : start(f.support_start()), end(f.support_end()), left(Ints::from(scaled_left)), right(Ints::from(scaled_right)),
        scale(common_den) {
    prefix.reserve(scaled_values.size() + 1);
    prefix.push_back(Int(0));
    for (const auto& v : scaled_values) prefix.push_back(prefix.back() + Ints::from(v));
  }

  Int value(std::int64_t i) const {
    if (i < start) return left;
    if (i >= end) return right;
    const auto k = static_cast<std::size_t>(i - start);
    return prefix[k + 1] - prefix[k];
  }

  Int sum(std::int64_t a, std::int64_t b) const {
    Int total(0);
    if (a < start) total += left * Int(std::min(b, start - 1) - a + 1);
    if (b >= end) total += right * Int(b - std::max(a, end) + 1);
    const std::int64_t lo = std::max(a, start);
    const std::int64_t hi = std::min(b, end - 1);
    if (lo <= hi) total += prefix[static_cast<std::size_t>(hi - start + 1)] - prefix[static_cast<std::size_t>(lo - start)];
    return total;
  }

  const Int& mass() const { return prefix.back(); }
};

/// Best window found so far: the average is sum / (scale * (2 radius + 1)).
template <typename Int>
struct Candidate {
  Int sum;
  std::int64_t radius = 0;
  std::int64_t center = 0;
};

/// Scans all admissible windows of radius R whose centres lie in
/// [ylo .. yhi] (plus y = x when requested) and folds the best one into best.
/// Returns true when best improved.
template <typename Ints>
bool scan_radius(const ScaledFunction<Ints>& sf, std::int64_t x, std::int64_t radius, std::int64_t ylo, std::int64_t yhi,
                 bool include_x, Candidate<typename Ints::Int>& best) {
  using Int = typename Ints::Int;
  using Wide = typename Ints::Wide;
  bool have = false;
  Int top(0);
  std::int64_t top_y = 0;
  auto consider = [&](std::int64_t y) {
    Int s = sf.sum(y - radius, y + radius);
    if (!have || s > top) {
      top = s;
      top_y = y;
      have = true;
      return;
    }
    if (s == top) {
      const std::int64_t d_new = y > x ? y - x : x - y;
      const std::int64_t d_old = top_y > x ? top_y - x : x - top_y;
      if (d_new < d_old || (d_new == d_old && y < top_y)) top_y = y;
    }
  };
  if (include_x) consider(x);
  for (std::int64_t y = ylo; y <= yhi; ++y) consider(y);
  if (!have) return false;
  // ties across radii go to the smaller radius, which was scanned first
  if (Wide(top) * Wide(2 * best.radius + 1) > Wide(best.sum) * Wide(2 * radius + 1)) {
    best = Candidate<Int>{top, radius, top_y};
    return true;
  }
  return false;
}

template <typename Ints>
DiscreteEvaluation evaluate_zero_tails(const ScaledFunction<Ints>& sf, const std::optional<IntRange>& hull, std::int64_t x,
                                       const DeviationBudget& budget) {
  using Int = typename Ints::Int;
  using Wide = typename Ints::Wide;
  Candidate<Int> best{sf.value(x), 0, x};
  if (hull) {
    const std::int64_t lo = hull->first;
    const std::int64_t hi = hull->last;
    const Int total = sf.mass();
    // Smallest radius at which some admissible window covers the hull; its
    // average seeds the radius bound.
    std::int64_t cover = (hi - lo + 1) / 2;
    while (true) {
      const std::int64_t b = budget(cover);
      if (std::max(x - b, hi - cover) <= std::min(x + b, lo + cover)) break;
      ++cover;
    }
    auto bound_for = [&](const Int& s, std::int64_t radius) -> std::int64_t {
      // smallest R' with (2R' + 1) s >= total (2 radius + 1)
      const Wide need = Wide(total) * Wide(2 * radius + 1);
      const Wide c = (need + Wide(s) - Wide(1)) / Wide(s);
      return Ints::narrow(c / Wide(2));
    };
    std::int64_t r_max = cover;
    if (best.sum > Int(0)) r_max = std::min(r_max, bound_for(best.sum, 0));
    for (std::int64_t radius = 1; radius <= r_max; ++radius) {
      const std::int64_t b = budget(radius);
      const std::int64_t ylo = std::max(x - b, lo - radius);
      const std::int64_t yhi = std::min(x + b, hi + radius);
      if (ylo > yhi) continue;
      if (scan_radius(sf, x, radius, ylo, yhi, false, best)) r_max = std::min(r_max, bound_for(best.sum, radius));
    }
  }
  DiscreteEvaluation out;
  out.value = Rational(Ints::big(Wide(best.sum)), sf.scale * BigInt(2 * best.radius + 1));
  out.window = DiscreteWindow{best.center, best.radius};
  out.source = Attainment::Window;
  out.enclosure_upper = out.value;
  return out;
}

}  // namespace detail

/// M^a f evaluated pointwise. Construction precomputes the integer data of f
/// once so that repeated evaluations (ranges, sweeps) share it.
class DiscreteMaximalOperator {
 public:
  /// Largest radius the enclosure search will grow to for nonzero tails.
  static constexpr std::int64_t kMaxTailSearchRadius = std::int64_t{1} << 22;

  DiscreteMaximalOperator(DiscreteFunction f, OperatorParams params, bool force_big_integers = false)
      : f_(std::move(f)), params_(std::move(params)), budget_(params_) {
    params_.validate();
    BigInt common = 1;
    auto absorb = [&](const Rational& r) { common = boost::multiprecision::lcm(common, r.denominator()); };
    for (const auto& v : f_.values()) absorb(v);
    absorb(f_.left_tail());
    absorb(f_.right_tail());
    std::vector<BigInt> scaled;
    scaled.reserve(f_.values().size());
    BigInt total = 0;
    auto scale = [&](const Rational& r) { return BigInt(r.numerator() * (common / r.denominator())); };
    for (const auto& v : f_.values()) {
      scaled.push_back(scale(v));
      total += scaled.back();
    }
    const BigInt left = scale(f_.left_tail());
    const BigInt right = scale(f_.right_tail());
    const bool fits = total < (BigInt(1) << 60) && left < (BigInt(1) << 34) && right < (BigInt(1) << 34);
    if (fits && !force_big_integers) {
      fast_.emplace(f_, common, scaled, left, right);
    } else {
      big_.emplace(f_, common, scaled, left, right);
    }
    hull_ = f_.support_hull();
  }

  const DiscreteFunction& function() const { return f_; }
  const OperatorParams& params() const { return params_; }
  bool uses_fast_integers() const { return fast_.has_value(); }

  DiscreteEvaluation at(std::int64_t x) const {
    if (f_.has_zero_tails()) {
      return fast_ ? detail::evaluate_zero_tails(*fast_, hull_, x, budget_) : detail::evaluate_zero_tails(*big_, hull_, x, budget_);
    }
    return fast_ ? evaluate_with_tails(*fast_, x) : evaluate_with_tails(*big_, x);
  }

 private:
  template <typename Ints>
  DiscreteEvaluation evaluate_with_tails(const detail::ScaledFunction<Ints>& sf, std::int64_t x) const {
    using Int = typename Ints::Int;
    const Rational limit = tail_limit(f_, params_);
    const Rational& a = f_.left_tail();
    const Rational& b = f_.right_tail();
    auto as_rational = [&](const detail::Candidate<Int>& c) {
      return Rational(Ints::big(typename Ints::Wide(c.sum)), sf.scale * BigInt(2 * c.radius + 1));
    };

    if (f_.values().empty()) {  // constant function
      DiscreteEvaluation out{a, DiscreteWindow{x, 0}, Attainment::Window, a};
      return out;
    }

    // Excess of f over the tail step g = A on (-inf, split), B on [split, inf),
    // for the better of the two natural split points.
    const std::int64_t s0 = f_.support_start();
    const std::int64_t s1 = f_.support_end();
    Rational excess_right(0), excess_left(0);
    for (const auto& v : f_.values()) {
      if (v > b) excess_right += v - b;  // split = s0
      if (v > a) excess_left += v - a;   // split = s1
    }
    const bool split_at_start = excess_right <= excess_left;
    const Rational excess = split_at_start ? excess_right : excess_left;
    const std::int64_t split = split_at_start ? s0 : s1;
    const Rational one_plus_alpha = Rational(1) + params_.alpha;
    const Rational half_span = one_plus_alpha / Rational(2);

    // Upper bound for windows of radius > searched: avg f <= avg g + excess/(2R+1),
    // and the admissible avg g is a linear-fractional function of R.
    auto enclosure_above = [&](std::int64_t searched) {
      Rational g_sup = a;
      if (a != b) {
        const std::int64_t lead = b > a ? x - split + 2 : split - x + 2;
        const std::int64_t r = searched + 1;
        const Rational at_r = (Rational(lead) + one_plus_alpha * Rational(r)) / Rational(2 * r + 1);
        Rational h = max(at_r, half_span);
        h = min(h, Rational(1));
        g_sup = b > a ? a + (b - a) * h : b + (a - b) * h;
      }
      return g_sup + excess / Rational(2 * searched + 3);
    };

    detail::Candidate<Int> best{sf.value(x), 0, x};
    std::int64_t searched = 0;
    std::int64_t target = std::max<std::int64_t>(16, s1 - s0);
    Rational best_value = as_rational(best);
    Rational upper;
    while (true) {
      for (std::int64_t radius = searched + 1; radius <= target; ++radius) {
        const std::int64_t dev = budget_(radius);
        // Windows entirely inside one tail all have the same sum, so centres
        // are clamped to where they can still see the explicit block.
        const std::int64_t ylo = std::max(x - dev, s0 - radius - 1);
        const std::int64_t yhi = std::min(x + dev, s1 + radius);
        const bool x_outside = x < ylo || x > yhi;
        if (detail::scan_radius(sf, x, radius, ylo, yhi, x_outside, best)) best_value = as_rational(best);
      }
      searched = target;
      upper = max(best_value, enclosure_above(searched));
      if (upper - max(best_value, limit) <= params_.enclosure_epsilon || searched >= kMaxTailSearchRadius) break;
      target = std::min(kMaxTailSearchRadius, 2 * target);
    }

    DiscreteEvaluation out;
    if (limit > best_value) {
      out.value = limit;
      out.source = Attainment::TailLimit;
    } else {
      out.value = best_value;
      out.window = DiscreteWindow{best.center, best.radius};
      out.source = Attainment::Window;
    }
    out.enclosure_upper = max(upper, out.value);
    return out;
  }

  DiscreteFunction f_;
  OperatorParams params_;
  DeviationBudget budget_;
  std::optional<IntRange> hull_;
  std::optional<detail::ScaledFunction<detail::FastInts>> fast_;
  std::optional<detail::ScaledFunction<detail::BigInts>> big_;
};

inline DiscreteEvaluation maximal_at(const DiscreteFunction& f, std::int64_t x, const OperatorParams& params) {
  return DiscreteMaximalOperator(f, params).at(x);
}

/// Pointwise evaluations for every x in range, in index order.
inline std::vector<DiscreteEvaluation> maximal_on_range(const DiscreteMaximalOperator& op, const IntRange& range) {
  if (range.first > range.last) throw std::invalid_argument("range must satisfy first <= last");
  return parallel_map(static_cast<std::size_t>(range.size()),
                      [&](std::size_t k) { return op.at(range.first + static_cast<std::int64_t>(k)); });
}

inline std::vector<DiscreteEvaluation> maximal_on_range(const DiscreteFunction& f, const IntRange& range,
                                                        const OperatorParams& params) {
  return maximal_on_range(DiscreteMaximalOperator(f, params), range);
}

}  // namespace hlmax
