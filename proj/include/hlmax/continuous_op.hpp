#pragma once

// Continuous nontangential maximal operator on step functions
//
//   M^a f(x) = sup { (1/2t) int_{y-t}^{y+t} f : t > 0, |x - y| <= a t }
//
// In window coordinates (l, r) = (y - t, y + t) the admissible set is the cone
//   (1 + a) l + (1 - a) r <= 2x,   (1 - a) l + (1 + a) r >= 2x
// with apex (x, x). Lines l = t_i and r = t_j through the breakpoints cut it
// into cells on which the average (F(r) - F(l)) / (r - l) is linear-fractional,
// so the supremum is the best of: the cell vertices, the limit at the apex
// (shrinking windows) and the limit along unbounded rays (the tail limit).

#include "hlmax/core.hpp"
#include "hlmax/discrete_op.hpp"
#include "hlmax/parallel.hpp"
#include "hlmax/variation.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hlmax {

using ContinuousEvaluation = PointEvaluation<ContinuousWindow>;

/// Admissible windows [l, r] for the point x.
struct ConeConstraint {
  Rational x;
  Rational alpha;

  bool admits(const Rational& l, const Rational& r) const {
    if (!(l < r)) return false;
    const Rational two_x = Rational(2) * x;
    const Rational plus = Rational(1) + alpha;
    const Rational minus = Rational(1) - alpha;
    return plus * l + minus * r <= two_x && minus * l + plus * r >= two_x;
  }
  bool admits(const ContinuousWindow& w) const { return admits(w.left, w.right); }
};

/// Six consecutive thirds-of-half-width pieces A..F of a window.
struct SixPartition {
  ContinuousWindow window;

  explicit SixPartition(ContinuousWindow w) : window(std::move(w)) {
    if (!(window.left < window.right)) throw std::invalid_argument("SixPartition needs a window of positive width");
  }

  /// Part k in 0..5 (A = 0, ..., F = 5).
  ContinuousWindow part(int k) const {
    if (k < 0 || k > 5) throw std::out_of_range("SixPartition part index");
    const Rational step = window.width() / Rational(6);
    return ContinuousWindow{window.left + step * Rational(k), window.left + step * Rational(k + 1)};
  }
  static std::string name(int k) { return k >= 0 && k <= 5 ? std::string(1, static_cast<char>('A' + k)) : "?"; }
};

inline Rational tail_limit(const StepFunction& f, const Rational& alpha) {
  const Rational& a = f.left_tail();
  const Rational& b = f.right_tail();
  return (a + b) / Rational(2) + min(alpha, Rational(1)) * abs(b - a) / Rational(2);
}

/// Limit of admissible averages as the window shrinks to x: the largest
/// lambda f(x-) + (1 - lambda) f(x+) over lambda in
/// [max(0, (1 - a)/2), min(1, (1 + a)/2)].
inline Rational shrinking_limit(const StepFunction& f, const Rational& x, const Rational& alpha) {
  const Rational& below = f.left_limit(x);
  const Rational& above = f.right_limit(x);
  const Rational lo = max(Rational(0), (Rational(1) - alpha) / Rational(2));
  const Rational hi = min(Rational(1), (Rational(1) + alpha) / Rational(2));
  const Rational lambda = below > above ? hi : lo;
  return lambda * below + (Rational(1) - lambda) * above;
}

/// Exact M^a f(x) for step functions. Construction tabulates the averages
/// between pairs of breakpoints together with the range of x for which the
/// pair is admissible; evaluation then only has to add the vertices lying on
/// the two cone lines.
class ContinuousMaximalOperator {
 public:
  ContinuousMaximalOperator(StepFunction f, Rational alpha) : f_(std::move(f)), alpha_(std::move(alpha)) {
    if (alpha_.sign() <= 0) throw InputError("the continuous operator needs alpha > 0");
    plus_ = Rational(1) + alpha_;
    minus_ = Rational(1) - alpha_;
    inv_plus_ = Rational(1) / plus_;
    if (!minus_.is_zero()) inv_minus_ = Rational(1) / minus_;
    limit_ = tail_limit(f_, alpha_);
    const auto& t = f_.breakpoints();
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        PairEntry e;
        e.value = (f_.antiderivative_at_break(j) - f_.antiderivative_at_break(i)) / (t[j] - t[i]);
        e.x_lo = (plus_ * t[i] + minus_ * t[j]) / Rational(2);
        e.x_hi = (minus_ * t[i] + plus_ * t[j]) / Rational(2);
        e.i = i;
        e.j = j;
        pairs_.push_back(std::move(e));
      }
    }
    std::stable_sort(pairs_.begin(), pairs_.end(), [](const PairEntry& a, const PairEntry& b) { return a.value > b.value; });
    for (const auto& bp : t) {
      plus_t_.push_back(plus_ * bp);
      minus_t_.push_back(minus_ * bp);
    }
  }

  const StepFunction& function() const { return f_; }
  const Rational& alpha() const { return alpha_; }

  ContinuousEvaluation at(const Rational& x) const {
    Best best;
    const auto& t = f_.breakpoints();
    const Rational two_x = Rational(2) * x;
    auto consider = [&](const Rational& l, const Rational& r) {
      if (!(l < r)) return;
      if (plus_ * l + minus_ * r > two_x || minus_ * l + plus_ * r < two_x) return;
      best.offer(x, l, r, f_.integral(l, r) / (r - l));
    };

    // Breakpoint pairs: the table is sorted by value, so the first admissible
    // entry wins up to ties.
    for (const auto& e : pairs_) {
      if (best.have && e.value < best.value) break;
      if (x < e.x_lo || x > e.x_hi) continue;
      best.offer(x, t[e.i], t[e.j], e.value);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      // l = t_i on either cone line, then r = t_i on either cone line
      if (!minus_.is_zero()) consider(t[i], (two_x - plus_t_[i]) * inv_minus_);
      consider(t[i], (two_x - minus_t_[i]) * inv_plus_);
      consider((two_x - minus_t_[i]) * inv_plus_, t[i]);
      if (!minus_.is_zero()) consider((two_x - plus_t_[i]) * inv_minus_, t[i]);
    }

    const Rational shrink = shrinking_limit(f_, x, alpha_);
    ContinuousEvaluation out;
    if (limit_ > shrink && (!best.have || limit_ > best.value)) {
      out.value = limit_;
      out.source = Attainment::TailLimit;
    } else if (!best.have || shrink >= best.value) {
      out.value = shrink;
      out.source = Attainment::ShrinkingLimit;
    } else {
      out.value = best.value;
      out.window = ContinuousWindow{best.l, best.r};
      out.source = Attainment::Window;
    }
    out.enclosure_upper = out.value;
    return out;
  }

 private:
  struct PairEntry {
    Rational value;
    Rational x_lo;
    Rational x_hi;
    std::size_t i = 0;
    std::size_t j = 0;
  };

  // Ties prefer the narrower window, then the centre closer to x, then the
  // leftmost one.
  struct Best {
    bool have = false;
    Rational value;
    Rational l;
    Rational r;

    void offer(const Rational& x, const Rational& nl, const Rational& nr, const Rational& v) {
      if (have) {
        if (v < value) return;
        if (v == value) {
          const Rational w_new = nr - nl;
          const Rational w_old = r - l;
          if (w_new > w_old) return;
          if (w_new == w_old) {
            const Rational d_new = abs(nl + nr - Rational(2) * x);
            const Rational d_old = abs(l + r - Rational(2) * x);
            if (d_new > d_old || (d_new == d_old && !(nl < l))) return;
          }
        }
      }
      have = true;
      value = v;
      l = nl;
      r = nr;
    }
  };

  StepFunction f_;
  Rational alpha_;
  Rational plus_;
  Rational minus_;
  Rational inv_plus_;
  Rational inv_minus_;
  Rational limit_;
  std::vector<PairEntry> pairs_;
  std::vector<Rational> plus_t_;
  std::vector<Rational> minus_t_;
};

inline ContinuousEvaluation maximal_at_step(const StepFunction& f, const Rational& x, const Rational& alpha) {
  return ContinuousMaximalOperator(f, alpha).at(x);
}

/// count equally spaced points from lo to hi inclusive. Refining count - 1
/// subintervals by a factor k keeps every old point.
inline std::vector<Rational> uniform_grid(const Rational& lo, const Rational& hi, std::size_t count) {
  if (count < 2) throw InputError("a grid needs at least two points");
  if (!(lo < hi)) throw InputError("grid bounds must satisfy lo < hi");
  std::vector<Rational> out;
  out.reserve(count);
  const Rational step = (hi - lo) / Rational(static_cast<std::int64_t>(count - 1));
  for (std::size_t k = 0; k < count; ++k) out.push_back(lo + step * Rational(static_cast<std::int64_t>(k)));
  return out;
}

inline std::vector<ContinuousEvaluation> maximal_on_grid(const ContinuousMaximalOperator& op, const std::vector<Rational>& grid) {
  return parallel_map(grid.size(), [&](std::size_t k) { return op.at(grid[k]); });
}

/// Result of find_peak_witness. On failure b is unset and trace explains why.
struct PeakWitness {
  std::optional<Rational> b;
  Rational f_b;
  std::string case_label;
  std::vector<std::string> trace;

  bool found() const { return b.has_value(); }
};

namespace detail {

/// Midpoint of the highest piece overlapping [lo, hi] if that piece reaches
/// threshold.
inline std::optional<Rational> highest_piece_at_least(const StepFunction& f, const Rational& lo, const Rational& hi,
                                                      const Rational& threshold) {
  std::optional<Rational> site;
  std::optional<Rational> top;
  f.for_each_piece_in(lo, hi, [&](const Rational& a, const Rational& b, const Rational& v) {
    if (!top || v > *top) {
      top = v;
      site = (a + b) / Rational(2);
    }
  });
  if (!top || *top < threshold) return std::nullopt;
  return site;
}

}  // namespace detail

/// Point b in (p, q) with f(b) >= v_r - delta for a peak p < r < q of sampled
/// M^a f values, following the shrinking-window / six-part case analysis.
/// at_r must be the evaluation of M^a f at r.
inline PeakWitness find_peak_witness(const StepFunction& f, const Peak<Rational>& peak, const ContinuousEvaluation& at_r,
                                     const Rational& alpha, const Rational& delta = Rational(0)) {
  PeakWitness out;
  auto log = [&](std::string line) { out.trace.push_back(std::move(line)); };
  const Rational& r = peak.r;
  const Rational threshold = peak.vr - delta;
  log("peak p=" + peak.p.str() + " r=" + r.str() + " q=" + peak.q.str() + " v_r=" + peak.vr.str() + " alpha=" + alpha.str());
  if (at_r.value != peak.vr) log("warning: supplied evaluation " + at_r.value.str() + " differs from v_r");

  std::optional<Rational> b;
  switch (at_r.source) {
    case Attainment::TailLimit:
      log("supremum at r is the tail limit; no finite window to work with");
      out.case_label = "tail";
      break;
    case Attainment::ShrinkingLimit: {
      out.case_label = "shrinking";
      if (f.right_limit(r) >= threshold) {
        b = r;
        log("f(r+) = " + f.right_limit(r).str() + " reaches the threshold; b = r");
      } else if (f.left_limit(r) >= threshold) {
        Rational left = peak.p;
        const auto& t = f.breakpoints();
        auto it = std::lower_bound(t.begin(), t.end(), r);
        if (it != t.begin() && *std::prev(it) > left) left = *std::prev(it);
        b = (left + r) / Rational(2);
        log("f(r-) = " + f.left_limit(r).str() + " reaches the threshold; b just left of r");
      } else {
        log("neither one-sided limit at r reaches the threshold");
      }
      break;
    }
    case Attainment::Window: {
      if (!at_r.window) {
        log("window evaluation without a window");
        break;
      }
      const SixPartition six(*at_r.window);
      log("window [" + at_r.window->left.str() + ", " + at_r.window->right.str() + "]");
      const Rational y = at_r.window->center();
      const bool left_side = average_step(f, ContinuousWindow{at_r.window->left, y}) >= peak.vr;
      log(std::string("side ") + (left_side ? "ABC" : "DEF"));
      const int outer = left_side ? 0 : 5;
      const int middle = left_side ? 1 : 4;
      auto avg = [&](int k) { return average_step(f, six.part(k)); };
      for (int k : {2, 3}) {
        if (avg(k) >= peak.vr) {
          const auto part = six.part(k);
          b = detail::highest_piece_at_least(f, part.left, part.right, threshold);
          out.case_label = "case1";
          log("case 1 via " + SixPartition::name(k));
          break;
        }
      }
      if (!b && out.case_label.empty() && avg(middle) >= peak.vr) {
        const auto part = six.part(middle);
        b = detail::highest_piece_at_least(f, part.left, part.right, threshold);
        out.case_label = "case2";
        log("case 2 via " + SixPartition::name(middle));
      }
      if (!b && out.case_label.empty()) {
        out.case_label = "case3";
        const auto part = six.part(outer);
        // halves of the outer part, taken from the side next to the middle part
        Rational far = left_side ? part.left : part.right;
        Rational near = left_side ? part.right : part.left;
        for (int k = 1; k <= 256 && !b; ++k) {
          const Rational mid = (far + near) / Rational(2);
          const Rational lo = left_side ? mid : near;
          const Rational hi = left_side ? near : mid;
          b = detail::highest_piece_at_least(f, lo, hi, threshold);
          if (b) log("case 3 stops at half " + std::to_string(k));
          near = mid;
        }
        if (!b) log("case 3 halving exhausted");
      }
      if (!b) log("no piece in the selected part reaches the threshold");
      break;
    }
  }

  if (!b) return out;
  const Rational fb = f(*b);
  if (!(peak.p < *b && *b < peak.q)) {
    log("candidate b = " + b->str() + " lies outside (p, q)");
    return out;
  }
  if (fb < threshold) {
    log("candidate b = " + b->str() + " has f(b) = " + fb.str() + " below the threshold");
    return out;
  }
  out.b = *b;
  out.f_b = fb;
  log("b = " + b->str() + ", f(b) = " + fb.str());
  return out;
}

}  // namespace hlmax
