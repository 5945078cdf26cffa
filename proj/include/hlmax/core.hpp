#pragma once

#include "hlmax/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hlmax {

/// Raised for malformed user input (bad JSON fields, invalid function data).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inclusive integer interval [first..last].
struct IntRange {
  std::int64_t first = 0;
  std::int64_t last = 0;

  std::int64_t size() const { return last < first ? 0 : last - first + 1; }
  bool contains(std::int64_t i) const { return first <= i && i <= last; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// The odd window [center - radius .. center + radius].
struct DiscreteWindow {
  std::int64_t center = 0;
  std::int64_t radius = 0;

  std::int64_t left() const { return center - radius; }
  std::int64_t right() const { return center + radius; }
  std::int64_t size() const { return 2 * radius + 1; }
  bool contains(std::int64_t i) const { return left() <= i && i <= right(); }
  friend bool operator==(const DiscreteWindow&, const DiscreteWindow&) = default;
};

/// The closed interval [left, right] with left < right.
struct ContinuousWindow {
  Rational left;
  Rational right;

  Rational center() const { return (left + right) / Rational(2); }
  Rational half_width() const { return (right - left) / Rational(2); }
  Rational width() const { return right - left; }
  friend bool operator==(const ContinuousWindow&, const ContinuousWindow&) = default;
};

/// How the discrete deviation budget alpha*R is rounded to an integer.
enum class Rounding { Ceil, Floor, ExactReal };

inline std::string to_string(Rounding r) {
  switch (r) {
    case Rounding::Ceil: return "ceil";
    case Rounding::Floor: return "floor";
    case Rounding::ExactReal: return "exact";
  }
  return "?";
}

inline Rounding parse_rounding(const std::string& s) {
  if (s == "ceil") return Rounding::Ceil;
  if (s == "floor") return Rounding::Floor;
  if (s == "exact") return Rounding::ExactReal;
  throw InputError("unknown rounding mode \"" + s + "\" (expected ceil, floor or exact)");
}

struct OperatorParams {
  Rational alpha{1, 3};
  Rounding rounding = Rounding::Ceil;
  /// Target width of certified enclosures; only used when tails are nonzero.
  Rational enclosure_epsilon{1, 100};

  void validate() const {
    if (alpha.sign() < 0) throw InputError("alpha must be >= 0");
    if (enclosure_epsilon.sign() <= 0) throw InputError("enclosure epsilon must be > 0");
  }
  friend bool operator==(const OperatorParams&, const OperatorParams&) = default;
};

/// f : Z -> Q>=0 given by a finite block of values starting at support_start
/// and constant tails on either side.
class DiscreteFunction {
 public:
  DiscreteFunction() : DiscreteFunction(0, {}, Rational(0), Rational(0)) {}

  DiscreteFunction(std::int64_t support_start, std::vector<Rational> values, Rational left_tail = Rational(0),
                   Rational right_tail = Rational(0))
      : start_(support_start), values_(std::move(values)), left_(std::move(left_tail)), right_(std::move(right_tail)) {
    if (left_.sign() < 0 || right_.sign() < 0) throw InputError("tails must be nonnegative");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i].sign() < 0) throw InputError("values[" + std::to_string(i) + "] is negative");
    }
    if (values_.empty() && left_ != right_) {
      throw InputError("a function with no support values must have equal tails");
    }
    prefix_.reserve(values_.size() + 1);
    prefix_.emplace_back(0);
    for (const auto& v : values_) prefix_.push_back(prefix_.back() + v);
  }

  /// Builds |f| from possibly signed data.
  static DiscreteFunction from_signed(std::int64_t support_start, std::vector<Rational> values, Rational left_tail,
                                      Rational right_tail) {
    for (auto& v : values) v = abs(v);
    return DiscreteFunction(support_start, std::move(values), abs(left_tail), abs(right_tail));
  }

  /// Indicator of a finite set of integers.
  static DiscreteFunction indicator(const std::vector<std::int64_t>& sites) {
    if (sites.empty()) return DiscreteFunction();
    auto [lo, hi] = std::minmax_element(sites.begin(), sites.end());
    std::vector<Rational> vals(static_cast<std::size_t>(*hi - *lo + 1), Rational(0));
    for (auto s : sites) vals[static_cast<std::size_t>(s - *lo)] = Rational(1);
    return DiscreteFunction(*lo, std::move(vals));
  }

  std::int64_t support_start() const { return start_; }
  /// One past the last explicit value.
  std::int64_t support_end() const { return start_ + static_cast<std::int64_t>(values_.size()); }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& left_tail() const { return left_; }
  const Rational& right_tail() const { return right_; }
  bool has_zero_tails() const { return left_.is_zero() && right_.is_zero(); }

  const Rational& operator()(std::int64_t i) const {
    if (i < start_) return left_;
    if (i >= support_end()) return right_;
    return values_[static_cast<std::size_t>(i - start_)];
  }

  /// Sum of the explicit values. Equals the total mass when the tails vanish.
  const Rational& mass() const { return prefix_.back(); }

  /// Sum of f(i) for i in [a..b], tails included. Empty when a > b.
  Rational sum_over(std::int64_t a, std::int64_t b) const {
    if (a > b) return Rational(0);
    Rational total(0);
    if (a < start_) total += left_ * Rational(std::min(b, start_ - 1) - a + 1);
    const std::int64_t end = support_end();
    if (b >= end) total += right_ * Rational(b - std::max(a, end) + 1);
    const std::int64_t lo = std::max(a, start_);
    const std::int64_t hi = std::min(b, end - 1);
    if (lo <= hi) total += prefix_[static_cast<std::size_t>(hi - start_ + 1)] - prefix_[static_cast<std::size_t>(lo - start_)];
    return total;
  }

  /// Sites where f is nonzero, as a hull. Only meaningful with zero tails.
  std::optional<IntRange> support_hull() const {
    std::optional<IntRange> out;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (values_[k].is_zero()) continue;
      const auto i = start_ + static_cast<std::int64_t>(k);
      if (!out) out = IntRange{i, i};
      out->last = i;
    }
    return out;
  }

  friend bool operator==(const DiscreteFunction& a, const DiscreteFunction& b) {
    return a.start_ == b.start_ && a.values_ == b.values_ && a.left_ == b.left_ && a.right_ == b.right_;
  }

 private:
  std::int64_t start_;
  std::vector<Rational> values_;
  Rational left_;
  Rational right_;
  std::vector<Rational> prefix_;
};

/// Exact average of f over the odd window.
inline Rational average_discrete(const DiscreteFunction& f, const DiscreteWindow& w) {
  if (w.radius < 0) throw std::invalid_argument("window radius must be nonnegative");
  return f.sum_over(w.left(), w.right()) / Rational(w.size());
}

/// A piece [left, right) of a step function with its constant value. The
/// outermost pieces may be unbounded, signalled by nullopt.
struct StepPiece {
  std::optional<Rational> left;
  std::optional<Rational> right;
  Rational value;
};

/// Nonnegative right-continuous step function with finitely many rational
/// breakpoints and constant tails.
class StepFunction {
 public:
  StepFunction() : StepFunction({}, {}, Rational(0), Rational(0)) {}

  StepFunction(std::vector<Rational> breakpoints, std::vector<Rational> piece_values, Rational left_tail = Rational(0),
               Rational right_tail = Rational(0))
      : breaks_(std::move(breakpoints)), values_(std::move(piece_values)), left_(std::move(left_tail)), right_(std::move(right_tail)) {
    if (left_.sign() < 0 || right_.sign() < 0) throw InputError("tails must be nonnegative");
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
      if (!(breaks_[i - 1] < breaks_[i])) throw InputError("breakpoints must be strictly increasing");
    }
    if (breaks_.empty()) {
      if (!values_.empty()) throw InputError("piece values given without breakpoints");
      if (left_ != right_) throw InputError("a step function without breakpoints must have equal tails");
    } else if (values_.size() + 1 != breaks_.size()) {
      throw InputError("expected " + std::to_string(breaks_.size() - 1) + " piece values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (values_[i].sign() < 0) throw InputError("values[" + std::to_string(i) + "] is negative");
    }
    cumulative_.reserve(breaks_.size());
    if (!breaks_.empty()) {
      cumulative_.emplace_back(0);
      for (std::size_t i = 0; i < values_.size(); ++i) {
        cumulative_.push_back(cumulative_.back() + values_[i] * (breaks_[i + 1] - breaks_[i]));
      }
    }
  }

  static StepFunction from_signed(std::vector<Rational> breakpoints, std::vector<Rational> piece_values, Rational left_tail,
                                  Rational right_tail) {
    for (auto& v : piece_values) v = abs(v);
    return StepFunction(std::move(breakpoints), std::move(piece_values), abs(left_tail), abs(right_tail));
  }

  /// h * 1_[a, b)
  static StepFunction box(const Rational& a, const Rational& b, const Rational& height) {
    return StepFunction({a, b}, {height});
  }

  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& piece_values() const { return values_; }
  const Rational& left_tail() const { return left_; }
  const Rational& right_tail() const { return right_; }
  bool has_zero_tails() const { return left_.is_zero() && right_.is_zero(); }

  /// Number of pieces including both tails.
  std::size_t piece_count() const { return breaks_.size() + 1; }

  /// Piece k in left-to-right order; piece 0 is the left tail.
  StepPiece piece(std::size_t k) const {
    StepPiece p;
    if (k > 0) p.left = breaks_[k - 1];
    if (k < breaks_.size()) p.right = breaks_[k];
    p.value = k == 0 ? left_ : (k == breaks_.size() ? right_ : values_[k - 1]);
    return p;
  }

  /// Index of the piece containing s (right-continuous convention).
  std::size_t piece_index(const Rational& s) const {
    return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), s) - breaks_.begin());
  }

  const Rational& value_of_piece(std::size_t k) const {
    return k == 0 ? left_ : (k == breaks_.size() ? right_ : values_[k - 1]);
  }

  /// f(s) = f(s+).
  const Rational& operator()(const Rational& s) const { return value_of_piece(piece_index(s)); }
  const Rational& right_limit(const Rational& s) const { return (*this)(s); }
  /// f(s-).
  const Rational& left_limit(const Rational& s) const {
    const auto k = static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), s) - breaks_.begin());
    return value_of_piece(k);
  }

  /// Antiderivative normalised to vanish at the first breakpoint (or at 0
  /// when there are none).
  Rational antiderivative(const Rational& s) const {
    if (breaks_.empty()) return left_ * s;
    if (s < breaks_.front()) return left_ * (s - breaks_.front());
    const std::size_t k = piece_index(s);  // 1..m
    const Rational& t = breaks_[k - 1];
    return cumulative_[k - 1] + value_of_piece(k) * (s - t);
  }

  /// Antiderivative at breakpoint index i.
  const Rational& antiderivative_at_break(std::size_t i) const { return cumulative_[i]; }

  Rational integral(const Rational& l, const Rational& r) const { return antiderivative(r) - antiderivative(l); }

  /// Calls fn(lo, hi, value) for each piece overlapping [l, r] in positive length.
  void for_each_piece_in(const Rational& l, const Rational& r,
                         const std::function<void(const Rational&, const Rational&, const Rational&)>& fn) const {
    if (!(l < r)) return;
    std::size_t k = piece_index(l);
    Rational lo = l;
    while (true) {
      const bool last = k >= breaks_.size() || !(breaks_[k] < r);
      const Rational hi = last ? r : breaks_[k];
      if (lo < hi) fn(lo, hi, value_of_piece(k));
      if (last) break;
      lo = hi;
      ++k;
    }
  }

  Rational total_variation() const {
    if (breaks_.empty()) return Rational(0);
    Rational total(0);
    const Rational* prev = &left_;
    for (const auto& v : values_) {
      total += abs(v - *prev);
      prev = &v;
    }
    total += abs(right_ - *prev);
    return total;
  }

  /// Hull of the breakpoints, or nullopt for a constant function.
  std::optional<std::pair<Rational, Rational>> breakpoint_hull() const {
    if (breaks_.empty()) return std::nullopt;
    return std::make_pair(breaks_.front(), breaks_.back());
  }

  friend bool operator==(const StepFunction& a, const StepFunction& b) {
    return a.breaks_ == b.breaks_ && a.values_ == b.values_ && a.left_ == b.left_ && a.right_ == b.right_;
  }

 private:
  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
  Rational left_;
  Rational right_;
  std::vector<Rational> cumulative_;
};

inline Rational average_step(const StepFunction& f, const ContinuousWindow& w) {
  if (!(w.left < w.right)) throw std::invalid_argument("window must satisfy left < right");
  return f.integral(w.left, w.right) / w.width();
}

}  // namespace hlmax
