#pragma once

// Checkers for the variation bound and its supporting lemmas on concrete
// inputs. Every checker returns a VerificationReport whose witness records
// carry enough data to recompute the compared quantities from scratch.
//
// The discrete checkers have overloads taking a precomputed profile of the
// maximal function; tests use these to feed deliberately broken evaluators.

#include "hlmax/continuous_op.hpp"
#include "hlmax/core.hpp"
#include "hlmax/discrete_op.hpp"
#include "hlmax/json_io.hpp"
#include "hlmax/variation.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace hlmax {

enum class Claim { TheoremDiscrete, TheoremContinuousGrid, LemmaDominate, LemmaPlateau, PropExtremos, PeakTransfer };

inline const char* to_string(Claim c) {
  switch (c) {
    case Claim::TheoremDiscrete: return "theorem";
    case Claim::TheoremContinuousGrid: return "theorem_grid";
    case Claim::LemmaDominate: return "dominate";
    case Claim::LemmaPlateau: return "plateau";
    case Claim::PropExtremos: return "extremos";
    case Claim::PeakTransfer: return "peaks";
  }
  return "?";
}

inline Claim parse_claim(const std::string& s) {
  for (Claim c : {Claim::TheoremDiscrete, Claim::TheoremContinuousGrid, Claim::LemmaDominate, Claim::LemmaPlateau,
                  Claim::PropExtremos, Claim::PeakTransfer}) {
    if (s == to_string(c)) return c;
  }
  throw InputError("unknown claim \"" + s + "\" (expected theorem, theorem_grid, dominate, plateau, extremos or peaks)");
}

enum class Verdict { Holds, Violated, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct VerificationReport {
  Claim claim = Claim::TheoremDiscrete;
  std::string input_digest;
  Verdict verdict = Verdict::Holds;
  /// Holds was only established on a finite range / grid.
  bool range_relative = false;
  json witnesses = json::array();
  json numbers = json::object();

  bool holds() const { return verdict == Verdict::Holds; }
  bool violated() const { return verdict == Verdict::Violated; }

  json to_json() const {
    return json{{"claim", to_string(claim)},   {"input_digest", input_digest}, {"verdict", to_string(verdict)},
                {"range_relative", range_relative}, {"witnesses", witnesses},      {"numbers", numbers}};
  }
};

/// Digest of everything a checker result depends on.
inline std::string input_digest(Claim claim, const json& function, const json& params, const json& extra) {
  return digest(json{{"claim", to_string(claim)}, {"function", function}, {"params", params}, {"extra", extra}});
}

/// Values of M^a f on a contiguous integer range.
struct DiscreteProfile {
  IntRange range;
  std::vector<DiscreteEvaluation> evaluations;

  const DiscreteEvaluation& at(std::int64_t x) const { return evaluations.at(static_cast<std::size_t>(x - range.first)); }
  const Rational& value(std::int64_t x) const { return at(x).value; }
  bool exact() const {
    for (const auto& e : evaluations) {
      if (!e.exact()) return false;
    }
    return true;
  }
};

inline DiscreteProfile compute_profile(const DiscreteMaximalOperator& op, const IntRange& range) {
  return DiscreteProfile{range, maximal_on_range(op, range)};
}

/// Support hull padded by margin on both sides; [-margin..margin] when f
/// vanishes on its explicit block.
inline IntRange default_range(const DiscreteFunction& f, std::int64_t margin) {
  if (margin < 0) throw InputError("margin must be nonnegative");
  const auto hull = f.support_hull();
  if (!hull) return IntRange{-margin, margin};
  return IntRange{hull->first - margin, hull->last + margin};
}

namespace detail {

inline json extra_for_range(const IntRange& r) { return json{{"range", to_json(r)}}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Var(M f) <= Var(f)

inline VerificationReport check_theorem_discrete(const DiscreteFunction& f, const OperatorParams& params, const DiscreteProfile& profile) {
  VerificationReport rep;
  rep.claim = Claim::TheoremDiscrete;
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), detail::extra_for_range(profile.range));
  const Rational var_f = total_variation(f);
  rep.numbers["var_f"] = var_f.str();
  if (profile.range.size() < 2) {
    rep.numbers["var_maximal"] = "0";
    rep.range_relative = true;
    return rep;
  }
  // Per-step bounds on |v_{i+1} - v_i| from the enclosures; they collapse to
  // the exact value when every evaluation is exact.
  Rational lower(0), upper(0);
  for (std::size_t i = 0; i + 1 < profile.evaluations.size(); ++i) {
    const auto& a = profile.evaluations[i];
    const auto& b = profile.evaluations[i + 1];
    lower += max(Rational(0), max(b.value - a.enclosure_upper, a.value - b.enclosure_upper));
    upper += max(b.enclosure_upper - a.value, a.enclosure_upper - b.value);
  }
  if (lower == upper) {
    rep.numbers["var_maximal"] = lower.str();
  } else {
    rep.numbers["var_maximal_lower"] = lower.str();
    rep.numbers["var_maximal_upper"] = upper.str();
  }
  if (lower > var_f) {
    rep.verdict = Verdict::Violated;
    rep.witnesses.push_back(json{{"range", to_json(profile.range)}});
  } else if (upper <= var_f) {
    rep.verdict = Verdict::Holds;
    rep.range_relative = true;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

inline VerificationReport check_theorem_discrete(const DiscreteFunction& f, const OperatorParams& params, const IntRange& range) {
  return check_theorem_discrete(f, params, compute_profile(DiscreteMaximalOperator(f, params), range));
}

// ---------------------------------------------------------------------------
// M f >= f pointwise

inline VerificationReport check_lemma_dominate(const DiscreteFunction& f, const OperatorParams& params, const DiscreteProfile& profile) {
  VerificationReport rep;
  rep.claim = Claim::LemmaDominate;
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), detail::extra_for_range(profile.range));
  rep.range_relative = true;
  bool unresolved = false;
  for (std::int64_t x = profile.range.first; x <= profile.range.last; ++x) {
    const auto& e = profile.at(x);
    const Rational& fx = f(x);
    if (e.value >= fx) continue;
    if (e.enclosure_upper < fx) {
      rep.verdict = Verdict::Violated;
      rep.range_relative = false;
      rep.witnesses.push_back(json{{"x", x}, {"f", fx.str()}, {"maximal", e.enclosure_upper.str()}});
    } else {
      unresolved = true;
    }
  }
  if (rep.verdict == Verdict::Holds && unresolved) rep.verdict = Verdict::Inconclusive;
  return rep;
}

inline VerificationReport check_lemma_dominate(const DiscreteFunction& f, const OperatorParams& params, const IntRange& range) {
  return check_lemma_dominate(f, params, compute_profile(DiscreteMaximalOperator(f, params), range));
}

// ---------------------------------------------------------------------------
// Local maximum plateaus of M f contain a point where f attains the plateau value

struct PlateauWitness {
  std::int64_t r = 0;
  Rational K;
  std::optional<std::int64_t> m_prime;
  IntRange plateau_range;

  json to_json() const {
    json j{{"r", r}, {"K", K.str()}, {"plateau_range", hlmax::to_json(plateau_range)}};
    j["m_prime"] = m_prime ? json(*m_prime) : json(nullptr);
    return j;
  }
};

/// Maximal constant runs of the profile whose neighbours are both strictly
/// smaller. Runs touching the range boundary are returned separately when
/// their inner neighbour does not already rule them out.
struct PlateauScan {
  std::vector<IntRange> plateaus;
  std::vector<IntRange> boundary_runs;
};

inline PlateauScan scan_plateaus(const DiscreteProfile& profile) {
  PlateauScan out;
  const IntRange& R = profile.range;
  std::int64_t s = R.first;
  while (s <= R.last) {
    std::int64_t e = s;
    while (e < R.last && profile.value(e + 1) == profile.value(s)) ++e;
    const Rational& K = profile.value(s);
    const bool left_open = s == R.first;
    const bool right_open = e == R.last;
    const bool left_lower = left_open || profile.value(s - 1) < K;
    const bool right_lower = right_open || profile.value(e + 1) < K;
    if (left_lower && right_lower) {
      if (left_open || right_open) {
        out.boundary_runs.push_back(IntRange{s, e});
      } else {
        out.plateaus.push_back(IntRange{s, e});
      }
    }
    s = e + 1;
  }
  return out;
}

inline VerificationReport check_lemma_plateau(const DiscreteFunction& f, const OperatorParams& params, const DiscreteProfile& profile) {
  VerificationReport rep;
  rep.claim = Claim::LemmaPlateau;
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), detail::extra_for_range(profile.range));
  rep.range_relative = true;
  if (!f.has_zero_tails() || !profile.exact()) {
    rep.verdict = Verdict::Inconclusive;
    rep.numbers["reason"] = "nonzero tails";
    return rep;
  }
  const PlateauScan scan = scan_plateaus(profile);
  bool violated = false;
  for (const auto& run : scan.plateaus) {
    PlateauWitness w;
    w.r = run.first;
    w.K = profile.value(run.first);
    w.plateau_range = run;
    for (std::int64_t i = run.first; i <= run.last; ++i) {
      if (f(i) == w.K) {
        w.m_prime = i;
        break;
      }
    }
    if (!w.m_prime) violated = true;
    json j = w.to_json();
    if (!w.m_prime) j["f_values"] = [&] {
      json vals = json::array();
      for (std::int64_t i = run.first; i <= run.last; ++i) vals.push_back(f(i).str());
      return vals;
    }();
    rep.witnesses.push_back(std::move(j));
  }
  rep.numbers["plateaus"] = scan.plateaus.size();
  rep.numbers["boundary_runs"] = scan.boundary_runs.size();
  if (violated) {
    rep.verdict = Verdict::Violated;
    rep.range_relative = false;
  } else if (!scan.boundary_runs.empty()) {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

inline VerificationReport check_lemma_plateau(const DiscreteFunction& f, const OperatorParams& params, const IntRange& range) {
  return check_lemma_plateau(f, params, compute_profile(DiscreteMaximalOperator(f, params), range));
}

// ---------------------------------------------------------------------------
// Monotone stretches: M f(y) - M f(x) <= f(w) - f(z) with z = x

struct ExtremosWitness {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;
  std::optional<std::int64_t> w;
  Rational maximal_x;
  Rational maximal_y;
  /// w was not found inside the attaining window at y.
  bool from_fallback = false;

  bool valid(const DiscreteFunction& f) const {
    if (!w) return maximal_x == maximal_y;
    const bool beyond = y > x ? *w > x : *w < x;
    return beyond && f(*w) - f(z) >= maximal_y - maximal_x;
  }

  json to_json() const {
    json j{{"x", x}, {"y", y}, {"z", z}, {"maximal_x", maximal_x.str()}, {"maximal_y", maximal_y.str()}, {"from_fallback", from_fallback}};
    j["w"] = w ? json(*w) : json(nullptr);
    return j;
  }
};

namespace detail {

/// Site of largest f on the far side of x within [lo..hi] (first one on ties).
inline std::optional<std::int64_t> best_site_beyond(const DiscreteFunction& f, std::int64_t x, bool to_the_right, std::int64_t lo,
                                                    std::int64_t hi, const Rational& threshold) {
  if (to_the_right) lo = std::max(lo, x + 1);
  else hi = std::min(hi, x - 1);
  std::optional<std::int64_t> best;
  for (std::int64_t i = lo; i <= hi; ++i) {
    if (f(i) >= threshold && (!best || f(i) > f(*best))) best = i;
  }
  return best;
}

}  // namespace detail

/// Witness for one pair; precondition M f(x) <= M f(y) (the pair is swapped
/// otherwise, see the report numbers).
inline ExtremosWitness extremos_witness(const DiscreteFunction& f, std::int64_t x, std::int64_t y, const DiscreteEvaluation& at_x,
                                        const DiscreteEvaluation& at_y) {
  ExtremosWitness out;
  out.x = x;
  out.y = y;
  out.maximal_x = at_x.value;
  out.maximal_y = at_y.value;
  out.z = find_smaller_point(f, at_x.value, IntRange{x, x}).value_or(x);
  // equal values need no witness: the difference is 0
  if (x == y || at_x.value == at_y.value) return out;
  const bool right = y > x;
  if (at_y.window && at_y.window->radius == 0) {
    out.w = y;
    return out;
  }
  if (at_y.window) {
    out.w = detail::best_site_beyond(f, x, right, at_y.window->left(), at_y.window->right(), at_y.value);
  }
  if (!out.w) {
    const auto hull = f.support_hull();
    if (hull) out.w = detail::best_site_beyond(f, x, right, hull->first, hull->last, at_y.value);
    out.from_fallback = out.w.has_value();
  }
  return out;
}

inline VerificationReport check_prop_extremos(const DiscreteFunction& f, const OperatorParams& params, std::int64_t x, std::int64_t y) {
  VerificationReport rep;
  rep.claim = Claim::PropExtremos;
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), json{{"x", x}, {"y", y}});
  if (!f.has_zero_tails()) {
    rep.verdict = Verdict::Inconclusive;
    rep.numbers["reason"] = "nonzero tails";
    return rep;
  }
  const DiscreteMaximalOperator op(f, params);
  auto at_x = op.at(x);
  auto at_y = op.at(y);
  if (at_x.value > at_y.value) {
    std::swap(x, y);
    std::swap(at_x, at_y);
    rep.numbers["swapped"] = true;
  }
  const ExtremosWitness w = extremos_witness(f, x, y, at_x, at_y);
  rep.numbers["difference"] = (at_y.value - at_x.value).str();
  rep.witnesses.push_back(w.to_json());
  rep.verdict = w.valid(f) ? Verdict::Holds : Verdict::Violated;
  return rep;
}

/// All ordered pairs of the profile range at once. Per y the window search
/// is reduced to the extreme sites reaching M f(y), so each pair is O(1).
/// The report lists at most one failing pair.
inline VerificationReport check_prop_extremos_all_pairs(const DiscreteFunction& f, const OperatorParams& params,
                                                        const DiscreteProfile& profile) {
  VerificationReport rep;
  rep.claim = Claim::PropExtremos;
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), detail::extra_for_range(profile.range));
  rep.range_relative = true;
  if (!f.has_zero_tails() || !profile.exact()) {
    rep.verdict = Verdict::Inconclusive;
    rep.numbers["reason"] = "nonzero tails";
    return rep;
  }
  const IntRange& R = profile.range;
  const auto n = static_cast<std::size_t>(R.size());
  const auto hull = f.support_hull();

  // For each y: leftmost / rightmost site in its attaining window with f >= M f(y).
  std::vector<std::optional<std::int64_t>> win_left(n), win_right(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = profile.evaluations[k];
    if (!e.window) continue;
    for (std::int64_t i = e.window->left(); i <= e.window->right(); ++i) {
      if (f(i) >= e.value) {
        if (!win_left[k]) win_left[k] = i;
        win_right[k] = i;
      }
    }
  }
  // Fallback: the largest value of f strictly beyond x, with its first site.
  std::int64_t lo = R.first, hi = R.last;
  if (hull) {
    lo = std::min(lo, hull->first);
    hi = std::max(hi, hull->last);
  }
  const auto span = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::int64_t> suffix_arg(span + 1, hi + 1), prefix_arg(span + 1, lo - 1);
  for (std::size_t k = span; k-- > 0;) {
    const std::int64_t i = lo + static_cast<std::int64_t>(k);
    const std::int64_t prev = suffix_arg[k + 1];
    suffix_arg[k] = (prev > hi || f(i) >= f(prev)) ? i : prev;
  }
  for (std::size_t k = 0; k < span; ++k) {
    const std::int64_t i = lo + static_cast<std::int64_t>(k);
    const std::int64_t prev = prefix_arg[k];
    prefix_arg[k + 1] = (prev < lo || f(i) > f(prev)) ? i : prev;
  }

  std::uint64_t pairs = 0, fallback = 0, failures = 0;
  for (std::size_t kx = 0; kx < n; ++kx) {
    const std::int64_t x = R.first + static_cast<std::int64_t>(kx);
    const Rational& mx = profile.evaluations[kx].value;
    const Rational& fx = f(x);
    for (std::size_t ky = 0; ky < n; ++ky) {
      if (kx == ky) continue;
      const auto& ey = profile.evaluations[ky];
      if (mx > ey.value) continue;
      ++pairs;
      if (mx == ey.value) continue;
      const std::int64_t y = R.first + static_cast<std::int64_t>(ky);
      const bool right = y > x;
      std::optional<std::int64_t> w;
      bool used_fallback = false;
      if (ey.window && ey.window->radius == 0) {
        w = y;
      } else if (right && win_right[ky] && *win_right[ky] > x) {
        w = win_right[ky];
      } else if (!right && win_left[ky] && *win_left[ky] < x) {
        w = win_left[ky];
      } else {
        used_fallback = true;
        std::int64_t cand;
        if (right) cand = x + 1 > hi ? hi + 1 : suffix_arg[static_cast<std::size_t>(std::max(x + 1, lo) - lo)];
        else cand = x - 1 < lo ? lo - 1 : prefix_arg[static_cast<std::size_t>(std::min(x - 1, hi) - lo + 1)];
        if (cand >= lo && cand <= hi && f(cand) >= ey.value) w = cand;
      }
      if (used_fallback) ++fallback;
      const bool ok = w && f(*w) - fx >= ey.value - mx;
      if (!ok) {
        ++failures;
        if (rep.witnesses.empty()) {
          ExtremosWitness bad;
          bad.x = x;
          bad.y = y;
          bad.z = x;
          bad.w = w;
          bad.maximal_x = mx;
          bad.maximal_y = ey.value;
          bad.from_fallback = used_fallback;
          rep.witnesses.push_back(bad.to_json());
        }
      }
    }
  }
  rep.numbers["pairs"] = pairs;
  rep.numbers["fallback_pairs"] = fallback;
  rep.numbers["failures"] = failures;
  if (failures > 0) {
    rep.verdict = Verdict::Violated;
    rep.range_relative = false;
  }
  return rep;
}

inline VerificationReport check_prop_extremos_all_pairs(const DiscreteFunction& f, const OperatorParams& params, const IntRange& range) {
  return check_prop_extremos_all_pairs(f, params, compute_profile(DiscreteMaximalOperator(f, params), range));
}

// ---------------------------------------------------------------------------
// Peak transfer: Var_P(M f) <= Var_P'(f) + n delta for a transferred system P'

namespace detail {

inline json system_json(const PeakSystem<std::int64_t>& s) {
  json arr = json::array();
  for (const auto& p : s.peaks) {
    arr.push_back(json{{"p", p.p}, {"r", p.r}, {"q", p.q}, {"vp", p.vp.str()}, {"vr", p.vr.str()}, {"vq", p.vq.str()}});
  }
  return arr;
}

inline json system_json(const PeakSystem<Rational>& s) {
  json arr = json::array();
  for (const auto& p : s.peaks) {
    arr.push_back(json{{"p", p.p.str()}, {"r", p.r.str()}, {"q", p.q.str()}, {"vp", p.vp.str()}, {"vr", p.vr.str()}, {"vq", p.vq.str()}});
  }
  return arr;
}

/// Shared tail of both peak-transfer checkers.
template <typename Site>
void finish_transfer(VerificationReport& rep, const PeakSystem<Site>& system, const std::vector<std::optional<Site>>& a,
                     const std::vector<std::optional<Site>>& b, const std::vector<Rational>& fa, const std::vector<Rational>& fb,
                     const Rational& delta) {
  auto site_json = [](const std::optional<Site>& s) -> json {
    if (!s) return nullptr;
    if constexpr (std::is_same_v<Site, Rational>) return s->str();
    else return *s;
  };
  json a_json = json::array(), b_json = json::array();
  for (const auto& s : a) a_json.push_back(site_json(s));
  for (const auto& s : b) b_json.push_back(site_json(s));
  rep.witnesses.push_back(json{{"system", system_json(system)}, {"a", a_json}, {"b", b_json}});

  const Rational lhs = system.variation();
  rep.numbers["var_system_maximal"] = lhs.str();
  for (const auto& s : a) {
    if (!s) {
      rep.verdict = Verdict::Violated;
      rep.numbers["failure"] = "missing a";
      return;
    }
  }
  for (const auto& s : b) {
    if (!s) {
      rep.verdict = Verdict::Violated;
      rep.numbers["failure"] = "missing b";
      return;
    }
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(*a[i] < *b[i] && *b[i] < *a[i + 1])) {
      rep.verdict = Verdict::Violated;
      rep.numbers["failure"] = "sites do not interleave at peak " + std::to_string(i);
      return;
    }
  }
  Rational rhs(0);
  for (std::size_t i = 0; i < b.size(); ++i) rhs += Rational(2) * fb[i] - fa[i] - fa[i + 1];
  const Rational slack = delta * Rational(static_cast<std::int64_t>(b.size()));
  rep.numbers["var_system_f"] = rhs.str();
  rep.numbers["slack"] = slack.str();
  rep.verdict = lhs <= rhs + slack ? Verdict::Holds : Verdict::Violated;
}

}  // namespace detail

/// Discrete transfer: b_i is a site of the plateau of r_i where f equals the
/// plateau value (any site in (p_i, q_i) with f >= M f(r_i) as a fallback),
/// a_i = p_i since f <= M f pointwise.
inline VerificationReport check_peak_transfer(const DiscreteMaximalOperator& op, const PeakSystem<std::int64_t>& system,
                                              const Rational& delta = Rational(0)) {
  const DiscreteFunction& f = op.function();
  VerificationReport rep;
  rep.claim = Claim::PeakTransfer;
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(op.params()), json{{"system", detail::system_json(system)}});
  if (!system.well_formed()) throw std::invalid_argument("check_peak_transfer: malformed peak system");
  if (system.peaks.empty()) {
    rep.numbers["var_system_maximal"] = "0";
    return rep;
  }
  const std::size_t n = system.peaks.size();
  std::vector<std::optional<std::int64_t>> a(n + 1), b(n);
  std::vector<Rational> fa(n + 1), fb(n);
  std::uint64_t fallbacks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pk = system.peaks[i];
    const Rational K = op.at(pk.r).value;
    std::int64_t s = pk.r, e = pk.r;
    while (s - 1 > pk.p && op.at(s - 1).value == K) --s;
    while (e + 1 < pk.q && op.at(e + 1).value == K) ++e;
    for (std::int64_t m = s; m <= e && !b[i]; ++m) {
      if (f(m) == K) b[i] = m;
    }
    if (!b[i]) {
      for (std::int64_t m = pk.p + 1; m < pk.q && !b[i]; ++m) {
        if (f(m) >= K) b[i] = m;
      }
      if (b[i]) ++fallbacks;
    }
    if (b[i]) fb[i] = f(*b[i]);
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const std::int64_t p = i < n ? system.peaks[i].p : system.peaks[n - 1].q;
    const Rational& bound = i < n ? system.peaks[i].vp : system.peaks[n - 1].vq;
    a[i] = find_smaller_point(f, bound, IntRange{p, p});
    if (a[i]) fa[i] = f(*a[i]);
  }
  rep.numbers["plateau_fallbacks"] = fallbacks;
  detail::finish_transfer(rep, system, a, b, fa, fb, delta);
  return rep;
}

/// Builds the peak system of M f sampled on range and checks its transfer.
/// Without peaks the claim holds vacuously.
inline VerificationReport check_peak_transfer(const DiscreteFunction& f, const OperatorParams& params, const DiscreteProfile& profile) {
  const DiscreteMaximalOperator op(f, params);
  if (!f.has_zero_tails() || !profile.exact()) {
    VerificationReport rep;
    rep.claim = Claim::PeakTransfer;
    rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), detail::extra_for_range(profile.range));
    rep.verdict = Verdict::Inconclusive;
    rep.numbers["reason"] = "nonzero tails";
    return rep;
  }
  PeakSystem<std::int64_t> system;
  if (profile.range.size() >= 2) {
    std::vector<Rational> values;
    std::vector<std::int64_t> sites;
    for (std::int64_t x = profile.range.first; x <= profile.range.last; ++x) {
      sites.push_back(x);
      values.push_back(profile.value(x));
    }
    auto dec = decompose<std::int64_t>(values, sites);
    if (dec.system) system = *dec.system;
  }
  auto rep = check_peak_transfer(op, system);
  rep.input_digest = input_digest(rep.claim, to_json(f), to_json(params), detail::extra_for_range(profile.range));
  rep.range_relative = true;
  return rep;
}

inline VerificationReport check_peak_transfer(const DiscreteFunction& f, const OperatorParams& params, const IntRange& range) {
  return check_peak_transfer(f, params, compute_profile(DiscreteMaximalOperator(f, params), range));
}

// ---------------------------------------------------------------------------
// Continuous counterparts on sample grids

/// Sampled variation of M^a f on grid against Var(f). The sampled value is a
/// lower bound for Var(M^a f), so only Violated is absolute.
inline VerificationReport check_theorem_continuous_grid(const ContinuousMaximalOperator& op, const std::vector<Rational>& grid) {
  VerificationReport rep;
  rep.claim = Claim::TheoremContinuousGrid;
  json grid_json = json::array();
  for (const auto& g : grid) grid_json.push_back(g.str());
  rep.input_digest = input_digest(rep.claim, to_json(op.function()), json{{"alpha", op.alpha().str()}}, json{{"grid", grid_json}});
  const Rational var_f = op.function().total_variation();
  rep.numbers["var_f"] = var_f.str();
  rep.numbers["grid_points"] = grid.size();
  if (grid.size() < 2) {
    rep.numbers["var_sampled"] = "0";
    rep.range_relative = true;
    return rep;
  }
  const auto evals = maximal_on_grid(op, grid);
  std::vector<Rational> values;
  values.reserve(evals.size());
  for (const auto& e : evals) values.push_back(e.value);
  const Rational sampled = variation_over_sites(values);
  rep.numbers["var_sampled"] = sampled.str();
  if (sampled > var_f) {
    rep.verdict = Verdict::Violated;
    rep.witnesses.push_back(json{{"grid_size", grid.size()}});
  } else {
    rep.range_relative = true;
  }
  return rep;
}

/// Continuous transfer: b_i from find_peak_witness, a_i from the step
/// version of find_smaller_point centred at p_i inside (b_{i-1}, b_i); the
/// outer a's use (p_0 - 1, b_0) and (b_n, q_n + 1).
inline VerificationReport check_peak_transfer_continuous(const ContinuousMaximalOperator& op, const PeakSystem<Rational>& system,
                                                         const Rational& delta = Rational(0)) {
  const StepFunction& f = op.function();
  VerificationReport rep;
  rep.claim = Claim::PeakTransfer;
  rep.input_digest = input_digest(rep.claim, to_json(f), json{{"alpha", op.alpha().str()}, {"delta", delta.str()}},
                                  json{{"system", detail::system_json(system)}});
  if (!system.well_formed()) throw std::invalid_argument("check_peak_transfer_continuous: malformed peak system");
  if (system.peaks.empty()) {
    rep.numbers["var_system_maximal"] = "0";
    return rep;
  }
  const std::size_t n = system.peaks.size();
  std::vector<std::optional<Rational>> a(n + 1), b(n);
  std::vector<Rational> fa(n + 1), fb(n);
  json traces = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pk = system.peaks[i];
    const auto at_r = op.at(pk.r);
    auto pw = find_peak_witness(f, pk, at_r, op.alpha(), delta);
    traces.push_back(json{{"case", pw.case_label}, {"trace", pw.trace}});
    if (pw.found()) {
      b[i] = *pw.b;
      fb[i] = pw.f_b;
    }
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const Rational& p = i < n ? system.peaks[i].p : system.peaks[n - 1].q;
    const Rational& bound = i < n ? system.peaks[i].vp : system.peaks[n - 1].vq;
    const std::optional<Rational> lo = i == 0 ? std::optional<Rational>(p - Rational(1)) : b[i - 1];
    const std::optional<Rational> hi = i == n ? std::optional<Rational>(p + Rational(1)) : b[i];
    if (!lo || !hi || !(*lo < p && p < *hi)) continue;
    a[i] = find_smaller_point(f, bound, *lo, *hi, p);
    if (a[i]) fa[i] = f(*a[i]);
  }
  rep.numbers["witness_traces"] = traces;
  detail::finish_transfer(rep, system, a, b, fa, fb, delta);
  return rep;
}

/// Samples M^a f on grid, decomposes the samples and checks the transfer of
/// the resulting peak system.
inline VerificationReport check_peak_transfer_continuous(const ContinuousMaximalOperator& op, const std::vector<Rational>& grid,
                                                         const Rational& delta = Rational(0)) {
  PeakSystem<Rational> system;
  if (grid.size() >= 2) {
    const auto evals = maximal_on_grid(op, grid);
    std::vector<Rational> values;
    for (const auto& e : evals) values.push_back(e.value);
    auto dec = decompose<Rational>(values, grid);
    if (dec.system) system = *dec.system;
  }
  auto rep = check_peak_transfer_continuous(op, system, delta);
  rep.range_relative = true;
  return rep;
}

/// R <= floor((R-1)/2) + ceil(R/3) + ceil(floor((R-1)/2)/3) + 1 for R in
/// [1..limit]; returns the first failing R.
inline std::optional<std::int64_t> check_induction_inequality(std::int64_t limit) {
  for (std::int64_t R = 1; R <= limit; ++R) {
    const std::int64_t h = (R - 1) / 2;
    const std::int64_t rhs = h + (R + 2) / 3 + (h + 2) / 3 + 1;
    if (R > rhs) return R;
  }
  return std::nullopt;
}

}  // namespace hlmax
