#pragma once

// Exhaustive and seeded random sweeps over small discrete functions, plus a
// greedy shrinker for violations. Results never depend on the worker count:
// work items are evaluated independently and merged in enumeration order.

#include "hlmax/core.hpp"
#include "hlmax/discrete_op.hpp"
#include "hlmax/json_io.hpp"
#include "hlmax/parallel.hpp"
#include "hlmax/verify.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace hlmax {

inline std::vector<Rational> default_alpha_grid() {
  return {Rational(1, 4), Rational(3, 10), Rational(1, 3), Rational(2, 5), Rational(1, 2), Rational(1), Rational(2)};
}

inline std::vector<Claim> discrete_claims() {
  return {Claim::TheoremDiscrete, Claim::LemmaDominate, Claim::LemmaPlateau, Claim::PropExtremos, Claim::PeakTransfer};
}

/// Raised when a sweep would exceed its candidate budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t count, std::uint64_t budget)
      : std::runtime_error("search space has " + std::to_string(count) + " candidates, budget is " + std::to_string(budget)),
        count_(count) {}
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_;
};

struct SearchSpace {
  std::int64_t max_support_length = 5;
  std::vector<Rational> value_grid{Rational(0), Rational(1), Rational(2), Rational(3)};
  std::vector<Rational> alpha_grid = default_alpha_grid();
  std::vector<Rounding> rounding_modes{Rounding::Ceil};
  std::vector<Claim> claims = discrete_claims();
  /// Each function is checked on its support hull padded by this much.
  std::int64_t margin = 30;
  std::uint64_t budget = 1'000'000;
  /// When nonempty these functions replace the enumeration.
  std::vector<DiscreteFunction> functions;
};

struct ViolationRecord {
  DiscreteFunction function;
  OperatorParams params;
  Claim claim = Claim::TheoremDiscrete;
  IntRange range;
  json witness;
  bool shrunk = false;

  json to_json() const {
    return json{{"function", hlmax::to_json(function)}, {"params", hlmax::to_json(params)}, {"claim", to_string(claim)},
                {"range", hlmax::to_json(range)},       {"witness", witness},                 {"shrunk", shrunk}};
  }

  static ViolationRecord from_json(const json& j) {
    ViolationRecord r;
    r.function = discrete_function_from_json(detail::require(j, "function", "$"), "$.function");
    r.params = params_from_json(detail::require(j, "params", "$"), "$.params");
    const json& c = detail::require(j, "claim", "$");
    if (!c.is_string()) throw InputError("$.claim: expected a string");
    r.claim = parse_claim(c.get<std::string>());
    r.range = range_from_json(detail::require(j, "range", "$"), "$.range");
    r.witness = j.value("witness", json(nullptr));
    r.shrunk = j.value("shrunk", false);
    return r;
  }
};

struct VerdictCounts {
  std::uint64_t holds = 0;
  std::uint64_t violated = 0;
  std::uint64_t inconclusive = 0;

  void add(Verdict v) {
    switch (v) {
      case Verdict::Holds: ++holds; break;
      case Verdict::Violated: ++violated; break;
      case Verdict::Inconclusive: ++inconclusive; break;
    }
  }
  std::uint64_t total() const { return holds + violated + inconclusive; }
};

struct SweepResult {
  /// Function x alpha x rounding combinations declared before running.
  std::uint64_t candidate_count = 0;
  /// Combinations actually checked.
  std::uint64_t visited = 0;
  std::map<Claim, VerdictCounts> verdicts;
  std::vector<ViolationRecord> violations;

  json summary() const {
    json per = json::object();
    for (const auto& [claim, c] : verdicts) {
      per[to_string(claim)] = json{{"holds", c.holds}, {"violated", c.violated}, {"inconclusive", c.inconclusive}};
    }
    return json{{"candidates", candidate_count}, {"visited", visited}, {"verdicts", per}, {"violations", violations.size()}};
  }
};

/// Runs one discrete claim on a profile.
inline VerificationReport run_claim(const DiscreteFunction& f, const OperatorParams& params, Claim claim, const DiscreteProfile& profile) {
  switch (claim) {
    case Claim::TheoremDiscrete: return check_theorem_discrete(f, params, profile);
    case Claim::LemmaDominate: return check_lemma_dominate(f, params, profile);
    case Claim::LemmaPlateau: return check_lemma_plateau(f, params, profile);
    case Claim::PropExtremos: return check_prop_extremos_all_pairs(f, params, profile);
    case Claim::PeakTransfer: return check_peak_transfer(f, params, profile);
    case Claim::TheoremContinuousGrid: break;
  }
  throw std::invalid_argument(std::string("claim ") + to_string(claim) + " does not apply to discrete functions");
}

inline VerificationReport run_claim(const DiscreteFunction& f, const OperatorParams& params, Claim claim, const IntRange& range) {
  return run_claim(f, params, claim, compute_profile(DiscreteMaximalOperator(f, params), range));
}

/// Re-runs the record's checker from its serialised data alone.
inline VerificationReport recheck(const ViolationRecord& record) {
  return run_claim(record.function, record.params, record.claim, record.range);
}

namespace detail {

inline Rational rational_gcd(const std::vector<Rational>& values) {
  BigInt num = 0, den = 1;
  for (const auto& v : values) {
    if (v.is_zero()) continue;
    num = boost::multiprecision::gcd(num, boost::multiprecision::abs(v.numerator()));
    den = boost::multiprecision::lcm(den, v.denominator());
  }
  return num == 0 ? Rational(0) : Rational(num, den);
}

inline std::vector<Rational> normalized_grid(std::vector<Rational> grid) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const auto& v : grid) {
    if (v.sign() < 0) throw InputError("value grid entries must be nonnegative");
  }
  return grid;
}

/// Visits canonical candidates in lexicographic order: support starts at 0,
/// first and last values nonzero, and no common factor g != 1 whose quotient
/// would also lie in the grid.
template <typename Fn>
void for_each_canonical(std::int64_t max_length, const std::vector<Rational>& grid_in, Fn&& fn) {
  const auto grid = normalized_grid(grid_in);
  if (grid.empty()) return;
  auto in_grid = [&](const Rational& v) { return std::binary_search(grid.begin(), grid.end(), v); };
  for (std::int64_t len = 1; len <= max_length; ++len) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
    std::vector<Rational> vals(static_cast<std::size_t>(len));
    while (true) {
      for (std::size_t k = 0; k < idx.size(); ++k) vals[k] = grid[idx[k]];
      if (!vals.front().is_zero() && !vals.back().is_zero()) {
        const Rational g = rational_gcd(vals);
        bool reducible = false;
        if (g != Rational(1) && !g.is_zero()) {
          reducible = std::all_of(vals.begin(), vals.end(), [&](const Rational& v) { return in_grid(v / g); });
        }
        if (!reducible) fn(vals);
      }
      std::size_t k = idx.size();
      while (k > 0 && idx[k - 1] + 1 == grid.size()) idx[--k] = 0;
      if (k == 0) break;
      ++idx[k - 1];
    }
  }
}

struct WorkItem {
  std::size_t function = 0;
  OperatorParams params;
};

inline std::vector<ViolationRecord> check_one(const DiscreteFunction& f, const OperatorParams& params, const std::vector<Claim>& claims,
                                              std::int64_t margin, std::vector<Verdict>& verdicts) {
  std::vector<ViolationRecord> out;
  const IntRange range = default_range(f, margin);
  const DiscreteProfile profile = compute_profile(DiscreteMaximalOperator(f, params), range);
  for (Claim c : claims) {
    auto rep = run_claim(f, params, c, profile);
    verdicts.push_back(rep.verdict);
    if (rep.violated()) {
      ViolationRecord rec;
      rec.function = f;
      rec.params = params;
      rec.claim = c;
      rec.range = range;
      rec.witness = rep.witnesses;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

inline SweepResult run_items(const std::vector<DiscreteFunction>& functions, const std::vector<WorkItem>& items,
                             const std::vector<Claim>& claims, std::int64_t margin) {
  struct Outcome {
    std::vector<ViolationRecord> violations;
    std::vector<Verdict> verdicts;
  };
  auto outcomes = parallel_map(items.size(), [&](std::size_t k) {
    Outcome o;
    o.violations = check_one(functions[items[k].function], items[k].params, claims, margin, o.verdicts);
    return o;
  });
  SweepResult res;
  res.candidate_count = items.size();
  for (auto& o : outcomes) {
    ++res.visited;
    for (std::size_t c = 0; c < claims.size(); ++c) res.verdicts[claims[c]].add(o.verdicts[c]);
    for (auto& v : o.violations) res.violations.push_back(std::move(v));
  }
  return res;
}

inline void validate_claims(const std::vector<Claim>& claims) {
  for (Claim c : claims) {
    if (c == Claim::TheoremContinuousGrid) throw InputError("theorem_grid applies to step functions only");
  }
}

}  // namespace detail

/// Number of function x alpha x rounding combinations the sweep would visit.
inline std::uint64_t count_candidates(const SearchSpace& space) {
  std::uint64_t functions = 0;
  if (!space.functions.empty()) {
    functions = space.functions.size();
  } else {
    detail::for_each_canonical(space.max_support_length, space.value_grid, [&](const std::vector<Rational>&) { ++functions; });
  }
  return functions * space.alpha_grid.size() * space.rounding_modes.size();
}

inline std::vector<DiscreteFunction> enumerate_functions(const SearchSpace& space) {
  if (!space.functions.empty()) return space.functions;
  std::vector<DiscreteFunction> out;
  detail::for_each_canonical(space.max_support_length, space.value_grid,
                             [&](const std::vector<Rational>& vals) { out.emplace_back(0, vals); });
  return out;
}

inline SweepResult exhaustive_sweep(const SearchSpace& space) {
  detail::validate_claims(space.claims);
  const std::uint64_t count = count_candidates(space);
  if (count > space.budget) throw BudgetExceeded(count, space.budget);
  const auto functions = enumerate_functions(space);
  std::vector<detail::WorkItem> items;
  items.reserve(count);
  for (std::size_t i = 0; i < functions.size(); ++i) {
    for (const auto& a : space.alpha_grid) {
      for (Rounding r : space.rounding_modes) {
        OperatorParams p;
        p.alpha = a;
        p.rounding = r;
        p.validate();
        items.push_back(detail::WorkItem{i, p});
      }
    }
  }
  return detail::run_items(functions, items, space.claims, space.margin);
}

struct RandomConfig {
  std::int64_t max_support_length = 8;
  std::int64_t max_numerator = 4;
  std::int64_t max_denominator = 4;
  std::vector<Rational> alpha_grid{Rational(1, 3)};
  std::vector<Rounding> rounding_modes{Rounding::Ceil};
  std::vector<Claim> claims = discrete_claims();
  std::int64_t margin = 30;
};

/// count functions drawn from a 64-bit Mersenne Twister. Draws are mapped with
/// plain modular reduction so the sequence is the same on every platform.
inline std::vector<DiscreteFunction> random_functions(std::uint64_t seed, std::size_t count, const RandomConfig& config) {
  if (config.max_support_length < 1 || config.max_numerator < 1 || config.max_denominator < 1) {
    throw InputError("random generator bounds must be positive");
  }
  std::mt19937_64 rng(seed);
  auto draw = [&](std::int64_t n) { return static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(n)); };
  std::vector<DiscreteFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t len = 1 + draw(config.max_support_length);
    std::vector<Rational> vals;
    for (std::int64_t k = 0; k < len; ++k) {
      const std::int64_t num = draw(config.max_numerator + 1);
      const std::int64_t den = 1 + draw(config.max_denominator);
      vals.emplace_back(num, den);
    }
    out.emplace_back(0, std::move(vals));
  }
  return out;
}

inline SweepResult random_sweep(std::uint64_t seed, std::size_t count, const RandomConfig& config) {
  detail::validate_claims(config.claims);
  const auto functions = random_functions(seed, count, config);
  std::vector<detail::WorkItem> items;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    for (const auto& a : config.alpha_grid) {
      for (Rounding r : config.rounding_modes) {
        OperatorParams p;
        p.alpha = a;
        p.rounding = r;
        p.validate();
        items.push_back(detail::WorkItem{i, p});
      }
    }
  }
  return detail::run_items(functions, items, config.claims, config.margin);
}

namespace detail {

/// One-step reductions of f in a fixed order.
inline std::vector<DiscreteFunction> reductions(const DiscreteFunction& f) {
  std::vector<DiscreteFunction> out;
  const auto& v = f.values();
  const std::int64_t s = f.support_start();
  if (v.empty()) return out;
  // trim zero ends
  std::size_t lo = 0, hi = v.size();
  while (lo < hi && v[lo].is_zero()) ++lo;
  while (hi > lo && v[hi - 1].is_zero()) --hi;
  if (lo > 0 || hi < v.size()) {
    out.emplace_back(s + static_cast<std::int64_t>(lo), std::vector<Rational>(v.begin() + lo, v.begin() + hi));
  }
  // truncate one end
  if (v.size() >= 2) {
    out.emplace_back(s + 1, std::vector<Rational>(v.begin() + 1, v.end()));
    out.emplace_back(s, std::vector<Rational>(v.begin(), v.end() - 1));
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    auto w = v;
    w[k] = Rational(0);
    out.emplace_back(s, std::move(w));
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero() || v[k].denominator() >= 64) continue;
    auto w = v;
    w[k] = v[k] / Rational(2);
    out.emplace_back(s, std::move(w));
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_integer()) continue;
    auto w = v;
    w[k] = Rational(v[k].floor(), BigInt(1));
    out.emplace_back(s, std::move(w));
  }
  return out;
}

/// Decreases strictly along every accepted shrink step. Denominators come
/// before mass: the claims are scale invariant, so halving is only progress
/// when it keeps the numbers at least as simple.
inline std::tuple<std::size_t, std::size_t, BigInt, Rational> shrink_measure(const DiscreteFunction& f) {
  std::size_t nonzero = 0;
  BigInt denominators = 0;
  for (const auto& v : f.values()) {
    nonzero += v.is_zero() ? 0 : 1;
    denominators += v.denominator();
  }
  return {f.values().size(), nonzero, denominators, f.mass()};
}

}  // namespace detail

/// Greedy local minimisation of a violation. The range keeps the record's
/// padding around the support hull.
inline ViolationRecord shrink(const ViolationRecord& record) {
  if (!recheck(record).violated()) throw std::invalid_argument("shrink: record does not reproduce a violation");
  const auto hull = record.function.support_hull();
  const std::int64_t margin = hull ? std::max<std::int64_t>(0, hull->first - record.range.first) : record.range.last;
  ViolationRecord current = record;
  for (int step = 0; step < 1024; ++step) {
    bool progressed = false;
    const auto measure = detail::shrink_measure(current.function);
    for (auto& g : detail::reductions(current.function)) {
      if (!(detail::shrink_measure(g) < measure)) continue;
      ViolationRecord next = current;
      next.function = std::move(g);
      next.range = default_range(next.function, margin);
      auto rep = recheck(next);
      if (!rep.violated()) continue;
      next.witness = rep.witnesses;
      current = std::move(next);
      progressed = true;
      break;
    }
    if (!progressed) break;
  }
  current.shrunk = true;
  return current;
}

inline void write_corpus(std::ostream& os, const std::vector<ViolationRecord>& records) {
  for (const auto& r : records) os << r.to_json().dump() << '\n';
}

inline std::vector<ViolationRecord> read_corpus(std::istream& is) {
  std::vector<ViolationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(ViolationRecord::from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw InputError("corpus line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hlmax
