#pragma once

// JSON forms of the core types. Rationals travel as strings ("p/q" or "n")
// so that no precision is lost; serialising a parsed value reproduces the
// canonical text byte for byte.

#include "hlmax/core.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>

namespace hlmax {

using json = nlohmann::json;

inline json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InputError(where + ": expected a rational string such as \"3/4\"");
}

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + "." + key + ": missing field");
  return *it;
}

inline std::vector<Rational> rational_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json rational_list_json(const std::vector<Rational>& v) {
  json arr = json::array();
  for (const auto& r : v) arr.push_back(r.str());
  return arr;
}

}  // namespace detail

inline json to_json(const DiscreteFunction& f) {
  return json{{"support_start", f.support_start()},
              {"values", detail::rational_list_json(f.values())},
              {"left_tail", f.left_tail().str()},
              {"right_tail", f.right_tail().str()}};
}

/// Negative entries are replaced by their absolute values.
inline DiscreteFunction discrete_function_from_json(const json& j, const std::string& where = "$") {
  const json& start = detail::require(j, "support_start", where);
  if (!start.is_number_integer()) throw InputError(where + ".support_start: expected an integer");
  auto values = detail::rational_list(detail::require(j, "values", where), where + ".values");
  Rational left(0), right(0);
  if (j.contains("left_tail")) left = rational_from_json(j["left_tail"], where + ".left_tail");
  if (j.contains("right_tail")) right = rational_from_json(j["right_tail"], where + ".right_tail");
  try {
    return DiscreteFunction::from_signed(start.get<std::int64_t>(), std::move(values), left, right);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline json to_json(const StepFunction& f) {
  return json{{"breakpoints", detail::rational_list_json(f.breakpoints())},
              {"values", detail::rational_list_json(f.piece_values())},
              {"left_tail", f.left_tail().str()},
              {"right_tail", f.right_tail().str()}};
}

inline StepFunction step_function_from_json(const json& j, const std::string& where = "$") {
  auto breaks = detail::rational_list(detail::require(j, "breakpoints", where), where + ".breakpoints");
  auto values = detail::rational_list(detail::require(j, "values", where), where + ".values");
  Rational left(0), right(0);
  if (j.contains("left_tail")) left = rational_from_json(j["left_tail"], where + ".left_tail");
  if (j.contains("right_tail")) right = rational_from_json(j["right_tail"], where + ".right_tail");
  try {
    return StepFunction::from_signed(std::move(breaks), std::move(values), left, right);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

using AnyFunction = std::variant<DiscreteFunction, StepFunction>;

/// Objects with "breakpoints" are step functions; everything else must be a
/// discrete function.
inline AnyFunction function_from_json(const json& j, const std::string& where = "$") {
  if (j.is_object() && j.contains("breakpoints")) return step_function_from_json(j, where);
  return discrete_function_from_json(j, where);
}

inline json to_json(const OperatorParams& p) {
  return json{{"alpha", p.alpha.str()}, {"rounding", to_string(p.rounding)}, {"enclosure_epsilon", p.enclosure_epsilon.str()}};
}

inline OperatorParams params_from_json(const json& j, const std::string& where = "$") {
  OperatorParams p;
  p.alpha = rational_from_json(detail::require(j, "alpha", where), where + ".alpha");
  const json& r = detail::require(j, "rounding", where);
  if (!r.is_string()) throw InputError(where + ".rounding: expected a string");
  p.rounding = parse_rounding(r.get<std::string>());
  if (j.contains("enclosure_epsilon")) p.enclosure_epsilon = rational_from_json(j["enclosure_epsilon"], where + ".enclosure_epsilon");
  p.validate();
  return p;
}

inline json to_json(const DiscreteWindow& w) { return json{{"center", w.center}, {"radius", w.radius}}; }
inline json to_json(const ContinuousWindow& w) { return json{{"left", w.left.str()}, {"right", w.right.str()}}; }
inline json to_json(const IntRange& r) { return json::array({r.first, r.last}); }

inline IntRange range_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw InputError(where + ": expected [first, last]");
  }
  IntRange r{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
  if (r.first > r.last) throw InputError(where + ": first > last");
  return r;
}

/// 64-bit FNV-1a over the canonical (key-sorted, compact) JSON text.
inline std::string digest(const json& j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hlmax
