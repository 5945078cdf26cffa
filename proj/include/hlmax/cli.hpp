#pragma once

// Command-line front end. run() is kept free of process state so tests can
// drive it in-process; tools/hlmax.cpp only forwards argv.
//
// Exit status: 0 no violations, 1 violations found, 2 input error.

#include "hlmax/continuous_op.hpp"
#include "hlmax/core.hpp"
#include "hlmax/discrete_op.hpp"
#include "hlmax/json_io.hpp"
#include "hlmax/search.hpp"
#include "hlmax/variation.hpp"
#include "hlmax/verify.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hlmax::cli {

enum ExitStatus : int { kClean = 0, kViolations = 1, kInputError = 2 };

struct CommandConfig {
  std::string subcommand;
  std::string input_path;
  std::string output_path;
  std::string alpha = "1/3";
  std::string rounding = "ceil";
  std::string epsilon = "1/100";
  std::string delta = "0";
  std::string range;
  std::string grid;
  std::string format = "json";
  std::string claim = "theorem";
  std::optional<std::int64_t> x;
  std::optional<std::int64_t> y;
  std::int64_t margin = 30;
  // sweep / search
  std::uint64_t seed = 42;
  std::uint64_t count = 1000;
  std::uint64_t budget = 1'000'000;
  std::int64_t max_length = 5;
  std::int64_t max_numerator = 4;
  std::int64_t max_denominator = 4;
  std::string values = "0,1,2,3";
  std::string alphas;
  std::string roundings = "ceil";
  std::string claims = "theorem,dominate,plateau,extremos,peaks";
  bool shrink = false;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline Rational parse_rational_flag(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw InputError("--" + flag + ": " + e.what());
  }
}

inline std::int64_t parse_int_flag(const std::string& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InputError("--" + flag + ": expected an integer, got \"" + text + "\"");
  }
}

inline IntRange parse_range(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw InputError("--range: expected first:last");
  IntRange r{parse_int_flag("range", text.substr(0, colon)), parse_int_flag("range", text.substr(colon + 1))};
  if (r.first > r.last) throw InputError("--range: first > last");
  return r;
}

inline std::vector<Rational> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InputError("--grid: expected lo:hi:count");
  const auto count = parse_int_flag("grid", parts[2]);
  if (count < 2) throw InputError("--grid: count must be at least 2");
  return uniform_grid(parse_rational_flag("grid", parts[0]), parse_rational_flag("grid", parts[1]), static_cast<std::size_t>(count));
}

inline OperatorParams params_of(const CommandConfig& c) {
  OperatorParams p;
  p.alpha = parse_rational_flag("alpha", c.alpha);
  p.rounding = parse_rounding(c.rounding);
  p.enclosure_epsilon = parse_rational_flag("epsilon", c.epsilon);
  p.validate();
  return p;
}

inline AnyFunction load_function(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return function_from_json(j);
}

/// Default sample grid for a step function: its breakpoint hull widened by
/// one hull length on each side, 1001 points.
inline std::vector<Rational> default_grid(const StepFunction& f) {
  const auto hull = f.breakpoint_hull();
  if (!hull) return uniform_grid(Rational(-1), Rational(1), 3);
  Rational width = hull->second - hull->first;
  if (width.is_zero()) width = Rational(1);
  return uniform_grid(hull->first - width, hull->second + width, 1001);
}

inline std::string decimal(const Rational& r) {
  std::ostringstream os;
  os << std::setprecision(17) << r.to_double();
  return os.str();
}

inline json evaluation_json(const PointEvaluation<DiscreteWindow>& e) {
  json j{{"value", e.value.str()}, {"source", to_string(e.source)}, {"enclosure_upper", e.enclosure_upper.str()}};
  j["window"] = e.window ? to_json(*e.window) : json(nullptr);
  return j;
}

inline json evaluation_json(const PointEvaluation<ContinuousWindow>& e) {
  json j{{"value", e.value.str()}, {"source", to_string(e.source)}, {"enclosure_upper", e.enclosure_upper.str()}};
  j["window"] = e.window ? to_json(*e.window) : json(nullptr);
  return j;
}

struct Output {
  std::string text;
  int status = kClean;
};

inline Output eval_command(const CommandConfig& c, const AnyFunction& fn) {
  Output out;
  std::ostringstream csv;
  csv << "site,value_numerator,value_denominator,decimal_approx\n";
  json points = json::array();
  json meta;
  auto add = [&](const std::string& site, const auto& e) {
    json p = evaluation_json(e);
    p["site"] = site;
    points.push_back(std::move(p));
    csv << site << ',' << e.value.numerator() << ',' << e.value.denominator() << ',' << decimal(e.value) << '\n';
  };
  if (const auto* f = std::get_if<DiscreteFunction>(&fn)) {
    const auto params = params_of(c);
    const IntRange range = c.range.empty() ? default_range(*f, c.margin) : parse_range(c.range);
    const auto evals = maximal_on_range(*f, range, params);
    for (std::size_t k = 0; k < evals.size(); ++k) add(std::to_string(range.first + static_cast<std::int64_t>(k)), evals[k]);
    meta = json{{"function", to_json(*f)}, {"params", to_json(params)}, {"range", to_json(range)}};
  } else {
    const auto& g = std::get<StepFunction>(fn);
    const Rational alpha = parse_rational_flag("alpha", c.alpha);
    const auto grid = c.grid.empty() ? default_grid(g) : parse_grid(c.grid);
    const ContinuousMaximalOperator op(g, alpha);
    const auto evals = maximal_on_grid(op, grid);
    for (std::size_t k = 0; k < evals.size(); ++k) add(grid[k].str(), evals[k]);
    meta = json{{"function", to_json(g)}, {"alpha", alpha.str()}, {"grid_points", grid.size()}};
  }
  if (c.format == "csv") {
    out.text = csv.str();
  } else {
    meta["points"] = std::move(points);
    out.text = meta.dump(2) + "\n";
  }
  return out;
}

inline Output var_command(const CommandConfig& c, const AnyFunction& fn) {
  json j;
  if (const auto* f = std::get_if<DiscreteFunction>(&fn)) {
    const auto params = params_of(c);
    const IntRange range = c.range.empty() ? default_range(*f, c.margin) : parse_range(c.range);
    const auto rep = check_theorem_discrete(*f, params, range);
    j = json{{"var_f", total_variation(*f).str()}, {"range", to_json(range)}, {"params", to_json(params)}, {"maximal", rep.numbers}};
  } else {
    const auto& g = std::get<StepFunction>(fn);
    const Rational alpha = parse_rational_flag("alpha", c.alpha);
    const auto grid = c.grid.empty() ? default_grid(g) : parse_grid(c.grid);
    const auto rep = check_theorem_continuous_grid(ContinuousMaximalOperator(g, alpha), grid);
    j = json{{"var_f", g.total_variation().str()}, {"alpha", alpha.str()}, {"maximal_sampled", rep.numbers}};
  }
  return Output{j.dump(2) + "\n", kClean};
}

inline std::vector<VerificationReport> verify_reports(const CommandConfig& c, const AnyFunction& fn) {
  std::vector<VerificationReport> reports;
  const std::vector<std::string> names = c.claim == "all" ? std::vector<std::string>{} : split(c.claim, ',');
  if (const auto* f = std::get_if<DiscreteFunction>(&fn)) {
    const auto params = params_of(c);
    std::vector<Claim> claims;
    if (c.claim == "all") claims = discrete_claims();
    for (const auto& n : names) claims.push_back(parse_claim(n));
    const IntRange range = c.range.empty() ? default_range(*f, c.margin) : parse_range(c.range);
    std::optional<DiscreteProfile> profile;
    for (Claim cl : claims) {
      if (cl == Claim::PropExtremos && (c.x || c.y)) {
        if (!c.x || !c.y) throw InputError("--x and --y must be given together");
        reports.push_back(check_prop_extremos(*f, params, *c.x, *c.y));
        continue;
      }
      if (cl == Claim::TheoremContinuousGrid) throw InputError("theorem_grid needs a step function input");
      if (!profile) profile = compute_profile(DiscreteMaximalOperator(*f, params), range);
      reports.push_back(run_claim(*f, params, cl, *profile));
    }
  } else {
    const auto& g = std::get<StepFunction>(fn);
    const Rational alpha = parse_rational_flag("alpha", c.alpha);
    const Rational delta = parse_rational_flag("delta", c.delta);
    const auto grid = c.grid.empty() ? default_grid(g) : parse_grid(c.grid);
    const ContinuousMaximalOperator op(g, alpha);
    std::vector<std::string> step_names = names;
    if (c.claim == "all") step_names = {"theorem_grid", "peaks"};
    for (const auto& n : step_names) {
      const Claim cl = n == "theorem" ? Claim::TheoremContinuousGrid : parse_claim(n);
      if (cl == Claim::TheoremContinuousGrid) reports.push_back(check_theorem_continuous_grid(op, grid));
      else if (cl == Claim::PeakTransfer) reports.push_back(check_peak_transfer_continuous(op, grid, delta));
      else throw InputError(std::string("claim ") + to_string(cl) + " needs a discrete function input");
    }
  }
  return reports;
}

inline Output verify_command(const CommandConfig& c, const AnyFunction& fn, bool witnesses_only) {
  Output out;
  json arr = json::array();
  for (const auto& rep : verify_reports(c, fn)) {
    if (rep.violated()) out.status = kViolations;
    if (witnesses_only) {
      arr.push_back(json{{"claim", to_string(rep.claim)}, {"verdict", to_string(rep.verdict)}, {"witnesses", rep.witnesses}});
    } else {
      arr.push_back(rep.to_json());
    }
  }
  const json doc = arr.size() == 1 ? arr[0] : arr;
  out.text = doc.dump(2) + "\n";
  return out;
}

inline std::vector<Claim> claims_of(const CommandConfig& c) {
  std::vector<Claim> out;
  for (const auto& n : split(c.claims, ',')) out.push_back(parse_claim(n));
  if (out.empty()) throw InputError("--claims: empty list");
  return out;
}

inline std::vector<Rounding> roundings_of(const CommandConfig& c) {
  std::vector<Rounding> out;
  for (const auto& n : split(c.roundings, ',')) out.push_back(parse_rounding(n));
  if (out.empty()) throw InputError("--roundings: empty list");
  return out;
}

inline std::vector<Rational> rationals_of(const std::string& flag, const std::string& text) {
  std::vector<Rational> out;
  for (const auto& n : split(text, ',')) out.push_back(parse_rational_flag(flag, n));
  return out;
}

inline Output corpus_output(const CommandConfig& c, SweepResult res, std::ostream& summary_sink) {
  if (c.shrink) {
    for (auto& v : res.violations) v = shrink(v);
  }
  std::ostringstream corpus;
  write_corpus(corpus, res.violations);
  summary_sink << res.summary().dump() << '\n';
  return Output{corpus.str(), res.violations.empty() ? kClean : kViolations};
}

}  // namespace detail

/// Parses argv into a config, runs it and writes the result. Diagnostics go
/// to err; the report goes to --output or to out.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CommandConfig c;
  CLI::App app{"Exact nontangential maximal functions: evaluation, variation checks and counterexample search", "hlmax"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input,-i", c.input_path, "function JSON file");
    if (needs_input) in->required();
    sub->add_option("--output,-o", c.output_path, "write the report here instead of stdout");
    sub->add_option("--alpha", c.alpha, "aperture (rational, e.g. 1/3)");
    sub->add_option("--rounding", c.rounding, "ceil, floor or exact");
    sub->add_option("--epsilon", c.epsilon, "enclosure width target for nonzero tails");
    sub->add_option("--range", c.range, "first:last site range (discrete)");
    sub->add_option("--grid", c.grid, "lo:hi:count sample grid (step functions)");
    sub->add_option("--margin", c.margin, "padding around the support hull for the default range");
  };

  auto* eval = app.add_subcommand("eval", "evaluate the maximal function on a range or grid");
  common(eval, true);
  eval->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* var = app.add_subcommand("var", "variation of f and of its maximal function");
  common(var, true);

  auto* verify = app.add_subcommand("verify", "run claim checkers and report verdicts");
  common(verify, true);
  verify->add_option("--claim", c.claim, "theorem, theorem_grid, dominate, plateau, extremos, peaks, a comma list or all");
  verify->add_option("--x", c.x, "first site for extremos");
  verify->add_option("--y", c.y, "second site for extremos");
  verify->add_option("--delta", c.delta, "slack for continuous peak transfer");

  auto* witness = app.add_subcommand("witness", "emit witness records only");
  common(witness, true);
  witness->add_option("--claim", c.claim, "plateau, extremos or peaks");
  witness->add_option("--x", c.x, "first site for extremos");
  witness->add_option("--y", c.y, "second site for extremos");
  witness->add_option("--delta", c.delta, "slack for continuous peak transfer");

  auto sweep_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", c.output_path, "write the JSON-lines corpus here");
    sub->add_option("--max-length", c.max_length, "largest support length");
    sub->add_option("--alphas", c.alphas, "comma-separated apertures (default grid if omitted)");
    sub->add_option("--roundings", c.roundings, "comma-separated rounding modes");
    sub->add_option("--claims", c.claims, "comma-separated claims");
    sub->add_option("--margin", c.margin, "padding around the support hull");
    sub->add_flag("--shrink", c.shrink, "shrink every violation before writing it");
  };
  auto* sweep = app.add_subcommand("sweep", "exhaustive sweep over small functions");
  sweep_common(sweep);
  sweep->add_option("--values", c.values, "comma-separated value grid");
  sweep->add_option("--budget", c.budget, "refuse spaces with more candidates than this");

  auto* search = app.add_subcommand("search", "seeded random sweep");
  sweep_common(search);
  search->add_option("--seed", c.seed, "generator seed");
  search->add_option("--count", c.count, "number of random functions");
  search->add_option("--max-numerator", c.max_numerator, "largest value numerator");
  search->add_option("--max-denominator", c.max_denominator, "largest value denominator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kClean;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kClean;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    detail::Output result;
    std::ostringstream summary;
    if (c.subcommand == "sweep" || c.subcommand == "search") {
      const auto claims = detail::claims_of(c);
      const auto roundings = detail::roundings_of(c);
      const auto alphas = c.alphas.empty() ? default_alpha_grid() : detail::rationals_of("alphas", c.alphas);
      SweepResult res;
      if (c.subcommand == "sweep") {
        SearchSpace space;
        space.max_support_length = c.max_length;
        space.value_grid = detail::rationals_of("values", c.values);
        space.alpha_grid = alphas;
        space.rounding_modes = roundings;
        space.claims = claims;
        space.margin = c.margin;
        space.budget = c.budget;
        res = exhaustive_sweep(space);
      } else {
        RandomConfig cfg;
        cfg.max_support_length = c.max_length;
        cfg.max_numerator = c.max_numerator;
        cfg.max_denominator = c.max_denominator;
        cfg.alpha_grid = alphas;
        cfg.rounding_modes = roundings;
        cfg.claims = claims;
        cfg.margin = c.margin;
        res = random_sweep(c.seed, static_cast<std::size_t>(c.count), cfg);
      }
      result = detail::corpus_output(c, std::move(res), summary);
    } else {
      const AnyFunction fn = detail::load_function(c.input_path);
      if (c.subcommand == "eval") result = detail::eval_command(c, fn);
      else if (c.subcommand == "var") result = detail::var_command(c, fn);
      else result = detail::verify_command(c, fn, c.subcommand == "witness");
    }
    if (c.output_path.empty()) {
      out << result.text;
      if (!summary.str().empty()) err << summary.str();
    } else {
      std::ofstream file(c.output_path);
      if (!file) throw InputError(c.output_path + ": cannot open for writing");
      file << result.text;
      out << summary.str();
    }
    return result.status;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace hlmax::cli
