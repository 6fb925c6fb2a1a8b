#include "momentforge_cli/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "momentforge/convert.hpp"
#include "momentforge/errors.hpp"
#include "momentforge/json_io.hpp"
#include "momentforge/parser.hpp"
#include "momentforge/pipeline.hpp"
#include "momentforge/power_reduction.hpp"
#include "momentforge/printer.hpp"
#include "momentforge/simulate.hpp"
#include "momentforge/version.hpp"

namespace momentforge {

namespace {

unsigned decimal_precision() {
  const char* env = std::getenv("MOMENT_FORGE_PRECISION");
  if (!env) return 30;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v <= 0 || v > 10000) return 30;
  return static_cast<unsigned>(v);
}

struct CommonOpts {
  std::string program_path;
  std::string format = "text";
  std::vector<std::string> bind;
  bool deterministic = false;
  bool approx_if = false;
  bool force_approx = false;
};

struct LoadedProgram {
  std::string source;
  Program ast;
};

LoadedProgram load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::UsageError, "cannot open program file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  LoadedProgram lp;
  lp.source = ss.str();
  lp.ast = parse_program(lp.source);
  return lp;
}

std::map<std::string, Rational> parse_bindings(const std::vector<std::string>& raw) {
  std::map<std::string, Rational> out;
  for (const auto& b : raw) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) {
      fail(ErrorCode::UsageError, "binding must have the form NAME=RATIONAL: '" + b + "'");
    }
    out[b.substr(0, eq)] = rational_from_string(b.substr(eq + 1));
  }
  return out;
}

Json envelope(const std::string& command, const CommonOpts& common,
              const LoadedProgram& lp) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["program"] = Json{{"path", common.program_path},
                      {"hash", source_fingerprint(lp.source)}};
  if (!common.deterministic) {
    auto now = std::chrono::system_clock::now();
    j["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  }
  return j;
}

void emit(const Json& j, const CommonOpts& common, std::ostream& out,
          const std::string& text) {
  if (common.format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << text;
  }
}

std::string surd_with_decimal(const Surd& v, const std::map<std::string, Rational>& bindings) {
  std::string s = v.to_string();
  if (!v.has_symbols() || !bindings.empty()) {
    try {
      std::string dec = v.to_decimal(decimal_precision(), bindings);
      if (dec != s) s += " = " + dec;
    } catch (const Error&) {
      // unbound symbols: exact form only
    }
  }
  return s;
}

Analysis analyze_with(const CommonOpts& common, const LoadedProgram& lp) {
  PipelineOptions opts;
  opts.approx_infinite_conditions = common.approx_if;
  opts.force_approx = common.force_approx;
  return analyze_program(lp.ast, opts);
}

// Constant expression from the command line (rational literal or an
// expression over symbolic constants); reuses the program parser.
ExprPtr parse_const_arg(const std::string& text) {
  auto r = try_rational_from_string(text);
  if (r) return expr_number(*r);
  Program p = parse_program("_v = " + text + "\nwhile true:\n _v = _v\nend");
  return p.init[0].assign().values[0].categorical().options[0].value;
}

Json rewrites_json(const Analysis& a) {
  Json arr = Json::array();
  for (const auto& r : a.rewrites) {
    Json j;
    j["condition"] = r.condition;
    j["probability_symbol"] = r.symbol;
    j["fresh_variable"] = r.fresh_var;
    if (!r.unverified.empty()) j["unverified_assumptions"] = r.unverified;
    arr.push_back(j);
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

int cmd_moments(const CommonOpts& common, const std::vector<std::string>& goal_strs,
                std::optional<std::uint64_t> at, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  auto bindings = parse_bindings(common.bind);

  std::vector<GoalSpec> goals;
  for (const auto& g : goal_strs) {
    auto [var, k] = parse_goal(g);
    goals.push_back(GoalSpec{var, k});
  }
  MomentComputation mc = compute_moments(a, goals);

  Json j = envelope("moments", common, lp);
  Json results = Json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    Json r;
    std::string goal_name = "E(" + goals[i].var + "^" + std::to_string(goals[i].k) + ")";
    r["goal"] = goal_name;
    if (mc.closed_forms[i]) {
      r["closed_form"] = exppoly_to_json(*mc.closed_forms[i]);
      text << goal_name << " = " << mc.closed_forms[i]->to_string() << "\n";
      if (at) {
        Surd v = mc.closed_forms[i]->eval(*at);
        if (!bindings.empty()) {
          v = Surd(v.a().substitute(bindings), v.b().substitute(bindings), v.d());
        }
        r["at"] = *at;
        r["value"] = surd_to_json(v);
        text << "  at n=" << *at << ": " << surd_with_decimal(v, bindings) << "\n";
      }
    } else {
      r["error"] = mc.failures[i];
      text << goal_name << ": no closed form (" << mc.failures[i] << ")\n";
    }
    results.push_back(r);
  }
  if (!a.rewrites.empty()) {
    j["condition_rewrites"] = rewrites_json(a);
    for (const auto& rw : a.rewrites) {
      text << "note: condition '" << rw.condition << "' replaced by Bernoulli("
           << rw.symbol << ")\n";
    }
  }
  j["results"] = results;
  emit(j, common, out, text.str());
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (!mc.closed_forms[i]) return 1;
  }
  return 0;
}

int cmd_eval(const CommonOpts& common, const std::string& goal_str, std::uint64_t at,
             std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  auto bindings = parse_bindings(common.bind);
  auto [var, k] = parse_goal(goal_str);
  MomentComputation mc = compute_moments(a, {GoalSpec{var, k}});

  Json j = envelope("eval", common, lp);
  std::ostringstream text;
  Surd value;
  if (mc.closed_forms[0]) {
    value = mc.closed_forms[0]->eval(at);
  } else {
    // Forward evaluation is the universal fallback.
    auto state = forward_eval(mc.system, at);
    value = Surd(eval_combo(mc.combos[0], mc.system, state));
    j["note"] = "closed form unavailable, exact forward evaluation used";
  }
  if (!bindings.empty()) {
    value = Surd(value.a().substitute(bindings), value.b().substitute(bindings), value.d());
  }
  j["goal"] = goal_str;
  j["at"] = at;
  j["value"] = surd_to_json(value);
  text << "E(" << var << "^" << k << ") at n=" << at << ": "
       << surd_with_decimal(value, bindings) << "\n";
  emit(j, common, out, text.str());
  return 0;
}

int cmd_system(const CommonOpts& common, const std::vector<std::string>& goal_strs,
               std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  std::vector<GoalSpec> goals;
  for (const auto& g : goal_strs) {
    auto [var, k] = parse_goal(g);
    goals.push_back(GoalSpec{var, k});
  }
  Program view = a.normalized.as_program();
  std::vector<VarPoly> goal_polys;
  for (const auto& g : goals) {
    Verdict v = check_computability_for_goal(a.deps, view, a.types, g.var);
    if (!v.accepted) {
      fail(ErrorCode::ValidationError, "computability check rejects goal variable " + g.var);
    }
    goal_polys.push_back(VarPoly::monomial(Monomial{{g.var, g.k}}, Scalar(Rational(1))));
  }
  RecurrenceBuilder builder(a.normalized, a.types, a.order);
  std::vector<GoalCombo> combos;
  RecurrenceSystem sys = builder.build(goal_polys, &combos);

  Json j = envelope("system", common, lp);
  j["system"] = system_to_json(sys);
  Json jc = Json::array();
  for (const auto& combo : combos) {
    Json one = Json::object();
    for (const auto& [mono, coeff] : combo) {
      one[monomial_to_string(mono)] = scalar_to_json(coeff);
    }
    jc.push_back(one);
  }
  j["goal_combinations"] = jc;

  std::ostringstream text;
  text << "monomials (" << sys.size() << "):\n";
  for (std::size_t i = 0; i < sys.size(); ++i) {
    text << "  [" << i << "] " << monomial_to_string(sys.monomials[i])
         << "   E at 0 = " << sys.initials[i].to_string() << "\n";
  }
  text << "matrix rows:\n";
  for (std::size_t i = 0; i < sys.size(); ++i) {
    text << "  " << monomial_to_string(sys.monomials[i]) << "' =";
    bool first = true;
    for (std::size_t c = 0; c < sys.size(); ++c) {
      if (sys.matrix[i][c].is_zero()) continue;
      text << (first ? " " : " + ") << sys.matrix[i][c].to_string() << "*"
           << monomial_to_string(sys.monomials[c]);
      first = false;
    }
    if (first) text << " 0";
    text << "\n";
  }
  emit(j, common, out, text.str());
  return 0;
}

int cmd_normalize(const CommonOpts& common, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  std::string rendered = pretty_print(a.normalized);
  Json j = envelope("normalize", common, lp);
  j["normalized"] = rendered;
  if (!a.rewrites.empty()) j["condition_rewrites"] = rewrites_json(a);
  emit(j, common, out, rendered);
  return 0;
}

int cmd_check(const CommonOpts& common, bool show_types, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  Program view = a.normalized.as_program();
  Verdict v = check_computability(a.deps, a.normalized, a.types);

  Json j = envelope("check", common, lp);
  j["verdict"] = verdict_to_json(v);
  if (show_types) j["types"] = type_env_to_json(a.types);

  std::ostringstream text;
  if (v.accepted) {
    text << "accepted: all moments are computable\n";
  } else if (v.condition == 1) {
    text << "rejected (condition 1): polynomial self-dependency:";
    for (const auto& x : v.witness_cycle) text << " " << x;
    text << "\n";
  } else {
    text << "rejected (condition 2): non-finite variable '" << v.witness_variable
         << "' in condition '" << v.witness_condition << "'\n";
  }
  if (show_types) {
    for (const auto& [var, set] : a.types) {
      text << "  " << var << ": ";
      if (set.infinite) {
        text << "infinite\n";
      } else {
        text << "{";
        for (std::size_t i = 0; i < set.values.size(); ++i) {
          text << (i ? ", " : "") << set.values[i].to_string();
        }
        text << "}\n";
      }
    }
  }
  emit(j, common, out, text.str());
  return v.accepted ? 0 : 1;
}

int cmd_distribution(const CommonOpts& common, const std::string& var, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  RecoveredDistribution dist = recover_variable_distribution(a, var);

  Json j = envelope("distribution", common, lp);
  Json arr = Json::array();
  std::ostringstream text;
  text << "distribution of " << var << ":\n";
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    Json one;
    one["value"] = scalar_to_json(dist.support[i]);
    one["probability"] = exppoly_to_json(dist.probabilities[i]);
    arr.push_back(one);
    text << "  P(" << var << " = " << dist.support[i].to_string()
         << ") = " << dist.probabilities[i].to_string() << "\n";
  }
  j["distribution"] = arr;
  emit(j, common, out, text.str());
  return 0;
}

int cmd_tails(const CommonOpts& common, const std::string& var, const std::string& threshold,
              unsigned order, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  Scalar t = expr_to_scalar(parse_const_arg(threshold), a.normalized.variables);

  unsigned need = std::max(order, 2u);
  MomentVector mv = moment_vector(a, var, need);

  // Non-negativity is checkable when the support is finite.
  auto it = a.types.find(var);
  if (it != a.types.end() && !it->second.infinite) {
    for (const auto& v : it->second.values) {
      Scalar diff = v;
      if (diff.is_rational() && diff.as_rational() < 0) {
        fail(ErrorCode::ValidationError,
             "variable '" + var + "' can be negative; Markov's inequality does not apply");
      }
    }
  }

  Json j = envelope("tails", common, lp);
  std::ostringstream text;
  Json jm = Json::array();
  for (unsigned k = 1; k <= order; ++k) {
    ExpPoly bound = markov_bound(mv, t, k);
    Json one;
    one["k"] = k;
    one["upper_bound"] = exppoly_to_json(bound);
    jm.push_back(one);
    text << "P(" << var << " >= " << t.to_string() << ") <= " << bound.to_string()
         << "   (Markov, k=" << k << ")\n";
  }
  j["markov"] = jm;

  ExpPolyRatio pz = paley_zygmund(mv.raw[1], mv.raw[2], t);
  Json jpz;
  if (pz.simplified) {
    jpz["lower_bound"] = exppoly_to_json(*pz.simplified);
    text << "P(" << var << " > " << t.to_string() << ") >= " << pz.simplified->to_string()
         << "   (Paley-Zygmund)\n";
  } else {
    jpz["numerator"] = exppoly_to_json(pz.num);
    jpz["denominator"] = exppoly_to_json(pz.den);
    text << "P(" << var << " > " << t.to_string() << ") >= (" << pz.num.to_string()
         << ") / (" << pz.den.to_string() << ")   (Paley-Zygmund)\n";
  }
  j["paley_zygmund"] = jpz;
  emit(j, common, out, text.str());
  return 0;
}

int cmd_central(const CommonOpts& common, const std::string& var, unsigned order,
                std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  MomentVector mv = moment_vector(a, var, order);
  std::vector<ExpPoly> central = central_moments(mv);

  Json j = envelope("central", common, lp);
  Json arr = Json::array();
  std::ostringstream text;
  for (unsigned k = 0; k < central.size(); ++k) {
    Json one;
    one["k"] = k;
    one["central_moment"] = exppoly_to_json(central[k]);
    arr.push_back(one);
    if (k >= 2) {
      text << "E((" << var << " - E " << var << ")^" << k << ") = "
           << central[k].to_string() << "\n";
    }
  }
  j["central_moments"] = arr;
  emit(j, common, out, text.str());
  return 0;
}

int cmd_after_termination(const CommonOpts& common, const std::string& goal_str,
                          std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  auto [var, k] = parse_goal(goal_str);
  TerminationMoment tm = termination_moment(a, var, k);

  Json j = envelope("after-termination", common, lp);
  j["goal"] = goal_str;
  j["value"] = surd_to_json(tm.value);
  j["conditional_numerator"] = exppoly_to_json(tm.conditional_numerator);
  j["conditional_denominator"] = exppoly_to_json(tm.conditional_denominator);

  std::ostringstream text;
  text << "E(" << var << "^" << k << " | loop terminated) = "
       << surd_with_decimal(tm.value, {}) << "\n";
  text << "  numerator:   " << tm.conditional_numerator.to_string() << "\n";
  text << "  denominator: " << tm.conditional_denominator.to_string() << "\n";
  emit(j, common, out, text.str());
  return 0;
}

int cmd_gram_charlier(const CommonOpts& common, const std::string& var, unsigned order,
                      std::uint64_t at, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  Analysis a = analyze_with(common, lp);
  auto bindings = parse_bindings(common.bind);
  MomentVector mv = moment_vector(a, var, order);

  std::vector<double> moments;
  for (unsigned k = 0; k <= order; ++k) {
    moments.push_back(mv.raw[k].eval(at).to_double(bindings));
  }
  std::vector<double> coeffs = gram_charlier_coefficients(moments, order);
  double mean = moments[1];
  double sd = std::sqrt(moments[2] - mean * mean);

  Json j = envelope("gram-charlier", common, lp);
  j["variable"] = var;
  j["at"] = at;
  j["order"] = order;
  j["mean"] = mean;
  j["stddev"] = sd;
  j["coefficients"] = coeffs;

  std::ostringstream text;
  text << "Gram-Charlier coefficients for " << var << " at n=" << at << " (order " << order
       << "):\n";
  text << "  mean = " << mean << ", stddev = " << sd << "\n";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    text << "  c[" << i << "] = " << coeffs[i] << "\n";
  }
  emit(j, common, out, text.str());
  return 0;
}

int cmd_sample(const CommonOpts& common, const std::string& goal_str, std::uint64_t at,
               std::uint64_t seed, std::size_t samples, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  auto [var, k] = parse_goal(goal_str);
  SampleOptions opts;
  opts.bindings = parse_bindings(common.bind);
  opts.seed = seed;
  opts.samples = samples;
  SampleStats stats = estimate_moment(lp.ast, var, k, at, opts);

  Json j = envelope("sample", common, lp);
  j["goal"] = goal_str;
  j["at"] = at;
  j["seed"] = seed;
  j["samples"] = samples;
  j["prng"] = prng_name();
  j["mean"] = stats.mean;
  j["ci_halfwidth"] = stats.halfwidth;

  std::ostringstream text;
  text << "E(" << var << "^" << k << ") at n=" << at << " ~ " << stats.mean << " +- "
       << stats.halfwidth << "  (0.95 CI, " << samples << " samples, seed " << seed << ")\n";
  emit(j, common, out, text.str());
  return 0;
}

int cmd_enumerate(const CommonOpts& common, const std::vector<std::string>& goal_strs,
                  std::uint64_t at, std::ostream& out) {
  LoadedProgram lp = load_program(common.program_path);
  EnumOptions opts;
  opts.bindings = parse_bindings(common.bind);
  ExactDistribution dist = exact_enumerate(lp.ast, at, opts);

  Json j = envelope("enumerate", common, lp);
  j["at"] = at;
  j["state_count"] = dist.states.size();
  Json results = Json::array();
  std::ostringstream text;
  text << "exact enumeration at n=" << at << " (" << dist.states.size() << " states)\n";
  for (const auto& g : goal_strs) {
    auto [var, k] = parse_goal(g);
    Rational m = dist.moment(var, k);
    Json one;
    one["goal"] = g;
    one["value"] = rational_to_json(m);
    results.push_back(one);
    text << "E(" << var << "^" << k << ") = " << rational_to_string(m) << " = "
         << rational_to_decimal(m, decimal_precision()) << "\n";
  }
  j["results"] = results;
  emit(j, common, out, text.str());
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact moment analysis for probabilistic loops"};
  app.require_subcommand(1);

  CommonOpts common;
  std::vector<std::string> goals;
  std::string goal_single, var, threshold = "1";
  unsigned order = 2;
  std::uint64_t at = 0, seed = 1;
  std::size_t samples = 10000;
  bool show_types = false;
  bool have_at = false;

  auto add_common = [&](CLI::App* cmd, bool needs_program = true) {
    if (needs_program) {
      cmd->add_option("program", common.program_path, "program file (.prob)")->required();
    }
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--bind", common.bind, "bind a symbolic constant, NAME=RATIONAL");
    cmd->add_flag("--deterministic", common.deterministic,
                  "omit the timestamp for byte-identical output");
    cmd->add_flag("--approx-if", common.approx_if,
                  "replace non-finite if-conditions by symbolic Bernoulli draws");
    cmd->add_flag("--force-approx", common.force_approx,
                  "proceed when independence assumptions cannot be verified");
  };

  auto* moments = app.add_subcommand("moments", "closed-form raw moments");
  add_common(moments);
  moments->add_option("--goal", goals, "moment goal, e.g. E(x^2)")->required();
  auto* at_opt = moments->add_option("--at", at, "also evaluate at iteration n");

  auto* eval = app.add_subcommand("eval", "evaluate a moment at a concrete iteration");
  add_common(eval);
  eval->add_option("--goal", goal_single, "moment goal")->required();
  eval->add_option("--at", at, "iteration")->required();

  auto* system = app.add_subcommand("system", "dump the recurrence system");
  add_common(system);
  system->add_option("--goal", goals, "moment goal(s)")->required();

  auto* normalize = app.add_subcommand("normalize", "print the normal form");
  add_common(normalize);

  auto* check = app.add_subcommand("check", "moment-computability verdict");
  add_common(check);
  check->add_flag("--types", show_types, "also print inferred value sets");

  auto* distribution = app.add_subcommand("distribution", "recover a finite distribution");
  add_common(distribution);
  distribution->add_option("--var", var, "finite program variable")->required();

  auto* tails = app.add_subcommand("tails", "tail probability bounds");
  add_common(tails);
  tails->add_option("--var", var, "program variable")->required();
  tails->add_option("--threshold", threshold, "threshold t")->required();
  tails->add_option("--order", order, "highest Markov moment order (default 2)");

  auto* central = app.add_subcommand("central", "central moments");
  add_common(central);
  central->add_option("--var", var, "program variable")->required();
  central->add_option("--order", order, "highest order (default 2)");

  auto* after = app.add_subcommand("after-termination", "moments after loop termination");
  add_common(after);
  after->add_option("--goal", goal_single, "moment goal")->required();

  auto* gram = app.add_subcommand("gram-charlier", "density expansion coefficients");
  add_common(gram);
  gram->add_option("--var", var, "program variable")->required();
  gram->add_option("--order", order, "number of moments")->required();
  gram->add_option("--at", at, "iteration")->required();

  auto* sample = app.add_subcommand("sample", "seeded Monte Carlo estimate");
  add_common(sample);
  sample->add_option("--goal", goal_single, "moment goal")->required();
  sample->add_option("--at", at, "iteration")->required();
  sample->add_option("--seed", seed, "PRNG seed");
  sample->add_option("--samples", samples, "sample count");

  auto* enumerate = app.add_subcommand("enumerate", "exact distribution enumeration");
  add_common(enumerate);
  enumerate->add_option("--goal", goals, "moment goal(s)")->required();
  enumerate->add_option("--at", at, "iteration")->required();

  std::vector<const char*> argv;
  argv.push_back("moment-forge");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends print through CLI11's stream
      std::ostringstream help;
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  have_at = at_opt->count() > 0;

  try {
    if (moments->parsed()) {
      return cmd_moments(common, goals,
                         have_at ? std::optional<std::uint64_t>(at) : std::nullopt, out);
    }
    if (eval->parsed()) return cmd_eval(common, goal_single, at, out);
    if (system->parsed()) return cmd_system(common, goals, out);
    if (normalize->parsed()) return cmd_normalize(common, out);
    if (check->parsed()) return cmd_check(common, show_types, out);
    if (distribution->parsed()) return cmd_distribution(common, var, out);
    if (tails->parsed()) return cmd_tails(common, var, threshold, order, out);
    if (central->parsed()) return cmd_central(common, var, order, out);
    if (after->parsed()) return cmd_after_termination(common, goal_single, out);
    if (gram->parsed()) return cmd_gram_charlier(common, var, order, at, out);
    if (sample->parsed()) return cmd_sample(common, goal_single, at, seed, samples, out);
    if (enumerate->parsed()) return cmd_enumerate(common, goals, at, out);
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const SyntaxError& e) {
    err << "syntax error at " << e.line() << ":" << e.col() << ": " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UsageError) {
      err << "usage error: " << e.what() << "\n";
      return 2;
    }
    err << "error [" << e.code_name() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace momentforge
