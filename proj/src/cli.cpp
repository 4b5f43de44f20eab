#include "lsf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lsf/error.hpp"
#include "lsf/rewrite.hpp"
#include "lsf/solver.hpp"
#include "lsf/sort.hpp"
#include "lsf/syntax.hpp"
#include "lsf/transform.hpp"

namespace lsf {

namespace {

struct Options {
  bool debruijn = false;
  std::uint64_t fuel = kDefaultFuel;
  std::string file;
  std::string second;
  std::string mode;
  std::string problem;
  std::string strategy = "lo";
  std::uint64_t seed = 0;
  unsigned bound = 0;
  unsigned depth = SearchConfig{}.depth_bound;
  unsigned max_solutions = SearchConfig{}.max_solutions;
  bool all = false;
  bool oracle = false;
  bool trace = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t default_fuel() {
  if (const char* env = std::getenv("LSF_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("LSF_FUEL is not a number: ") + env);
    }
  }
  return kDefaultFuel;
}

Mode parse_mode(const std::string& text) {
  if (text == "sigma") return Mode::SigmaOnly;
  if (text == "lambdasigma") return Mode::LambdaSigma;
  throw Error("unknown mode " + text + " (expected sigma or lambdasigma)");
}

void print_solutions(std::ostream& out, const ProblemFile& pf, const std::vector<MetaSubst>& sols, RenderStyle style) {
  for (std::size_t i = 0; i < sols.size(); ++i) {
    if (i) out << "--\n";
    if (pf.problem.metas.empty()) out << "(empty substitution)\n";
    for (const auto& [name, sort] : pf.problem.metas) {
      const Term* t = sols[i].find(name);
      if (t) out << "?" << name << " := " << render_term(*t, meta_env(pf, name), style) << "\n";
    }
  }
}

SearchOutcome search_sigma(const UnifProblem& p, const SearchConfig& cfg) {
  if (is_ground(p.lhs) || is_ground(p.rhs)) return match_sigma(p, cfg);
  return solve_sigma(p, cfg);
}

// Reduces a lambda-sigma problem, searches the reduced problem and lifts every
// solution back to the source unknowns.
SearchOutcome solve_by_reduction(const UnifProblem& p, const SearchConfig& cfg) {
  ReductionCertificate cert = reduce_problem(p, cfg.fuel);
  SearchOutcome sub = search_sigma(cert.target, sigma_config_for(p, cfg));
  if (!solved(sub)) return sub;
  std::vector<MetaSubst> lifted;
  for (const auto& theta : solutions(sub)) {
    MetaSubst l = lift_solution(cert, theta);
    if (!check_solution(p, l, cfg.fuel)) throw Error("lifted substitution fails on the source problem");
    lifted.push_back(std::move(l));
  }
  return Solved{std::move(lifted)};
}

int report_outcome(std::ostream& out, std::ostream& err, const ProblemFile& pf, const SearchOutcome& outcome,
                   RenderStyle style) {
  if (const auto* s = std::get_if<Solved>(&outcome)) {
    print_solutions(out, pf, s->solutions, style);
    return 0;
  }
  if (const auto* n = std::get_if<ExhaustedNoSolution>(&outcome)) {
    out << "no solution with size <= " << n->size_bound << " and depth <= " << n->depth_bound << " ("
        << n->candidates << " candidates checked)\n";
    return 1;
  }
  err << "aborted: " << std::get<Aborted>(outcome).reason << "\n";
  return 2;
}

int cmd_check(const Options& o, std::ostream& out) {
  ProblemFile pf = parse_problem(read_file(o.file));
  ValidationReport r = validate_problem(pf.problem);
  out << r.render();
  return r.ok() ? 0 : 1;
}

int cmd_precook(const Options& o, std::ostream& out, RenderStyle style) {
  ProblemFile pf = parse_problem(read_file(o.file));
  ProblemFile cooked{precook(pf.problem), pf.ctx_names, std::nullopt, {}};
  out << "; " << render_equation(cooked, style) << "\n" << render_problem(cooked);
  return 0;
}

int cmd_reduce(const Options& o, std::ostream& out, RenderStyle style) {
  ProblemFile pf = parse_problem(read_file(o.file));
  ReductionCertificate cert = reduce_problem(pf.problem, o.fuel);
  ProblemFile target{cert.target, pf.ctx_names, std::nullopt, cert.var_map};
  out << "; " << render_equation(target, style) << "\n" << render_problem(target);
  return 0;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err, RenderStyle style) {
  ProblemFile pf = parse_problem(read_file(o.file));
  if (!o.mode.empty()) pf.problem.mode = parse_mode(o.mode);
  SearchConfig cfg;
  cfg.size_bound = o.bound ? o.bound : (pf.expect ? pf.expect->bound : SearchConfig{}.size_bound);
  cfg.depth_bound = o.depth;
  cfg.fuel = o.fuel;
  cfg.find_all = o.all;
  cfg.max_solutions = o.max_solutions;
  SearchOutcome outcome = Aborted{""};
  if (pf.problem.mode == Mode::SigmaOnly) {
    outcome = search_sigma(pf.problem, cfg);
  } else if (o.oracle) {
    outcome = decide_small_lambda(pf.problem, cfg);
  } else {
    outcome = solve_by_reduction(pf.problem, cfg);
  }
  return report_outcome(out, err, pf, outcome, style);
}

bool has_beta_redex(const Term& t) {
  auto rs = redexes(t, RuleSet::LambdaSigma);
  return std::any_of(rs.begin(), rs.end(), [](const Redex& r) { return r.rule == RuleId::Beta; });
}

int cmd_verify(const Options& o, std::ostream& out) {
  ProblemFile pf = parse_problem(read_file(o.file));
  MetaSubst theta = parse_subst(read_file(o.second), pf);
  if (pf.problem.mode == Mode::SigmaOnly) {
    for (const auto& [name, t] : theta) {
      if (has_beta_redex(t)) out << "note: binding of ?" << name << " has a beta-redex that sigma leaves in place\n";
    }
  }
  bool ok = check_solution(pf.problem, theta, o.fuel);
  out << (ok ? "verdict: solution\n" : "verdict: not a solution\n");
  return ok ? 0 : 1;
}

int cmd_normalize(const Options& o, std::ostream& out, RenderStyle style) {
  std::string text = std::filesystem::is_regular_file(o.file) ? read_file(o.file) : o.file;
  NameEnv env;
  Term t = Term::index(1);
  if (!o.problem.empty()) {
    ProblemFile pf = parse_problem(read_file(o.problem));
    env = problem_env(pf);
    t = parse_term(text, pf);
  } else {
    t = parse_term(text, env);
  }
  RuleSet rules = (!o.mode.empty() && parse_mode(o.mode) == Mode::SigmaOnly) ? RuleSet::SigmaOnly
                                                                              : RuleSet::LambdaSigma;
  Strategy strategy = Strategy::leftmost_outermost();
  if (o.strategy == "random") {
    strategy = Strategy::randomized(o.seed);
  } else if (o.strategy != "lo") {
    throw Error("unknown strategy " + o.strategy + " (expected lo or random)");
  }
  if (o.trace) {
    auto [nf, trace] = normalize_traced(t, rules, strategy, o.fuel);
    for (const auto& s : trace.steps) {
      out << render_path(s.position) << "  " << rule_name(s.rule) << "  " << render_term(s.after, env, style) << "\n";
    }
    out << render_term(nf, env, style) << "\n";
  } else {
    out << render_term(normalize(t, rules, strategy, o.fuel), env, style) << "\n";
  }
  return 0;
}

// Runs one annotated corpus file; returns the observed outcome description and
// whether it matches the annotation.
std::pair<bool, std::string> run_corpus_file(const ProblemFile& pf, std::uint64_t fuel) {
  SearchConfig cfg;
  cfg.size_bound = pf.expect->bound;
  cfg.fuel = fuel;
  SearchOutcome outcome = pf.problem.mode == Mode::SigmaOnly ? search_sigma(pf.problem, cfg)
                                                              : decide_small_lambda(pf.problem, cfg);
  if (const auto* a = std::get_if<Aborted>(&outcome)) return {false, "aborted: " + a->reason};
  bool found = solved(outcome);
  std::string got = found ? "solvable" : "no-solution";
  if (found != pf.expect->solvable) return {false, got};
  if (found && pf.problem.mode == Mode::LambdaSigma) {
    SearchOutcome reduced = solve_by_reduction(pf.problem, cfg);
    if (!solved(reduced)) return {false, got + ", but the reduced problem has no solution within bounds"};
    got += " (reduced problem solved)";
  }
  return {true, got};
}

int cmd_corpus_run(const Options& o, std::ostream& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(o.file)) throw Error("not a directory: " + o.file);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.file)) {
    if (entry.is_regular_file() && entry.path().extension() == ".sig") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t passed = 0;
  std::size_t annotated = 0;
  for (const auto& path : files) {
    std::string name = path.filename().string();
    try {
      ProblemFile pf = parse_problem(read_file(path.string()));
      if (!pf.expect) {
        out << "SKIP  " << name << "  no expectation\n";
        continue;
      }
      ++annotated;
      auto [ok, got] = run_corpus_file(pf, o.fuel);
      std::string expected = pf.expect->solvable ? "solvable" : "no-solution";
      out << (ok ? "PASS  " : "FAIL  ") << name << "  expected " << expected << " :bound " << pf.expect->bound
          << ", got " << got << "\n";
      if (ok) ++passed;
    } catch (const Error& e) {
      ++annotated;
      out << "FAIL  " << name << "  " << e.what() << "\n";
    }
  }
  out << passed << "/" << annotated << " passed\n";
  return passed == annotated ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Unification problems over the lambda-sigma calculus", "lsf"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--debruijn", o.debruijn, "Render terms with de Bruijn indices");
  app.add_option("--fuel", o.fuel, "Rewrite step limit (default: LSF_FUEL or 1000000)");

  auto* check = app.add_subcommand("check", "Validate a problem file");
  check->add_option("file", o.file)->required();

  auto* precook_cmd = app.add_subcommand("precook", "Tag unknowns under binders with shifts");
  precook_cmd->add_option("file", o.file)->required();

  auto* reduce = app.add_subcommand("reduce", "Reduce a second-order problem to a sigma problem");
  reduce->add_option("file", o.file)->required();

  auto* solve = app.add_subcommand("solve", "Bounded search for solutions");
  solve->add_option("file", o.file)->required();
  solve->add_option("--bound", o.bound, "Size bound (default: the file's annotation, else 4)");
  solve->add_option("--depth", o.depth, "Depth bound");
  solve->add_option("--max-solutions", o.max_solutions, "Stop after this many solutions with --all");
  solve->add_flag("--all", o.all, "Report every solution up to --max-solutions");
  solve->add_option("--mode", o.mode, "Override the file's mode: sigma or lambdasigma");
  solve->add_flag("--oracle", o.oracle, "Search lambda terms directly instead of reducing");

  auto* verify = app.add_subcommand("verify", "Check a substitution file against a problem");
  verify->add_option("problem", o.file)->required();
  verify->add_option("subst", o.second)->required();

  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize a term");
  normalize_cmd->add_option("term", o.file, "An s-expression or a file holding one")->required();
  normalize_cmd->add_option("--mode", o.mode, "sigma or lambdasigma (default)");
  normalize_cmd->add_option("--problem", o.problem, "Problem file giving context names and unknowns");
  normalize_cmd->add_option("--strategy", o.strategy, "lo (leftmost-outermost) or random");
  normalize_cmd->add_option("--seed", o.seed, "Seed for --strategy random");
  normalize_cmd->add_flag("--trace", o.trace, "Print every step");

  auto* corpus = app.add_subcommand("corpus", "Corpus operations");
  corpus->require_subcommand(1);
  auto* corpus_run = corpus->add_subcommand("run", "Check every annotated file in a directory");
  corpus_run->add_option("dir", o.file)->required();

  try {
    o.fuel = default_fuel();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  RenderStyle style = o.debruijn ? RenderStyle::DeBruijn : RenderStyle::Named;
  try {
    if (check->parsed()) return cmd_check(o, out);
    if (precook_cmd->parsed()) return cmd_precook(o, out, style);
    if (reduce->parsed()) return cmd_reduce(o, out, style);
    if (solve->parsed()) return cmd_solve(o, out, err, style);
    if (verify->parsed()) return cmd_verify(o, out);
    if (normalize_cmd->parsed()) return cmd_normalize(o, out, style);
    if (corpus_run->parsed()) return cmd_corpus_run(o, out);
  } catch (const IllTyped& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "usage error: no command given\n";
  return 2;
}

}  // namespace lsf
