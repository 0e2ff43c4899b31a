#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfusion/boundary_measure.hpp"
#include "qfusion/central_traces.hpp"
#include "qfusion/config.hpp"
#include "qfusion/faithfulness.hpp"
#include "qfusion/fusion.hpp"
#include "qfusion/matrix_lemmas.hpp"
#include "qfusion/qarith.hpp"
#include "qfusion/tree_walk.hpp"
#include "qfusion/verify.hpp"

using namespace qfusion;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfig = 2;

struct Common {
  std::optional<std::string> q;
  std::optional<std::string> F;
  unsigned precision = 128;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string format = "csv";
  std::optional<std::string> out;
};

double dbl(const Real& x) { return x.convert_to<double>(); }

std::vector<Word> parse_words(const std::vector<std::string>& texts) {
  std::vector<Word> out;
  for (const auto& t : texts) {
    try {
      out.push_back(Word::parse(t));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::vector<Word> parse_word_list(const std::string& csv) {
  std::vector<std::string> parts;
  std::stringstream ss(csv);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  return parse_words(parts);
}

json chain_json(const SupportChain& c) {
  json f = json::array(), p = json::array();
  for (const auto& w : c.factors) f.push_back(w.to_string());
  for (const auto& w : c.path) p.push_back(w.to_string());
  return {{"factors", f}, {"path", p}};
}

json violation_json(const SupportViolation& v) {
  return {{"s", v.s.to_string()}, {"via_U", chain_json(v.via_U)}, {"via_x", chain_json(v.via_x)}};
}

json context_json(const RunContext& rc) {
  json j{{"source", rc.source},
         {"q", format(rc.ctx.q)},
         {"kappa", format(rc.ctx.kappa)},
         {"dim_u", format(rc.ctx.dim_u)},
         {"precision_bits", rc.ctx.precision_bits}};
  if (rc.ctx.rho) j["rho"] = format(*rc.ctx.rho);
  return j;
}

class Output {
 public:
  explicit Output(const std::optional<std::string>& path) {
    if (path) {
      file_.open(*path);
      if (!file_) throw ConfigError("cannot write " + *path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_decompose(const Common& c, const std::vector<std::string>& texts) {
  const auto words = parse_words(texts);
  if (words.empty()) throw ConfigError("decompose needs at least one word");
  const RunContext rc = resolve_context(c.q, c.F);
  const Decomposition d = product_decompose(words);
  Real lhs = 1;
  for (const Word& w : words) lhs *= qdim_word(w, rc.ctx);
  Real rhs = 0;
  for (const auto& [w, m] : d) rhs += to_scalar<Real>(m) * qdim_word(w, rc.ctx);
  const Real err = abs(lhs - rhs) / lhs;
  Output out(c.out);
  auto& os = out.stream();
  if (c.format == "json") {
    json s = json::array();
    for (const auto& [w, m] : d) s.push_back({{"word", w.to_string()}, {"multiplicity", m.str()}});
    json j{{"summands", s},
           {"dim_product", format(lhs)},
           {"dim_sum", format(rhs)},
           {"relative_error", format(err)},
           {"precision_bits", rc.ctx.precision_bits}};
    os << j.dump(2) << '\n';
  } else {
    std::string line;
    for (const auto& [w, m] : d) {
      if (!line.empty()) line += ", ";
      if (m != 1) line += m.str() + "*";
      line += w.to_string();
    }
    os << line << '\n';
    os << "dim: " << format(lhs) << " = " << format(rhs) << " (relative error " << format(err, 3)
       << ", precision_bits=" << rc.ctx.precision_bits << ")\n";
  }
  return kOk;
}

int cmd_verify(const Common& c, const std::vector<std::string>& suites, const VerifyOptions& opts) {
  const RunContext rc = resolve_context(c.q, c.F);
  const auto names = expand_suites(suites.empty() ? std::vector<std::string>{"all"} : suites);
  json report{{"context", context_json(rc)}, {"suites", json::array()}};
  bool pass = true;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, rc, opts);
    pass = pass && r.pass;
    report["suites"].push_back(to_json(r));
    std::cerr << (r.pass ? "PASS " : "FAIL ") << name << '\n';
  }
  report["pass"] = pass;
  Output out(c.out);
  out.stream() << report.dump(2) << '\n';
  return pass ? kOk : kFailed;
}

int cmd_walk(const Common& c, WalkConfig cfg, const std::string& start_text) {
  const RunContext rc = resolve_context(c.q, c.F);
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const Word start = parse_words({start_text}).front();
  const HittingEstimate est = monte_carlo_exit(start, cfg, rc.ctx);
  // expected exit law from `start`: harmonic mass conditioned on the start
  // cylinder only makes sense from ε, so the closed form is reported there
  const bool from_root = start.empty();
  Output out(c.out);
  auto& os = out.stream();
  auto row_values = [&](const CylinderEstimate& e) {
    double expected = NAN, z = NAN;
    if (from_root) {
      expected = dbl(harmonic_cylinder_mass(e.word, rc.ctx));
      const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(std::max<std::uint64_t>(1, est.completed)));
      z = sigma > 0 ? (e.estimate - expected) / sigma : 0;
    }
    return std::pair{expected, z};
  };
  if (c.format == "json") {
    json rows = json::array();
    for (const auto& e : est.cylinders) {
      auto [expected, z] = row_values(e);
      json r{{"word", e.word.to_string()}, {"count", e.count}, {"estimate", e.estimate}, {"std_error", e.std_error}};
      if (from_root) {
        r["expected"] = expected;
        r["z"] = z;
      }
      rows.push_back(r);
    }
    json j{{"context", context_json(rc)},
           {"seed", cfg.seed},
           {"workers", cfg.workers},
           {"paths", est.n_paths},
           {"completed", est.completed},
           {"failures", est.failures},
           {"total_steps", est.total_steps},
           {"returns_to_root", est.returns_to_root},
           {"escape_level", cfg.escape_level},
           {"cylinders", rows}};
    os << j.dump(2) << '\n';
  } else {
    os << "# precision_bits=" << rc.ctx.precision_bits << " seed=" << cfg.seed << " paths=" << est.n_paths
       << " completed=" << est.completed << " failures=" << est.failures << " escape=" << cfg.escape_level << '\n';
    os << "word,count,estimate,std_error,expected,z\n";
    for (const auto& e : est.cylinders) {
      auto [expected, z] = row_values(e);
      os << e.word.to_string() << ',' << e.count << ',' << format(e.estimate) << ',' << format(e.std_error) << ','
         << (from_root ? format(expected) : "") << ',' << (from_root ? format(z) : "") << '\n';
    }
  }
  return est.failures == 0 ? kOk : kFailed;
}

int cmd_boundary(const Common& c, std::size_t depth) {
  const RunContext rc = resolve_context(c.q, c.F);
  if (depth > kMaxCylinderDepth) throw ConfigError("depth must be at most 14");
  const auto measure = build_cylinder_measure(depth, rc.ctx);
  const Real tol = 1e-25;
  std::ostringstream csv;
  write_cylinder_csv(csv, measure, rc.ctx, tol);
  const bool pass = csv.str().find(",fail") == std::string::npos;
  Output out(c.out);
  if (c.format == "json") {
    const Real base = rc.ctx.dim_u * rc.ctx.kappa / sqrt(Real(2));
    json rows = json::array();
    for (const auto& [x, m] : measure.masses) {
      const Real bound = pow(base, static_cast<long>(x.size()));
      rows.push_back({{"word", x.to_string()}, {"mass", format(m)}, {"bound", format(bound)}});
    }
    json j{{"context", context_json(rc)},
           {"depth", depth},
           {"consistency_residual", format(measure.consistency_residual())},
           {"pass", pass},
           {"cylinders", rows}};
    out.stream() << j.dump(2) << '\n';
  } else {
    out.stream() << csv.str();
  }
  return pass ? kOk : kFailed;
}

json sweep_json(const SweepReport& r) {
  return {{"which", to_string(r.kind)},
          {"parameter", r.parameter},
          {"samples", r.samples},
          {"precondition_failures", r.precondition_failures},
          {"violations", r.violations},
          {"worst_value", r.worst_value},
          {"bound", r.bound},
          {"worst_index", r.worst_index},
          {"pass", r.pass()}};
}

int cmd_lemmas(const Common& c, const std::string& which, std::uint64_t samples, std::vector<double> eps,
               std::vector<double> thetas, std::size_t max_dim) {
  if (which != "l49" && which != "l410" && which != "theta" && which != "all") {
    throw ConfigError("--which must be l49, l410, theta or all");
  }
  if (max_dim < 2 || max_dim > 64) throw ConfigError("--max-dim must lie in [2, 64]");
  if (eps.empty()) eps = {0.05, 0.1, 0.25, 0.5};
  if (thetas.empty()) thetas = {std::numbers::pi / 12, std::numbers::pi / 6, std::numbers::pi / 3};
  json reports = json::array();
  bool pass = true;
  auto add = [&](const SweepReport& r) {
    pass = pass && r.pass();
    reports.push_back(sweep_json(r));
  };
  for (double e : eps) {
    if (which == "l49" || which == "all") {
      if (!(e > 0 && e <= 0.5)) throw ConfigError("l49 needs eps in (0, 0.5]");
      add(asymptotic_sweep(e, samples, c.seed, max_dim, c.workers));
    }
    if (which == "l410" || which == "all") {
      if (!(e >= 0)) throw ConfigError("l410 needs eps >= 0");
      add(easy_sweep(e, samples, c.seed, max_dim, c.workers));
    }
  }
  if (which == "theta" || which == "all") {
    for (double t : thetas) add(theta_rotation_probe(t, 8, samples, c.seed, c.workers));
  }
  json j{{"seed", c.seed}, {"samples", samples}, {"margin", kLemmaMargin}, {"reports", reports}, {"pass", pass}};
  Output out(c.out);
  out.stream() << j.dump(2) << '\n';
  return pass ? kOk : kFailed;
}

int cmd_faithfulness(const Common& c, const std::string& words_text, std::size_t N_max, std::size_t L) {
  const auto words = parse_word_list(words_text);
  for (const Word& w : words) {
    if (w.empty()) throw ConfigError("the word set must not contain e");
  }
  if (N_max == 0) throw ConfigError("--N-max must be at least 1");
  if (L > 20) throw ConfigError("--L must be at most 20");
  const auto cert = banica_min_N(words, N_max);
  json j{{"words", json::array()}, {"N_max", N_max}, {"L", L}};
  for (const Word& w : words) j["words"].push_back(w.to_string());
  bool pass = false;
  if (!cert) {
    j["certificate"] = nullptr;
    j["failure"] = "no N <= N_max works";
  } else {
    json entries = json::array();
    for (const auto& e : cert->entries) {
      json subs = json::array();
      for (const auto& w : e.subobjects) subs.push_back(w.to_string());
      entries.push_back({{"x", e.x.to_string()}, {"subobjects", subs}, {"sandwiched", e.all_sandwiched}});
    }
    const bool reverified = reverify_certificate(*cert);
    const SupportReport support = disjoint_support_check(words, cert->N, L, c.workers);
    json violations = json::array();
    for (const auto& v : support.violations) violations.push_back(violation_json(v));
    j["certificate"] = {{"N", cert->N}, {"U", sandwich_word(cert->N).to_string()}, {"entries", entries},
                        {"reverified", reverified}};
    j["support"] = {{"scanned", support.scanned},
                    {"setA", support.setA_size},
                    {"setB", support.setB_size},
                    {"disjoint", support.disjoint()},
                    {"violations", violations}};
    j["witness_norm"] = support.disjoint() ? 0 : 1;
    pass = reverified && support.disjoint();
  }
  j["pass"] = pass;
  Output out(c.out);
  out.stream() << j.dump(2) << '\n';
  return pass ? kOk : kFailed;
}

int cmd_gap(const Common& c, std::size_t n, std::size_t p, std::size_t k) {
  const RunContext rc = resolve_context(c.q, c.F);
  if (p < 1 || k < 1 || n < p + k) throw ConfigError("need p >= 1, k >= 1, n >= p + k");
  const Real gap = restricted_trace_gap(n, p, k, rc.ctx, GapMethod::Dp);
  const Real bound = ldexp(Real(1), -static_cast<int>(k));
  const bool pass = gap <= bound;
  Output out(c.out);
  if (c.format == "json") {
    out.stream() << json{{"n", n}, {"p", p}, {"k", k}, {"gap", format(gap)}, {"bound", format(bound)},
                         {"pass", pass}, {"precision_bits", rc.ctx.precision_bits}}
                        .dump(2)
                 << '\n';
  } else {
    out.stream() << "# precision_bits=" << rc.ctx.precision_bits << "\nn,p,k,gap,bound,pass\n"
                 << n << ',' << p << ',' << k << ',' << format(gap) << ',' << format(bound) << ','
                 << (pass ? "pass" : "fail") << '\n';
  }
  return pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fusion rules, boundary measures and property checks for free unitary quantum groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--q", c.q, "deformation parameter in (0, 1]");
  app.add_option("--F", c.F, "JSON file holding {\"F\": ...} or {\"q\": ...}");
  app.add_option("--precision", c.precision, "working precision in bits (>= 64)");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "output file (default stdout)");

  std::function<int()> action;

  auto* decompose = app.add_subcommand("decompose", "decompose a tensor product of words over u, b");
  std::vector<std::string> dec_words;
  decompose->add_option("words", dec_words, "words, e for the empty word")->required();
  decompose->callback([&] { action = [&] { return cmd_decompose(c, dec_words); }; });

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::vector<std::string> suites;
  VerifyOptions vopts;
  verify->add_option("--suite", suites, "suite names or all")->delimiter(',');
  verify->add_option("--n-max", vopts.n_max, "largest level for level sweeps");
  verify->add_option("--samples", vopts.samples, "random samples per check");
  verify->add_option("--paths", vopts.walk_paths, "Monte Carlo paths");
  verify->add_option("--L", vopts.scan_length, "support scan length");
  verify->callback([&] {
    action = [&] {
      vopts.seed = c.seed;
      vopts.workers = c.workers;
      return cmd_verify(c, suites, vopts);
    };
  });

  auto* walk = app.add_subcommand("walk", "Monte Carlo exit law of the tree walk");
  WalkConfig wcfg;
  wcfg.n_paths = 100000;
  std::string start = "e";
  walk->add_option("--paths", wcfg.n_paths, "number of paths");
  walk->add_option("--escape", wcfg.escape_level, "escape level");
  walk->add_option("--depth", wcfg.record_depth, "prefix depth recorded at escape");
  walk->add_option("--start", start, "start word");
  walk->add_option("--step-cap", wcfg.step_cap, "steps before a path is abandoned");
  walk->callback([&] { action = [&] { return cmd_walk(c, wcfg, start); }; });

  auto* boundary = app.add_subcommand("boundary", "cylinder masses of the harmonic measure");
  std::size_t depth = 8;
  boundary->add_option("--depth", depth, "largest prefix length");
  boundary->callback([&] { action = [&] { return cmd_boundary(c, depth); }; });

  auto* lemmas = app.add_subcommand("lemmas", "randomized checks of the operator inequalities");
  std::string which = "all";
  std::uint64_t lemma_samples = 10000;
  std::vector<double> eps, thetas;
  std::size_t max_dim = 8;
  lemmas->add_option("--which", which, "l49, l410, theta or all");
  lemmas->add_option("--samples", lemma_samples, "samples per parameter");
  lemmas->add_option("--eps", eps, "epsilon values")->delimiter(',');
  lemmas->add_option("--theta", thetas, "rotation angles in radians")->delimiter(',');
  lemmas->add_option("--max-dim", max_dim, "largest matrix size");
  lemmas->callback([&] { action = [&] { return cmd_lemmas(c, which, lemma_samples, eps, thetas, max_dim); }; });

  auto* faith = app.add_subcommand("faithfulness", "sandwich certificate and support scan");
  std::string f_words = "u";
  std::size_t N_max = 8, L = 12;
  faith->add_option("--F-words", f_words, "comma separated words");
  faith->add_option("--N-max", N_max, "largest N tried");
  faith->add_option("--L", L, "support scan length");
  faith->callback([&] { action = [&] { return cmd_faithfulness(c, f_words, N_max, L); }; });

  auto* gap = app.add_subcommand("gap", "restricted trace gap");
  std::size_t gn = 3, gp = 1, gk = 2;
  gap->add_option("--n", gn, "level");
  gap->add_option("--p", gp, "window start (1-based)");
  gap->add_option("--k", gk, "window length");
  gap->callback([&] { action = [&] { return cmd_gap(c, gn, gp, gk); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (c.precision < 64) throw ConfigError("--precision must be at least 64");
    set_precision_bits(c.precision);
    return action();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
}
