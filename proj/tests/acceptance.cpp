// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qfusion/boundary_measure.hpp"
#include "qfusion/central_traces.hpp"
#include "qfusion/faithfulness.hpp"
#include "qfusion/fusion.hpp"
#include "qfusion/matrix_lemmas.hpp"
#include "qfusion/qarith.hpp"
#include "qfusion/rng.hpp"
#include "qfusion/tree_walk.hpp"

using namespace qfusion;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// collects failures and a short summary for the report line
struct Tally {
  Outcome out;
  std::ostringstream note;

  void expect(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      note << "first failure: " << what << "; ";
    }
  }
  Outcome done() {
    out.detail = note.str();
    return out;
  }
};

const std::vector<const char*> kQs = {"0.2", "0.5", "1"};

Outcome fusion_dimension() {
  Tally t;
  const Real tol("1e-30");
  Real worst = 0;
  for (const char* qs : {"0.2", "0.5", "1"}) {
    const Real q(qs);
    auto check_pair = [&](const Word& x, const Word& y) {
      Real sum = 0;
      for (const auto& [w, m] : tensor_decompose(x, y)) sum += to_scalar<Real>(m) * oracle::qdim(oracle::text(w), q);
      const Real e = relative_error(sum, Real(oracle::qdim(oracle::text(x), q) * oracle::qdim(oracle::text(y), q)));
      if (e > worst) worst = e;
      t.expect(e <= tol, x.to_string() + " x " + y.to_string() + " at q=" + qs);
    };
    const auto words = words_up_to(4);
    for (const Word& x : words) {
      for (const Word& y : words) check_pair(x, y);
    }
    CounterRng rng(2024, 1);
    for (int i = 0; i < 500; ++i) {
      const std::size_t lx = rng() % 9, ly = rng() % 9;
      check_pair(Word::from_bits(rng(), lx), Word::from_bits(rng(), ly));
    }
  }
  t.note << "max rel err " << format(worst, 3);
  return t.done();
}

Outcome associativity() {
  Tally t;
  const auto words = words_up_to(4);
  std::size_t triples = 0;
  for (const Word& x : words) {
    for (const Word& y : words) {
      const Decomposition xy = tensor_decompose(x, y);
      for (const Word& z : words) {
        ++triples;
        const auto left = triple_decompose(x, y, z, Association::Left);
        const auto right = triple_decompose(x, y, z, Association::Right);
        t.expect(left == right, x.to_string() + "," + y.to_string() + "," + z.to_string());
        t.expect(left == tensor_decompose(xy, z), "left product mismatch");
      }
    }
  }
  t.note << triples << " triples";
  return t.done();
}

Outcome level_dimension() {
  Tally t;
  const Real tol("1e-30");
  Real worst = 0;
  for (const char* qs : kQs) {
    const Real q(qs);
    const auto ctx = context_from_q(q);
    std::vector<std::string> level{""};
    for (std::size_t n = 0; n <= 16; ++n) {
      if (n > 0) level = oracle::level(n);
      Real sum = 0;
      for (const auto& x : level) sum += oracle::qdim(x, q);
      const Real e = relative_error(qdim_level(n, ctx), sum);
      if (e > worst) worst = e;
      t.expect(e <= tol, "closed form n=" + std::to_string(n) + " q=" + qs);
      if (n >= 1) {
        const Real lhs = 2 * (q + 1 / q) * qdim_level(n, ctx);
        const Real rhs = qdim_level(n + 1, ctx) + 2 * qdim_level(n - 1, ctx);
        t.expect(relative_error(lhs, rhs) <= tol, "recursion n=" + std::to_string(n) + " q=" + qs);
      }
    }
  }
  t.note << "max rel err " << format(worst, 3);
  return t.done();
}

Outcome trace_convolution() {
  Tally t;
  using Elem = CentralElement<Multiplicity>;
  const Elem one = Elem::level(1);
  for (std::size_t n = 0; n <= 10; ++n) {
    // multiset of summands from the oracle, one level at a time
    std::map<std::string, int> lhs;
    for (const auto& x : oracle::level(n)) {
      for (const auto& [w, m] : oracle::fuse("u", x)) lhs[w] += m;
      for (const auto& [w, m] : oracle::fuse("b", x)) lhs[w] += m;
    }
    std::map<std::string, int> rhs;
    for (const auto& w : oracle::level(n + 1)) rhs[w] += 1;
    if (n >= 1) {
      for (const auto& w : oracle::level(n - 1)) rhs[w] += 2;
    }
    t.expect(lhs == rhs, "oracle multiset n=" + std::to_string(n));
    const Elem got = convolve(one, Elem::level(n));
    std::map<std::string, int> lib;
    for (const auto& [w, m] : got) lib[oracle::text(w)] = m.convert_to<int>();
    t.expect(lib == rhs, "library convolution n=" + std::to_string(n));
  }
  t.note << "n <= 10";
  return t.done();
}

Outcome gap_sweep() {
  Tally t;
  Real worst_ratio = 0, worst_diff = 0;
  std::size_t cells = 0;
  for (const char* qs : kQs) {
    const auto ctx = context_from_q(Real(qs));
    for (std::size_t n = 2; n <= 16; ++n) {
      const auto dims = level_dimensions(n, ctx);
      for (std::size_t p = 1; p < n; ++p) {
        for (std::size_t k = 1; p + k <= n; ++k) {
          ++cells;
          const Real e = restricted_trace_gap_enumerated(dims, n, p, k);
          const Real d = restricted_trace_gap_dp(n, p, k, ctx);
          const Real bound = ldexp(Real(1), -static_cast<int>(k));
          const std::string cell = "(n=" + std::to_string(n) + ",p=" + std::to_string(p) +
                                   ",k=" + std::to_string(k) + ",q=" + qs + ")";
          t.expect(abs(e - d) <= Real("1e-25"), "dp vs enumeration " + cell);
          t.expect(e <= bound, "bound " + cell);
          if (abs(e - d) > worst_diff) worst_diff = abs(e - d);
          if (e / bound > worst_ratio) worst_ratio = e / bound;
        }
      }
    }
  }
  const auto one = context_from_q(Real(1));
  t.expect(abs(restricted_trace_gap(3, 1, 2, one, GapMethod::Enumerate) - Real(1) / 6) <= Real("1e-30"),
           "worked cell 1/6");
  t.note << cells << " cells, max gap/2^-k " << format(worst_ratio, 6) << ", max |dp-enum| " << format(worst_diff, 3);
  return t.done();
}

Outcome ratio_limit() {
  Tally t;
  Real worst = 0;
  for (const char* qs : {"0.2", "0.5", "0.9", "1"}) {
    const auto ctx = context_from_q(Real(qs));
    for (const Word& x : words_up_to(6)) {
      const Real diff = abs(dimq_ratio_limit(x, x.size() + 200, ctx) - harmonic_cylinder_mass(x, ctx));
      if (diff > worst) worst = diff;
      t.expect(diff <= Real("1e-12"), oracle::text(x) + " q=" + qs);
    }
  }
  t.note << "max abs err " << format(worst, 3);
  return t.done();
}

Outcome cylinder_measure() {
  Tally t;
  Real worst_base = 0;
  for (const char* qs : kQs) {
    const auto ctx = context_from_q(Real(qs));
    const auto m = build_cylinder_measure(10, ctx);
    t.expect(m.consistency_residual() <= Real("1e-25"), std::string("consistency q=") + qs);
    for (std::size_t d = 0; d <= 10; ++d) {
      t.expect(abs(m.level_sum(d) - 1) <= Real("1e-25"), "level sum d=" + std::to_string(d) + " q=" + qs);
    }
    for (const Word& x : words_up_to(5)) {
      const auto r = non_atomicity_report(x, 40, ctx, Real(0));
      t.expect(r.base_below_one, std::string("base q=") + qs);
      t.expect(r.all_hold(), "decay " + oracle::text(x) + " q=" + qs);
      if (r.base > worst_base) worst_base = r.base;
    }
  }
  t.note << "largest base " << format(worst_base, 6);
  return t.done();
}

Outcome walk_trace() {
  Tally t;
  Real worst = 0;
  for (const char* qs : kQs) {
    const auto ctx = context_from_q(Real(qs));
    for (std::size_t n = 0; n <= 14; ++n) {
      const auto marginal = level_marginal(exact_distribution(n, n, ctx));
      const auto weights = qtr1_power_distribution(n, ctx);
      t.expect(marginal.size() == weights.size(), "support n=" + std::to_string(n));
      for (const auto& [k, p] : weights) {
        auto it = marginal.find(k);
        const Real diff = it == marginal.end() ? p : Real(abs(it->second - p));
        if (diff > worst) worst = diff;
        t.expect(diff <= Real("1e-20"), "n=" + std::to_string(n) + " k=" + std::to_string(k) + " q=" + qs);
      }
    }
    const WalkKernel<Real> kernel(ctx, 12);
    for (const Word& x : words_up_to(10)) {
      Real total = 0;
      for (const auto& [y, p] : kernel.step(x)) {
        t.expect(p >= 0, "negative weight at " + oracle::text(x));
        total += p;
      }
      t.expect(abs(total - 1) <= Real("1e-30"), "row sum at " + oracle::text(x));
    }
  }
  t.note << "max marginal diff " << format(worst, 3);
  return t.done();
}

Outcome monte_carlo() {
  Tally t;
  const auto ctx = context_from_q(Real(1));
  WalkConfig cfg;
  cfg.seed = 7;
  cfg.n_paths = 1'000'000;
  cfg.escape_level = 60;
  cfg.record_depth = 2;
  const auto a = monte_carlo_hitting(cfg, ctx);
  const auto b = monte_carlo_hitting(cfg, ctx);
  t.expect(a.completed == cfg.n_paths && a.failures == 0, "paths stopped by the step cap");
  t.expect(a.cylinders.size() == 4, "four depth-2 cylinders");
  double worst_z = 0;
  for (std::size_t i = 0; i < a.cylinders.size(); ++i) {
    const auto& c = a.cylinders[i];
    const double expected = harmonic_cylinder_mass(c.word, ctx).convert_to<double>();
    // binomial σ from the predicted mass
    const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(cfg.n_paths));
    const double z = (c.estimate - expected) / sigma;
    worst_z = std::max(worst_z, std::abs(z));
    t.expect(std::abs(z) <= 3, "cylinder " + c.word.to_string());
    t.expect(c.count == b.cylinders[i].count && c.estimate == b.cylinders[i].estimate, "rerun differs");
  }
  t.expect(a.total_steps == b.total_steps && a.returns_to_root == b.returns_to_root, "rerun step counts differ");
  t.note << "max |z| " << format(worst_z, 4);
  return t.done();
}

Outcome woronowicz() {
  Tally t;
  std::mt19937_64 gen(31);
  std::normal_distribution<double> g;
  CounterRng rng(31, 2);
  std::vector<Word> words;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t len = 1 + rng() % 24;
    words.push_back(Word::from_bits(rng(), len));
  }
  Real worst = 0;
  for (std::size_t N : {3, 4, 5}) {
    for (int i = 0; i < 100; ++i) {
      Eigen::MatrixXcd F(N, N);
      for (Eigen::Index r = 0; r < F.rows(); ++r) {
        for (Eigen::Index c = 0; c < F.cols(); ++c) F(r, c) = std::complex<double>(g(gen), g(gen));
      }
      const auto [ctx, spec] = context_from_F(F);
      const auto rep = verify_woronowicz_bounds(ctx, spec, i == 0 ? words : std::vector<Word>{}, Real("1e-9"));
      if (rep.q_rho > worst) worst = rep.q_rho;
      t.expect(rep.q_rho_below_one == Strictness::Holds, "q rho for N=" + std::to_string(N));
      t.expect(rep.all_word_bounds_hold(), "word bounds N=" + std::to_string(N));
      // dimension lower bound straight from the oracle
      if (i == 0) {
        for (const Word& x : words) {
          t.expect(oracle::qdim(x.to_string(), ctx.q) >= pow(ctx.q, -static_cast<long>(x.size())),
                   "dim lower bound " + x.to_string());
        }
      }
    }
  }
  for (double s : {1.5, 2.0, 5.0}) {
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Identity(2, 2);
    F(0, 0) = s;
    const auto [ctx, spec] = context_from_F(F);
    const auto rep = verify_woronowicz_bounds(ctx, spec, words, Real("1e-9"));
    t.expect(abs(rep.q_rho - 1) <= Real("1e-12"), "diag family t=" + format(s, 3));
    t.expect(rep.all_word_bounds_hold(), "diag family word bounds");
  }
  t.note << "max q rho over random F " << format(worst, 6);
  return t.done();
}

Outcome faithfulness() {
  Tally t;
  const std::vector<Word> F{Word::parse("u")};
  const auto cert = banica_min_N(F, 8);
  t.expect(cert && cert->N == 1, "minimal N for u is 1");
  if (cert) {
    t.expect(reverify_certificate(*cert), "certificate re-derivation");
    std::set<std::string> expect, got;
    for (const auto& [w, m] : oracle::fuse(oracle::fuse("ub", "u"), "ub")) expect.insert(w);
    for (const Word& w : cert->entries.at(0).subobjects) got.insert(w.to_string());
    t.expect(got == expect, "certificate lists every subobject");
  }
  std::vector<std::string> missing;
  for (const Word& x : words_up_to(4)) {
    if (x.empty()) continue;
    const auto n = banica_min_N(x, 8);
    if (!n) missing.push_back(x.to_string());
  }
  std::string list;
  for (const auto& m : missing) list += (list.empty() ? "" : ",") + m;
  t.expect(missing.empty(), "no certificate up to N=8 for " + list);
  const auto scan = disjoint_support_check(F, 1, 12);
  t.expect(scan.disjoint(), "support scan for u");
  const auto w = strong_faithfulness_witness_norm(F, Word::parse("b"), 1, 12);
  t.expect(w.value == 0, "witness norm");
  const std::vector<Word> G{Word::parse("ub")};
  const auto control = disjoint_support_check(G, 1, 12);
  t.expect(!control.disjoint(), "negative control");
  t.note << "scanned " << scan.scanned << ", control witness "
         << (control.disjoint() ? std::string("none") : control.violations.front().s.to_string())
         << ", uncertified singletons " << (list.empty() ? std::string("none") : list);
  return t.done();
}

Outcome matrix_lemmas() {
  Tally t;
  double worst_slack = 1e300;
  for (double eps : {0.05, 0.1, 0.25, 0.5}) {
    const auto a = asymptotic_sweep(eps, 10'000, 101);
    const auto b = easy_sweep(eps, 10'000, 202);
    t.expect(a.samples == 10'000 && a.pass(), "power bound eps=" + format(eps, 3));
    t.expect(b.samples == 10'000 && b.pass(), "sum bound eps=" + format(eps, 3));
    worst_slack = std::min({worst_slack, a.worst_slack, b.worst_slack});
  }
  double worst_theta = 1e300;
  for (double theta : {M_PI / 12, M_PI / 6, M_PI / 3}) {
    const auto r = theta_rotation_probe(theta, 8, 10'000, 303);
    t.expect(r.samples == 10'000, "theta sample count");
    t.expect(r.worst_value >= theta_bound(theta) - 1e-9, "theta minimum theta=" + format(theta, 4));
    worst_theta = std::min(worst_theta, r.worst_value - theta_bound(theta));
  }
  t.note << "min slack " << format(worst_slack, 4) << ", min theta slack " << format(worst_theta, 4);
  return t.done();
}

}  // namespace

int main() {
  set_precision_bits(kDefaultPrecisionBits);
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"fusion-dimension", 10, fusion_dimension},
      {"associativity", 30, associativity},
      {"level-dimension", 0, level_dimension},
      {"trace-convolution", 0, trace_convolution},
      {"gap-sweep", 120, gap_sweep},
      {"ratio-limit", 60, ratio_limit},
      {"cylinder-measure", 0, cylinder_measure},
      {"walk-trace", 0, walk_trace},
      {"monte-carlo", 120, monte_carlo},
      {"woronowicz", 0, woronowicz},
      {"faithfulness", 300, faithfulness},
      {"matrix-lemmas", 180, matrix_lemmas},
  };
  bool all = true;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += " over time limit " + format(c.limit_s, 4) + " s;";
    }
    all = all && o.pass;
    std::printf("%-4d %-18s %s  %.2fs  %s\n", index, c.name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
