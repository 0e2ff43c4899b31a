#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qfusion/boundary_measure.hpp"
#include "qfusion/central_traces.hpp"
#include "qfusion/tree_walk.hpp"

using namespace qfusion;

TEST_SUITE("tree_walk") {
  TEST_CASE("kernel rows sum to one and agree with the fusion form") {
    for (const char* qs : {"0.2", "0.5", "1"}) {
      const Real q(qs);
      const auto ctx = context_from_q(q);
      const WalkKernel<Real> kernel(ctx, 12);
      for (const Word& x : words_up_to(8)) {
        const auto row = kernel.step(x);
        const auto ref = step_distribution(x, ctx);
        REQUIRE(row.size() == ref.size());
        Real total = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
          CHECK(row[i].first == ref[i].first);
          CHECK(relative_error(row[i].second, ref[i].second) < Real("1e-30"));
          total += row[i].second;
        }
        CHECK(abs(total - 1) < Real("1e-30"));
        // transition weight into y is ½ dim(y) / (dim(x) dim(u)) off the straight step
        if (!x.empty()) {
          const std::string s = oracle::text(row[1].first);
          const Real expect = oracle::qdim(s, q) / (2 * oracle::qdim(oracle::text(x), q) * (q + 1 / q));
          CHECK(relative_error(row[1].second, expect) < Real("1e-30"));
        }
      }
    }
  }

  TEST_CASE("level marginal equals the trace power distribution") {
    const auto ctx = context_from_q(Real("0.35"));
    for (std::size_t n = 0; n <= 10; ++n) {
      const auto marginal = level_marginal(exact_distribution(n, n, ctx));
      const auto weights = qtr1_power_distribution(n, ctx);
      REQUIRE(marginal.size() == weights.size());
      for (const auto& [k, p] : weights) CHECK(abs(marginal.at(k) - p) < Real("1e-25"));
    }
    CHECK_THROWS(exact_distribution(5, 4, ctx));
  }

  TEST_CASE("constants are harmonic") {
    const auto ctx = context_from_q(Real("0.5"));
    std::map<Word, Real> f;
    for (const Word& x : words_up_to(5)) f[x] = Real(3);
    CHECK(harmonicity_residual(f, ctx) < Real("1e-30"));
    f.erase(Word::parse("uuuu"));
    CHECK_THROWS(harmonicity_residual(f, ctx));
  }

  TEST_CASE("monte carlo agrees with the cylinder masses") {
    const auto ctx = context_from_q(Real("0.7"));
    WalkConfig cfg;
    cfg.seed = 21;
    cfg.n_paths = 40000;
    cfg.escape_level = 40;
    cfg.record_depth = 2;
    const auto est = monte_carlo_hitting(cfg, ctx);
    CHECK(est.completed == cfg.n_paths);
    CHECK(est.failures == 0);
    REQUIRE(est.cylinders.size() == 4);
    double total = 0;
    for (const auto& c : est.cylinders) {
      const double expected = harmonic_cylinder_mass(c.word, ctx).convert_to<double>();
      CHECK(std::abs(c.estimate - expected) < 4 * c.std_error);
      total += c.estimate;
    }
    CHECK(total == doctest::Approx(1.0));
  }

  TEST_CASE("monte carlo is reproducible and worker independent") {
    const auto ctx = context_from_q(Real(1));
    WalkConfig cfg;
    cfg.seed = 5;
    cfg.n_paths = 5000;
    cfg.escape_level = 30;
    const auto a = monte_carlo_hitting(cfg, ctx);
    const auto b = monte_carlo_hitting(cfg, ctx);
    cfg.workers = 3;
    const auto c = monte_carlo_hitting(cfg, ctx);
    for (std::size_t i = 0; i < a.cylinders.size(); ++i) {
      CHECK(a.cylinders[i].count == b.cylinders[i].count);
      CHECK(a.cylinders[i].count == c.cylinders[i].count);
    }
    CHECK(a.total_steps == c.total_steps);
    cfg.seed = 6;
    const auto d = monte_carlo_hitting(cfg, ctx);
    CHECK(d.total_steps != a.total_steps);
  }

  TEST_CASE("config validation") {
    const auto ctx = context_from_q(Real(1));
    WalkConfig cfg;
    cfg.n_paths = 10;
    cfg.escape_level = 2;
    cfg.record_depth = 3;
    CHECK_THROWS(monte_carlo_hitting(cfg, ctx));
  }
}
