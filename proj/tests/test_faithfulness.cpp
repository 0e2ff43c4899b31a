#include <doctest.h>

#include "oracles.hpp"
#include "qfusion/faithfulness.hpp"

using namespace qfusion;

namespace {

bool starts_u_ends_ubar(const std::string& w) { return !w.empty() && w.front() == 'u' && w.back() == 'b'; }

std::string power_of_ub(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "ub";
  return s;
}

// subobjects of U ⊗ x ⊗ U from the split oracle
std::map<std::string, int> sandwich_oracle(const std::string& x, std::size_t N) {
  const std::string U = power_of_ub(N);
  return oracle::fuse(oracle::fuse(U, x), U);
}

}  // namespace

TEST_SUITE("faithfulness") {
  TEST_CASE("generator is certified at N = 1") {
    const std::vector<Word> F{Word::parse("u")};
    const auto cert = banica_min_N(F, 4);
    REQUIRE(cert);
    CHECK(cert->N == 1);
    CHECK(cert->valid());
    CHECK(reverify_certificate(*cert));
    REQUIRE(cert->entries.size() == 1);
    std::set<std::string> got;
    for (const Word& w : cert->entries[0].subobjects) got.insert(w.to_string());
    std::set<std::string> expect;
    for (const auto& [w, m] : sandwich_oracle("u", 1)) expect.insert(w);
    CHECK(got == expect);
  }

  TEST_CASE("sandwich verdict agrees with the oracle") {
    for (const Word& x : words_up_to(4)) {
      if (x.empty()) continue;
      for (std::size_t N = 1; N <= 3; ++N) {
        bool all = true;
        for (const auto& [w, m] : sandwich_oracle(x.to_string(), N)) all = all && starts_u_ends_ubar(w);
        CHECK(sandwich_holds(x, N) == all);
      }
    }
  }

  TEST_CASE("alternating powers contain the trivial summand") {
    for (std::size_t k = 1; k <= 4; ++k) {
      const Word x = sandwich_word(k);
      CHECK(trivial_sandwich_power(x) == k);
      for (std::size_t N = (k + 1) / 2; N <= 4; ++N) CHECK(sandwich_oracle(x.to_string(), N).count("") == 1);
    }
    CHECK(trivial_sandwich_power(Word::parse("bu")) == 0);
    CHECK(trivial_sandwich_power(Word::parse("ubu")) == 0);
    CHECK_FALSE(banica_min_N(Word::parse("ub"), 8));
    CHECK_FALSE(banica_min_N(Word::parse("ubub"), 8));
  }

  TEST_CASE("certificates are sound for every certified short word") {
    std::size_t certified = 0;
    for (const Word& x : words_up_to(4)) {
      if (x.empty()) continue;
      const std::vector<Word> F{x};
      const auto cert = banica_min_N(F, 8);
      if (!cert) {
        CHECK(trivial_sandwich_power(x) > 0);
        continue;
      }
      ++certified;
      CHECK(reverify_certificate(*cert));
      for (std::size_t N = 1; N < cert->N; ++N) CHECK_FALSE(sandwich_holds(x, N));
      for (const auto& [w, m] : sandwich_oracle(x.to_string(), cert->N)) CHECK(starts_u_ends_ubar(w));
    }
    CHECK(certified == 28);
  }

  TEST_CASE("monotone in N for short words") {
    for (const Word& x : words_up_to(3)) {
      if (x.empty()) continue;
      bool seen = false;
      for (std::size_t N = 1; N <= 5; ++N) {
        const bool h = sandwich_holds(x, N);
        if (seen) CHECK(h);
        seen = seen || h;
      }
    }
  }

  TEST_CASE("tampered certificates are rejected") {
    const std::vector<Word> F{Word::parse("u"), Word::parse("uu")};
    auto cert = banica_min_N(F, 4);
    REQUIRE(cert);
    auto bad = *cert;
    bad.entries[0].subobjects.push_back(Word::parse("bu"));
    CHECK_FALSE(bad.valid());
    bad = *cert;
    bad.N = 0;
    CHECK_FALSE(bad.valid());
    bad = *cert;
    bad.entries[0].subobjects.pop_back();
    CHECK_FALSE(reverify_certificate(bad));
    const std::vector<Word> with_empty{Word{}};
    CHECK_THROWS(banica_min_N(with_empty, 3));
  }

  TEST_CASE("support scan: generator and negative control") {
    const std::vector<Word> F{Word::parse("u")};
    const auto r = disjoint_support_check(F, 1, 9);
    CHECK(r.disjoint());
    CHECK(r.scanned == 1023);
    CHECK(r.setA_size > 0);
    const std::vector<Word> G{Word::parse("ub")};
    const auto bad = disjoint_support_check(G, 1, 6);
    REQUIRE_FALSE(bad.disjoint());
    const auto& v = bad.violations.front();
    CHECK(v.s == Word::parse("ubb"));
    // both chains are genuine fusion paths ending on a ū-initial word
    for (const SupportChain* c : {&v.via_U, &v.via_x}) {
      REQUIRE(c->path.size() == c->factors.size());
      for (std::size_t i = 1; i < c->path.size(); ++i) {
        CHECK(oracle::fuse(oracle::text(c->path[i - 1]), oracle::text(c->factors[i])).count(oracle::text(c->path[i])) ==
              1);
      }
      CHECK(c->path.back().front() == Letter::UBar);
    }
    const std::vector<Word> stack{sandwich_word(1)};
    CHECK(boundary_support_contains_ubar_initial(stack, v.s));
  }

  TEST_CASE("scan does not depend on workers") {
    const std::vector<Word> F{Word::parse("ub"), Word::parse("uu")};
    const auto a = disjoint_support_check(F, 1, 8);
    const auto b = disjoint_support_check(F, 1, 8, 3);
    CHECK(a.setA_size == b.setA_size);
    CHECK(a.setB_size == b.setB_size);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) CHECK(a.violations[i].s == b.violations[i].s);
  }

  TEST_CASE("witness norm") {
    const std::vector<Word> F{Word::parse("u")};
    const auto w = strong_faithfulness_witness_norm(F, Word::parse("b"), 1, 10);
    CHECK(w.value == 0);
    CHECK_FALSE(w.violation);
    const std::vector<Word> G{Word::parse("ub")};
    const auto bad = strong_faithfulness_witness_norm(G, Word::parse("b"), 1, 6);
    CHECK(bad.value == 1);
    CHECK(bad.violation);
  }
}
