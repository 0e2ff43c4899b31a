#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfusion/fusion.hpp"

namespace qfusion {

/// All subobjects of U ⊗ x ⊗ U for one x.
struct SandwichEntry {
  Word x;
  std::vector<Word> subobjects;  ///< shortlex
  bool all_sandwiched = false;   ///< every subobject starts with u and ends with ū
};

struct SandwichCertificate {
  std::vector<Word> words;  ///< the finite set F, shortlex, no duplicates
  std::size_t N = 0;        ///< U = (uū)^N
  std::vector<SandwichEntry> entries;

  bool valid() const;
};

/// Subobjects of U ⊗ x ⊗ U for U = (uū)^N, with the sandwich verdict.
SandwichEntry sandwich_entry(const Word& x, std::size_t N, Association order = Association::Left);

/// True when every subobject of U ⊗ x ⊗ U starts with u and ends with ū.
bool sandwich_holds(const Word& x, std::size_t N);

/// k when x = (uū)^k, else 0. Such x lie in U ⊗ U whenever k <= 2N, so
/// U ⊗ x ⊗ U then contains ε; for k <= 2 no N certifies x.
std::size_t trivial_sandwich_power(const Word& x);

/// Smallest N <= N_max for which the sandwich holds for every x in F.
/// Throws std::invalid_argument if F contains ε or N_max is zero.
std::optional<SandwichCertificate> banica_min_N(std::span<const Word> F, std::size_t N_max);

/// Smallest N <= N_max for a single word.
std::optional<std::size_t> banica_min_N(const Word& x, std::size_t N_max);

/// Rebuilds every subobject list with the right-associated product and
/// compares with the certificate.
bool reverify_certificate(const SandwichCertificate& cert);

/// Does the iterated product prefix_stack[0] ⊗ ... ⊗ s contain a subobject
/// whose first letter is ū?
bool boundary_support_contains_ubar_initial(std::span<const Word> prefix_stack, const Word& s);

/// One way s ends up with a ū-initial subobject: the chain of factors and the
/// summand reached after each factor.
struct SupportChain {
  std::vector<Word> factors;
  std::vector<Word> path;  ///< path[i] ⊂ path[i-1] ⊗ factors[i], path[0] = factors[0]
};

struct SupportViolation {
  Word s;
  SupportChain via_U;   ///< U ⊗ s
  SupportChain via_x;   ///< U ⊗ x ⊗ s
};

struct SupportReport {
  std::vector<Word> words;
  std::size_t N = 0;
  std::size_t L = 0;
  std::size_t scanned = 0;
  std::size_t setA_size = 0;   ///< s with a ū-initial subobject in U ⊗ s
  std::size_t setB_size = 0;   ///< s with a ū-initial subobject in U ⊗ x ⊗ s, x in F
  std::vector<SupportViolation> violations;

  bool disjoint() const { return violations.empty(); }
};

/// Scans every s with |s| <= L and checks that no s lies in both sets.
/// Every violation is kept, shortlex in s.
SupportReport disjoint_support_check(std::span<const Word> F, std::size_t N, std::size_t L, unsigned workers = 1);

struct WitnessNorm {
  int value = 0;  ///< 0 when the supports are disjoint, otherwise 1 as an upper bound
  std::optional<SupportViolation> violation;
};

/// Support-level value of ‖(p ⊗ b)(α ⊗ id)(b)‖ for the witness built from U.
/// `cylinder` only selects which projection p is meant; at the support level
/// the answer depends on F and N alone.
WitnessNorm strong_faithfulness_witness_norm(std::span<const Word> F, const Word& cylinder, std::size_t N,
                                             std::size_t L = 12);

}  // namespace qfusion
