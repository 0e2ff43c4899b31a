#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qfusion/fusion.hpp"
#include "qfusion/qarith.hpp"

namespace qfusion {

/// One step of the classical shadow of the qtr_1 random walk: pick a letter
/// γ with weight ½, then move to y ⊂ x ⊗ γ with probability
/// dim_q(y) / (dim_q(x) dim_q(u)). From ε both letters extend with ½.
template <class Scalar>
std::vector<std::pair<Word, Scalar>> step_distribution(const Word& x, const QContext<Scalar>& ctx) {
  std::vector<std::pair<Word, Scalar>> out;
  const Scalar half = Scalar(1) / 2;
  if (x.empty()) {
    out.emplace_back(Word{Letter::U}, half);
    out.emplace_back(Word{Letter::UBar}, half);
    return out;
  }
  const Letter a = x.back();
  const Scalar scale = qdim_word(x, ctx) * ctx.dim_u;
  out.emplace_back(x + a, half);  // x ⊗ a = xa
  const Word extended = x + conjugate(a);
  const Word retreated = x.drop_last();
  out.emplace_back(extended, Scalar(half * qdim_word(extended, ctx) / scale));
  out.emplace_back(retreated, Scalar(half * qdim_word(retreated, ctx) / scale));
  return out;
}

/// Transition rule in closed form: from a word whose final alternating
/// block has length l, the conjugate letter extends the block with
/// probability [l+2]_q / ([l+1]_q [2]_q) and cancels the last letter with
/// probability [l]_q / ([l+1]_q [2]_q).
template <class Scalar>
class WalkKernel {
 public:
  WalkKernel(const QContext<Scalar>& ctx, std::size_t max_block)
      : ctx_(ctx), qnumbers_(q_number_table(max_block + 2, ctx.q)) {}

  const QContext<Scalar>& context() const noexcept { return ctx_; }

  Scalar extend_probability(std::size_t l) const {
    return Scalar(qnumbers_.at(l + 2) / (qnumbers_.at(l + 1) * ctx_.dim_u));
  }
  Scalar retreat_probability(std::size_t l) const {
    return Scalar(qnumbers_.at(l) / (qnumbers_.at(l + 1) * ctx_.dim_u));
  }

  std::vector<std::pair<Word, Scalar>> step(const Word& x) const {
    std::vector<std::pair<Word, Scalar>> out;
    const Scalar half = Scalar(1) / 2;
    if (x.empty()) {
      out.emplace_back(Word{Letter::U}, half);
      out.emplace_back(Word{Letter::UBar}, half);
      return out;
    }
    const std::size_t l = last_block_length(x);
    out.emplace_back(x + x.back(), half);
    out.emplace_back(x + conjugate(x.back()), Scalar(half * extend_probability(l)));
    out.emplace_back(x.drop_last(), Scalar(half * retreat_probability(l)));
    return out;
  }

 private:
  QContext<Scalar> ctx_;
  std::vector<Scalar> qnumbers_;
};

/// Law of the walk after n_steps from ε.
template <class Scalar>
std::map<Word, Scalar> exact_distribution(std::size_t n_steps, std::size_t max_level, const QContext<Scalar>& ctx) {
  if (n_steps > max_level) throw std::invalid_argument("exact_distribution: n_steps exceeds max_level");
  const WalkKernel<Scalar> kernel(ctx, max_level + 1);
  std::map<Word, Scalar> dist{{Word{}, Scalar(1)}};
  for (std::size_t s = 0; s < n_steps; ++s) {
    std::map<Word, Scalar> next;
    for (const auto& [x, p] : dist) {
      for (auto& [y, t] : kernel.step(x)) {
        if (y.size() > max_level) throw std::logic_error("exact_distribution: walk left the truncation");
        next[y] += p * t;
      }
    }
    dist = std::move(next);
  }
  return dist;
}

/// Σ over words of each length.
template <class Scalar>
std::map<std::size_t, Scalar> level_marginal(const std::map<Word, Scalar>& dist) {
  std::map<std::size_t, Scalar> out;
  for (const auto& [x, p] : dist) out[x.size()] += p;
  return out;
}

/// max over interior x of |f(x) - Σ_y K(x, y) f(y)|. Interior words are those
/// shorter than the longest word in the domain; each needs all neighbours.
template <class Scalar>
Scalar harmonicity_residual(const std::map<Word, Scalar>& f, const QContext<Scalar>& ctx) {
  using std::abs;
  std::size_t radius = 0;
  for (const auto& [x, v] : f) radius = std::max(radius, x.size());
  Scalar worst = 0;
  for (const auto& [x, v] : f) {
    if (x.size() >= radius) continue;
    Scalar mean = 0;
    for (const auto& [y, p] : step_distribution(x, ctx)) {
      auto it = f.find(y);
      if (it == f.end()) {
        throw std::invalid_argument("harmonicity_residual: missing value at neighbour " + y.to_string());
      }
      mean += p * it->second;
    }
    Scalar r = abs(v - mean);
    if (r > worst) worst = r;
  }
  return worst;
}

struct WalkConfig {
  std::uint64_t seed = 0;
  std::uint64_t n_paths = 0;
  std::size_t escape_level = 60;
  std::size_t record_depth = 2;
  unsigned workers = 1;
  std::uint64_t step_cap = 10'000'000;

  void validate() const;
};

struct CylinderEstimate {
  Word word;
  std::uint64_t count = 0;
  double estimate = 0;
  double std_error = 0;  ///< binomial standard error
};

struct HittingEstimate {
  std::vector<CylinderEstimate> cylinders;   ///< shortlex over |x| = record_depth
  std::uint64_t n_paths = 0;
  std::uint64_t completed = 0;               ///< paths that reached escape_level
  std::uint64_t failures = 0;                ///< paths stopped by the step cap
  std::uint64_t total_steps = 0;
  std::uint64_t returns_to_root = 0;         ///< paths that revisited ε after their first step
};

/// Runs cfg.n_paths walks from `start` until the first visit to
/// cfg.escape_level and tallies the depth-cfg.record_depth prefix at that
/// time. Path i draws from CounterRng(seed, i); counts are integers, so the
/// result does not depend on cfg.workers.
HittingEstimate monte_carlo_exit(const Word& start, const WalkConfig& cfg, const QContext<Real>& ctx);

/// Exit law estimate from ε.
inline HittingEstimate monte_carlo_hitting(const WalkConfig& cfg, const QContext<Real>& ctx) {
  return monte_carlo_exit(Word{}, cfg, ctx);
}

}  // namespace qfusion
