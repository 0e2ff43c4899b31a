#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qfusion/fusion.hpp"
#include "qfusion/qarith.hpp"

namespace qfusion {

/// Harmonic measure of the cylinder ∂I(x):
///   dim_q(x) (κ/√2)^{|x|} (1 - (κ/√2) [l]_q / [l+1]_q),
/// l the length of the final alternating block of x; 1 for x = ε.
template <class Scalar>
Scalar harmonic_cylinder_mass(const Word& x, const QContext<Scalar>& ctx) {
  using std::pow;
  using std::sqrt;
  if (x.empty()) return Scalar(1);
  const long l = static_cast<long>(last_block_length(x));
  const Scalar s = ctx.kappa / sqrt(Scalar(2));
  return Scalar(qdim_word(x, ctx) * pow(s, static_cast<long>(x.size())) *
                (1 - s * q_number(l, ctx.q) / q_number(l + 1, ctx.q)));
}

/// dim_q(x, n) / dim_q(n), where dim_q(x, n) sums dim_q(z) over |z| = n with
/// prefix x. Both sequences obey d(n+1) = 2[2]_q d(n) - 2 d(n-1); the
/// iteration runs on the ratio r(n) so nothing overflows.
template <class Scalar>
Scalar dimq_ratio_limit(const Word& x, std::size_t n_max, const QContext<Scalar>& ctx) {
  using std::sqrt;
  const std::size_t len = x.size();
  if (n_max < len + 2) throw std::invalid_argument("dimq_ratio_limit requires n_max >= |x| + 2");
  const Scalar root2 = sqrt(Scalar(2));
  // D(m) / D(m+1) = [m+1]_κ / (√2 [m+2]_κ)
  auto step_ratio = [&](std::size_t m) {
    return Scalar(q_number(static_cast<long>(m) + 1, ctx.kappa) /
                  (root2 * q_number(static_cast<long>(m) + 2, ctx.kappa)));
  };
  const Scalar two_dim_u = 2 * ctx.dim_u;
  Scalar prev = qdim_word(x, ctx) / qdim_level(len, ctx);
  Scalar cur = (qdim_word(x + Letter::U, ctx) + qdim_word(x + Letter::UBar, ctx)) / qdim_level(len + 1, ctx);
  Scalar ratio_prev = step_ratio(len);  // D(m-1)/D(m) for m = len+1
  for (std::size_t m = len + 1; m < n_max; ++m) {
    const Scalar ratio = step_ratio(m);  // D(m)/D(m+1)
    Scalar next = two_dim_u * cur * ratio - 2 * prev * ratio_prev * ratio;
    prev = std::move(cur);
    cur = std::move(next);
    ratio_prev = ratio;
  }
  return cur;
}

/// Cylinder masses for every prefix up to a fixed depth.
template <class Scalar>
struct CylinderMeasure {
  std::map<Word, Scalar> masses;
  std::size_t depth = 0;

  const Scalar& mass(const Word& x) const { return masses.at(x); }

  /// max |m(x) - m(xu) - m(xū)| over |x| < depth.
  Scalar consistency_residual() const {
    using std::abs;
    Scalar worst = 0;
    for (const auto& [x, m] : masses) {
      if (x.size() >= depth) continue;
      Scalar r = abs(m - masses.at(x + Letter::U) - masses.at(x + Letter::UBar));
      if (r > worst) worst = r;
    }
    return worst;
  }

  /// Σ_{|x| = d} m(x)
  Scalar level_sum(std::size_t d) const {
    Scalar total = 0;
    for (const auto& [x, m] : masses) {
      if (x.size() == d) total += m;
    }
    return total;
  }
};

constexpr std::size_t kMaxCylinderDepth = 14;

template <class Scalar>
CylinderMeasure<Scalar> build_cylinder_measure(std::size_t depth, const QContext<Scalar>& ctx) {
  if (depth > kMaxCylinderDepth) throw std::invalid_argument("cylinder depth must be at most 14");
  CylinderMeasure<Scalar> out;
  out.depth = depth;
  for (std::size_t n = 0; n <= depth; ++n) {
    for (const Word& x : words_of_length(n)) out.masses.emplace(x, harmonic_cylinder_mass(x, ctx));
  }
  return out;
}

template <class Scalar>
struct DecayCheck {
  std::size_t k;
  Letter alpha;
  Scalar mass;    ///< mass(x α^(k+1))
  Scalar bound;   ///< 2^{-k}
  bool holds;
};

template <class Scalar>
struct NonAtomicityReport {
  Word word;
  Scalar base;               ///< [2]_q κ / √2
  bool base_below_one;
  Scalar mass;
  Scalar geometric_bound;    ///< base^{|x|}
  bool geometric_holds;
  std::vector<DecayCheck<Scalar>> decay;

  bool all_hold() const {
    if (!base_below_one || !geometric_holds) return false;
    for (const auto& d : decay) {
      if (!d.holds) return false;
    }
    return true;
  }
};

/// The two non-atomicity bounds at x: mass(x) <= ([2]_q κ/√2)^{|x|} with the
/// base below one, and mass(x α^(k+1)) <= 2^{-k} for k = 0 .. k_max and
/// both letters α. `margin` is relative slack for rounding.
template <class Scalar>
NonAtomicityReport<Scalar> non_atomicity_report(const Word& x, std::size_t k_max, const QContext<Scalar>& ctx,
                                                const Scalar& margin) {
  using std::ldexp;
  using std::pow;
  using std::sqrt;
  NonAtomicityReport<Scalar> r;
  r.word = x;
  r.base = ctx.dim_u * ctx.kappa / sqrt(Scalar(2));
  r.base_below_one = r.base < 1;
  r.mass = harmonic_cylinder_mass(x, ctx);
  r.geometric_bound = pow(r.base, static_cast<long>(x.size()));
  r.geometric_holds = r.mass <= r.geometric_bound * (1 + margin);
  for (std::size_t k = 0; k <= k_max; ++k) {
    for (Letter alpha : {Letter::U, Letter::UBar}) {
      DecayCheck<Scalar> d{k, alpha, harmonic_cylinder_mass(x + Word::alternating(alpha, k + 1), ctx),
                           Scalar(ldexp(Scalar(1), -static_cast<int>(k))), false};
      d.holds = d.mass <= d.bound * (1 + margin);
      r.decay.push_back(std::move(d));
    }
  }
  return r;
}

/// CSV rows `word,mass,bound,bound_holds,consistency_residual,consistent`
/// for every cylinder of the measure; leaf consistency uses closed-form
/// children. Floats carry 20 significant digits.
void write_cylinder_csv(std::ostream& os, const CylinderMeasure<Real>& measure, const QContext<Real>& ctx,
                        const Real& tolerance);

}  // namespace qfusion
