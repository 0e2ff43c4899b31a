#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfusion/fusion.hpp"
#include "qfusion/real.hpp"
#include "qfusion/word.hpp"

namespace qfusion {

/// q-number [n]_t = (t^{-n} - t^n) / (t^{-1} - t), evaluated as
/// sinh(n a) / sinh(a) with a = -log t so that t -> 1 stays accurate.
/// At t = 1 returns the limit value n.
template <class Scalar>
Scalar q_number(long n, const Scalar& t) {
  using std::log;
  using std::sinh;
  if (!(t > 0) || t > 1) throw std::invalid_argument("q_number: t must lie in (0, 1]");
  if (n == 0) return Scalar(0);
  if (t == 1) return Scalar(n);
  const Scalar a = -log(t);
  return Scalar(sinh(Scalar(n) * a) / sinh(a));
}

/// Numeric environment: deformation parameter q, the level parameter κ and,
/// when built from a matrix F, the spectral radius bound ρ.
template <class Scalar>
struct QContext {
  Scalar q;
  Scalar kappa;
  Scalar dim_u;                ///< q + 1/q
  std::optional<Scalar> rho;   ///< max(‖Q_u‖, ‖Q_u^{-1}‖)
  unsigned precision_bits = 0;
};

/// Eigenvalues of the normalized Woronowicz matrix Q_u.
template <class Scalar>
struct QSpectrum {
  std::vector<Scalar> eigenvalues;  ///< ascending
  std::size_t n = 0;
};

/// Root in (0, 1] of t + 1/t = d, for d >= 2.
template <class Scalar>
Scalar solve_reciprocal_sum(const Scalar& d) {
  using std::sqrt;
  if (d < 2) throw std::invalid_argument("t + 1/t = d requires d >= 2");
  // smaller root written without cancellation
  return Scalar(2 / (d + sqrt(d * d - 4)));
}

template <class Scalar>
QContext<Scalar> context_from_q(const Scalar& q) {
  using std::sqrt;
  if (!(q > 0) || q > 1) throw std::invalid_argument("q must lie in (0, 1]");
  QContext<Scalar> ctx;
  ctx.q = q;
  ctx.dim_u = q + 1 / q;
  ctx.kappa = solve_reciprocal_sum(Scalar(sqrt(Scalar(2)) * ctx.dim_u));
  if constexpr (std::is_same_v<Scalar, Real>) ctx.precision_bits = precision_bits();
  else ctx.precision_bits = std::numeric_limits<Scalar>::digits;
  return ctx;
}

/// Same environment in another scalar type (e.g. Real -> double for sampling).
template <class To, class From>
QContext<To> context_cast(const QContext<From>& ctx) {
  QContext<To> out;
  out.q = static_cast<To>(ctx.q);
  out.kappa = static_cast<To>(ctx.kappa);
  out.dim_u = static_cast<To>(ctx.dim_u);
  if (ctx.rho) out.rho = static_cast<To>(*ctx.rho);
  if constexpr (std::is_same_v<To, Real>) out.precision_bits = precision_bits();
  else out.precision_bits = std::numeric_limits<To>::digits;
  return out;
}

/// Builds Q_u = c F*F with the trace-balancing scalar c making
/// Tr(Q_u) = Tr(Q_u^{-1}); then dim_u = Tr(Q_u), q + 1/q = dim_u and
/// ρ = max(‖Q_u‖, ‖Q_u^{-1}‖). Throws on N < 2 or singular F.
std::pair<QContext<Real>, QSpectrum<Real>> context_from_F(const Eigen::MatrixXcd& F);

/// Table of [0]_t .. [n_max]_t.
template <class Scalar>
std::vector<Scalar> q_number_table(std::size_t n_max, const Scalar& t) {
  std::vector<Scalar> table;
  table.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) table.push_back(q_number(static_cast<long>(n), t));
  return table;
}

/// dim_q(x) = Π over alternating blocks of [block length + 1]_q.
template <class Scalar>
Scalar qdim_word(const Word& x, const QContext<Scalar>& ctx) {
  Scalar d = 1;
  for (const Block& b : block_decomposition(x)) d *= q_number(static_cast<long>(b.length) + 1, ctx.q);
  return d;
}

/// Same product, reading q-numbers from a precomputed table of [k]_q.
template <class Scalar>
Scalar qdim_word(const Word& x, const std::vector<Scalar>& qnumbers) {
  Scalar d = 1;
  for (const Block& b : block_decomposition(x)) d *= qnumbers.at(b.length + 1);
  return d;
}

/// dim_q(n) = Σ_{|x|=n} dim_q(x) = √2^n [n+1]_κ.
template <class Scalar>
Scalar qdim_level(std::size_t n, const QContext<Scalar>& ctx) {
  using std::pow;
  using std::sqrt;
  return Scalar(pow(sqrt(Scalar(2)), static_cast<long>(n)) *
                q_number(static_cast<long>(n) + 1, ctx.kappa));
}

/// Three-way verdict for a strict inequality lhs < rhs checked with a margin.
enum class Strictness { Holds, Boundary, Fails };

inline const char* to_string(Strictness s) {
  switch (s) {
    case Strictness::Holds: return "holds";
    case Strictness::Boundary: return "boundary";
    case Strictness::Fails: return "fails";
  }
  return "?";
}

template <class Scalar>
Strictness strictly_less(const Scalar& lhs, const Scalar& rhs, const Scalar& margin) {
  if (lhs < rhs - margin) return Strictness::Holds;
  if (lhs <= rhs + margin) return Strictness::Boundary;
  return Strictness::Fails;
}

template <class Scalar>
struct WordBoundCheck {
  Word word;
  Scalar dim;
  Scalar lower_bound;     ///< q^{-|x|}
  bool dim_bound_holds;   ///< dim_q(x) >= q^{-|x|}
  Scalar norm_ratio;      ///< ρ^{|x|} / dim_q(x)
  Scalar norm_bound;      ///< (qρ)^{|x|}
  bool norm_bound_holds;
};

template <class Scalar>
struct WoronowiczReport {
  Scalar q_rho;
  Strictness q_rho_below_one;   ///< Boundary flags the N = 2 case qρ = 1
  std::vector<WordBoundCheck<Scalar>> words;

  bool all_word_bounds_hold() const {
    for (const auto& w : words) {
      if (!w.dim_bound_holds || !w.norm_bound_holds) return false;
    }
    return true;
  }
};

/// Scalar checks behind ‖Q_x‖/dim_q(x) <= (qρ)^{|x|}: qρ < 1 and
/// dim_q(x) >= q^{-|x|} on the sampled words. Margins are relative.
template <class Scalar>
WoronowiczReport<Scalar> verify_woronowicz_bounds(const QContext<Scalar>& ctx,
                                                  const QSpectrum<Scalar>& spectrum,
                                                  const std::vector<Word>& sample_words,
                                                  const Scalar& margin) {
  using std::max;
  using std::pow;
  if (spectrum.eigenvalues.empty()) throw std::invalid_argument("verify_woronowicz_bounds: empty spectrum");
  const Scalar rho = ctx.rho ? *ctx.rho
                             : max(spectrum.eigenvalues.back(), Scalar(1 / spectrum.eigenvalues.front()));
  WoronowiczReport<Scalar> report;
  report.q_rho = ctx.q * rho;
  report.q_rho_below_one = strictly_less(report.q_rho, Scalar(1), margin);
  for (const Word& x : sample_words) {
    const long len = static_cast<long>(x.size());
    WordBoundCheck<Scalar> c{x, qdim_word(x, ctx), Scalar(pow(ctx.q, -len)), false, 0, 0, false};
    c.dim_bound_holds = c.dim >= c.lower_bound * (1 - margin);
    c.norm_ratio = pow(rho, len) / c.dim;
    c.norm_bound = pow(report.q_rho, len);
    c.norm_bound_holds = c.norm_ratio <= c.norm_bound * (1 + margin);
    report.words.push_back(std::move(c));
  }
  return report;
}

}  // namespace qfusion
