#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qfusion/fusion.hpp"
#include "qfusion/qarith.hpp"

namespace qfusion {

/// Σ c_x qTr_x: a finitely supported map word -> coefficient. Zero
/// coefficients are never stored.
template <class Coeff>
class CentralElement {
 public:
  using Map = std::map<Word, Coeff>;

  CentralElement() = default;

  /// qTr_x
  static CentralElement trace(const Word& x) {
    CentralElement e;
    e.add(x, Coeff(1));
    return e;
  }

  /// qTr_n = Σ_{|x|=n} qTr_x
  static CentralElement level(std::size_t n) {
    CentralElement e;
    for (const Word& x : words_of_length(n)) e.add(x, Coeff(1));
    return e;
  }

  void add(const Word& x, const Coeff& c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(x, c);
    if (inserted) return;
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }

  Coeff coefficient(const Word& x) const {
    auto it = coeffs_.find(x);
    return it == coeffs_.end() ? Coeff(0) : it->second;
  }

  const Map& coefficients() const noexcept { return coeffs_; }
  std::size_t support_size() const noexcept { return coeffs_.size(); }
  auto begin() const { return coeffs_.begin(); }
  auto end() const { return coeffs_.end(); }

  CentralElement& operator+=(const CentralElement& other) {
    for (const auto& [x, c] : other) add(x, c);
    return *this;
  }
  friend CentralElement operator+(CentralElement a, const CentralElement& b) { return a += b; }

  friend CentralElement operator*(const Coeff& s, const CentralElement& e) {
    CentralElement out;
    for (const auto& [x, c] : e) out.add(x, Coeff(s * c));
    return out;
  }

  friend bool operator==(const CentralElement&, const CentralElement&) = default;

 private:
  Map coeffs_;
};

/// qTr_x * qTr_y = Σ_z m(z, x⊗y) qTr_z, extended bilinearly.
template <class Coeff>
CentralElement<Coeff> convolve(const CentralElement<Coeff>& a, const CentralElement<Coeff>& b) {
  CentralElement<Coeff> out;
  for (const auto& [x, cx] : a) {
    for (const auto& [y, cy] : b) {
      const Coeff c = cx * cy;
      for (const auto& [z, m] : tensor_decompose(x, y)) {
        out.add(z, Coeff(c * to_scalar<Coeff>(m)));
      }
    }
  }
  return out;
}

/// Σ c_x dim_q(x): the dimension character evaluated on an element.
template <class Coeff, class Scalar>
Scalar dimension_character(const CentralElement<Coeff>& e, const QContext<Scalar>& ctx) {
  Scalar total = 0;
  for (const auto& [x, c] : e) total += to_scalar<Scalar>(c) * qdim_word(x, ctx);
  return total;
}

/// Σ c_n qTr_n over levels.
template <class Coeff>
using LevelElement = std::map<std::size_t, Coeff>;

/// Multiplication by qTr_1: qTr_1 * qTr_n = qTr_{n+1} + 2 qTr_{n-1} for
/// n >= 1, and qTr_1 * qTr_0 = qTr_1.
template <class Coeff>
LevelElement<Coeff> level_convolve_step(const LevelElement<Coeff>& d) {
  LevelElement<Coeff> out;
  for (const auto& [n, c] : d) {
    if (c == 0) continue;
    out[n + 1] += c;
    if (n > 0) out[n - 1] += Coeff(2 * c);
  }
  return out;
}

/// Writes a word-level element as a level element when its coefficients are
/// constant on every level it touches; returns false otherwise.
template <class Coeff>
bool aggregate_levels(const CentralElement<Coeff>& e, LevelElement<Coeff>& out) {
  out.clear();
  std::map<std::size_t, std::size_t> counts;
  for (const auto& [x, c] : e) {
    auto [it, inserted] = out.try_emplace(x.size(), c);
    if (!inserted && it->second != c) return false;
    ++counts[x.size()];
  }
  for (const auto& [n, count] : counts) {
    if (n >= 64 || count != (std::size_t{1} << n)) return false;
  }
  return true;
}

/// qtr_1^{*n} = Σ_k w_{n,k} qtr_k with w_{n,k} = c_{n,k} dim_q(k) / dim_q(1)^n,
/// c_{n,k} the integer level coefficients of qTr_1^{*n}.
template <class Scalar>
std::map<std::size_t, Scalar> qtr1_power_distribution(std::size_t n, const QContext<Scalar>& ctx) {
  LevelElement<Multiplicity> counts{{0, Multiplicity(1)}};
  for (std::size_t i = 0; i < n; ++i) counts = level_convolve_step(counts);
  using std::pow;
  const Scalar norm = pow(qdim_level(1, ctx), static_cast<long>(n));
  std::map<std::size_t, Scalar> weights;
  for (const auto& [k, c] : counts) {
    weights[k] = Scalar(to_scalar<Scalar>(c) * qdim_level(k, ctx) / norm);
  }
  return weights;
}

enum class GapMethod { Enumerate, Dp };

namespace detail {

inline void check_gap_params(std::size_t n, std::size_t p, std::size_t k) {
  if (p < 1 || k < 1 || n < p + k) {
    throw std::invalid_argument("restricted_trace_gap requires p >= 1, k >= 1, n >= p + k");
  }
}

/// Bit j of the mask flags a letter change between positions j and j+1
/// (0-based); the complement words alternate on 1-based letters p..p+k.
inline std::uint64_t alternation_window(std::size_t p, std::size_t k) {
  std::uint64_t mask = 0;
  for (std::size_t j = p - 1; j + 1 <= p + k - 1; ++j) mask |= std::uint64_t{1} << j;
  return mask;
}

}  // namespace detail

/// Dimensions of all 2^n words of length n, indexed by bit pattern.
template <class Scalar>
std::vector<Scalar> level_dimensions(std::size_t n, const QContext<Scalar>& ctx) {
  if (n > 26) throw std::invalid_argument("level_dimensions: enumeration limited to n <= 26");
  const auto table = q_number_table(n + 1, ctx.q);
  std::vector<Scalar> dims;
  dims.reserve(std::size_t{1} << n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    dims.push_back(qdim_word(Word::from_bits(bits, n), table));
  }
  return dims;
}

/// Gap from precomputed level dimensions (enumeration route).
template <class Scalar>
Scalar restricted_trace_gap_enumerated(const std::vector<Scalar>& dims, std::size_t n, std::size_t p,
                                       std::size_t k) {
  detail::check_gap_params(n, p, k);
  const std::uint64_t window = detail::alternation_window(p, k);
  Scalar complement = 0;
  Scalar total = 0;
  for (std::uint64_t bits = 0; bits < dims.size(); ++bits) {
    total += dims[bits];
    const std::uint64_t changes = bits ^ (bits >> 1);
    if ((changes & window) == window) complement += dims[bits];
  }
  return Scalar(complement / total);
}

/// Gap by dynamic programming over block compositions: a word is a first
/// letter plus a composition of n into block lengths b_i, with weight
/// Π [b_i + 1]_q; complement words have no block boundary after any of the
/// letters p .. p+k-1.
template <class Scalar>
Scalar restricted_trace_gap_dp(std::size_t n, std::size_t p, std::size_t k, const QContext<Scalar>& ctx) {
  detail::check_gap_params(n, p, k);
  const auto table = q_number_table(n + 1, ctx.q);
  auto count = [&](bool restrict_window) {
    std::vector<Scalar> f(n + 1, Scalar(0));
    f[0] = 1;
    for (std::size_t m = 1; m <= n; ++m) {
      if (restrict_window && m >= p && m <= p + k - 1) continue;
      Scalar acc = 0;
      for (std::size_t b = 1; b <= m; ++b) acc += f[m - b] * table[b + 1];
      f[m] = acc;
    }
    return Scalar(2 * f[n]);
  };
  return Scalar(count(true) / count(false));
}

/// dim_q(n)^{-1} Σ { dim_q(y) : |y| = n, y = y₁ α^(k+1) y₂, |y₁| = p-1 }.
template <class Scalar>
Scalar restricted_trace_gap(std::size_t n, std::size_t p, std::size_t k, const QContext<Scalar>& ctx,
                            GapMethod method) {
  if (method == GapMethod::Dp) return restricted_trace_gap_dp(n, p, k, ctx);
  detail::check_gap_params(n, p, k);
  return restricted_trace_gap_enumerated(level_dimensions(n, ctx), n, p, k);
}

}  // namespace qfusion
