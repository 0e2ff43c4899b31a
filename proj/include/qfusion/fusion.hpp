#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "qfusion/word.hpp"

namespace qfusion {

using Multiplicity = boost::multiprecision::cpp_int;

template <class Scalar>
Scalar to_scalar(const Multiplicity& m) {
  if constexpr (std::is_same_v<Scalar, Multiplicity>) {
    return m;
  } else {
    // cpp_int -> mpfr convert_to drops low bits in boost 1.74; go through
    // an exact machine integer or decimal text instead
    static const Multiplicity limit = Multiplicity(std::numeric_limits<long long>::max());
    if (m <= limit && -m <= limit) return Scalar(m.template convert_to<long long>());
    if constexpr (std::is_constructible_v<Scalar, std::string>) {
      return Scalar(m.str());
    } else {
      return static_cast<Scalar>(std::stod(m.str()));
    }
  }
}

template <class Scalar, class T>
  requires(!std::is_same_v<T, Multiplicity>)
Scalar to_scalar(const T& v) {
  return Scalar(v);
}

/// Irreducible decomposition of a tensor product: word -> multiplicity.
/// Entries are always positive; iteration is shortlex.
class Decomposition {
 public:
  using Map = std::map<Word, Multiplicity>;

  void add(const Word& w, const Multiplicity& m = 1);

  const Map& summands() const noexcept { return summands_; }
  std::size_t size() const noexcept { return summands_.size(); }
  bool contains(const Word& w) const { return summands_.count(w) != 0; }
  Multiplicity multiplicity(const Word& w) const;
  Multiplicity total_multiplicity() const;

  auto begin() const { return summands_.begin(); }
  auto end() const { return summands_.end(); }

  friend bool operator==(const Decomposition&, const Decomposition&) = default;

 private:
  Map summands_;
};

/// Length of the maximal chain of conjugate pairs x_{|x|-1-i}, y_i that cancel
/// across the seam of x ⊗ y.
std::size_t cancellation_depth(const Word& x, const Word& y);

/// Fusion rule: x ⊗ y = xy ⊕ (x minus last ⊗ y minus first) when the seam
/// letters are conjugate, iterated over the cancellation depth.
/// Always multiplicity free.
Decomposition tensor_decompose(const Word& x, const Word& y);

/// (d ⊗ y) for a decomposition d, multiplicities accumulated.
Decomposition tensor_decompose(const Decomposition& d, const Word& y);

/// y ⊗ d, multiplicities accumulated.
Decomposition tensor_decompose(const Word& y, const Decomposition& d);

enum class Association { Left, Right };

/// (x ⊗ y) ⊗ z or x ⊗ (y ⊗ z).
Decomposition triple_decompose(const Word& x, const Word& y, const Word& z,
                               Association order = Association::Left);

/// Left-associated product of an arbitrary list of factors; the empty list
/// gives the trivial corepresentation.
Decomposition product_decompose(std::span<const Word> factors);

/// Subobject criterion: w ⊂ x ⊗ y iff x = x'v, y = v̄y', w = x'y'.
/// Checked directly from the split, independently of tensor_decompose.
bool is_subobject(const Word& w, const Word& x, const Word& y);

struct Block {
  Letter first;
  std::size_t length;
  friend bool operator==(const Block&, const Block&) = default;
};

/// Maximal alternating runs α^(k), split greedily from the left. A new block
/// starts wherever two equal letters are adjacent.
std::vector<Block> block_decomposition(const Word& x);

/// Length of the final alternating run (0 for the empty word).
std::size_t last_block_length(const Word& x);

}  // namespace qfusion
