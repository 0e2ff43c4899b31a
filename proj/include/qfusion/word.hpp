#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfusion {

/// Generator of the free monoid labelling Irr(FU_F): the fundamental
/// corepresentation u and its dual ū.
enum class Letter : std::uint8_t { U = 0, UBar = 1 };

constexpr Letter conjugate(Letter a) noexcept {
  return a == Letter::U ? Letter::UBar : Letter::U;
}

constexpr char to_char(Letter a) noexcept { return a == Letter::U ? 'u' : 'b'; }

/// A finite word over {u, ū}, stored one bit per letter (bit set = ū).
///
/// Words are ordered shortlex: shorter words first, then lexicographically
/// with u < ū. The empty word is the trivial corepresentation.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters);

  /// Parses the CLI syntax: letters `u` and `b` (for ū), or `e` for the
  /// empty word. Throws std::invalid_argument on anything else.
  static Word parse(std::string_view text);

  /// Low `length` bits of `bits`, bit i giving letter i.
  static Word from_bits(std::uint64_t bits, std::size_t length);

  /// Alternating word α ᾱ α ... with k letters.
  static Word alternating(Letter first, std::size_t k);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  Letter operator[](std::size_t i) const noexcept {
    return static_cast<Letter>((chunks_[i / 64] >> (i % 64)) & 1u);
  }
  Letter front() const noexcept { return (*this)[0]; }
  Letter back() const noexcept { return (*this)[size_ - 1]; }

  void push_back(Letter a);
  void pop_back();

  /// Letters [pos, pos + count).
  Word slice(std::size_t pos, std::size_t count) const;
  Word prefix(std::size_t count) const { return slice(0, count); }
  Word drop_first(std::size_t count = 1) const { return slice(count, size_ - count); }
  Word drop_last(std::size_t count = 1) const { return slice(0, size_ - count); }

  Word& operator+=(const Word& other);
  friend Word operator+(Word lhs, const Word& rhs) { return lhs += rhs; }
  friend Word operator+(Word lhs, Letter a) {
    lhs.push_back(a);
    return lhs;
  }

  /// `u`/`b` string, `e` for the empty word.
  std::string to_string() const;

  std::size_t hash() const noexcept;

  friend bool operator==(const Word& a, const Word& b) noexcept {
    return a.size_ == b.size_ && a.chunks_ == b.chunks_;
  }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept;

 private:
  std::vector<std::uint64_t> chunks_;
  std::size_t size_ = 0;
};

/// Reverse-and-flip: the label of the contragredient corepresentation.
Word conjugate(const Word& x);

/// All 2^n words of length n, in increasing bit order (n < 64).
std::vector<Word> words_of_length(std::size_t n);

/// All words with length at most n, shortlex ordered.
std::vector<Word> words_up_to(std::size_t n);

/// The sandwich word (uū)^N.
Word sandwich_word(std::size_t n);

}  // namespace qfusion

template <>
struct std::hash<qfusion::Word> {
  std::size_t operator()(const qfusion::Word& w) const noexcept { return w.hash(); }
};
