#include "qfusion/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace qfusion {

Word::Word(std::initializer_list<Letter> letters) {
  for (Letter a : letters) push_back(a);
}

Word Word::parse(std::string_view text) {
  if (text == "e") return {};
  if (text.empty()) throw std::invalid_argument("empty word string (use 'e' for the empty word)");
  Word w;
  for (char c : text) {
    if (c == 'u') {
      w.push_back(Letter::U);
    } else if (c == 'b') {
      w.push_back(Letter::UBar);
    } else {
      throw std::invalid_argument("malformed word '" + std::string(text) +
                                  "': letters must be 'u' or 'b'");
    }
  }
  return w;
}

Word Word::from_bits(std::uint64_t bits, std::size_t length) {
  Word w;
  if (length == 0) return w;
  w.size_ = length;
  w.chunks_.assign((length + 63) / 64, 0);
  w.chunks_[0] = length >= 64 ? bits : bits & ((std::uint64_t{1} << length) - 1);
  return w;
}

Word Word::alternating(Letter first, std::size_t k) {
  Word w;
  Letter a = first;
  for (std::size_t i = 0; i < k; ++i) {
    w.push_back(a);
    a = conjugate(a);
  }
  return w;
}

void Word::push_back(Letter a) {
  if (size_ % 64 == 0) chunks_.push_back(0);
  if (a == Letter::UBar) chunks_.back() |= std::uint64_t{1} << (size_ % 64);
  ++size_;
}

void Word::pop_back() {
  --size_;
  if (size_ % 64 == 0) {
    chunks_.pop_back();
  } else {
    chunks_.back() &= ~(std::uint64_t{1} << (size_ % 64));
  }
}

Word Word::slice(std::size_t pos, std::size_t count) const {
  Word w;
  if (pos % 64 == 0) {
    // chunk-aligned fast path
    w.size_ = count;
    w.chunks_.assign(chunks_.begin() + static_cast<std::ptrdiff_t>(pos / 64),
                     chunks_.begin() + static_cast<std::ptrdiff_t>((pos + count + 63) / 64));
    if (count % 64 != 0) w.chunks_.back() &= (std::uint64_t{1} << (count % 64)) - 1;
    return w;
  }
  for (std::size_t i = 0; i < count; ++i) w.push_back((*this)[pos + i]);
  return w;
}

Word& Word::operator+=(const Word& other) {
  if (size_ % 64 == 0) {
    chunks_.insert(chunks_.end(), other.chunks_.begin(), other.chunks_.end());
    size_ += other.size_;
    return *this;
  }
  for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
  return *this;
}

std::string Word::to_string() const {
  if (empty()) return "e";
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back(to_char((*this)[i]));
  return s;
}

std::size_t Word::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
  for (std::uint64_t c : chunks_) {
    h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  for (std::size_t i = 0; i < a.size_; ++i) {
    if (a[i] != b[i]) return a[i] <=> b[i];
  }
  return std::strong_ordering::equal;
}

Word conjugate(const Word& x) {
  Word w;
  for (std::size_t i = x.size(); i-- > 0;) w.push_back(conjugate(x[i]));
  return w;
}

std::vector<Word> words_of_length(std::size_t n) {
  if (n >= 64) throw std::invalid_argument("words_of_length: n must be < 64");
  std::vector<Word> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    out.push_back(Word::from_bits(bits, n));
  }
  return out;
}

std::vector<Word> words_up_to(std::size_t n) {
  std::vector<Word> out;
  for (std::size_t len = 0; len <= n; ++len) {
    auto level = words_of_length(len);
    out.insert(out.end(), level.begin(), level.end());
  }
  // bit order within a level is not lexicographic; shortlex is the contract
  std::sort(out.begin(), out.end());
  return out;
}

Word sandwich_word(std::size_t n) {
  Word w;
  for (std::size_t i = 0; i < n; ++i) {
    w.push_back(Letter::U);
    w.push_back(Letter::UBar);
  }
  return w;
}

}  // namespace qfusion
