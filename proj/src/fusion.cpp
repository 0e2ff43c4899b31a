#include "qfusion/fusion.hpp"

#include <algorithm>

namespace qfusion {

void Decomposition::add(const Word& w, const Multiplicity& m) {
  if (m == 0) return;
  auto [it, inserted] = summands_.try_emplace(w, m);
  if (!inserted) it->second += m;
}

Multiplicity Decomposition::multiplicity(const Word& w) const {
  auto it = summands_.find(w);
  return it == summands_.end() ? Multiplicity{0} : it->second;
}

Multiplicity Decomposition::total_multiplicity() const {
  Multiplicity total = 0;
  for (const auto& [w, m] : summands_) total += m;
  return total;
}

std::size_t cancellation_depth(const Word& x, const Word& y) {
  const std::size_t limit = std::min(x.size(), y.size());
  std::size_t d = 0;
  while (d < limit && x[x.size() - 1 - d] == conjugate(y[d])) ++d;
  return d;
}

Decomposition tensor_decompose(const Word& x, const Word& y) {
  Decomposition out;
  const std::size_t depth = cancellation_depth(x, y);
  for (std::size_t d = 0; d <= depth; ++d) {
    out.add(x.drop_last(d) + y.drop_first(d));
  }
  return out;
}

Decomposition tensor_decompose(const Decomposition& d, const Word& y) {
  Decomposition out;
  for (const auto& [w, m] : d) {
    for (const auto& [v, n] : tensor_decompose(w, y)) out.add(v, m * n);
  }
  return out;
}

Decomposition tensor_decompose(const Word& y, const Decomposition& d) {
  Decomposition out;
  for (const auto& [w, m] : d) {
    for (const auto& [v, n] : tensor_decompose(y, w)) out.add(v, m * n);
  }
  return out;
}

Decomposition triple_decompose(const Word& x, const Word& y, const Word& z, Association order) {
  if (order == Association::Left) return tensor_decompose(tensor_decompose(x, y), z);
  return tensor_decompose(x, tensor_decompose(y, z));
}

Decomposition product_decompose(std::span<const Word> factors) {
  Decomposition acc;
  acc.add(Word{});
  for (const Word& f : factors) acc = tensor_decompose(acc, f);
  return acc;
}

bool is_subobject(const Word& w, const Word& x, const Word& y) {
  const std::size_t total = x.size() + y.size();
  if (w.size() > total || (total - w.size()) % 2 != 0) return false;
  const std::size_t d = (total - w.size()) / 2;
  if (d > x.size() || d > y.size()) return false;
  // v = last d letters of x must satisfy v̄ = first d letters of y
  if (conjugate(x.slice(x.size() - d, d)) != y.prefix(d)) return false;
  return w == x.drop_last(d) + y.drop_first(d);
}

std::vector<Block> block_decomposition(const Word& x) {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == 0 || x[i] == x[i - 1]) {
      blocks.push_back({x[i], 1});
    } else {
      ++blocks.back().length;
    }
  }
  return blocks;
}

std::size_t last_block_length(const Word& x) {
  if (x.empty()) return 0;
  std::size_t l = 1;
  while (l < x.size() && x[x.size() - l] != x[x.size() - l - 1]) ++l;
  return l;
}

}  // namespace qfusion
