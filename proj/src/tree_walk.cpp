#include "qfusion/tree_walk.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qfusion/rng.hpp"

namespace qfusion {

void WalkConfig::validate() const {
  if (escape_level <= record_depth) throw std::invalid_argument("escape level must exceed record depth");
  if (record_depth > 20) throw std::invalid_argument("record depth must be at most 20");
  if (workers == 0) throw std::invalid_argument("workers must be positive");
}

namespace {

struct PathTally {
  std::vector<std::uint64_t> counts;
  std::uint64_t completed = 0;
  std::uint64_t failures = 0;
  std::uint64_t steps = 0;
  std::uint64_t returns = 0;
};

class PathSimulator {
 public:
  PathSimulator(const Word& start, const WalkConfig& cfg, const QContext<Real>& ctx)
      : cfg_(cfg), start_(start.size()) {
    for (std::size_t i = 0; i < start.size(); ++i) start_[i] = static_cast<std::uint8_t>(start[i]);
    // block lengths never exceed the current length, which stays <= escape_level
    const WalkKernel<Real> kernel(ctx, cfg.escape_level + 1);
    extend_.resize(cfg.escape_level + 2);
    for (std::size_t l = 1; l < extend_.size(); ++l) {
      extend_[l] = static_cast<double>(kernel.extend_probability(l));
    }
  }

  void run(std::uint64_t first, std::uint64_t last, PathTally& tally) const {
    std::vector<std::uint8_t> word;
    word.reserve(cfg_.escape_level + 1);
    for (std::uint64_t path = first; path < last; ++path) {
      CounterRng rng(cfg_.seed, path);
      word = start_;
      std::size_t block = trailing_block(word);
      std::uint64_t steps = 0;
      bool returned = false;
      while (word.size() < cfg_.escape_level && steps < cfg_.step_cap) {
        ++steps;
        const double r = rng.uniform();
        if (word.empty()) {
          word.push_back(r < 0.5 ? 0 : 1);
          block = 1;
        } else if (r < 0.5) {
          word.push_back(word.back());
          block = 1;
        } else if (2 * (r - 0.5) < extend_[block]) {
          word.push_back(word.back() ^ 1u);
          ++block;
        } else {
          word.pop_back();
          block = block > 1 ? block - 1 : trailing_block(word);
          if (word.empty()) returned = true;
        }
      }
      tally.steps += steps;
      if (returned) ++tally.returns;
      if (word.size() < cfg_.escape_level) {
        ++tally.failures;
        continue;
      }
      ++tally.completed;
      std::uint64_t index = 0;
      for (std::size_t i = 0; i < cfg_.record_depth; ++i) index |= std::uint64_t{word[i]} << i;
      ++tally.counts[index];
    }
  }

 private:
  static std::size_t trailing_block(const std::vector<std::uint8_t>& w) {
    if (w.empty()) return 0;
    std::size_t l = 1;
    while (l < w.size() && w[w.size() - l] != w[w.size() - l - 1]) ++l;
    return l;
  }

  WalkConfig cfg_;
  std::vector<std::uint8_t> start_;
  std::vector<double> extend_;
};

}  // namespace

HittingEstimate monte_carlo_exit(const Word& start, const WalkConfig& cfg, const QContext<Real>& ctx) {
  cfg.validate();
  if (start.size() >= cfg.escape_level) throw std::invalid_argument("start word must be below the escape level");
  const PathSimulator sim(start, cfg, ctx);
  const std::size_t n_cylinders = std::size_t{1} << cfg.record_depth;

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::uint64_t>(1, cfg.n_paths))));
  std::vector<PathTally> tallies(workers);
  for (auto& t : tallies) t.counts.assign(n_cylinders, 0);
  auto range = [&](unsigned w) { return cfg.n_paths * w / workers; };
  if (workers == 1) {
    sim.run(0, cfg.n_paths, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { sim.run(range(w), range(w + 1), tallies[w]); });
    }
    for (auto& t : pool) t.join();
  }

  HittingEstimate out;
  out.n_paths = cfg.n_paths;
  std::vector<std::uint64_t> counts(n_cylinders, 0);
  for (const auto& t : tallies) {
    for (std::size_t i = 0; i < n_cylinders; ++i) counts[i] += t.counts[i];
    out.completed += t.completed;
    out.failures += t.failures;
    out.total_steps += t.steps;
    out.returns_to_root += t.returns;
  }
  for (std::size_t i = 0; i < n_cylinders; ++i) {
    CylinderEstimate c;
    c.word = Word::from_bits(i, cfg.record_depth);
    c.count = counts[i];
    if (out.completed > 0) {
      const double n = static_cast<double>(out.completed);
      c.estimate = static_cast<double>(c.count) / n;
      c.std_error = std::sqrt(c.estimate * (1 - c.estimate) / n);
    }
    out.cylinders.push_back(std::move(c));
  }
  std::sort(out.cylinders.begin(), out.cylinders.end(),
            [](const CylinderEstimate& a, const CylinderEstimate& b) { return a.word < b.word; });
  return out;
}

}  // namespace qfusion
