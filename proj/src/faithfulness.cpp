#include "qfusion/faithfulness.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace qfusion {

namespace {

bool ubar_initial(const Word& w) { return !w.empty() && w.front() == Letter::UBar; }

bool sandwiched(const Word& w) { return !w.empty() && w.front() == Letter::U && w.back() == Letter::UBar; }

std::vector<Word> normalized(std::span<const Word> F) {
  std::vector<Word> out(F.begin(), F.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

bool SandwichCertificate::valid() const {
  if (N == 0 || entries.size() != words.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.x != words[i] || e.subobjects.empty()) return false;
    for (const Word& w : e.subobjects) {
      if (!sandwiched(w)) return false;
    }
  }
  return true;
}

std::size_t trivial_sandwich_power(const Word& x) {
  if (x.empty() || x.size() % 2 != 0) return 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != (i % 2 == 0 ? Letter::U : Letter::UBar)) return 0;
  }
  return x.size() / 2;
}

SandwichEntry sandwich_entry(const Word& x, std::size_t N, Association order) {
  const Word U = sandwich_word(N);
  SandwichEntry e;
  e.x = x;
  for (const auto& [w, m] : triple_decompose(U, x, U, order)) e.subobjects.push_back(w);
  e.all_sandwiched = std::all_of(e.subobjects.begin(), e.subobjects.end(), sandwiched);
  return e;
}

bool sandwich_holds(const Word& x, std::size_t N) { return sandwich_entry(x, N).all_sandwiched; }

std::optional<SandwichCertificate> banica_min_N(std::span<const Word> F, std::size_t N_max) {
  if (N_max == 0) throw std::invalid_argument("N_max must be at least 1");
  const std::vector<Word> words = normalized(F);
  for (const Word& x : words) {
    if (x.empty()) throw std::invalid_argument("the word set must not contain the empty word");
  }
  for (std::size_t N = 1; N <= N_max; ++N) {
    SandwichCertificate cert;
    cert.words = words;
    cert.N = N;
    bool ok = true;
    for (const Word& x : words) {
      SandwichEntry e = sandwich_entry(x, N);
      if (!e.all_sandwiched) {
        ok = false;
        break;
      }
      cert.entries.push_back(std::move(e));
    }
    if (ok) return cert;
  }
  return std::nullopt;
}

std::optional<std::size_t> banica_min_N(const Word& x, std::size_t N_max) {
  const Word one[] = {x};
  auto cert = banica_min_N(std::span<const Word>(one), N_max);
  if (!cert) return std::nullopt;
  return cert->N;
}

bool reverify_certificate(const SandwichCertificate& cert) {
  if (!cert.valid()) return false;
  for (const auto& e : cert.entries) {
    const SandwichEntry right = sandwich_entry(e.x, cert.N, Association::Right);
    if (right.subobjects != e.subobjects || !right.all_sandwiched) return false;
  }
  return true;
}

bool boundary_support_contains_ubar_initial(std::span<const Word> prefix_stack, const Word& s) {
  std::vector<Word> factors(prefix_stack.begin(), prefix_stack.end());
  factors.push_back(s);
  const Decomposition d = product_decompose(factors);
  return std::any_of(d.begin(), d.end(), [](const auto& kv) { return ubar_initial(kv.first); });
}

namespace {

struct ScanPart {
  std::size_t a = 0, b = 0;
  std::vector<SupportViolation> violations;
};

std::optional<SupportChain> chain_via_U(const Word& U, const Word& s) {
  for (const auto& [y, m] : tensor_decompose(U, s)) {
    if (ubar_initial(y)) return SupportChain{{U, s}, {U, y}};
  }
  return std::nullopt;
}

std::optional<SupportChain> chain_via_x(const Word& U, const std::vector<std::pair<Word, Decomposition>>& middles,
                                        const Word& s) {
  for (const auto& [x, ux] : middles) {
    for (const auto& [z, mz] : ux) {
      for (const auto& [y, my] : tensor_decompose(z, s)) {
        if (ubar_initial(y)) return SupportChain{{U, x, s}, {U, z, y}};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

SupportReport disjoint_support_check(std::span<const Word> F, std::size_t N, std::size_t L, unsigned workers) {
  if (N == 0) throw std::invalid_argument("N must be at least 1");
  if (L > 24) throw std::invalid_argument("scan length must be at most 24");
  SupportReport report;
  report.words = normalized(F);
  report.N = N;
  report.L = L;
  const Word U = sandwich_word(N);
  std::vector<std::pair<Word, Decomposition>> middles;
  for (const Word& x : report.words) middles.emplace_back(x, tensor_decompose(U, x));

  const std::vector<Word> scan = words_up_to(L);
  report.scanned = scan.size();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(scan.size())));
  std::vector<ScanPart> parts(workers);
  auto work = [&](unsigned w) {
    ScanPart& part = parts[w];
    const std::size_t first = scan.size() * w / workers, last = scan.size() * (w + 1) / workers;
    for (std::size_t i = first; i < last; ++i) {
      const Word& s = scan[i];
      auto a = chain_via_U(U, s);
      auto b = chain_via_x(U, middles, s);
      part.a += a.has_value();
      part.b += b.has_value();
      if (a && b) part.violations.push_back({s, std::move(*a), std::move(*b)});
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& part : parts) {
    report.setA_size += part.a;
    report.setB_size += part.b;
    for (auto& v : part.violations) report.violations.push_back(std::move(v));
  }
  return report;
}

WitnessNorm strong_faithfulness_witness_norm(std::span<const Word> F, const Word& /*cylinder*/, std::size_t N,
                                             std::size_t L) {
  WitnessNorm out;
  if (F.empty()) return out;
  SupportReport r = disjoint_support_check(F, N, L);
  if (!r.disjoint()) {
    out.value = 1;
    out.violation = std::move(r.violations.front());
  }
  return out;
}

}  // namespace qfusion
