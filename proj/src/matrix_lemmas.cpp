#include "qfusion/matrix_lemmas.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "qfusion/rng.hpp"

namespace qfusion {

double operator_norm(const CMatrix& x) {
  if (x.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues()(0);
}

double hermitian_norm(const CMatrix& x) {
  if (x.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

CMatrix hermitian_power(const CMatrix& x, long n) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x);
  Eigen::VectorXd lambda = es.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = std::pow(lambda(i), static_cast<double>(n));
  return es.eigenvectors() * lambda.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

bool is_positive_contraction(const CMatrix& x, double tol) {
  if ((x - x.adjoint()).norm() > 1e-10 * std::max(1.0, x.norm())) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev(0) >= -tol && ev(ev.size() - 1) <= 1 + tol;
}

long asymptotic_power(double eps) {
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0, 1)");
  const double e2 = eps * eps;
  return static_cast<long>(std::ceil(std::log(e2) / std::log1p(-e2)));
}

namespace {

constexpr double kPreTol = 1e-10;

// largest singular value as sqrt of the top eigenvalue of x*x; cheaper than
// an SVD inside bisection loops and random searches
double gram_norm(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x.adjoint() * x, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

CMatrix gaussian(std::size_t rows, std::size_t cols, CounterRng& rng) {
  std::normal_distribution<double> normal;
  CMatrix g(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) {
      const double re = normal(rng);
      g(i, j) = {re, normal(rng)};
    }
  }
  return g;
}

CMatrix unit_psd(std::size_t dim, std::size_t rank, CounterRng& rng) {
  const CMatrix g = gaussian(dim, rank, rng);
  CMatrix p = g * g.adjoint();
  return p / hermitian_norm(p);
}

std::size_t pick(std::size_t lo, std::size_t hi, CounterRng& rng) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

}  // namespace

LemmaVerdict asymptotic_orthogonality_check(const PsdPair& pair, double eps) {
  LemmaVerdict v;
  if (!(eps > 0 && eps <= 0.5)) {
    v.precondition_detail = "eps outside (0, 1/2]";
    return v;
  }
  v.power = asymptotic_power(eps);
  v.bound = 14 * eps;
  if (pair.A.rows() != pair.B.rows() || pair.A.rows() != pair.A.cols() || pair.B.rows() != pair.B.cols()) {
    v.precondition_detail = "shape mismatch";
    return v;
  }
  if (!is_positive_contraction(pair.A, kPreTol)) {
    v.precondition_detail = "A is not a positive contraction";
  } else if (!is_positive_contraction(pair.B, kPreTol)) {
    v.precondition_detail = "B is not a positive contraction";
  } else if (const double s = hermitian_norm(pair.A + pair.B); s > 1 + eps + kPreTol) {
    v.precondition_detail = "norm of A+B exceeds 1+eps";
  }
  v.precondition_ok = v.precondition_detail.empty();
  v.value = operator_norm(hermitian_power(pair.A, v.power) * hermitian_power(pair.B, v.power));
  v.pass = v.precondition_ok && v.value <= v.bound + kLemmaMargin;
  return v;
}

LemmaVerdict easy_orthogonality_check(const PsdPair& pair, double eps) {
  LemmaVerdict v;
  v.bound = 1 + 2 * eps;
  if (!(eps >= 0)) {
    v.precondition_detail = "eps must be nonnegative";
    return v;
  }
  if (pair.A.rows() != pair.B.rows() || pair.A.rows() != pair.A.cols() || pair.B.rows() != pair.B.cols()) {
    v.precondition_detail = "shape mismatch";
    return v;
  }
  if (!is_positive_contraction(pair.A, kPreTol) || std::abs(hermitian_norm(pair.A) - 1) > kPreTol) {
    v.precondition_detail = "A is not positive with norm one";
  } else if (!is_positive_contraction(pair.B, kPreTol) || std::abs(hermitian_norm(pair.B) - 1) > kPreTol) {
    v.precondition_detail = "B is not positive with norm one";
  } else if (operator_norm(pair.A * pair.B) > eps + kPreTol) {
    v.precondition_detail = "norm of AB exceeds eps";
  }
  v.precondition_ok = v.precondition_detail.empty();
  v.value = hermitian_norm(pair.A + pair.B);
  v.pass = v.precondition_ok && v.value <= v.bound + kLemmaMargin;
  return v;
}

PsdPair sample_asymptotic_pair(std::size_t dim, double eps, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index);
  PsdPair p;
  const double a_scale = 0.5 + 0.5 * rng.uniform();
  p.A = a_scale * unit_psd(dim, pick(1, dim, rng), rng);
  CMatrix b = unit_psd(dim, pick(1, dim, rng), rng);
  if (rng() & 1) {
    // push B mostly off the top eigenvector of A
    Eigen::SelfAdjointEigenSolver<CMatrix> es(p.A);
    const Eigen::VectorXcd top = es.eigenvectors().col(dim - 1);
    const CMatrix proj = CMatrix::Identity(dim, dim) - top * top.adjoint();
    const double leak = 0.1 * rng.uniform();
    CMatrix c = proj * b * proj + leak * b;
    b = c / hermitian_norm(c);
  }
  auto fits = [&](double s) { return hermitian_norm(p.A + s * b) <= 1 + eps; };
  double lo = 0, hi = 1;
  if (fits(1)) {
    lo = 1;
  } else {
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (fits(mid) ? lo : hi) = mid;
    }
  }
  p.B = lo * b;
  return p;
}

PsdPair sample_easy_pair(std::size_t dim, double eps, std::uint64_t seed, std::uint64_t index) {
  if (dim < 2) throw std::invalid_argument("easy pair needs dimension >= 2");
  CounterRng rng(seed, index);
  const std::size_t d1 = pick(1, dim - 1, rng);
  const std::size_t d2 = dim - d1;
  PsdPair p;
  p.A = CMatrix::Zero(dim, dim);
  p.A.topLeftCorner(d1, d1) = unit_psd(d1, pick(1, d1, rng), rng);
  CMatrix b0 = CMatrix::Zero(dim, dim);
  b0.bottomRightCorner(d2, d2) = unit_psd(d2, pick(1, d2, rng), rng);

  const CMatrix g = gaussian(dim, dim, rng);
  CMatrix h = 0.5 * (g + g.adjoint());
  h /= hermitian_norm(h);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  auto rotated = [&](double t) {
    Eigen::VectorXcd phase(dim);
    for (std::size_t i = 0; i < dim; ++i) phase(i) = std::polar(1.0, t * es.eigenvalues()(i));
    const CMatrix w = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    CMatrix b = w * b0 * w.adjoint();
    return CMatrix(0.5 * (b + b.adjoint()));
  };
  auto fits = [&](double t) { return gram_norm(p.A * rotated(t)) <= eps; };
  const double t_max = std::numbers::pi * (0.25 + rng.uniform());
  double lo = 0, hi = t_max;
  if (fits(hi)) {
    lo = hi;
  } else {
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (fits(mid) ? lo : hi) = mid;
    }
  }
  p.B = rotated(lo);
  return p;
}

std::string to_string(LemmaKind k) {
  switch (k) {
    case LemmaKind::Asymptotic: return "l49";
    case LemmaKind::Easy: return "l410";
    case LemmaKind::Theta: return "theta";
  }
  return "?";
}

namespace {

struct Sample {
  bool precondition_ok;
  bool pass;
  double value;
  double bound;
};

// Splits [0, n) contiguously over workers and merges in worker order, so the
// report does not depend on the schedule.
template <class F>
SweepReport run_sweep(LemmaKind kind, double parameter, std::uint64_t n, unsigned workers, F&& one) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(1, n))));
  std::vector<SweepReport> parts(workers);
  auto work = [&](unsigned w) {
    SweepReport& r = parts[w];
    r.worst_slack = INFINITY;
    const std::uint64_t first = n * w / workers, last = n * (w + 1) / workers;
    for (std::uint64_t i = first; i < last; ++i) {
      const Sample s = one(i);
      ++r.samples;
      if (!s.precondition_ok) ++r.precondition_failures;
      if (s.precondition_ok && !s.pass) ++r.violations;
      const double slack = kind == LemmaKind::Theta ? s.value - s.bound : s.bound - s.value;
      if (slack < r.worst_slack) {
        r.worst_slack = slack;
        r.worst_value = s.value;
        r.bound = s.bound;
        r.worst_index = i;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  SweepReport out;
  out.kind = kind;
  out.parameter = parameter;
  out.worst_slack = INFINITY;
  for (const auto& r : parts) {
    out.samples += r.samples;
    out.precondition_failures += r.precondition_failures;
    out.violations += r.violations;
    if (r.samples > 0 && r.worst_slack < out.worst_slack) {
      out.worst_slack = r.worst_slack;
      out.worst_value = r.worst_value;
      out.bound = r.bound;
      out.worst_index = r.worst_index;
    }
  }
  return out;
}

std::size_t sample_dim(std::size_t max_dim, std::uint64_t seed, std::uint64_t i) {
  CounterRng rng(seed ^ 0x5bd1e995u, i);
  return pick(2, std::max<std::size_t>(2, max_dim), rng);
}

}  // namespace

SweepReport asymptotic_sweep(double eps, std::uint64_t n_samples, std::uint64_t seed, std::size_t max_dim,
                             unsigned workers) {
  return run_sweep(LemmaKind::Asymptotic, eps, n_samples, workers, [&](std::uint64_t i) {
    const PsdPair p = sample_asymptotic_pair(sample_dim(max_dim, seed, i), eps, seed, i);
    const LemmaVerdict v = asymptotic_orthogonality_check(p, eps);
    return Sample{v.precondition_ok, v.pass, v.value, v.bound};
  });
}

SweepReport easy_sweep(double eps, std::uint64_t n_samples, std::uint64_t seed, std::size_t max_dim,
                       unsigned workers) {
  return run_sweep(LemmaKind::Easy, eps, n_samples, workers, [&](std::uint64_t i) {
    const PsdPair p = sample_easy_pair(sample_dim(max_dim, seed, i), eps, seed, i);
    const LemmaVerdict v = easy_orthogonality_check(p, eps);
    return Sample{v.precondition_ok, v.pass, v.value, v.bound};
  });
}

double rotated_product_norm(const CMatrix& b, double theta) {
  const Eigen::Index k = b.rows() / 2;
  if (b.rows() != 2 * k || b.cols() != b.rows()) throw std::invalid_argument("b must be square of even size");
  // Ad(diag(1, e^{iθ}) ⊗ 1) scales the off-diagonal k×k blocks by e^{∓iθ}
  const std::complex<double> phase = std::polar(1.0, theta);
  CMatrix rotated = b;
  rotated.bottomLeftCorner(k, k) *= phase;
  rotated.topRightCorner(k, k) *= std::conj(phase);
  return gram_norm(b * rotated);
}

double theta_bound(double theta) { return 1 - std::abs(std::complex<double>(1, 0) - std::polar(1.0, theta)); }

SweepReport theta_rotation_probe(double theta, std::size_t k_max, std::uint64_t n_samples, std::uint64_t seed,
                                 unsigned workers) {
  if (k_max == 0) throw std::invalid_argument("k_max must be positive");
  const double bound = theta_bound(theta);
  return run_sweep(LemmaKind::Theta, theta, n_samples, workers, [&](std::uint64_t i) {
    CounterRng rng(seed, i);
    const std::size_t k = pick(1, k_max, rng);
    const std::size_t dim = 2 * k;
    std::size_t rank = dim;
    switch (i % 4) {
      case 1: rank = 1; break;
      case 2: rank = std::min<std::size_t>(2, dim); break;
      case 3: rank = pick(1, dim, rng); break;
      default: break;
    }
    CMatrix c = gaussian(dim, rank, rng);
    auto value = [&](const CMatrix& f) {
      CMatrix b = f * f.adjoint();
      b /= hermitian_norm(b);
      if (i % 4 == 3) {
        // sharpen the spectrum towards the top eigenspace
        b = b * b * b;
        b /= hermitian_norm(b);
      }
      return rotated_product_norm(b, theta);
    };
    double best = value(c);
    double step = 0.3;
    for (int it = 0; it < 8; ++it) {
      const CMatrix trial = c + step * c.norm() / std::sqrt(static_cast<double>(c.size())) * gaussian(dim, rank, rng);
      const double v = value(trial);
      if (v < best) {
        best = v;
        c = trial;
      } else {
        step *= 0.7;
      }
    }
    return Sample{true, best >= bound - kLemmaMargin, best, bound};
  });
}

}  // namespace qfusion
