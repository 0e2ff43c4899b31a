#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>

#include "qfusion/matrix_lemmas.hpp"

using namespace qfusion;

namespace {

using cd = std::complex<double>;

CMatrix random_matrix(std::size_t n, std::mt19937_64& gen) {
  std::normal_distribution<double> g;
  CMatrix x(n, n);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = cd(g(gen), g(gen));
  }
  return x;
}

// power iteration on X*X
double norm_by_iteration(const CMatrix& x) {
  const CMatrix g = x.adjoint() * x;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(g.cols());
  double lambda = 0;
  for (int i = 0; i < 5000; ++i) {
    v = g * v;
    lambda = v.norm();
    if (lambda == 0) return 0;
    v /= lambda;
  }
  return std::sqrt(lambda);
}

double top_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST_SUITE("matrix_lemmas") {
  TEST_CASE("norms") {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 50; ++i) {
      const CMatrix x = random_matrix(2 + i % 6, gen);
      const double n = operator_norm(x);
      CHECK(n == doctest::Approx(norm_by_iteration(x)).epsilon(1e-9));
      CHECK(n * n == doctest::Approx(operator_norm(x.adjoint() * x)).epsilon(1e-10));
      const CMatrix h = x + x.adjoint();
      CHECK(hermitian_norm(h) == doctest::Approx(operator_norm(h)).epsilon(1e-10));
    }
  }

  TEST_CASE("hermitian powers") {
    std::mt19937_64 gen(4);
    const CMatrix g = random_matrix(5, gen);
    const CMatrix h = (g.adjoint() * g) / operator_norm(g.adjoint() * g);
    CMatrix p = CMatrix::Identity(5, 5);
    for (int k = 0; k < 7; ++k) p = p * h;
    CHECK((hermitian_power(h, 7) - p).norm() < 1e-10);
    CHECK((hermitian_power(h, 0) - CMatrix::Identity(5, 5)).norm() < 1e-10);
    CHECK(is_positive_contraction(h));
    CHECK_FALSE(is_positive_contraction(2 * h));
    CHECK_FALSE(is_positive_contraction(-h));
  }

  TEST_CASE("exponent choice") {
    for (double eps : {0.05, 0.1, 0.25, 0.5}) {
      const long n = asymptotic_power(eps);
      const double r = 1 - eps * eps;
      CHECK(std::pow(r, n) <= eps * eps * (1 + 1e-12));
      CHECK(std::pow(r, n - 1) > eps * eps);
    }
  }

  TEST_CASE("samplers meet their preconditions") {
    for (double eps : {0.05, 0.25}) {
      for (std::uint64_t i = 0; i < 40; ++i) {
        const std::size_t dim = 2 + i % 7;
        const PsdPair a = sample_asymptotic_pair(dim, eps, 8, i);
        CHECK(is_positive_contraction(a.A));
        CHECK(is_positive_contraction(a.B));
        CHECK(top_eigenvalue(a.A + a.B) <= 1 + eps + 1e-12);
        const PsdPair b = sample_easy_pair(dim, eps, 8, i);
        CHECK(is_positive_contraction(b.A));
        CHECK(is_positive_contraction(b.B));
        CHECK(top_eigenvalue(b.A) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(top_eigenvalue(b.B) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(norm_by_iteration(b.A * b.B) <= eps + 1e-9);
      }
    }
    // same (seed, index) gives the same pair
    CHECK((sample_asymptotic_pair(4, 0.1, 2, 9).A - sample_asymptotic_pair(4, 0.1, 2, 9).A).norm() == 0);
  }

  TEST_CASE("checks report broken preconditions") {
    const CMatrix id = CMatrix::Identity(2, 2);
    const auto v = asymptotic_orthogonality_check({id, id}, 0.1);
    CHECK_FALSE(v.precondition_ok);
    CHECK_FALSE(v.pass);
    CHECK_FALSE(v.precondition_detail.empty());
    const auto w = easy_orthogonality_check({id, id}, 0.1);
    CHECK_FALSE(w.precondition_ok);
    CMatrix p = CMatrix::Zero(2, 2), r = CMatrix::Zero(2, 2);
    p(0, 0) = 1;
    r(1, 1) = 1;
    const auto ok = easy_orthogonality_check({p, r}, 0.1);
    CHECK(ok.precondition_ok);
    CHECK(ok.pass);
    CHECK(ok.value == doctest::Approx(1.0));
  }

  TEST_CASE("small sweeps pass and do not depend on workers") {
    for (double eps : {0.05, 0.5}) {
      const auto a = asymptotic_sweep(eps, 400, 17);
      const auto b = asymptotic_sweep(eps, 400, 17, 8, 3);
      CHECK(a.pass());
      CHECK(a.samples == 400);
      CHECK(a.worst_value == b.worst_value);
      CHECK(a.worst_index == b.worst_index);
      const auto c = easy_sweep(eps, 400, 17);
      CHECK(c.pass());
      CHECK(c.worst_value == easy_sweep(eps, 400, 17, 8, 2).worst_value);
    }
  }

  TEST_CASE("rotation norm on a rank-one example") {
    // b = |+><+|: the product norm is |<+|ψ>| = cos(θ/2)
    CMatrix b(2, 2);
    b << 0.5, 0.5, 0.5, 0.5;
    for (double theta : {M_PI / 12, M_PI / 6, M_PI / 3, M_PI / 2}) {
      CHECK(rotated_product_norm(b, theta) == doctest::Approx(std::cos(theta / 2)).epsilon(1e-12));
      CHECK(theta_bound(theta) == doctest::Approx(1 - 2 * std::sin(theta / 2)).epsilon(1e-12));
    }
    // diagonal b is fixed by the rotation
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1;
    CHECK(rotated_product_norm(d, 1.0) == doctest::Approx(1.0));
  }

  TEST_CASE("rotation probe stays above the bound") {
    const auto r = theta_rotation_probe(M_PI / 6, 3, 300, 9);
    CHECK(r.pass());
    CHECK(r.worst_value >= theta_bound(M_PI / 6) - kLemmaMargin);
    CHECK(r.worst_value <= 1.0 + 1e-12);
    CHECK(r.worst_value == theta_rotation_probe(M_PI / 6, 3, 300, 9, 2).worst_value);
  }
}
