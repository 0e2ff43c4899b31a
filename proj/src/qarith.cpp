#include "qfusion/qarith.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace qfusion {

std::pair<QContext<Real>, QSpectrum<Real>> context_from_F(const Eigen::MatrixXcd& F) {
  const Eigen::Index n = F.rows();
  if (F.cols() != n) throw std::invalid_argument("F must be square");
  if (n < 2) throw std::invalid_argument("F must be at least 2x2 (dim_u >= 2)");

  // F*F = A + iB, embedded as the real symmetric [[A, -B], [B, A]] whose
  // spectrum is that of F*F with every eigenvalue doubled.
  using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  RealMatrix embed(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Real a = 0;
      Real b = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const Real re_ki = F(k, i).real(), im_ki = F(k, i).imag();
        const Real re_kj = F(k, j).real(), im_kj = F(k, j).imag();
        a += re_ki * re_kj + im_ki * im_kj;
        b += re_ki * im_kj - im_ki * re_kj;
      }
      embed(i, j) = a;
      embed(i + n, j + n) = a;
      embed(i + n, j) = b;
      embed(i, j + n) = -b;
    }
  }

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(embed, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed on F*F");
  std::vector<Real> lambda;
  for (Eigen::Index i = 0; i < 2 * n; i += 2) lambda.push_back(solver.eigenvalues()(i));

  const Real tol = lambda.back() * Real(n) * 1000 * std::numeric_limits<Real>::epsilon();
  if (lambda.front() <= tol) throw std::invalid_argument("F is singular");

  Real trace = 0;
  Real inverse_trace = 0;
  for (const Real& l : lambda) {
    trace += l;
    inverse_trace += 1 / l;
  }
  const Real c = sqrt(inverse_trace / trace);

  QSpectrum<Real> spectrum;
  spectrum.n = static_cast<std::size_t>(n);
  for (const Real& l : lambda) spectrum.eigenvalues.push_back(c * l);

  Real dim_u = 0;
  for (const Real& l : spectrum.eigenvalues) dim_u += l;
  // dim_u >= 2 in exact arithmetic (Cauchy-Schwarz); clamp rounding at N = 2, F ~ I
  if (dim_u < 2) dim_u = 2;

  QContext<Real> ctx = context_from_q(solve_reciprocal_sum(dim_u));
  ctx.dim_u = dim_u;
  const Real top = spectrum.eigenvalues.back();
  const Real inv_bottom = 1 / spectrum.eigenvalues.front();
  ctx.rho = top > inv_bottom ? top : inv_bottom;
  return {ctx, spectrum};
}

}  // namespace qfusion
