#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qfusion {

using CMatrix = Eigen::MatrixXcd;

/// Largest singular value.
double operator_norm(const CMatrix& x);

/// Largest |eigenvalue| of a Hermitian matrix (only the lower triangle is read).
double hermitian_norm(const CMatrix& x);

/// x^n for Hermitian x via its spectral decomposition.
CMatrix hermitian_power(const CMatrix& x, long n);

struct PsdPair {
  CMatrix A;
  CMatrix B;
};

/// Spectrum of a Hermitian matrix lies in [-tol, 1 + tol].
bool is_positive_contraction(const CMatrix& x, double tol = 1e-10);

constexpr double kLemmaMargin = 1e-9;

struct LemmaVerdict {
  bool precondition_ok = false;
  std::string precondition_detail;  ///< empty when the precondition holds
  long power = 0;                   ///< exponent n, asymptotic check only
  double value = 0;                 ///< ‖AⁿBⁿ‖ or ‖A+B‖
  double bound = 0;
  bool pass = false;                ///< precondition_ok and value <= bound + margin
};

/// n = ⌈log(ε²) / log(1 - ε²)⌉, the first n with (1-ε²)ⁿ <= ε².
long asymptotic_power(double eps);

/// 0 <= A, B <= 1 with ‖A+B‖ <= 1+ε forces ‖AⁿBⁿ‖ <= 14ε. eps in (0, ½].
LemmaVerdict asymptotic_orthogonality_check(const PsdPair& pair, double eps);

/// ‖A‖ = ‖B‖ = 1 with ‖AB‖ <= ε forces ‖A+B‖ <= 1+2ε.
LemmaVerdict easy_orthogonality_check(const PsdPair& pair, double eps);

/// Pair meeting the asymptotic-check precondition: A = G*G normalized and
/// scaled into [½, 1], B likewise then shrunk by bisection until ‖A+B‖ <= 1+ε.
PsdPair sample_asymptotic_pair(std::size_t dim, double eps, std::uint64_t seed, std::uint64_t index);

/// Pair meeting the easy-check precondition: A, B start on complementary
/// coordinate blocks and B is rotated by exp(itH), t chosen by bisection so
/// that ‖AB‖ <= ε. Both keep norm one.
PsdPair sample_easy_pair(std::size_t dim, double eps, std::uint64_t seed, std::uint64_t index);

enum class LemmaKind { Asymptotic, Easy, Theta };

std::string to_string(LemmaKind k);

struct SweepReport {
  LemmaKind kind = LemmaKind::Asymptotic;
  double parameter = 0;                 ///< ε, or θ for the probe
  std::uint64_t samples = 0;
  std::uint64_t precondition_failures = 0;
  std::uint64_t violations = 0;
  double worst_value = 0;               ///< max of value, or the min norm for the probe
  double bound = 0;                     ///< bound at the worst sample
  double worst_slack = 0;               ///< min of bound - value over samples
  std::uint64_t worst_index = 0;

  bool pass() const { return precondition_failures == 0 && violations == 0; }
};

/// Runs n_samples checks on sampled pairs of dimension 2..max_dim. Sample i
/// depends only on (seed, i).
SweepReport asymptotic_sweep(double eps, std::uint64_t n_samples, std::uint64_t seed, std::size_t max_dim = 8,
                             unsigned workers = 1);
SweepReport easy_sweep(double eps, std::uint64_t n_samples, std::uint64_t seed, std::size_t max_dim = 8,
                       unsigned workers = 1);

/// ‖b (α⊗id)(b)‖ for α = Ad(diag(1, e^{iθ})) on M₂ and b in M₂ ⊗ M_k.
double rotated_product_norm(const CMatrix& b, double theta);

/// 1 - |1 - e^{iθ}|
double theta_bound(double theta);

/// Minimum of rotated_product_norm over n_samples positive norm-one b with
/// k in 1..k_max. Samples mix full-rank, low-rank and spectrally sharpened
/// matrices, each followed by a short random local descent.
SweepReport theta_rotation_probe(double theta, std::size_t k_max, std::uint64_t n_samples, std::uint64_t seed,
                                 unsigned workers = 1);

}  // namespace qfusion
