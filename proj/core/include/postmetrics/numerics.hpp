#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace postmetrics {

// Row-major dense matrix of doubles. Rows are observations wherever a matrix
// holds data.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

/// One step of the splitmix64 generator: advances `state` and returns the
/// mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Derives an independent 64-bit seed for sub-stream `stream` of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// xoshiro256++ seeded through splitmix64. The stream is fully specified, so
/// identical seeds reproduce identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  /// Generator positioned at an explicit xoshiro state (not all zero).
  static Rng from_state(const std::array<std::uint64_t, 4>& state);

  std::uint64_t next_u64() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  /// Uniform double in [lo, hi). Throws if lo >= hi.
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n) without modulo bias. Throws if n == 0.
  std::uint64_t uniform_index(std::uint64_t n);

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Solves argmin ||A w - b||^2 + lambda ||w||^2 through the normal equations
/// (A^T A + lambda I) w = A^T b and a Cholesky factorization.
///
/// Throws DimensionError on shape problems and NumericalError when the system
/// is singular (only reachable with lambda == 0).
Vec ridge_solve(const Mat& a, const Vec& b, double lambda);

/// Infinity norm of (A^T A + lambda I) w - A^T b.
double ridge_residual(const Mat& a, const Vec& b, double lambda, const Vec& w);

struct PowerIterationOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10'000;
  std::uint64_t seed = 0x5eed'0f'90e7'1e7aULL;
};

/// Largest eigenvalue modulus of a square matrix by power iteration.
///
/// Each step fits the two-term recurrence M^2 x = a M x + b x on the current
/// Krylov pair, so a dominant complex-conjugate or +/- pair is resolved as
/// well as a simple real one. Converged once successive estimates differ by
/// less than tol * max(1, estimate). Throws ConvergenceError with the last
/// estimate when max_iter is exhausted.
double spectral_radius(const Mat& m, const PowerIterationOptions& options = {});

}  // namespace postmetrics
