#include "postmetrics/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "postmetrics/error.hpp"

namespace postmetrics {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t state = base ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  splitmix64(state);
  return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) noexcept {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

Rng Rng::from_state(const std::array<std::uint64_t, 4>& state) {
  if (state[0] == 0 && state[1] == 0 && state[2] == 0 && state[3] == 0) {
    throw Error("Rng::from_state: all-zero state");
  }
  Rng rng(0);
  rng.s_ = state;
  return rng;
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  if (!(lo < hi)) throw Error("Rng::uniform: require lo < hi");
  const double v = lo + (hi - lo) * uniform01();
  // lo + (hi - lo) * u can round up to hi for u close to 1.
  return v < hi ? v : std::nextafter(hi, lo);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error("Rng::uniform_index: n must be positive");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

Vec ridge_solve(const Mat& a, const Vec& b, double lambda) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DimensionError("ridge_solve: design matrix must be nonempty");
  }
  if (b.size() != a.rows()) {
    std::ostringstream msg;
    msg << "ridge_solve: A has " << a.rows() << " rows but b has " << b.size()
        << " entries";
    throw DimensionError(msg.str());
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw NumericalError("ridge_solve: lambda must be finite and >= 0");
  }

  const Eigen::Index m = a.cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  gram.diagonal().array() += lambda;
  const Vec rhs = a.transpose() * b;

  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
  const bool singular =
      llt.info() != Eigen::Success ||
      (lambda == 0.0 && llt.rcond() < std::numeric_limits<double>::epsilon());
  if (singular) {
    throw NumericalError(lambda == 0.0
                             ? "ridge_solve: A^T A is singular; use lambda > 0"
                             : "ridge_solve: factorization failed");
  }
  Vec w = llt.solve(rhs);
  if (!w.allFinite()) throw NumericalError("ridge_solve: non-finite solution");
  return w;
}

double ridge_residual(const Mat& a, const Vec& b, double lambda, const Vec& w) {
  const Vec aw = a * w;
  const Vec r = a.transpose() * (aw - b) + lambda * w;
  return r.cwiseAbs().maxCoeff();
}

double spectral_radius(const Mat& m, const PowerIterationOptions& options) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DimensionError("spectral_radius: matrix must be square and nonempty");
  }
  if (!m.allFinite()) throw NumericalError("spectral_radius: non-finite entry");

  const Eigen::Index d = m.rows();
  Rng rng(options.seed);
  Vec x(d);
  do {
    for (Eigen::Index i = 0; i < d; ++i) x[i] = rng.uniform(-1.0, 1.0);
  } while (x.norm() == 0.0);
  x.normalize();

  // Below this residual ratio x is treated as an eigenvector and the plain
  // Rayleigh quotient is used; the two-term fit loses accuracy there.
  constexpr double kEigenvectorRatio = 1e-8;

  double previous = std::numeric_limits<double>::quiet_NaN();
  double estimate = 0.0;
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const Vec y = m * x;
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;

    const double rayleigh = x.dot(y);
    const Vec r = y - rayleigh * x;
    const double nr = r.norm();
    if (nr <= kEigenvectorRatio * ny) {
      estimate = std::abs(rayleigh);
    } else {
      // Fit M y = alpha y + beta x in the orthonormal basis {x, r/|r|}.
      const Vec z = m * y;
      const double c0 = z.dot(x);
      const double c1 = z.dot(r) / nr;
      const double alpha = c1 / nr;
      const double beta = c0 - alpha * rayleigh;
      const double disc = alpha * alpha + 4.0 * beta;
      if (disc < 0.0) {
        estimate = std::sqrt(-beta);
      } else {
        const double root = std::sqrt(disc);
        estimate = 0.5 * std::max(std::abs(alpha + root), std::abs(alpha - root));
      }
    }

    if (std::abs(estimate - previous) < options.tol * std::max(1.0, estimate)) {
      return estimate;
    }
    previous = estimate;
    x = y / ny;
  }
  std::ostringstream msg;
  msg << "spectral_radius: no convergence after " << options.max_iter
      << " iterations (last estimate " << estimate << ")";
  throw ConvergenceError(msg.str(), estimate);
}

}  // namespace postmetrics
