#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vibench/core/error.hpp"

namespace vibench::metrics {

/// Mean and covariance of a multivariate normal fit.
template <typename Scalar>
struct GaussianSummary {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector mean;
  Matrix cov;

  Eigen::Index dim() const { return mean.size(); }

  /// Throws PreconditionError if cov is not dim x dim or not symmetric
  /// within `tolerance` (relative to its largest entry).
  void check(Scalar tolerance = Scalar(1e-9)) const {
    if (cov.rows() != dim() || cov.cols() != dim()) {
      throw PreconditionError("covariance is " + std::to_string(cov.rows()) + "x" + std::to_string(cov.cols()) +
                              " for a " + std::to_string(dim()) + "-D mean");
    }
    const Scalar scale = std::max(Scalar(1), cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > tolerance * scale) {
      throw PreconditionError("covariance is not symmetric");
    }
  }
};

/// Streaming mean/covariance (count, mean, sum of centered outer products).
/// merge() combines two shards exactly as if their samples had been added
/// to one accumulator, up to rounding.
template <typename Scalar>
class GaussianAccumulator {
 public:
  using Vector = typename GaussianSummary<Scalar>::Vector;
  using Matrix = typename GaussianSummary<Scalar>::Matrix;

  explicit GaussianAccumulator(Eigen::Index dim = 0)
      : mean_(Vector::Zero(dim)), m2_(Matrix::Zero(dim, dim)) {}

  Eigen::Index dim() const { return mean_.size(); }
  long count() const { return n_; }

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& x) {
    if (n_ == 0 && dim() == 0) *this = GaussianAccumulator(x.size());
    if (x.size() != dim()) {
      throw PreconditionError("sample has dimension " + std::to_string(x.size()) + ", expected " +
                              std::to_string(dim()));
    }
    ++n_;
    const Vector delta = x.template cast<Scalar>() - mean_;
    mean_ += delta / Scalar(n_);
    m2_.noalias() += delta * (x.template cast<Scalar>() - mean_).transpose();
  }

  void merge(const GaussianAccumulator& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
      *this = other;
      return;
    }
    if (other.dim() != dim()) throw PreconditionError("cannot merge accumulators of different dimension");
    const Scalar na = Scalar(n_), nb = Scalar(other.n_), n = na + nb;
    const Vector delta = other.mean_ - mean_;
    mean_ += delta * (nb / n);
    m2_ += other.m2_ + delta * delta.transpose() * (na * nb / n);
    n_ += other.n_;
  }

  /// Covariance uses the n - 1 denominator; it is all zeros when n = 1.
  /// Throws PreconditionError when empty.
  GaussianSummary<Scalar> summary() const {
    if (n_ == 0) throw PreconditionError("cannot summarize an empty sample set");
    GaussianSummary<Scalar> g;
    g.mean = mean_;
    g.cov = n_ > 1 ? Matrix(m2_ / Scalar(n_ - 1)) : Matrix(Matrix::Zero(dim(), dim()));
    g.cov = (g.cov + g.cov.transpose()) / Scalar(2);
    return g;
  }

 private:
  long n_ = 0;
  Vector mean_;
  Matrix m2_;
};

struct FrechetOptions {
  /// Added to both diagonals when the square-root argument has significant
  /// negative eigenvalues.
  double regularization = 1e-6;
  /// Eigenvalues below -negative_tolerance * max(1, largest |eigenvalue|)
  /// count as significant.
  double negative_tolerance = 1e-8;
};

namespace detail {

/// Symmetric PSD square root; small negative eigenvalues are clamped to 0.
template <typename Matrix>
Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0).cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Tr sqrt(A^{1/2} B A^{1/2}), or NaN if the argument has a significant
/// negative eigenvalue.
template <typename Matrix>
typename Matrix::Scalar trace_sqrt_product(const Matrix& a, const Matrix& b, double negative_tolerance) {
  using Scalar = typename Matrix::Scalar;
  const Matrix ah = psd_sqrt(a);
  Matrix m = ah * b * ah;
  m = (m + m.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const auto& ev = es.eigenvalues();
  const Scalar scale = std::max(Scalar(1), ev.cwiseAbs().maxCoeff());
  if (ev.size() > 0 && ev.minCoeff() < -Scalar(negative_tolerance) * scale) {
    return std::numeric_limits<Scalar>::quiet_NaN();
  }
  return ev.cwiseMax(0).cwiseSqrt().sum();
}

}  // namespace detail

/// ||mu1 - mu2||^2 + Tr(S1) + Tr(S2) - 2 Tr sqrt(S1^{1/2} S2 S1^{1/2}).
///
/// The trace term equals Tr (S1 S2)^{1/2} and is evaluated through a
/// symmetric eigendecomposition. Throws PreconditionError on a dimension
/// mismatch and NumericError if regularization does not help.
template <typename Scalar>
Scalar frechet_distance(const GaussianSummary<Scalar>& g1, const GaussianSummary<Scalar>& g2,
                        const FrechetOptions& options = {}) {
  g1.check();
  g2.check();
  if (g1.dim() != g2.dim()) {
    throw PreconditionError("Gaussian dimensions differ: " + std::to_string(g1.dim()) + " vs " +
                            std::to_string(g2.dim()));
  }
  using Matrix = typename GaussianSummary<Scalar>::Matrix;
  const Scalar mean_term = (g1.mean - g2.mean).squaredNorm();
  Scalar tr = detail::trace_sqrt_product<Matrix>(g1.cov, g2.cov, options.negative_tolerance);
  Scalar offset = 0;
  if (std::isnan(tr)) {
    const Matrix eps = Matrix::Identity(g1.dim(), g1.dim()) * Scalar(options.regularization);
    tr = detail::trace_sqrt_product<Matrix>(g1.cov + eps, g2.cov + eps, options.negative_tolerance);
    if (std::isnan(tr)) throw NumericError("matrix square root failed after regularization");
    offset = Scalar(2 * options.regularization) * Scalar(g1.dim());
  }
  return mean_term + g1.cov.trace() + g2.cov.trace() + offset - Scalar(2) * tr;
}

extern template struct GaussianSummary<double>;
extern template class GaussianAccumulator<double>;
extern template double frechet_distance<double>(const GaussianSummary<double>&, const GaussianSummary<double>&,
                                                const FrechetOptions&);

}  // namespace vibench::metrics
