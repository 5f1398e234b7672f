#pragma once

#include "codim1/linalg.hpp"

#include <utility>

namespace codim1 {

/// A constant Riemannian metric on a fixed-dimension coordinate space:
/// a symmetric positive-definite coefficient table (e_i, e_j).
class ConstMetric {
 public:
  static constexpr double kMaxCondition = 1e8;

  explicit ConstMetric(Mat entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
      throw std::invalid_argument("ConstMetric: entries must be square and nonempty");
    const double scale = entries.cwiseAbs().maxCoeff();
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
      throw std::invalid_argument("ConstMetric: entries are not symmetric");
    entries_ = 0.5 * (entries + entries.transpose());

    Eigen::SelfAdjointEigenSolver<Mat> es(entries_);
    if (es.info() != Eigen::Success) throw std::invalid_argument("ConstMetric: eigensolver failed");
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0) throw std::invalid_argument("ConstMetric: metric is not positive definite");
    if (hi / lo > kMaxCondition)
      throw std::invalid_argument("ConstMetric: condition number exceeds 1e8");
    lambda_ = std::max({hi, 1.0 / lo, 1.0});
    Vec sq = es.eigenvalues().cwiseSqrt();
    sqrt_ = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
    inv_sqrt_ = es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  }

  static ConstMetric euclidean(int dim) { return ConstMetric(Mat::Identity(dim, dim)); }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Mat& entries() const { return entries_; }
  const Mat& sqrt() const { return sqrt_; }
  const Mat& inv_sqrt() const { return inv_sqrt_; }

  /// Smallest lambda >= 1 with (1/lambda) I <= g <= lambda I.
  double lambda_bound() const { return lambda_; }

  double inner(const Vec& a, const Vec& b) const { return a.dot(entries_ * b); }
  double norm(const Vec& v) const { return std::sqrt(std::max(0.0, inner(v, v))); }

  bool same_as(const ConstMetric& other, double tol = 1e-12) const {
    return dim() == other.dim() && (entries_ - other.entries_).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  Mat entries_, sqrt_, inv_sqrt_;
  double lambda_ = 1.0;
};

/// A linear map between metric coordinate spaces, sampled as a coefficient
/// table together with the source and target metrics it is measured in.
struct LinearMapSample {
  Mat coeff;  // tgt_dim x src_dim
  ConstMetric src_metric;
  ConstMetric tgt_metric;

  LinearMapSample(Mat c, ConstMetric src, ConstMetric tgt)
      : coeff(std::move(c)), src_metric(std::move(src)), tgt_metric(std::move(tgt)) {
    if (coeff.cols() != src_metric.dim() || coeff.rows() != tgt_metric.dim())
      throw std::invalid_argument("LinearMapSample: coefficient table does not match metric dims");
  }

  static LinearMapSample euclidean(Mat c) {
    const int s = static_cast<int>(c.cols()), t = static_cast<int>(c.rows());
    return LinearMapSample(std::move(c), ConstMetric::euclidean(s), ConstMetric::euclidean(t));
  }

  int src_dim() const { return static_cast<int>(coeff.cols()); }
  int tgt_dim() const { return static_cast<int>(coeff.rows()); }

  /// Coefficients after whitening both metrics: H^{1/2} T G^{-1/2}.
  Mat whitened() const { return tgt_metric.sqrt() * coeff * src_metric.inv_sqrt(); }
};

/// Frobenius norm of T: (sum_i |T v_i|_h^2)^{1/2} over any g-orthonormal
/// basis (v_i); computed basis-free as |H^{1/2} T G^{-1/2}|_F.
inline double frobenius_norm(const LinearMapSample& t) { return t.whitened().norm(); }

/// Entrywise Frobenius distance of two constant metrics in the standard basis.
inline double metric_distance(const ConstMetric& a, const ConstMetric& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("metric_distance: dimension mismatch");
  return (a.entries() - b.entries()).norm();
}

/// The SPD factor G^{1/2}, packaged as a coefficient map.
inline LinearMapSample metric_sqrt(const ConstMetric& g) {
  return LinearMapSample::euclidean(g.sqrt());
}

struct NearestIsometryResult {
  LinearMapSample map;
  double dist;
};

/// Nearest metric isometry to T in Ort((V,g0),(W,h0)); with `oriented` and
/// square dimensions, restricted to the orientation-preserving class SO.
/// Whiten, solve the Euclidean Procrustes problem by SVD (determinant sign
/// correction in the oriented case), unwhiten.  Ties (e.g. reflective
/// inputs) resolve to the SVD-canonical representative.
inline NearestIsometryResult nearest_isometry(const LinearMapSample& t, bool oriented = false) {
  const int s = t.src_dim(), n = t.tgt_dim();
  if (s > n) throw std::invalid_argument("nearest_isometry: no isometries exist for src_dim > tgt_dim");
  if (oriented && s != n)
    throw std::invalid_argument("nearest_isometry: oriented variant requires square maps");

  const Mat w = t.whitened();
  Eigen::JacobiSVD<Mat> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU().leftCols(s);
  const Mat v = svd.matrixV();
  Mat r = u * v.transpose();
  if (oriented && r.determinant() < 0.0) {
    Mat flip = Mat::Identity(s, s);
    flip(s - 1, s - 1) = -1.0;
    r = u * flip * v.transpose();
  }
  const double dist = (w - r).norm();
  Mat coeff = t.tgt_metric.inv_sqrt() * r * t.src_metric.sqrt();
  return {LinearMapSample(std::move(coeff), t.src_metric, t.tgt_metric), dist};
}

/// dist_{g0,h0}(T, Ort) (or SO when oriented); the minimum of the Procrustes fit.
inline double isometry_distance(const LinearMapSample& t, bool oriented = false) {
  return nearest_isometry(t, oriented).dist;
}

}  // namespace codim1
