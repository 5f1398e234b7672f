#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace codim1 {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Thrown when a scenario/config key is missing, unparsable, or unresolvable.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when the hypotheses of an estimate are violated by the inputs
// (good-set fraction too large, image escaping the chart ball, ...).
class HypothesisError : public std::runtime_error {
 public:
  explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec random_vec(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

inline Mat random_mat(Rng& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

// Symmetric PSD square root via the spectral decomposition.
inline Mat spd_sqrt(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("spd_sqrt: eigensolver failed");
  Vec d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) {
    if (d[i] <= 0.0) throw std::invalid_argument("spd_sqrt: matrix is not positive definite");
    d[i] = std::sqrt(d[i]);
  }
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// Gram-Schmidt against the inner product (a, b) -> a^T H b.  Columns of
// `basis` are orthonormalized in order; near-dependent columns are dropped.
inline Mat gram_schmidt(const Mat& basis, const Mat& inner, double drop_tol = 1e-12) {
  const int n = basis.rows();
  Mat out(n, basis.cols());
  int kept = 0;
  for (int j = 0; j < basis.cols(); ++j) {
    Vec v = basis.col(j);
    for (int i = 0; i < kept; ++i) v -= (out.col(i).dot(inner * v)) * out.col(i);
    const double nv = std::sqrt(v.dot(inner * v));
    if (nv > drop_tol) out.col(kept++) = v / nv;
  }
  out.conservativeResize(n, kept);
  return out;
}

// The vector n with det([M | v]) = (n, v) for all v; for a rank-d matrix
// M (d+1 x d) this is a Euclidean normal to the column span such that
// appending it yields a positively oriented basis.
inline Vec generalized_cross(const Mat& m) {
  const int d = static_cast<int>(m.cols());
  if (m.rows() != d + 1) throw std::invalid_argument("generalized_cross: need (d+1) x d matrix");
  Vec n(d + 1);
  Mat minor(d, d);
  for (int i = 0; i <= d; ++i) {
    int r = 0;
    for (int k = 0; k <= d; ++k) {
      if (k == i) continue;
      minor.row(r++) = m.row(k);
    }
    const double sign = ((i + d) % 2 == 0) ? 1.0 : -1.0;
    n[i] = sign * minor.determinant();
  }
  return n;
}

// Least-squares fit of log|y| = a + b log(x); returns the slope b.
inline double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_log_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_log_slope: not enough positive points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace codim1
