#pragma once

#include "codim1/transport.hpp"

#include <memory>
#include <numeric>

namespace codim1 {

/// Uniform node grid on the cube Q = [0, side]^d carrying the source
/// metric g and its comparability bound lambda with the Euclidean metric.
/// Per-node metric data is cached once and shared between copies.
class GridDomain {
 public:
  GridDomain(int d, double side, int nodes_per_side, MetricField g)
      : d_(d), side_(side), m_(nodes_per_side), cache_(std::make_shared<Cache>(std::move(g))) {
    if (d < 1 || d > 3) throw std::invalid_argument("GridDomain: d must be 1, 2 or 3");
    if (side <= 0.0) throw std::invalid_argument("GridDomain: side must be positive");
    if (m_ < 3) throw std::invalid_argument("GridDomain: need >= 3 nodes per side");
    if (cache_->g.dim() != d) throw std::invalid_argument("GridDomain: metric dimension mismatch");
    count_ = 1;
    for (int i = 0; i < d; ++i) count_ *= m_;
    cache_->metrics.reserve(count_);
    cache_->sqrt_det.reserve(count_);
    double lambda = 1.0;
    for (int i = 0; i < count_; ++i) {
      const ConstMetric gm(cache_->g.coeff(node(i)));
      lambda = std::max(lambda, gm.lambda_bound());
      cache_->sqrt_det.push_back(std::sqrt(gm.entries().determinant()));
      cache_->metrics.push_back(gm);
    }
    cache_->lambda = lambda;
  }

  static GridDomain euclidean(int d, double side, int nodes_per_side) {
    return GridDomain(d, side, nodes_per_side, MetricField::flat(d));
  }

  int d() const { return d_; }
  double side() const { return side_; }
  int nodes_per_side() const { return m_; }
  int node_count() const { return count_; }
  double spacing() const { return side_ / (m_ - 1); }
  double volume() const { return std::pow(side_, d_); }
  double diameter() const { return side_ * std::sqrt(static_cast<double>(d_)); }
  const MetricField& metric_field() const { return cache_->g; }
  double lambda() const { return cache_->lambda; }

  std::array<int, 3> multi_index(int flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < d_; ++a) {
      idx[a] = flat % m_;
      flat /= m_;
    }
    return idx;
  }

  int flat_index(const std::array<int, 3>& idx) const {
    int f = 0;
    for (int a = d_ - 1; a >= 0; --a) f = f * m_ + idx[a];
    return f;
  }

  Vec node(int flat) const {
    const auto idx = multi_index(flat);
    Vec x(d_);
    for (int a = 0; a < d_; ++a) x[a] = idx[a] * spacing();
    return x;
  }

  const ConstMetric& metric_at(int flat) const { return cache_->metrics[flat]; }
  double sqrt_det_g(int flat) const { return cache_->sqrt_det[flat]; }

  /// Tensor-product trapezoid weight (Lebesgue measure) of a node.
  double quad_weight(int flat) const {
    const auto idx = multi_index(flat);
    double w = std::pow(spacing(), d_);
    for (int a = 0; a < d_; ++a)
      if (idx[a] == 0 || idx[a] == m_ - 1) w *= 0.5;
    return w;
  }

  bool same_grid(const GridDomain& other) const {
    return d_ == other.d_ && m_ == other.m_ && std::abs(side_ - other.side_) < 1e-14;
  }

 private:
  struct Cache {
    explicit Cache(MetricField field) : g(std::move(field)) {}
    MetricField g;
    std::vector<ConstMetric> metrics;
    std::vector<double> sqrt_det;
    double lambda = 1.0;
  };

  int d_;
  double side_;
  int m_;
  int count_ = 0;
  std::shared_ptr<Cache> cache_;
};

/// Largest metric_distance(g(x), g(y)) over a sampled set of node pairs.
inline double metric_oscillation(const GridDomain& domain, int max_pairs = 10000,
                                 uint64_t seed = 7) {
  if (domain.metric_field().constant()) return 0.0;
  const int n = domain.node_count();
  double osc = 0.0;
  const long long all = static_cast<long long>(n) * n;
  if (all <= max_pairs) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        osc = std::max(osc, metric_distance(domain.metric_at(i), domain.metric_at(j)));
  } else {
    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < max_pairs; ++t)
      osc = std::max(osc, metric_distance(domain.metric_at(pick(rng)), domain.metric_at(pick(rng))));
  }
  return osc;
}

/// Grid samples of a map Q -> R^m with the finite-difference differential:
/// central stencils at interior nodes, second-order one-sided at the boundary.
class DiscreteMap {
 public:
  DiscreteMap(GridDomain domain, int tgt_dim, std::vector<Vec> values)
      : domain_(std::move(domain)), tgt_dim_(tgt_dim), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != domain_.node_count())
      throw std::invalid_argument("DiscreteMap: value count does not match grid");
    compute_differential();
  }

  static DiscreteMap sample(const GridDomain& domain, int tgt_dim,
                            const std::function<Vec(const Vec&)>& fn) {
    std::vector<Vec> values;
    values.reserve(domain.node_count());
    for (int i = 0; i < domain.node_count(); ++i) values.push_back(fn(domain.node(i)));
    return DiscreteMap(domain, tgt_dim, std::move(values));
  }

  const GridDomain& domain() const { return domain_; }
  int tgt_dim() const { return tgt_dim_; }
  const Vec& value(int i) const { return values_[i]; }
  const Mat& du(int i) const { return du_[i]; }
  const std::vector<Vec>& values() const { return values_; }

 private:
  void compute_differential() {
    const int d = domain_.d(), m = domain_.nodes_per_side();
    const double h = domain_.spacing();
    du_.assign(values_.size(), Mat::Zero(tgt_dim_, d));
    for (int i = 0; i < domain_.node_count(); ++i) {
      auto idx = domain_.multi_index(i);
      for (int a = 0; a < d; ++a) {
        auto at = [&](int off) {
          auto j = idx;
          j[a] += off;
          return values_[domain_.flat_index(j)];
        };
        Vec col;
        if (idx[a] == 0)
          col = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        else if (idx[a] == m - 1)
          col = (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
        else
          col = (at(1) - at(-1)) / (2.0 * h);
        du_[i].col(a) = col;
      }
    }
  }

  GridDomain domain_;
  int tgt_dim_;
  std::vector<Vec> values_;
  std::vector<Mat> du_;
};

/// Discrete codimension-1 immersion: grid samples of u: Q -> (N, h) with
/// the derived differential, oriented h-unit normal field and connector
/// data.  Nodes whose whitened differential has a singular value below the
/// rank threshold are flagged degenerate and carry nu = 0.
class DiscreteImmersion {
 public:
  static constexpr double kRankTol = 1e-8;

  DiscreteImmersion(DiscreteMap base, MetricField target)
      : map_(std::move(base)), target_(std::move(target)), gamma_(target_) {
    if (map_.tgt_dim() != map_.domain().d() + 1)
      throw std::invalid_argument("DiscreteImmersion: target dimension must be d + 1");
    if (target_.dim() != map_.tgt_dim())
      throw std::invalid_argument("DiscreteImmersion: metric field dimension mismatch");
    compute_normals();
    compute_normal_derivative();
  }

  static DiscreteImmersion sample(const GridDomain& domain, const MetricField& target,
                                  const std::function<Vec(const Vec&)>& fn) {
    return DiscreteImmersion(DiscreteMap::sample(domain, domain.d() + 1, fn), target);
  }

  const GridDomain& domain() const { return map_.domain(); }
  const MetricField& target() const { return target_; }
  const ChristoffelField& target_gamma() const { return gamma_; }
  const DiscreteMap& base_map() const { return map_; }

  const Vec& value(int i) const { return map_.value(i); }
  const Mat& du(int i) const { return map_.du(i); }
  const Vec& normal(int i) const { return normal_[i]; }
  bool regular(int i) const { return regular_[i] != 0; }
  int degenerate_count() const { return degenerate_count_; }

  /// Differential as a metric-aware map sample: src g(x), tgt h(u(x)).
  LinearMapSample du_sample(int i) const {
    return LinearMapSample(du(i), domain().metric_at(i), ConstMetric(target_.coeff(value(i))));
  }

  /// Covariant derivative of the normal: K_{TN} composed with the
  /// finite-difference dnu, one (d+1) x d table per node.  Valid only
  /// where the node and its difference stencil are regular.
  const Mat& covariant_normal_derivative(int i) const { return knu_[i]; }
  bool covariant_valid(int i) const { return knu_valid_[i] != 0; }
  int covariant_excluded_count() const { return knu_excluded_; }

 private:
  void compute_normals() {
    const int n = domain().node_count(), dim = target_.dim();
    normal_.assign(n, Vec::Zero(dim));
    regular_.assign(n, 0);
    degenerate_count_ = 0;
    for (int i = 0; i < n; ++i) {
      const Mat& m = du(i);
      const Mat h = target_.coeff(value(i));
      const ConstMetric hm(h);
      const Mat whitened = hm.sqrt() * m * domain().metric_at(i).inv_sqrt();
      Eigen::JacobiSVD<Mat> svd(whitened);
      if (svd.singularValues().minCoeff() < kRankTol) {
        ++degenerate_count_;
        continue;
      }
      Vec nu = generalized_cross(m);
      const Mat basis = gram_schmidt(m, h);
      for (int j = 0; j < basis.cols(); ++j) nu -= basis.col(j).dot(h * nu) * basis.col(j);
      const double nn = std::sqrt(std::max(0.0, nu.dot(h * nu)));
      if (nn < 1e-14) {
        ++degenerate_count_;
        continue;
      }
      nu /= nn;
      Mat frame(dim, dim);
      frame.leftCols(domain().d()) = m;
      frame.col(dim - 1) = nu;
      if (frame.determinant() < 0.0) nu = -nu;
      normal_[i] = nu;
      regular_[i] = 1;
    }
  }

  void compute_normal_derivative() {
    const int d = domain().d(), m = domain().nodes_per_side();
    const int n = domain().node_count(), dim = target_.dim();
    const double h = domain().spacing();
    knu_.assign(n, Mat::Zero(dim, d));
    knu_valid_.assign(n, 0);
    knu_excluded_ = 0;
    for (int i = 0; i < n; ++i) {
      auto idx = domain().multi_index(i);
      bool ok = regular(i);
      Mat dnu = Mat::Zero(dim, d);
      for (int a = 0; a < d && ok; ++a) {
        auto at = [&](int off) -> int {
          auto j = idx;
          j[a] += off;
          return domain().flat_index(j);
        };
        int s0, s1, s2;
        double c0, c1, c2;
        if (idx[a] == 0) {
          s0 = at(0), s1 = at(1), s2 = at(2);
          c0 = -3.0, c1 = 4.0, c2 = -1.0;
        } else if (idx[a] == m - 1) {
          s0 = at(0), s1 = at(-1), s2 = at(-2);
          c0 = 3.0, c1 = -4.0, c2 = 1.0;
        } else {
          s0 = at(1), s1 = at(-1), s2 = i;
          c0 = 1.0, c1 = -1.0, c2 = 0.0;
        }
        if (!regular(s0) || !regular(s1) || !regular(s2)) {
          ok = false;
          break;
        }
        dnu.col(a) =
            (c0 * normal_[s0] + c1 * normal_[s1] + c2 * normal_[s2]) / (2.0 * h);
      }
      if (!ok) {
        ++knu_excluded_;
        continue;
      }
      // assemble xi = (u(x), nu(x), du column, dnu column) per direction
      for (int a = 0; a < d; ++a)
        knu_[i].col(a) = connector(gamma_, value(i), normal_[i], du(i).col(a), dnu.col(a));
      knu_valid_[i] = 1;
    }
  }

  DiscreteMap map_;
  MetricField target_;
  ChristoffelField gamma_;
  std::vector<Vec> normal_;
  std::vector<char> regular_;
  std::vector<Mat> knu_;
  std::vector<char> knu_valid_;
  int degenerate_count_ = 0;
  int knu_excluded_ = 0;
};

/// Per-node d x d linear maps on the source tangent space.
struct ShapeField {
  std::vector<Mat> op;
  std::vector<char> valid;
  std::vector<double> residual;

  static ShapeField zero(const GridDomain& domain) {
    ShapeField s;
    s.op.assign(domain.node_count(), Mat::Zero(domain.d(), domain.d()));
    s.valid.assign(domain.node_count(), 1);
    s.residual.assign(domain.node_count(), 0.0);
    return s;
  }
};

/// Induced shape operator: per regular node the least-squares solution of
/// du . S = K . dnu in the target metric, with the solve residual recorded.
inline ShapeField induced_shape_operator(const DiscreteImmersion& u) {
  const GridDomain& dom = u.domain();
  const int n = dom.node_count(), d = dom.d();
  ShapeField s;
  s.op.assign(n, Mat::Zero(d, d));
  s.valid.assign(n, 0);
  s.residual.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!u.covariant_valid(i)) continue;
    const Mat& j = u.du(i);
    const Mat h = u.target().coeff(u.value(i));
    const Mat a = j.transpose() * h * j;
    const Mat rhs = j.transpose() * h * u.covariant_normal_derivative(i);
    s.op[i] = a.ldlt().solve(rhs);
    const Mat r = j * s.op[i] - u.covariant_normal_derivative(i);
    s.residual[i] = frobenius_norm(LinearMapSample(r, dom.metric_at(i), ConstMetric(h)));
    s.valid[i] = 1;
  }
  return s;
}

/// Reference shape operator from a symmetric 2-tensor field b:
/// S(x) = G(x)^{-1} B(x).
inline ShapeField reference_shape_operator(const GridDomain& domain,
                                           const std::function<Mat(const Vec&)>& b) {
  ShapeField s;
  const int n = domain.node_count();
  s.op.reserve(n);
  s.valid.assign(n, 1);
  s.residual.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Mat bi = b(domain.node(i));
    if ((bi - bi.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + bi.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("reference_shape_operator: tensor not symmetric");
    s.op.push_back(domain.metric_at(i).entries().partialPivLu().solve(bi));
  }
  return s;
}

inline void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("energy: exponent p must lie in (1, inf)");
}

/// Stretching energy: quadrature of dist^p(du, Ort) against dvol_g.
/// Degenerate nodes contribute dist^p(0, Ort) = d^{p/2}.
inline double stretching_energy(const DiscreteImmersion& u, double p) {
  require_exponent(p);
  const GridDomain& dom = u.domain();
  double e = 0.0;
  for (int i = 0; i < dom.node_count(); ++i) {
    const double w = dom.quad_weight(i) * dom.sqrt_det_g(i);
    if (!u.regular(i)) {
      e += w * std::pow(static_cast<double>(dom.d()), p / 2.0);
      continue;
    }
    e += w * std::pow(isometry_distance(u.du_sample(i), /*oriented=*/false), p);
  }
  return e;
}

/// Bending energy: quadrature of |K . dnu|_{g,h}^p against dvol_g over the
/// nodes where the covariant normal derivative is defined.
inline double bending_energy(const DiscreteImmersion& u, double p) {
  require_exponent(p);
  const GridDomain& dom = u.domain();
  double e = 0.0;
  for (int i = 0; i < dom.node_count(); ++i) {
    if (!u.covariant_valid(i)) continue;
    const double w = dom.quad_weight(i) * dom.sqrt_det_g(i);
    const LinearMapSample k(u.covariant_normal_derivative(i), dom.metric_at(i),
                            ConstMetric(u.target().coeff(u.value(i))));
    e += w * std::pow(frobenius_norm(k), p);
  }
  return e;
}

/// Modified bending energy: quadrature of |du . (S_u - S)|_{g,h}^p against
/// dvol_g; nodes without a valid induced shape operator are excluded.
inline double modified_bending_energy(const DiscreteImmersion& u, const ShapeField& reference,
                                      double p) {
  require_exponent(p);
  const GridDomain& dom = u.domain();
  const ShapeField su = induced_shape_operator(u);
  double e = 0.0;
  for (int i = 0; i < dom.node_count(); ++i) {
    if (!su.valid[i] || !reference.valid[i]) continue;
    const Mat diff = u.du(i) * (su.op[i] - reference.op[i]);
    const LinearMapSample ls(diff, dom.metric_at(i), ConstMetric(u.target().coeff(u.value(i))));
    e += dom.quad_weight(i) * dom.sqrt_det_g(i) * std::pow(frobenius_norm(ls), p);
  }
  return e;
}

namespace detail {

inline double target_distance(const DiscreteImmersion& u1, const DiscreteImmersion& u2, int i) {
  const MetricField& target = u1.target();
  if (target.constant()) {
    const Vec d = u1.value(i) - u2.value(i);
    return std::sqrt(std::max(0.0, d.dot(target.coeff_unchecked(u1.value(i)) * d)));
  }
  if ((u1.value(i) - u2.value(i)).norm() < 1e-15) return 0.0;
  return geodesic_between(target, u1.value(i), u2.value(i)).dist;
}

inline void require_same_grid(const DiscreteImmersion& u1, const DiscreteImmersion& u2) {
  if (!u1.domain().same_grid(u2.domain()))
    throw std::invalid_argument("distance: immersions live on different grids");
}

}  // namespace detail

/// L^p distance (int d_h^p(u1, u2) dvol_g)^{1/p}.
inline double lp_distance(const DiscreteImmersion& u1, const DiscreteImmersion& u2, double p) {
  require_exponent(p);
  detail::require_same_grid(u1, u2);
  const GridDomain& dom = u1.domain();
  double acc = 0.0;
  for (int i = 0; i < dom.node_count(); ++i)
    acc += dom.quad_weight(i) * dom.sqrt_det_g(i) *
           std::pow(detail::target_distance(u1, u2, i), p);
  return std::pow(acc, 1.0 / p);
}

/// Sobolev distance (int d_sigma^p(du1, du2) dvol_g)^{1/p}; the pointwise
/// Sasaki distance is the certified upper bound from the candidate family
/// (exact for constant-coefficient targets).
inline double w1p_distance(const DiscreteImmersion& u1, const DiscreteImmersion& u2, double p,
                           const SasakiOptions& opt = {}) {
  require_exponent(p);
  detail::require_same_grid(u1, u2);
  const GridDomain& dom = u1.domain();
  const MetricField& target = u1.target();
  double acc = 0.0;
  for (int i = 0; i < dom.node_count(); ++i) {
    double ds;
    if (target.constant()) {
      const Mat h = target.coeff_unchecked(u1.value(i));
      const LinearMapSample diff(u1.du(i) - u2.du(i), dom.metric_at(i), ConstMetric(h));
      const Vec dq = u1.value(i) - u2.value(i);
      const double fiber = frobenius_norm(diff);
      ds = std::sqrt(fiber * fiber + dq.dot(h * dq));
    } else {
      ds = sasaki_distance_maps(target, u1.target_gamma(), u1.du_sample(i), u1.value(i),
                                u2.du_sample(i), u2.value(i), opt);
    }
    acc += dom.quad_weight(i) * dom.sqrt_det_g(i) * std::pow(ds, p);
  }
  return std::pow(acc, 1.0 / p);
}

struct PoincareReport {
  double lhs = 0.0;  // double integral of d_h^p(u(x), u(z))
  double rhs = 0.0;  // diam^p(Q) |Q| int |du|^p_{e,h}
  double ratio = 0.0;
};

/// Measures both sides of the cube Poincare inequality; the ratio is the
/// empirical constant.  The double integral runs over all node pairs when
/// affordable and over a seeded sample otherwise.
inline PoincareReport poincare_check(const DiscreteImmersion& u, double p,
                                     long long max_pairs = 4000000, uint64_t seed = 11) {
  require_exponent(p);
  const GridDomain& dom = u.domain();
  const int n = dom.node_count();
  PoincareReport rep;

  const long long all = static_cast<long long>(n) * n;
  double lhs = 0.0;
  if (all <= max_pairs) {
    for (int i = 0; i < n; ++i) {
      const double wi = dom.quad_weight(i);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double dh;
        if (u.target().constant()) {
          const Vec d = u.value(i) - u.value(j);
          dh = std::sqrt(std::max(0.0, d.dot(u.target().coeff_unchecked(u.value(i)) * d)));
        } else {
          dh = geodesic_between(u.target(), u.value(i), u.value(j)).dist;
        }
        lhs += wi * dom.quad_weight(j) * std::pow(dh, p);
      }
    }
  } else {
    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int samples = static_cast<int>(max_pairs / 4);
    double acc = 0.0;
    for (int t = 0; t < samples; ++t) {
      const int i = pick(rng), j = pick(rng);
      if (i == j) continue;
      const Vec d = u.value(i) - u.value(j);
      const double dh = u.target().constant()
                            ? std::sqrt(std::max(0.0, d.dot(u.target().coeff_unchecked(u.value(i)) * d)))
                            : geodesic_between(u.target(), u.value(i), u.value(j)).dist;
      acc += std::pow(dh, p);
    }
    lhs = acc / samples * dom.volume() * dom.volume();
  }
  rep.lhs = lhs;

  double grad = 0.0;
  for (int i = 0; i < n; ++i) {
    const LinearMapSample s(u.du(i), ConstMetric::euclidean(dom.d()),
                            ConstMetric(u.target().coeff(u.value(i))));
    grad += dom.quad_weight(i) * std::pow(frobenius_norm(s), p);
  }
  rep.rhs = std::pow(dom.diameter(), p) * dom.volume() * grad;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace codim1
