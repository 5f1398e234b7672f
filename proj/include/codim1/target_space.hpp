#pragma once

#include "codim1/metric_core.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <utility>

namespace codim1 {

/// Dense (d+1)^3 table of Christoffel symbols, indexed (k, i, j).
class Christoffel3 {
 public:
  explicit Christoffel3(int n) : n_(n), a_(static_cast<size_t>(n) * n * n, 0.0) {}
  double& operator()(int k, int i, int j) { return a_[(static_cast<size_t>(k) * n_ + i) * n_ + j]; }
  double operator()(int k, int i, int j) const {
    return a_[(static_cast<size_t>(k) * n_ + i) * n_ + j];
  }
  int dim() const { return n_; }
  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int n_;
  std::vector<double> a_;
};

/// A smooth metric assignment y -> h(y) on a coordinate patch, optionally
/// with closed-form Christoffel symbols (catalog entries) and with a
/// finite-difference step for metric derivatives.
class MetricField {
 public:
  using CoeffFn = std::function<Mat(const Vec&)>;
  using GammaFn = std::function<Christoffel3(const Vec&)>;
  using ContainsFn = std::function<bool(const Vec&)>;

  MetricField(int dim, CoeffFn coeff, ContainsFn contains, std::string name,
              double deriv_step = 1e-4, bool constant = false, GammaFn gamma = nullptr)
      : dim_(dim),
        coeff_(std::move(coeff)),
        contains_(std::move(contains)),
        gamma_(std::move(gamma)),
        name_(std::move(name)),
        deriv_step_(deriv_step),
        constant_(constant) {}

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  double deriv_step() const { return deriv_step_; }
  bool constant() const { return constant_; }
  bool has_closed_gamma() const { return static_cast<bool>(gamma_); }

  bool contains(const Vec& y) const {
    return y.size() == dim_ && (!contains_ || contains_(y));
  }

  Mat coeff(const Vec& y) const {
    if (!contains(y)) throw std::invalid_argument("MetricField(" + name_ + "): point outside patch");
    return coeff_(y);
  }

  /// Coefficient table without the patch check; used by finite-difference
  /// probes that may step into the patch margin.
  Mat coeff_unchecked(const Vec& y) const { return coeff_(y); }

  ConstMetric metric(const Vec& y) const { return ConstMetric(coeff(y)); }

  Christoffel3 closed_gamma(const Vec& y) const {
    if (!gamma_) throw std::logic_error("MetricField(" + name_ + "): no closed-form Christoffel symbols");
    return gamma_(y);
  }

  /// Norm of a tangent coefficient vector at y.
  double norm(const Vec& y, const Vec& v) const {
    return std::sqrt(std::max(0.0, v.dot(coeff(y) * v)));
  }

  // ---- catalog ----

  static MetricField flat(int dim, Mat entries = Mat()) {
    if (entries.size() == 0) entries = Mat::Identity(dim, dim);
    ConstMetric check(entries);  // validates SPD
    Mat h = check.entries();
    return MetricField(
        dim, [h](const Vec&) { return h; }, nullptr, "flat", 1e-4, true,
        [dim](const Vec&) { return Christoffel3(dim); });
  }

  /// Round sphere of the given radius in conformal (stereographic)
  /// coordinates: h = psi^2 I with psi = 1 / (1 + |y|^2 / (4 rho^2)).
  static MetricField sphere_stereographic(int dim, double radius, double patch_radius = 0.0) {
    if (radius <= 0.0) throw std::invalid_argument("sphere_stereographic: radius must be positive");
    if (patch_radius <= 0.0) patch_radius = 6.0 * radius;
    const double rho = radius, pr = patch_radius;
    auto coeff = [dim, rho](const Vec& y) {
      const double psi = 1.0 / (1.0 + y.squaredNorm() / (4.0 * rho * rho));
      return Mat(psi * psi * Mat::Identity(dim, dim));
    };
    auto gamma = [dim, rho](const Vec& y) {
      // conformal metric e^{2f} I: Gamma^k_ij = d_ik f_j + d_jk f_i - d_ij f_k
      const double psi = 1.0 / (1.0 + y.squaredNorm() / (4.0 * rho * rho));
      Vec f(dim);
      for (int i = 0; i < dim; ++i) f[i] = -psi * y[i] / (2.0 * rho * rho);
      Christoffel3 g(dim);
      for (int k = 0; k < dim; ++k)
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            double v = 0.0;
            if (i == k) v += f[j];
            if (j == k) v += f[i];
            if (i == j) v -= f[k];
            g(k, i, j) = v;
          }
      return g;
    };
    auto contains = [pr](const Vec& y) { return y.norm() < pr; };
    return MetricField(dim, coeff, contains, "sphere-stereographic", 1e-4, false, gamma);
  }

  /// Polar patch of the round 2-sphere: coordinates (phi, lambda),
  /// h = diag(rho^2, rho^2 sin^2 phi), phi bounded away from the poles.
  static MetricField sphere_polar(double radius, double phi_lo = 0.15, double phi_hi = M_PI - 0.15) {
    if (radius <= 0.0) throw std::invalid_argument("sphere_polar: radius must be positive");
    const double rho = radius;
    auto coeff = [rho](const Vec& y) {
      Mat h = Mat::Zero(2, 2);
      const double s = std::sin(y[0]);
      h(0, 0) = rho * rho;
      h(1, 1) = rho * rho * s * s;
      return h;
    };
    auto gamma = [](const Vec& y) {
      Christoffel3 g(2);
      const double s = std::sin(y[0]), c = std::cos(y[0]);
      g(0, 1, 1) = -s * c;
      g(1, 0, 1) = g(1, 1, 0) = c / s;
      return g;
    };
    auto contains = [phi_lo, phi_hi](const Vec& y) {
      return y[0] > phi_lo && y[0] < phi_hi && std::abs(y[1]) < 8.0 * M_PI;
    };
    return MetricField(2, coeff, contains, "sphere-polar", 1e-4, false, gamma);
  }

  /// Warped product R x_w R^{n-1} with w(t) = cosh(a t): a complete,
  /// non-compact catalog target (the hyperbolic plane for n = 2).
  static MetricField hyperbolic_fermi(int dim, double a = 1.0, double box = 3.0) {
    if (a <= 0.0) throw std::invalid_argument("hyperbolic_fermi: scale must be positive");
    auto coeff = [dim, a](const Vec& y) {
      const double w = std::cosh(a * y[0]);
      Mat h = Mat::Identity(dim, dim);
      for (int j = 1; j < dim; ++j) h(j, j) = w * w;
      return h;
    };
    auto gamma = [dim, a](const Vec& y) {
      Christoffel3 g(dim);
      const double w = std::cosh(a * y[0]), dw = a * std::sinh(a * y[0]);
      for (int j = 1; j < dim; ++j) {
        g(0, j, j) = -w * dw;
        g(j, 0, j) = g(j, j, 0) = dw / w;
      }
      return g;
    };
    auto contains = [box](const Vec& y) { return y.cwiseAbs().maxCoeff() < box; };
    return MetricField(dim, coeff, contains, "hyperbolic-fermi", 1e-4, false, gamma);
  }

 private:
  int dim_;
  CoeffFn coeff_;
  ContainsFn contains_;
  GammaFn gamma_;
  std::string name_;
  double deriv_step_;
  bool constant_;
};

/// Christoffel symbols from central differences of the metric coefficients.
inline Christoffel3 christoffel_fd(const MetricField& field, const Vec& y) {
  if (!field.contains(y)) throw std::invalid_argument("christoffel_fd: point outside patch");
  const int n = field.dim();
  const double step = field.deriv_step();
  std::vector<Mat> dh(n);
  for (int i = 0; i < n; ++i) {
    Vec yp = y, ym = y;
    yp[i] += step;
    ym[i] -= step;
    dh[i] = (field.coeff_unchecked(yp) - field.coeff_unchecked(ym)) / (2.0 * step);
  }
  const Mat hinv = field.coeff_unchecked(y).inverse();
  Christoffel3 g(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += hinv(k, l) * (dh[i](j, l) + dh[j](i, l) - dh[l](i, j));
        g(k, i, j) = 0.5 * v;
      }
  return g;
}

/// Levi-Civita symbols at y: closed form for catalog metrics, central
/// differences otherwise.
inline Christoffel3 christoffel(const MetricField& field, const Vec& y) {
  if (!field.contains(y)) throw std::invalid_argument("christoffel: point outside patch");
  if (field.has_closed_gamma()) return field.closed_gamma(y);
  return christoffel_fd(field, y);
}

/// A metric field packaged with its Christoffel evaluation strategy.
class ChristoffelField {
 public:
  explicit ChristoffelField(MetricField field, bool prefer_closed_form = true)
      : field_(std::move(field)), prefer_closed_(prefer_closed_form) {}

  const MetricField& field() const { return field_; }

  Christoffel3 at(const Vec& y) const {
    if (prefer_closed_ && field_.has_closed_gamma()) return field_.closed_gamma(y);
    return christoffel_fd(field_, y);
  }

 private:
  MetricField field_;
  bool prefer_closed_;
};

/// Connector operator in coordinates: the coefficient vector of K(xi) for
/// xi = (y, w, Y, W), with K_k = W_k + sum_{i,j} w_j Y_i Gamma^k_{ij}(y).
inline Vec connector(const ChristoffelField& gf, const Vec& y, const Vec& w, const Vec& Y,
                     const Vec& W) {
  const int n = gf.field().dim();
  if (!gf.field().contains(y)) throw std::invalid_argument("connector: base point outside patch");
  const Christoffel3 g = gf.at(y);
  Vec k = W;
  for (int kk = 0; kk < n; ++kk) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += w[j] * Y[i] * g(kk, i, j);
    k[kk] += acc;
  }
  return k;
}

/// A diffeomorphism phi on a ball U of the patch, with differential,
/// inverse, and the pushed-forward metric on phi(U).
class Chart {
 public:
  using MapFn = std::function<Vec(const Vec&)>;
  using DiffFn = std::function<Mat(const Vec&)>;

  Chart(MetricField target, MapFn forward, MapFn inverse, DiffFn dforward, Vec patch_center,
        double patch_radius, double image_radius, std::string name)
      : target_(std::move(target)),
        forward_(std::move(forward)),
        inverse_(std::move(inverse)),
        dforward_(std::move(dforward)),
        patch_center_(std::move(patch_center)),
        patch_radius_(patch_radius),
        image_radius_(image_radius),
        name_(std::move(name)) {}

  const MetricField& target() const { return target_; }
  const std::string& name() const { return name_; }
  double image_radius() const { return image_radius_; }
  double patch_radius() const { return patch_radius_; }
  const Vec& patch_center() const { return patch_center_; }

  bool in_patch(const Vec& q) const {
    return (q - patch_center_).norm() < patch_radius_ && target_.contains(q);
  }

  Vec apply(const Vec& q) const { return forward_(q); }
  Vec invert(const Vec& y) const { return inverse_(y); }
  Mat differential(const Vec& q) const { return dforward_(q); }

  bool centered(double tol = 1e-9) const { return forward_(patch_center_).norm() <= tol; }

  /// Metric of the target expressed in chart coordinates on phi(U).
  MetricField pushforward_metric() const {
    Chart copy = *this;
    auto coeff = [copy](const Vec& y) {
      const Vec q = copy.invert(y);
      const Mat a = copy.differential(q).inverse();
      return Mat(a.transpose() * copy.target().coeff_unchecked(q) * a);
    };
    const double ir = image_radius_;
    auto contains = [ir](const Vec& y) { return y.norm() < ir; };
    const bool constant = target_.constant() && affine_;
    return MetricField(target_.dim(), coeff, contains, "pushforward(" + name_ + ")",
                       target_.deriv_step(), constant);
  }

  /// Affine chart phi(q) = A (q - center); the identity chart when A = I.
  static Chart affine(const MetricField& target, const Vec& center, double patch_radius,
                      Mat a = Mat()) {
    const int n = target.dim();
    if (a.size() == 0) a = Mat::Identity(n, n);
    const Mat ainv = a.inverse();
    Vec c = center;
    auto fwd = [a, c](const Vec& q) { return Vec(a * (q - c)); };
    auto inv = [ainv, c](const Vec& y) { return Vec(c + ainv * y); };
    auto diff = [a](const Vec&) { return a; };
    // smallest singular value controls how far the image ball reaches
    Eigen::JacobiSVD<Mat> svd(a);
    const double image_radius = 0.999 * patch_radius * svd.singularValues().minCoeff();
    Chart chart(target, fwd, inv, diff, c, patch_radius, image_radius, "affine");
    chart.affine_ = true;
    return chart;
  }

 private:
  MetricField target_;
  MapFn forward_, inverse_;
  DiffFn dforward_;
  Vec patch_center_;
  double patch_radius_, image_radius_;
  std::string name_;
  bool affine_ = false;
};

/// Smallest epsilon for which the chart is epsilon-isometric on the given
/// chart-coordinate samples: eigenvalues of the pushforward metric within
/// [(1+eps)^{-1}, 1+eps] and all Christoffel symbols bounded by eps.
inline double epsilon_isometric_check(const Chart& chart, const std::vector<Vec>& samples) {
  if (samples.empty()) throw std::invalid_argument("epsilon_isometric_check: empty sample set");
  const MetricField push = chart.pushforward_metric();
  double eps = 0.0;
  for (const Vec& y : samples) {
    Eigen::SelfAdjointEigenSolver<Mat> es(push.coeff(y));
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0) throw std::invalid_argument("epsilon_isometric_check: degenerate pushforward metric");
    eps = std::max({eps, hi - 1.0, 1.0 / lo - 1.0});
    eps = std::max(eps, christoffel_fd(push, y).max_abs());
  }
  return eps;
}

// ---- geodesic shooting (used by normal coordinates; re-exported by transport) ----

namespace detail {

struct GeodesicState {
  Vec y, p;
};

inline GeodesicState geodesic_rhs(const ChristoffelField& gf, const GeodesicState& s) {
  const int n = s.y.size();
  const Christoffel3 g = gf.at(s.y);
  Vec dp = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += g(k, i, j) * s.p[i] * s.p[j];
    dp[k] = -acc;
  }
  return {s.p, dp};
}

}  // namespace detail

/// Endpoint of the geodesic with initial point q and initial velocity v,
/// integrated to time 1 by classical RK4 with the given number of steps.
/// Throws if the geodesic leaves the patch.
inline Vec geodesic_shoot(const ChristoffelField& gf, const Vec& q, const Vec& v, int steps = 64) {
  detail::GeodesicState s{q, v};
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    if (!gf.field().contains(s.y)) {
      std::ostringstream oss;
      oss << "geodesic_shoot: geodesic leaves patch (direction";
      for (int k = 0; k < v.size(); ++k) oss << ' ' << v[k];
      oss << ")";
      throw std::invalid_argument(oss.str());
    }
    auto k1 = detail::geodesic_rhs(gf, s);
    auto k2 = detail::geodesic_rhs(gf, {s.y + 0.5 * dt * k1.y, s.p + 0.5 * dt * k1.p});
    auto k3 = detail::geodesic_rhs(gf, {s.y + 0.5 * dt * k2.y, s.p + 0.5 * dt * k2.p});
    auto k4 = detail::geodesic_rhs(gf, {s.y + dt * k3.y, s.p + dt * k3.p});
    s.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    s.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  }
  if (!gf.field().contains(s.y)) throw std::invalid_argument("geodesic_shoot: endpoint outside patch");
  return s.y;
}

/// Normal-coordinate chart at q: the inverse is exp_q along an
/// h-orthonormal frame, so the pushforward metric at 0 is Euclidean.
inline Chart normal_coordinates(const MetricField& field, const Vec& q, double radius) {
  if (!field.contains(q)) throw std::invalid_argument("normal_coordinates: center outside patch");
  const int n = field.dim();
  const Mat frame = gram_schmidt(Mat::Identity(n, n), field.coeff(q));
  if (frame.cols() != n) throw std::runtime_error("normal_coordinates: frame construction failed");
  ChristoffelField gf(field);

  // fixed RK4 step count: doubled until endpoints move by < 1e-9
  int steps = 16;
  {
    const Vec probe = radius * frame.col(0);
    while (steps < 1024) {
      const Vec a = geodesic_shoot(gf, q, probe, steps);
      const Vec b = geodesic_shoot(gf, q, probe, 2 * steps);
      if ((a - b).norm() < 1e-9) break;
      steps *= 2;
    }
  }

  auto inv = [gf, q, frame, steps](const Vec& y) {
    return geodesic_shoot(gf, q, Vec(frame * y), steps);
  };

  // Newton inversion of the exponential map
  const Mat frame_dual = (field.coeff(q) * frame).transpose();  // coefficients in the frame
  auto fwd = [gf, q, frame, frame_dual, steps, radius](const Vec& x) {
    Vec y = frame_dual * (x - q);
    const double fd = std::max(1e-7, 1e-6 * radius);
    for (int it = 0; it < 60; ++it) {
      const Vec res = geodesic_shoot(gf, q, Vec(frame * y), steps) - x;
      if (res.norm() < 1e-12 + 1e-11 * radius) return y;
      Mat jac(y.size(), y.size());
      for (int j = 0; j < y.size(); ++j) {
        Vec yp = y, ym = y;
        yp[j] += fd;
        ym[j] -= fd;
        jac.col(j) = (geodesic_shoot(gf, q, Vec(frame * yp), steps) -
                      geodesic_shoot(gf, q, Vec(frame * ym), steps)) /
                     (2.0 * fd);
      }
      y -= jac.partialPivLu().solve(res);
    }
    throw std::runtime_error("normal_coordinates: Newton inversion did not converge");
  };

  auto dinv_at = [gf, q, frame, steps, radius](const Vec& y) {
    const double fd = std::max(1e-7, 1e-6 * radius);
    Mat jac(y.size(), y.size());
    for (int j = 0; j < y.size(); ++j) {
      Vec yp = y, ym = y;
      yp[j] += fd;
      ym[j] -= fd;
      jac.col(j) = (geodesic_shoot(gf, q, Vec(frame * yp), steps) -
                    geodesic_shoot(gf, q, Vec(frame * ym), steps)) /
                   (2.0 * fd);
    }
    return jac;
  };
  auto diff = [fwd, dinv_at](const Vec& x) { return Mat(dinv_at(fwd(x)).inverse()); };

  // patch reach: sample coordinate directions at the boundary sphere
  double reach = 0.0;
  for (int i = 0; i < n; ++i) {
    for (double sgn : {-1.0, 1.0}) {
      Vec dir = Vec::Zero(n);
      dir[i] = sgn * radius * 1.02;
      reach = std::max(reach, (inv(dir) - q).norm());
    }
  }
  return Chart(field, fwd, inv, diff, q, 1.3 * reach + 1e-12, radius, "normal-coordinates");
}

/// Smooth radial cutoff theta(y) = psi(|y|) y with theta = id on B(0,1)
/// and theta = 0 outside B(0,2); sup norms of theta, Dtheta and the
/// componentwise Hessians are sampled once at construction.
class CutoffProfile {
 public:
  explicit CutoffProfile(int dim) : dim_(dim) {
    Vec u = Vec::Zero(dim);
    u[0] = 1.0;
    if (dim > 1) {
      u[dim - 1] = 0.7;
      u.normalize();
    }
    double st = 0.0, sd = 0.0, sh = 0.0;
    for (int i = 0; i <= 2200; ++i) {
      const double s = 2.2 * i / 2200.0;
      const Vec y = s * u;
      st = std::max(st, theta(y).norm());
      sd = std::max(sd, dtheta(y).cwiseAbs().maxCoeff());
      for (int k = 0; k < dim; ++k) sh = std::max(sh, hessian(k, y).norm());
    }
    sup_theta_ = st;
    sup_dtheta_ = sd;
    sup_hessian_ = sh;
  }

  int dim() const { return dim_; }
  double sup_theta() const { return sup_theta_; }
  double sup_dtheta() const { return sup_dtheta_; }
  double sup_hessian() const { return sup_hessian_; }

  static double psi(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    return smoothstep(2.0 - s);
  }

  static double dpsi(double s) {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    return -dsmoothstep(2.0 - s);
  }

  Vec theta(const Vec& y) const {
    const double s = y.norm();
    return psi(s) * y;
  }

  Mat dtheta(const Vec& y) const {
    const double s = y.norm();
    if (s <= 1.0) return Mat::Identity(dim_, dim_);
    if (s >= 2.0) return Mat::Zero(dim_, dim_);
    return Mat(psi(s) * Mat::Identity(dim_, dim_) + (dpsi(s) / s) * y * y.transpose());
  }

  /// Hessian of the k-th component, by central differences of Dtheta.
  Mat hessian(int k, const Vec& y) const {
    const double fd = 1e-5;
    Mat h(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
      Vec yp = y, ym = y;
      yp[j] += fd;
      ym[j] -= fd;
      h.col(j) = (dtheta(yp).row(k) - dtheta(ym).row(k)).transpose() / (2.0 * fd);
    }
    return Mat(0.5 * (h + h.transpose()));
  }

 private:
  static double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
  static double dbump(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }
  static double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double f = bump(t), g = bump(1.0 - t);
    return f / (f + g);
  }
  static double dsmoothstep(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double f = bump(t), g = bump(1.0 - t);
    const double df = dbump(t), dg = -dbump(1.0 - t);
    return (df * g - f * dg) / ((f + g) * (f + g));
  }

  int dim_;
  double sup_theta_ = 0.0, sup_dtheta_ = 0.0, sup_hessian_ = 0.0;
};

/// The cutoff extension phi^{(r)}(x) = r theta(phi(x)/r) of a centered
/// chart: equal to phi on phi^{-1}(B(0,r)), identically 0 outside U.
class ExtendedChart {
 public:
  ExtendedChart(Chart base, CutoffProfile profile, double r)
      : base_(std::move(base)), profile_(std::move(profile)), r_(r) {
    if (r <= 0.0) throw std::invalid_argument("ExtendedChart: r must be positive");
    if (!base_.centered(1e-8)) throw std::invalid_argument("ExtendedChart: chart is not centered");
    if (profile_.dim() != base_.target().dim())
      throw std::invalid_argument("ExtendedChart: profile dimension mismatch");
    if (2.0 * r > base_.image_radius())
      throw std::invalid_argument("ExtendedChart: B(0, 2r) not contained in phi(U)");
  }

  const Chart& base() const { return base_; }
  const CutoffProfile& profile() const { return profile_; }
  double r() const { return r_; }

  bool in_support(const Vec& x) const { return base_.in_patch(x); }
  bool in_core(const Vec& x) const {
    return base_.in_patch(x) && base_.apply(x).norm() < r_;
  }

  Vec value(const Vec& x) const {
    if (!base_.in_patch(x)) return Vec::Zero(profile_.dim());
    const Vec y = base_.apply(x);
    return r_ * profile_.theta(y / r_);
  }

  Mat differential(const Vec& x) const {
    const int n = profile_.dim();
    if (!base_.in_patch(x)) return Mat::Zero(n, n);
    const Vec y = base_.apply(x);
    return profile_.dtheta(y / r_) * base_.differential(x);
  }

  /// Connector of the second differential of theta^{(r)} at (y, w, Y, W):
  /// k-component Dtheta_k(y/r) W + (1/r) (Htheta_k(y/r) w, Y).
  Vec theta_connector(const Vec& y, const Vec& w, const Vec& Y, const Vec& W) const {
    const int n = profile_.dim();
    const Vec z = y / r_;
    const Mat dt = profile_.dtheta(z);
    Vec out(n);
    for (int k = 0; k < n; ++k)
      out[k] = dt.row(k).dot(W) + (profile_.hessian(k, z) * w).dot(Y) / r_;
    return out;
  }

 private:
  Chart base_;
  CutoffProfile profile_;
  double r_;
};

inline ExtendedChart extend_chart(const Chart& chart, const CutoffProfile& profile, double r) {
  return ExtendedChart(chart, profile, r);
}

/// Connector of the flat target applied to the second differential of the
/// chart: K(d^2 phi (xi))_k = (Hphi_k(q) Y, w) + (Dphi(q) W)_k, with the
/// chart Hessians taken by finite differences of the differential.
inline Vec chart_second_differential_connector(const Chart& chart, const Vec& q, const Vec& w,
                                               const Vec& Y, const Vec& W, double fd = 1e-5) {
  const int n = chart.target().dim();
  const Vec base = chart.differential(q) * W;
  Vec out = base;
  for (int j = 0; j < n; ++j) {
    Vec qp = q, qm = q;
    qp[j] += fd;
    qm[j] -= fd;
    const Mat dd = (chart.differential(qp) - chart.differential(qm)) / (2.0 * fd);
    // dd(k, i) = d_j d_i phi_k
    for (int k = 0; k < n; ++k) out[k] += Y[j] * dd.row(k).dot(w);
  }
  return out;
}

}  // namespace codim1
