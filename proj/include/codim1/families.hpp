#pragma once

#include "codim1/immersions.hpp"

#include <map>

namespace codim1 {

/// A named immersion generator with closed-form value and (when available)
/// closed-form differential for test oracles.  `k` is the sequence index
/// of convergence families.
struct ImmersionFamily {
  std::string name;
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> dvalue;  // may be empty
};

using ParamMap = std::map<std::string, double>;

inline double param_or(const ParamMap& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace detail {

inline Vec embed_flat(const Vec& x, int tgt) {
  Vec u = Vec::Zero(tgt);
  u.head(x.size()) = x;
  return u;
}

inline Mat rotation_from_angles(int n, double a01, double a12) {
  Mat r = Mat::Identity(n, n);
  auto givens = [n](int i, int j, double a) {
    Mat g = Mat::Identity(n, n);
    g(i, i) = std::cos(a);
    g(j, j) = std::cos(a);
    g(i, j) = -std::sin(a);
    g(j, i) = std::sin(a);
    return g;
  };
  if (n >= 2) r = givens(0, 1, a01) * r;
  if (n >= 3) r = givens(1, 2, a12) * r;
  return r;
}

// fixed smooth perturbation field for the convergence families
inline Vec perturbation(const Vec& x, double side, int tgt) {
  const double s = M_PI / side;
  Vec psi = Vec::Zero(tgt);
  double prod = 1.0;
  for (int i = 0; i < x.size(); ++i) prod *= std::sin(s * x[i]);
  psi[0] = 0.30 * prod;
  if (tgt > 1) psi[1] = 0.15 * std::sin(2.0 * s * x[0]);
  if (tgt > 2) psi[2] = 0.20 * std::cos(s * x[x.size() - 1]) * std::sin(s * x[0]);
  return psi;
}

inline Mat dperturbation(const Vec& x, double side, int tgt) {
  const double s = M_PI / side;
  const int d = static_cast<int>(x.size());
  Mat dpsi = Mat::Zero(tgt, d);
  for (int a = 0; a < d; ++a) {
    double prod = 0.30;
    for (int i = 0; i < d; ++i)
      prod *= (i == a) ? s * std::cos(s * x[i]) : std::sin(s * x[i]);
    dpsi(0, a) = prod;
  }
  if (tgt > 1) dpsi(1, 0) = 0.15 * 2.0 * s * std::cos(2.0 * s * x[0]);
  if (tgt > 2) {
    dpsi(2, d - 1) += -0.20 * s * std::sin(s * x[d - 1]) * std::sin(s * x[0]);
    dpsi(2, 0) += 0.20 * std::cos(s * x[d - 1]) * s * std::cos(s * x[0]);
  }
  return dpsi;
}

}  // namespace detail

/// Resolve a family by name.  Known families: flat-iso, dilation, graph,
/// cylinder, sphere-cap, wrinkle, perturbed-iso, rigid-motion.
inline ImmersionFamily make_immersion_family(const std::string& name, const ParamMap& params,
                                             const GridDomain& domain, int k = 1) {
  const int d = domain.d(), tgt = d + 1;
  const double side = domain.side();
  ImmersionFamily fam;
  fam.name = name;

  if (name == "flat-iso") {
    const double off = param_or(params, "offset", 0.0);
    fam.value = [tgt, off](const Vec& x) {
      Vec u = detail::embed_flat(x, tgt);
      u[tgt - 1] += off;
      return u;
    };
    fam.dvalue = [d, tgt](const Vec&) {
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = Mat::Identity(d, d);
      return j;
    };
    return fam;
  }

  if (name == "dilation") {
    const double t = param_or(params, "t", 0.1);
    fam.value = [tgt, t](const Vec& x) { return Vec((1.0 + t) * detail::embed_flat(x, tgt)); };
    fam.dvalue = [d, tgt, t](const Vec&) {
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = (1.0 + t) * Mat::Identity(d, d);
      return j;
    };
    return fam;
  }

  if (name == "graph") {
    const double t = param_or(params, "t", 0.1);
    const double s = M_PI / side;
    fam.value = [tgt, t, s](const Vec& x) {
      Vec u = detail::embed_flat(x, tgt);
      double prod = 1.0;
      for (int i = 0; i < x.size(); ++i) prod *= std::sin(s * x[i]);
      u[tgt - 1] = t * prod;
      return u;
    };
    fam.dvalue = [d, tgt, t, s](const Vec& x) {
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = Mat::Identity(d, d);
      for (int a = 0; a < d; ++a) {
        double prod = t;
        for (int i = 0; i < d; ++i)
          prod *= (i == a) ? s * std::cos(s * x[i]) : std::sin(s * x[i]);
        j(tgt - 1, a) = prod;
      }
      return j;
    };
    return fam;
  }

  if (name == "cylinder") {
    const double radius = param_or(params, "radius", 1.0);
    fam.value = [tgt, radius](const Vec& x) {
      Vec u = Vec::Zero(tgt);
      u[0] = radius * std::cos(x[0] / radius);
      u[1] = radius * std::sin(x[0] / radius);
      for (int i = 1; i < x.size(); ++i) u[i + 1] = x[i];
      return u;
    };
    fam.dvalue = [d, tgt, radius](const Vec& x) {
      Mat j = Mat::Zero(tgt, d);
      j(0, 0) = -std::sin(x[0] / radius);
      j(1, 0) = std::cos(x[0] / radius);
      for (int i = 1; i < d; ++i) j(i + 1, i) = 1.0;
      return j;
    };
    return fam;
  }

  if (name == "sphere-cap") {
    // inverse stereographic parametrization of the radius-rho sphere;
    // oriented so the induced shape operator is +(1/rho) I
    const double rho = param_or(params, "radius", 1.0);
    fam.value = [tgt, rho](const Vec& x) {
      const double s = x.squaredNorm() / (4.0 * rho * rho);
      const double psi = 1.0 / (1.0 + s);
      Vec u = Vec::Zero(tgt);
      u.head(x.size()) = psi * x;
      u[tgt - 1] = rho * (1.0 - s) * psi;
      return u;
    };
    fam.dvalue = [d, tgt, rho](const Vec& x) {
      const double s = x.squaredNorm() / (4.0 * rho * rho);
      const double psi = 1.0 / (1.0 + s);
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = psi * Mat::Identity(d, d) -
                     (psi * psi / (2.0 * rho * rho)) * x * x.transpose();
      j.row(tgt - 1) = -(psi * psi / rho) * x.transpose();
      return j;
    };
    return fam;
  }

  if (name == "wrinkle") {
    // amplitude k^{-amplitude_exp}, frequency frequency_factor * k
    const double amp0 = param_or(params, "amplitude", 1.0);
    const double ae = param_or(params, "amplitude_exp", 2.0);
    const double f0 = param_or(params, "frequency_factor", 0.25);
    const double amp = amp0 * std::pow(static_cast<double>(k), -ae);
    const double omega = 2.0 * M_PI * f0 * k / side;
    fam.value = [tgt, amp, omega](const Vec& x) {
      Vec u = detail::embed_flat(x, tgt);
      u[tgt - 1] = amp * std::sin(omega * x[0]);
      return u;
    };
    fam.dvalue = [d, tgt, amp, omega](const Vec& x) {
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = Mat::Identity(d, d);
      j(tgt - 1, 0) = amp * omega * std::cos(omega * x[0]);
      return j;
    };
    return fam;
  }

  if (name == "perturbed-iso") {
    // u_k = flat embedding + (1/k) * fixed smooth perturbation
    const double scale = param_or(params, "scale", 1.0) / k;
    fam.value = [tgt, side, scale](const Vec& x) {
      return Vec(detail::embed_flat(x, tgt) + scale * detail::perturbation(x, side, tgt));
    };
    fam.dvalue = [d, tgt, side, scale](const Vec& x) {
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = Mat::Identity(d, d);
      return Mat(j + scale * detail::dperturbation(x, side, tgt));
    };
    return fam;
  }

  if (name == "rigid-motion") {
    const Mat r = detail::rotation_from_angles(tgt, param_or(params, "angle1", 0.0),
                                               param_or(params, "angle2", 0.0));
    Vec b = Vec::Zero(tgt);
    b[0] = param_or(params, "shift1", 0.0);
    if (tgt > 1) b[1] = param_or(params, "shift2", 0.0);
    if (tgt > 2) b[2] = param_or(params, "shift3", 0.0);
    fam.value = [tgt, r, b](const Vec& x) { return Vec(r * detail::embed_flat(x, tgt) + b); };
    fam.dvalue = [d, tgt, r](const Vec&) {
      Mat j = Mat::Zero(tgt, d);
      j.topRows(d) = Mat::Identity(d, d);
      return Mat(r * j);
    };
    return fam;
  }

  throw ConfigError("unknown immersion family '" + name + "'");
}

inline std::vector<std::string> immersion_family_names() {
  return {"flat-iso", "dilation",      "graph",         "cylinder",
          "sphere-cap", "wrinkle",     "perturbed-iso", "rigid-motion"};
}

inline DiscreteImmersion sample_family(const ImmersionFamily& fam, const GridDomain& domain,
                                       const MetricField& target) {
  return DiscreteImmersion::sample(domain, target, fam.value);
}

}  // namespace codim1
