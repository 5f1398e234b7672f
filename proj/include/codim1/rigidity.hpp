#pragma once

#include "codim1/immersions.hpp"

namespace codim1 {

/// Outcome of a rigidity-estimate evaluation: the selected base point, the
/// fitted isometry, the left-hand side and the labeled additive terms of
/// the right-hand side.
struct RigidityReport {
  Vec x0;
  int x0_index = -1;
  Mat rotation;  // coefficients of R
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double ratio = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double oscillation = 0.0;
  double diam_factor = 0.0;  // diam^p(Q) / (1 - delta^p), scaling the energy terms
  double normal_gap = 0.0;   // |n(x0) - ntilde(x0)| in the codimension-1 case

  double rhs_total() const {
    double s = 0.0;
    for (const auto& [label, v] : rhs_terms) s += v;
    return s;
  }

  double term(const std::string& label) const {
    for (const auto& [l, v] : rhs_terms)
      if (l == label) return v;
    throw std::invalid_argument("RigidityReport: no term '" + label + "'");
  }

  void finish() {
    const double total = rhs_total();
    for (const auto& [label, v] : rhs_terms)
      if (v < 0.0) throw std::logic_error("RigidityReport: negative term " + label);
    ratio = total > 0.0 ? lhs / total : 0.0;
  }
};

/// Node mask of the good set F together with the declared delta of the
/// hypothesis |Q \ F| / |Q| <= delta^p.
struct GoodSet {
  std::vector<char> mask;
  double delta = 0.5;

  static GoodSet all(const GridDomain& domain, double delta) {
    GoodSet f;
    f.mask.assign(domain.node_count(), 1);
    f.delta = delta;
    return f;
  }

  /// Nodes whose image lies in the core ball of the extended chart.
  static GoodSet from_core(const DiscreteImmersion& u, const ExtendedChart& ext, double delta) {
    GoodSet f;
    f.mask.resize(u.domain().node_count());
    for (int i = 0; i < u.domain().node_count(); ++i) f.mask[i] = ext.in_core(u.value(i)) ? 1 : 0;
    f.delta = delta;
    return f;
  }

  double excluded_fraction(const GridDomain& domain) const {
    double out = 0.0;
    for (int i = 0; i < domain.node_count(); ++i)
      if (!mask[i]) out += domain.quad_weight(i);
    return out / domain.volume();
  }
};

struct X0Strategy {
  enum class Kind { Center, Node } kind = Kind::Center;
  int node = -1;

  static X0Strategy center() { return {}; }
  static X0Strategy at(int node) { return {Kind::Node, node}; }
};

/// Non-Euclidean flat rigidity: fits a single R in SO(g_{x0}, e_d) to an
/// equidimensional grid map and measures
///   int |Dv - R|^p_{g,e}  vs  |Q| osc(g)^p + int dist^p(Dv, SO(g,e)).
inline RigidityReport flat_rigidity(const DiscreteMap& v, double p,
                                    const X0Strategy& strategy = {}) {
  require_exponent(p);
  const GridDomain& dom = v.domain();
  const int d = dom.d();
  if (v.tgt_dim() != d) throw std::invalid_argument("flat_rigidity: map must be equidimensional");

  RigidityReport rep;
  if (strategy.kind == X0Strategy::Kind::Node) {
    rep.x0_index = strategy.node;
  } else {
    std::array<int, 3> mid{0, 0, 0};
    for (int a = 0; a < d; ++a) mid[a] = dom.nodes_per_side() / 2;
    rep.x0_index = dom.flat_index(mid);
  }
  rep.x0 = dom.node(rep.x0_index);

  Mat mean = Mat::Zero(d, d);
  for (int i = 0; i < dom.node_count(); ++i) mean += dom.quad_weight(i) * v.du(i);
  mean /= dom.volume();
  const ConstMetric g0 = dom.metric_at(rep.x0_index);
  const auto fit =
      nearest_isometry(LinearMapSample(mean, g0, ConstMetric::euclidean(d)), /*oriented=*/true);
  rep.rotation = fit.map.coeff;

  double lhs = 0.0, so_dist = 0.0;
  const ConstMetric eucl = ConstMetric::euclidean(d);
  for (int i = 0; i < dom.node_count(); ++i) {
    const double w = dom.quad_weight(i);
    lhs += w * std::pow(frobenius_norm(LinearMapSample(v.du(i) - rep.rotation,
                                                       dom.metric_at(i), eucl)),
                        p);
    so_dist += w * std::pow(isometry_distance(LinearMapSample(v.du(i), dom.metric_at(i), eucl),
                                              /*oriented=*/true),
                            p);
  }
  rep.lhs = lhs;
  rep.oscillation = metric_oscillation(dom);
  rep.rhs_terms = {{"oscillation_volume", dom.volume() * std::pow(rep.oscillation, p)},
                   {"so_distance", so_dist}};
  rep.finish();
  return rep;
}

// ---- norm estimate of the L^p variation functional ----

namespace detail {

inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        break;
      }
    }
    nodes[i] = x;
  }
}

// quadrature of f over [-1,1]^d with the triangular weight prod (1 - |z_i|),
// i.e. the distribution of x - y for x, y uniform on the unit cube
struct DifferenceQuadrature {
  std::vector<Vec> points;
  std::vector<double> weights;

  explicit DifferenceQuadrature(int d, int n_half = 12) {
    std::vector<double> gn, gw;
    gauss_legendre(n_half, gn, gw);
    std::vector<double> axis_nodes, axis_weights;
    for (double side : {-1.0, 1.0})
      for (int i = 0; i < n_half; ++i) {
        const double z = 0.5 * (gn[i] + side);  // map [-1,1] to the half interval
        axis_nodes.push_back(z);
        axis_weights.push_back(0.5 * gw[i] * (1.0 - std::abs(z)));
      }
    const int per_axis = static_cast<int>(axis_nodes.size());
    int total = 1;
    for (int a = 0; a < d; ++a) total *= per_axis;
    points.reserve(total);
    weights.reserve(total);
    for (int t = 0; t < total; ++t) {
      int rem = t;
      Vec z(d);
      double w = 1.0;
      for (int a = 0; a < d; ++a) {
        z[a] = axis_nodes[rem % per_axis];
        w *= axis_weights[rem % per_axis];
        rem /= per_axis;
      }
      points.push_back(z);
      weights.push_back(w);
    }
  }

  double psi(const Mat& r, double p) const {
    double acc = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
      acc += weights[i] * std::pow((r * points[i]).norm(), p);
    return std::pow(acc, 1.0 / p);
  }
};

}  // namespace detail

/// Brute-forced m = min { Psi(R) : |R| = 1 } for
/// Psi(R) = (int_Q int_Q |R(x-y)|^p dx dy)^{1/p} on the unit cube; the
/// induced norm-estimate constant is 1/m.  Deterministic for a fixed seed.
inline double norm_estimate_constant(int d, int tgt_dim, double p, uint64_t seed = 19,
                                     int random_seeds = 6) {
  require_exponent(p);
  const detail::DifferenceQuadrature quad(d);
  const int nparams = d * tgt_dim;

  auto unflatten = [&](const Vec& v) {
    Mat r(tgt_dim, d);
    for (int i = 0; i < nparams; ++i) r(i / d, i % d) = v[i];
    return r;
  };
  auto objective = [&](const Vec& v) {
    const Mat r = unflatten(v);
    const double nr = r.norm();
    return nr > 1e-300 ? quad.psi(r, p) / nr : 1e300;
  };

  std::vector<Vec> seeds;
  for (int i = 0; i < nparams; ++i) {
    Vec v = Vec::Zero(nparams);
    v[i] = 1.0;
    seeds.push_back(v);
  }
  Rng rng(seed);
  for (int s = 0; s < random_seeds; ++s) seeds.push_back(random_vec(rng, nparams).normalized());

  double best = std::numeric_limits<double>::infinity();
  for (Vec v : seeds) {
    const double fd = 1e-6;
    double f = objective(v);
    double step = 0.1;
    for (int it = 0; it < 400; ++it) {
      Vec g(nparams);
      for (int i = 0; i < nparams; ++i) {
        Vec vp = v, vm = v;
        vp[i] += fd;
        vm[i] -= fd;
        g[i] = (objective(vp) - objective(vm)) / (2.0 * fd);
      }
      if (g.norm() < 1e-12) break;
      double s2 = step;
      Vec cand = v - s2 * g;
      double fc = objective(cand);
      int bt = 0;
      while (fc > f - 1e-4 * s2 * g.squaredNorm() && bt < 50) {
        s2 *= 0.5;
        cand = v - s2 * g;
        fc = objective(cand);
        ++bt;
      }
      if (fc >= f) break;
      v = cand.normalized();
      f = objective(v);
      step = std::min(1.0, s2 * 2.0);
    }
    best = std::min(best, f);
  }
  return best;
}

/// Psi(R) on the unit cube for an explicit map (scaling/homogeneity checks).
inline double lp_variation(const Mat& r, double p) {
  detail::DifferenceQuadrature quad(static_cast<int>(r.cols()));
  return quad.psi(r, p);
}

// ---- hyperplane helpers ----

/// Orthonormal basis B of the hyperplane n0-perp with det[B | n0] > 0.
inline Mat hyperplane_frame(const Vec& n0) {
  const int n = static_cast<int>(n0.size());
  Mat cand(n, n + 1);
  cand.col(0) = n0;
  cand.rightCols(n) = Mat::Identity(n, n);
  const Mat onb = gram_schmidt(cand, Mat::Identity(n, n));
  if (onb.cols() != n) throw std::runtime_error("hyperplane_frame: degenerate normal");
  Mat b = onb.rightCols(n - 1);
  Mat full(n, n);
  full.leftCols(n - 1) = b;
  full.col(n - 1) = n0.normalized();
  if (full.determinant() < 0.0) {
    if (n - 1 >= 2)
      b.col(0).swap(b.col(1));
    else
      b.col(0) = -b.col(0);
  }
  return b;
}

/// dist_{g0, e}(M, SO((R^d, g0), (Pi0, e))) for a map M with image in the
/// hyperplane Pi0 = n0-perp, reduced to a square Procrustes problem in an
/// oriented frame of Pi0.
inline double hyperplane_so_distance(const Mat& m, const Vec& n0, const ConstMetric& g0) {
  const Mat b = hyperplane_frame(n0);
  const Mat reduced = b.transpose() * m;
  return isometry_distance(
      LinearMapSample(reduced, g0, ConstMetric::euclidean(static_cast<int>(b.cols()))),
      /*oriented=*/true);
}

struct ProjectionCheck {
  double lhs1 = 0.0;      // |PT - T|
  double rhs1 = 0.0;      // |T| |n0 - n|
  double lhs2 = 0.0;      // dist(PT, SO(R^d -> Pi0))
  double rhs2_dist = 0.0; // dist(T, Ort)
  double normal_gap = 0.0;
};

/// Both sides of the projection-error inequalities: the algebraic bound
/// |PT - T| <= |T| |n0 - n| and the oriented distance comparison whose
/// constant is measured by the caller.
inline ProjectionCheck projection_error_check(const LinearMapSample& t, const Vec& n0,
                                              const Vec& n) {
  if (std::abs(n0.norm() - 1.0) > 1e-9 || std::abs(n.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("projection_error_check: normals must be unit vectors");
  const Mat& m = t.coeff;
  if ((n.transpose() * m).norm() > 1e-8 * (1.0 + m.norm()))
    throw std::invalid_argument("projection_error_check: map does not take values in n-perp");

  const int dim = t.tgt_dim();
  const Mat proj = Mat::Identity(dim, dim) - n0 * n0.transpose();
  ProjectionCheck out;
  out.normal_gap = (n0 - n).norm();
  out.lhs1 = frobenius_norm(LinearMapSample(proj * m - m, t.src_metric, t.tgt_metric));
  out.rhs1 = frobenius_norm(t) * out.normal_gap;
  out.lhs2 = hyperplane_so_distance(proj * m, n0, t.src_metric);
  out.rhs2_dist = isometry_distance(t, /*oriented=*/false);
  return out;
}

// ---- Euclidean normal field of an extended chart ----

struct NormalFieldReport {
  std::vector<Vec> ntilde;
  std::vector<Mat> dntilde;
  std::vector<char> in_core;  // the set F = u^{-1}(phi^{-1}(B(0, r)))
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double measured_c = 0.0;

  double rhs_total() const {
    double s = 0.0;
    for (const auto& [l, v] : rhs_terms) s += v;
    return s;
  }
};

namespace detail {

inline double euclidean_gradient_energy(const DiscreteImmersion& u, double p,
                                        const std::vector<char>* mask, bool complement) {
  const GridDomain& dom = u.domain();
  double acc = 0.0;
  for (int i = 0; i < dom.node_count(); ++i) {
    if (mask) {
      const bool in = (*mask)[i] != 0;
      if (complement == in) continue;
    }
    const LinearMapSample s(u.du(i), ConstMetric::euclidean(dom.d()),
                            ConstMetric(u.target().coeff(u.value(i))));
    acc += dom.quad_weight(i) * std::pow(frobenius_norm(s), p);
  }
  return acc;
}

inline std::vector<Mat> grid_differential(const GridDomain& dom, const std::vector<Vec>& field,
                                          int tgt_dim) {
  DiscreteMap m(dom, tgt_dim, field);
  std::vector<Mat> out;
  out.reserve(dom.node_count());
  for (int i = 0; i < dom.node_count(); ++i) out.push_back(m.du(i));
  return out;
}

}  // namespace detail

/// The pushed-forward normal field ntilde = Dphi^{(r)}(u) nu_u, its grid
/// derivative, and the measured constant of the bound
///   int |Dntilde|^p <= C ( r^{-p} int_{Q\F} |du|^p + int_Q |du|^p + E_b ).
inline NormalFieldReport euclidean_normal_field(const DiscreteImmersion& u,
                                                const ExtendedChart& ext, double p) {
  require_exponent(p);
  const GridDomain& dom = u.domain();
  const int n = dom.node_count(), dim = u.target().dim();
  NormalFieldReport rep;
  rep.ntilde.reserve(n);
  rep.in_core.resize(n);
  for (int i = 0; i < n; ++i) {
    rep.ntilde.push_back(Vec(ext.differential(u.value(i)) * u.normal(i)));
    rep.in_core[i] = ext.in_core(u.value(i)) ? 1 : 0;
  }
  rep.dntilde = detail::grid_differential(dom, rep.ntilde, dim);

  double lhs = 0.0;
  for (int i = 0; i < n; ++i) lhs += dom.quad_weight(i) * std::pow(rep.dntilde[i].norm(), p);
  rep.lhs = lhs;

  const double rp = std::pow(ext.r(), p);
  rep.rhs_terms = {
      {"escape_term", detail::euclidean_gradient_energy(u, p, &rep.in_core, true) / rp},
      {"gradient_term", detail::euclidean_gradient_energy(u, p, nullptr, false)},
      {"bending", bending_energy(u, p)}};
  const double total = rep.rhs_total();
  rep.measured_c = total > 0.0 ? lhs / total : 0.0;
  return rep;
}

/// Local quantitative rigidity for codimension-1 immersions, executed as an
/// algorithm: push u through the extended chart, select the base point by
/// the Chebyshev argmin of the normal-variation integral over F, project to
/// the hyperplane of the selected normal, run the flat rigidity fit there,
/// and assemble the labeled right-hand side.
inline RigidityReport local_rigidity_codim1(const DiscreteImmersion& u, const ExtendedChart& ext,
                                            const GoodSet& f, double p) {
  require_exponent(p);
  const GridDomain& dom = u.domain();
  const int n = dom.node_count(), d = dom.d(), dim = u.target().dim();
  if (static_cast<int>(f.mask.size()) != n)
    throw std::invalid_argument("local_rigidity_codim1: good-set mask size mismatch");

  const double fraction = f.excluded_fraction(dom);
  if (fraction > std::pow(f.delta, p) + 1e-12)
    throw HypothesisError("local_rigidity_codim1: |Q \\ F|/|Q| exceeds delta^p");
  for (int i = 0; i < n; ++i)
    if (f.mask[i] && !ext.in_core(u.value(i)))
      throw HypothesisError("local_rigidity_codim1: image escapes the chart ball on F");

  // coordinate representation and its differential (chain rule)
  std::vector<Vec> utilde(n);
  std::vector<Mat> dutilde(n);
  for (int i = 0; i < n; ++i) {
    utilde[i] = ext.value(u.value(i));
    dutilde[i] = ext.differential(u.value(i)) * u.du(i);
  }
  NormalFieldReport nf = euclidean_normal_field(u, ext, p);

  // Chebyshev argmin of z -> int |ntilde(x) - ntilde(z)|^p dx over F-nodes
  RigidityReport rep;
  {
    double best = std::numeric_limits<double>::infinity();
    for (int z = 0; z < n; ++z) {
      if (!f.mask[z]) continue;
      double q = 0.0;
      for (int x = 0; x < n; ++x)
        q += dom.quad_weight(x) * std::pow((nf.ntilde[x] - nf.ntilde[z]).norm(), p);
      if (q < best) {
        best = q;
        rep.x0_index = z;
      }
    }
    if (rep.x0_index < 0) throw HypothesisError("local_rigidity_codim1: good set has no nodes");
  }
  rep.x0 = dom.node(rep.x0_index);

  // Euclidean normal of the projected surface at x0, against ntilde(x0)
  Vec n_coord = generalized_cross(dutilde[rep.x0_index]);
  if (n_coord.norm() < 1e-12)
    throw HypothesisError("local_rigidity_codim1: degenerate differential at x0");
  n_coord.normalize();
  const Vec nt0 = nf.ntilde[rep.x0_index];
  if (nt0.norm() < 1e-12)
    throw HypothesisError("local_rigidity_codim1: vanishing normal at x0");
  const Vec n0 = nt0.normalized();
  rep.normal_gap = (n_coord - n0).norm();

  // project to Pi0 = n0-perp and run the flat estimate there
  const Mat t_frame = hyperplane_frame(n0);
  std::vector<Vec> v_values(n);
  for (int i = 0; i < n; ++i) v_values[i] = t_frame.transpose() * utilde[i];
  const RigidityReport flat = flat_rigidity(DiscreteMap(dom, d, std::move(v_values)), p,
                                            X0Strategy::at(rep.x0_index));
  rep.rotation = t_frame * flat.rotation;

  double lhs = 0.0;
  const ConstMetric eucl = ConstMetric::euclidean(dim);
  for (int i = 0; i < n; ++i)
    lhs += dom.quad_weight(i) *
           std::pow(frobenius_norm(LinearMapSample(dutilde[i] - rep.rotation, dom.metric_at(i),
                                                   eucl)),
                    p);
  rep.lhs = lhs;

  // measured chart epsilon on the F-image samples
  {
    std::vector<Vec> samples;
    const int stride = std::max(1, n / 48);
    for (int i = 0; i < n; i += stride)
      if (f.mask[i]) samples.push_back(ext.base().apply(u.value(i)));
    if (samples.empty()) samples.push_back(Vec::Zero(dim));
    rep.epsilon = epsilon_isometric_check(ext.base(), samples);
  }
  rep.delta = f.delta;
  rep.oscillation = metric_oscillation(dom);

  const double diam_factor = std::pow(dom.diameter(), p) / (1.0 - std::pow(f.delta, p));
  rep.diam_factor = diam_factor;
  const double es = stretching_energy(u, p);
  const double escape =
      detail::euclidean_gradient_energy(u, p, &f.mask, true) / std::pow(ext.r(), p);
  const double grad = detail::euclidean_gradient_energy(u, p, nullptr, false);
  const double eb = bending_energy(u, p);
  rep.rhs_terms = {{"delta_volume", dom.volume() * std::pow(f.delta, p)},
                   {"epsilon_volume", dom.volume() * std::pow(rep.epsilon, p)},
                   {"oscillation_volume", dom.volume() * std::pow(rep.oscillation, p)},
                   {"stretching", es},
                   {"escape_term", diam_factor * escape},
                   {"gradient_term", diam_factor * grad},
                   {"bending_term", diam_factor * eb}};
  rep.finish();
  return rep;
}

/// Both sides of the reverse Poincare comparison: the Sasaki W^{1,p}
/// discrepancy of two immersions against the chart/energy/L^p terms.
inline RigidityReport reverse_poincare_check(const DiscreteImmersion& u1,
                                             const DiscreteImmersion& u2,
                                             const ExtendedChart& ext, const GoodSet& f1,
                                             const GoodSet& f2, double p,
                                             const SasakiOptions& sopt = {}) {
  require_exponent(p);
  detail::require_same_grid(u1, u2);
  const GridDomain& dom = u1.domain();
  const int n = dom.node_count();
  const double delta = std::max(f1.delta, f2.delta);

  auto check = [&](const DiscreteImmersion& u, const GoodSet& f, const char* which) {
    if (f.excluded_fraction(dom) > std::pow(f.delta, p) + 1e-12)
      throw HypothesisError(std::string("reverse_poincare_check: |Q \\ F|/|Q| exceeds delta^p for ") +
                            which);
    for (int i = 0; i < n; ++i)
      if (f.mask[i] && !ext.in_core(u.value(i)))
        throw HypothesisError(std::string("reverse_poincare_check: image escapes chart ball on ") +
                              which);
  };
  check(u1, f1, "u1");
  check(u2, f2, "u2");

  RigidityReport rep;
  rep.delta = delta;

  double lhs = 0.0;
  const MetricField& target = u1.target();
  for (int i = 0; i < n; ++i) {
    double ds;
    if (target.constant()) {
      const Mat h = target.coeff_unchecked(u1.value(i));
      const double fiber = frobenius_norm(
          LinearMapSample(u1.du(i) - u2.du(i), dom.metric_at(i), ConstMetric(h)));
      const Vec dq = u1.value(i) - u2.value(i);
      ds = std::sqrt(fiber * fiber + dq.dot(h * dq));
    } else {
      ds = sasaki_distance_maps(target, u1.target_gamma(), u1.du_sample(i), u1.value(i),
                                u2.du_sample(i), u2.value(i), sopt);
    }
    lhs += dom.quad_weight(i) * std::pow(ds, p);
  }
  rep.lhs = lhs;

  {
    std::vector<Vec> samples;
    const int stride = std::max(1, n / 24);
    for (int i = 0; i < n; i += stride) {
      if (f1.mask[i]) samples.push_back(ext.base().apply(u1.value(i)));
      if (f2.mask[i]) samples.push_back(ext.base().apply(u2.value(i)));
    }
    if (samples.empty()) samples.push_back(Vec::Zero(target.dim()));
    rep.epsilon = epsilon_isometric_check(ext.base(), samples);
  }
  rep.oscillation = metric_oscillation(dom);

  double lp_term = 0.0;
  for (int i = 0; i < n; ++i)
    lp_term += dom.quad_weight(i) * std::pow(detail::target_distance(u1, u2, i), p);

  const double dp = std::pow(delta, p);
  const double rp = std::pow(ext.r(), p);
  const double diam_factor = std::pow(dom.diameter(), p) / (1.0 - dp);
  rep.diam_factor = diam_factor;
  const double es = std::max(stretching_energy(u1, p), stretching_energy(u2, p));
  const double eb = std::max(bending_energy(u1, p), bending_energy(u2, p));
  rep.rhs_terms = {
      {"delta_volume", dom.volume() * dp},
      {"epsilon_volume", dom.volume() * std::pow(rep.epsilon, p)},
      {"oscillation_volume", dom.volume() * std::pow(rep.oscillation, p)},
      {"diam_volume", dom.volume() * diam_factor * (1.0 + dp / rp)},
      {"stretching", (1.0 + 1.0 / rp) * es},
      {"bending", diam_factor * eb},
      {"lp_term", (1.0 + std::pow(dom.volume(), -p / dom.d())) * lp_term}};
  rep.finish();
  return rep;
}

}  // namespace codim1
