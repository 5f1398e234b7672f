#pragma once

#include "codim1/target_space.hpp"

namespace codim1 {

/// A piecewise regular curve sampled at uniformly spaced parameters in [0,1].
struct CurveSample {
  std::vector<Vec> nodes;

  int segments() const { return static_cast<int>(nodes.size()) - 1; }

  static CurveSample line(const Vec& a, const Vec& b, int n_nodes) {
    if (n_nodes < 2) throw std::invalid_argument("CurveSample: need >= 2 nodes");
    CurveSample c;
    c.nodes.reserve(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const double t = static_cast<double>(i) / (n_nodes - 1);
      c.nodes.push_back((1.0 - t) * a + t * b);
    }
    return c;
  }

  CurveSample subdivided() const {
    CurveSample c;
    c.nodes.reserve(2 * nodes.size() - 1);
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      c.nodes.push_back(nodes[i]);
      c.nodes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    c.nodes.push_back(nodes.back());
    return c;
  }
};

/// A tangent coefficient vector attached to a patch point.
struct TangentAt {
  Vec base;
  Vec vec;
};

inline void validate_curve(const MetricField& field, const CurveSample& curve) {
  if (curve.nodes.size() < 2) throw std::invalid_argument("curve: need >= 2 nodes");
  for (const Vec& y : curve.nodes)
    if (!field.contains(y)) throw std::invalid_argument("curve: node outside patch");
}

/// Length int_0^1 |gamma'|_h dt by midpoint-metric chord summation
/// (second order under node doubling).
inline double curve_length(const MetricField& field, const CurveSample& curve) {
  validate_curve(field, curve);
  double len = 0.0;
  for (size_t i = 0; i + 1 < curve.nodes.size(); ++i) {
    const Vec d = curve.nodes[i + 1] - curve.nodes[i];
    const Vec mid = 0.5 * (curve.nodes[i] + curve.nodes[i + 1]);
    len += std::sqrt(std::max(0.0, d.dot(field.coeff_unchecked(mid) * d)));
  }
  return len;
}

struct GeodesicOptions {
  int initial_nodes = 5;
  int final_nodes = 65;
  int max_iters = 400;      // per continuation level
  double grad_tol = 1e-11;  // scaled by segment energy
  bool record_levels = true;
};

struct GeodesicResult {
  CurveSample curve;
  double dist = 0.0;
  std::vector<CurveSample> level_curves;  // minimizers of the coarser levels
};

namespace detail {

constexpr double kInfeasible = 1e300;

inline double polyline_energy(const MetricField& field, const std::vector<Vec>& nodes) {
  const int nseg = static_cast<int>(nodes.size()) - 1;
  double e = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const Vec mid = 0.5 * (nodes[i] + nodes[i + 1]);
    if (!field.contains(mid) || !field.contains(nodes[i + 1])) return kInfeasible;
    const Vec d = nodes[i + 1] - nodes[i];
    e += d.dot(field.coeff_unchecked(mid) * d);
  }
  return nseg * e;
}

// gradient of the discrete energy with respect to the interior nodes;
// metric derivatives by central differences
inline void polyline_energy_gradient(const MetricField& field, const std::vector<Vec>& nodes,
                                     std::vector<Vec>& grad) {
  const int n = field.dim();
  const int nseg = static_cast<int>(nodes.size()) - 1;
  const double fd = field.deriv_step();
  grad.assign(nodes.size(), Vec::Zero(n));
  for (int i = 0; i < nseg; ++i) {
    const Vec d = nodes[i + 1] - nodes[i];
    const Vec mid = 0.5 * (nodes[i] + nodes[i + 1]);
    const Vec hd = field.coeff_unchecked(mid) * d;
    Vec quad(n);
    for (int c = 0; c < n; ++c) {
      Vec mp = mid, mm = mid;
      mp[c] += fd;
      mm[c] -= fd;
      const Mat dh = (field.coeff_unchecked(mp) - field.coeff_unchecked(mm)) / (2.0 * fd);
      quad[c] = d.dot(dh * d);
    }
    grad[i] += nseg * (-2.0 * hd + 0.5 * quad);
    grad[i + 1] += nseg * (2.0 * hd + 0.5 * quad);
  }
}

// Barzilai-Borwein descent on the interior nodes with an Armijo fallback.
inline void minimize_polyline(const MetricField& field, std::vector<Vec>& nodes,
                              const GeodesicOptions& opt) {
  const int n = field.dim();
  const int interior = static_cast<int>(nodes.size()) - 2;
  if (interior <= 0) return;

  auto pack = [&](const std::vector<Vec>& g) {
    Vec v(interior * n);
    for (int i = 0; i < interior; ++i) v.segment(i * n, n) = g[i + 1];
    return v;
  };
  auto shifted = [&](const Vec& dir, double step) {
    std::vector<Vec> out = nodes;
    for (int i = 0; i < interior; ++i) out[i + 1] += step * dir.segment(i * n, n);
    return out;
  };

  std::vector<Vec> gnodes;
  polyline_energy_gradient(field, nodes, gnodes);
  Vec g = pack(gnodes);
  double e = polyline_energy(field, nodes);
  const double scale = std::max(e, 1e-30);
  double step = 1e-2 / std::max(1.0, g.norm());

  for (int it = 0; it < opt.max_iters; ++it) {
    if (g.norm() <= opt.grad_tol * scale * nodes.size()) break;
    const Vec dir = -g;
    double s = step;
    double e_new = polyline_energy(field, shifted(dir, s));
    int backtracks = 0;
    while (e_new > e - 1e-4 * s * g.squaredNorm() && backtracks < 60) {
      s *= 0.5;
      e_new = polyline_energy(field, shifted(dir, s));
      ++backtracks;
    }
    if (e_new >= e) break;  // no progress
    nodes = shifted(dir, s);
    e = e_new;
    polyline_energy_gradient(field, nodes, gnodes);
    const Vec g_new = pack(gnodes);
    // Barzilai-Borwein step for the next iteration
    const Vec dx = s * dir;
    const Vec dg = g_new - g;
    const double dxdg = dx.dot(dg);
    step = (dxdg > 1e-300) ? dx.squaredNorm() / dxdg : s * 2.0;
    if (!(step > 0.0) || !std::isfinite(step)) step = s;
    g = g_new;
  }
}

}  // namespace detail

/// Minimizing polyline between q1 and q2 by curve-energy descent with
/// node-doubling continuation; the distance is Richardson-extrapolated
/// from the last two refinement levels.
inline GeodesicResult geodesic_between(const MetricField& field, const Vec& q1, const Vec& q2,
                                       const GeodesicOptions& opt = {}) {
  if (!field.contains(q1) || !field.contains(q2))
    throw std::invalid_argument("geodesic_between: endpoint outside patch");
  GeodesicResult res;
  if ((q1 - q2).norm() < 1e-15) {
    res.curve = CurveSample::line(q1, q2, 2);
    res.dist = 0.0;
    return res;
  }
  if (field.constant()) {
    res.curve = CurveSample::line(q1, q2, opt.final_nodes);
    res.dist = curve_length(field, res.curve);
    return res;
  }

  CurveSample cur = CurveSample::line(q1, q2, opt.initial_nodes);
  if (detail::polyline_energy(field, cur.nodes) >= detail::kInfeasible)
    throw std::invalid_argument("geodesic_between: cannot connect within patch");

  double len_prev = 0.0;
  while (true) {
    detail::minimize_polyline(field, cur.nodes, opt);
    if (opt.record_levels) res.level_curves.push_back(cur);
    const int nseg = cur.segments();
    if (nseg >= opt.final_nodes - 1) {
      len_prev = curve_length(field, cur);
      break;
    }
    cur = cur.subdivided();
  }

  // one more refinement for the length extrapolation
  CurveSample fine = cur.subdivided();
  GeodesicOptions fine_opt = opt;
  fine_opt.max_iters = std::max(40, opt.max_iters / 4);
  detail::minimize_polyline(field, fine.nodes, fine_opt);
  const double len_fine = curve_length(field, fine);

  res.curve = fine;
  res.dist = (4.0 * len_fine - len_prev) / 3.0;
  return res;
}

/// Distance by geodesic shooting: Newton on the initial velocity of
/// exp_{q1}.  Independent route used to cross-check geodesic_between.
inline double shooting_distance(const MetricField& field, const Vec& q1, const Vec& q2,
                                int steps = 128) {
  if (!field.contains(q1) || !field.contains(q2))
    throw std::invalid_argument("shooting_distance: endpoint outside patch");
  if (field.constant()) {
    const Vec d = q2 - q1;
    return std::sqrt(std::max(0.0, d.dot(field.coeff_unchecked(q1) * d)));
  }
  ChristoffelField gf(field);
  const int n = field.dim();
  Vec v = q2 - q1;
  const double fd = std::max(1e-8, 1e-7 * v.norm());
  for (int it = 0; it < 80; ++it) {
    const Vec res = geodesic_shoot(gf, q1, v, steps) - q2;
    if (res.norm() < 1e-13 + 1e-12 * (q2 - q1).norm())
      return std::sqrt(std::max(0.0, v.dot(field.coeff_unchecked(q1) * v)));
    Mat jac(n, n);
    for (int j = 0; j < n; ++j) {
      Vec vp = v, vm = v;
      vp[j] += fd;
      vm[j] -= fd;
      jac.col(j) = (geodesic_shoot(gf, q1, vp, steps) - geodesic_shoot(gf, q1, vm, steps)) / (2.0 * fd);
    }
    v -= jac.partialPivLu().solve(res);
  }
  throw std::runtime_error("shooting_distance: Newton did not converge");
}

/// Parallel transport along the curve from the fiber at gamma(1) to the
/// fiber at gamma(0) (the direction convention of the transport maps used
/// by the Sasaki distance): the transport ODE
///   a_k' = - sum_{i,j} a_i y_j' Gamma^k_{ij}(gamma)
/// is integrated backwards by RK4 with the given substeps per segment.
inline TangentAt parallel_transport(const ChristoffelField& gf, const CurveSample& curve,
                                    const TangentAt& v, int substeps_per_segment = 8) {
  const MetricField& field = gf.field();
  validate_curve(field, curve);
  if ((v.base - curve.nodes.back()).norm() > 1e-9 * (1.0 + v.base.norm()))
    throw std::invalid_argument("parallel_transport: vector not based at gamma(1)");
  const int n = field.dim();

  Vec a = v.vec;
  auto rhs = [&](const Vec& coeffs, const Vec& point, const Vec& velocity) {
    const Christoffel3 g = gf.at(point);
    Vec out = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += coeffs[i] * velocity[j] * g(k, i, j);
      out[k] = -acc;
    }
    return out;
  };

  // walk the segments from the end; on each segment y(s) = x_i + s * delta
  for (int seg = curve.segments() - 1; seg >= 0; --seg) {
    const Vec& x0 = curve.nodes[seg];
    const Vec delta = curve.nodes[seg + 1] - x0;
    const double ds = -1.0 / substeps_per_segment;
    double s = 1.0;
    for (int step = 0; step < substeps_per_segment; ++step) {
      const Vec y1 = x0 + s * delta;
      const Vec ymid = x0 + (s + 0.5 * ds) * delta;
      const Vec y2 = x0 + (s + ds) * delta;
      const Vec k1 = rhs(a, y1, delta);
      const Vec k2 = rhs(a + 0.5 * ds * k1, ymid, delta);
      const Vec k3 = rhs(a + 0.5 * ds * k2, ymid, delta);
      const Vec k4 = rhs(a + ds * k3, y2, delta);
      a += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      s += ds;
    }
  }
  return {curve.nodes.front(), a};
}

struct SasakiOptions {
  GeodesicOptions geodesic;
  int family_size = 6;  // number of candidate curves evaluated
  int transport_substeps = 8;
};

namespace detail {

// Accurate length of the polyline path itself (Richardson on the chord
// quadrature), so that coarse candidate curves cannot undershoot the
// geodesic distance through quadrature error.
inline double accurate_polyline_length(const MetricField& field, const CurveSample& curve) {
  const double l1 = curve_length(field, curve.subdivided());
  const double l2 = curve_length(field, curve.subdivided().subdivided());
  return (4.0 * l2 - l1) / 3.0;
}

inline std::vector<CurveSample> candidate_curves(const MetricField& field, const Vec& q1,
                                                 const Vec& q2, const SasakiOptions& opt,
                                                 double* geodesic_dist) {
  GeodesicResult geo = geodesic_between(field, q1, q2, opt.geodesic);
  *geodesic_dist = geo.dist;
  std::vector<CurveSample> cands;
  cands.push_back(geo.curve);
  const CurveSample straight = CurveSample::line(q1, q2, opt.geodesic.final_nodes);
  bool straight_ok = true;
  for (const Vec& y : straight.nodes)
    if (!field.contains(y)) straight_ok = false;
  if (straight_ok) cands.push_back(straight);
  for (auto it = geo.level_curves.rbegin(); it != geo.level_curves.rend(); ++it)
    cands.push_back(*it);
  if (static_cast<int>(cands.size()) > opt.family_size) cands.resize(opt.family_size);
  return cands;
}

}  // namespace detail

/// Upper bound for the Sasaki distance between tangent vectors:
/// min over a finite family of curves of
///   (|e1 - P^gamma(e2)|_h^2 + length(gamma)^2)^{1/2}.
/// Exact when the family contains the minimizer (same base point, flat
/// targets); an upper bound for the infimum otherwise.
inline double sasaki_distance_vectors(const MetricField& field, const ChristoffelField& gf,
                                      const TangentAt& e1, const TangentAt& e2,
                                      const SasakiOptions& opt = {}) {
  if (!field.contains(e1.base) || !field.contains(e2.base))
    throw std::invalid_argument("sasaki_distance_vectors: base point outside patch");
  const Mat h1 = field.coeff_unchecked(e1.base);
  if ((e1.base - e2.base).norm() < 1e-14) {
    const Vec d = e1.vec - e2.vec;
    return std::sqrt(std::max(0.0, d.dot(h1 * d)));
  }
  double geo_dist = 0.0;
  const auto cands = detail::candidate_curves(field, e1.base, e2.base, opt, &geo_dist);
  double best = std::numeric_limits<double>::infinity();
  for (const CurveSample& c : cands) {
    const TangentAt p = parallel_transport(gf, c, e2, opt.transport_substeps);
    const Vec d = e1.vec - p.vec;
    const double len =
        (&c == &cands.front()) ? geo_dist : detail::accurate_polyline_length(field, c);
    best = std::min(best, std::sqrt(std::max(0.0, d.dot(h1 * d)) + len * len));
  }
  return best;
}

/// Upper bound for the Sasaki distance between linear maps L1 at (x, q1)
/// and L2 at (x, q2) in T*Q x TN: L2 is transported columnwise along each
/// candidate curve and |L1 - L_gamma|_{g,h} is combined with the length.
inline double sasaki_distance_maps(const MetricField& field, const ChristoffelField& gf,
                                   const LinearMapSample& l1, const Vec& q1,
                                   const LinearMapSample& l2, const Vec& q2,
                                   const SasakiOptions& opt = {}) {
  if (!l1.src_metric.same_as(l2.src_metric, 1e-10))
    throw std::invalid_argument("sasaki_distance_maps: source base-point (metric) mismatch");
  if (l1.tgt_dim() != field.dim() || l2.tgt_dim() != field.dim())
    throw std::invalid_argument("sasaki_distance_maps: target dimension mismatch");
  const ConstMetric h1 = field.metric(q1);
  if ((q1 - q2).norm() < 1e-14) {
    return frobenius_norm(LinearMapSample(l1.coeff - l2.coeff, l1.src_metric, h1));
  }
  double geo_dist = 0.0;
  const auto cands = detail::candidate_curves(field, q1, q2, opt, &geo_dist);
  double best = std::numeric_limits<double>::infinity();
  for (const CurveSample& c : cands) {
    Mat transported(l2.tgt_dim(), l2.src_dim());
    for (int j = 0; j < l2.src_dim(); ++j) {
      const TangentAt p = parallel_transport(gf, c, {q2, l2.coeff.col(j)}, opt.transport_substeps);
      transported.col(j) = p.vec;
    }
    const double fiber =
        frobenius_norm(LinearMapSample(l1.coeff - transported, l1.src_metric, h1));
    const double len =
        (&c == &cands.front()) ? geo_dist : detail::accurate_polyline_length(field, c);
    best = std::min(best, std::sqrt(fiber * fiber + len * len));
  }
  return best;
}

}  // namespace codim1
