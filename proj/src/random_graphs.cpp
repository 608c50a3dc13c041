#include "particleforge/random_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "particleforge/rng.hpp"

namespace particleforge {

namespace {

std::uint64_t coordinate_key(const std::vector<std::int64_t>& coords) {
  std::uint64_t k = 0x9e3779b97f4a7c15ULL;
  for (std::int64_t c : coords) k = rng::mix64(k ^ rng::zigzag(c));
  return k;
}

}  // namespace

double PointSet::distance(VertexId u, VertexId v) const {
  const auto& a = points.at(u);
  const auto& b = points.at(v);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::sqrt(d2);
}

PointSet integer_lattice(int dim, int radius) {
  if (dim < 1 || radius < 0) throw std::invalid_argument("integer_lattice: bad parameters");
  PointSet ps;
  std::vector<std::int64_t> c(dim, -radius);
  for (;;) {
    std::vector<double> coords(c.begin(), c.end());
    ps.points.push_back(std::move(coords));
    ps.keys.push_back(coordinate_key(c));
    int i = 0;
    for (; i < dim; ++i) {
      if (++c[i] <= radius) break;
      c[i] = -radius;
    }
    if (i == dim) break;
  }
  return ps;
}

PointSet lattice_points(const std::vector<std::vector<double>>& basis, double half_extent) {
  const std::size_t d = basis.size();
  if (d == 0 || half_extent < 0.0) throw std::invalid_argument("lattice_points: bad parameters");
  for (const auto& col : basis) {
    if (col.size() != d) throw std::invalid_argument("lattice_points: basis must be square");
  }

  // Conservative bound on integer coefficients: invert the basis by
  // Gaussian elimination and map the box corners.
  std::vector<std::vector<double>> a(d, std::vector<double>(2 * d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a[i][j] = basis[j][i];  // column-major basis
    a[i][d + i] = 1.0;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < d; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      throw std::invalid_argument("lattice_points: singular basis");
    }
    std::swap(a[col], a[pivot]);
    double piv = a[col][col];
    for (double& x : a[col]) x /= piv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col) continue;
      double f = a[r][col];
      for (std::size_t j = 0; j < 2 * d; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<std::int64_t> bound(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    double row_abs = 0.0;
    for (std::size_t j = 0; j < d; ++j) row_abs += std::abs(a[i][d + j]);
    bound[i] = static_cast<std::int64_t>(std::floor(row_abs * half_extent + 1.0));
  }

  PointSet ps;
  std::vector<std::int64_t> m(d);
  for (std::size_t i = 0; i < d; ++i) m[i] = -bound[i];
  for (;;) {
    std::vector<double> pt(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) pt[i] += basis[j][i] * static_cast<double>(m[j]);
    }
    bool inside = true;
    for (double x : pt) {
      if (std::abs(x) > half_extent + 1e-9) {
        inside = false;
        break;
      }
    }
    if (inside) {
      ps.points.push_back(std::move(pt));
      ps.keys.push_back(coordinate_key(m));
    }
    std::size_t i = 0;
    for (; i < d; ++i) {
      if (++m[i] <= bound[i]) break;
      m[i] = -bound[i];
    }
    if (i == d) break;
  }
  return ps;
}

CouplingField CouplingField::power_law(double exponent, double p, double beta) {
  CouplingField f;
  f.j = [exponent](const PointSet& pts, VertexId u, VertexId v) {
    double d = pts.distance(u, v);
    return d > 0.0 ? std::pow(d, -exponent) : 0.0;
  };
  f.p = p;
  f.beta = beta;
  return f;
}

double lrp_edge_uniform(const PointSet& pts, std::uint64_t seed, VertexId u, VertexId v) {
  std::uint64_t ku = pts.keys.at(u);
  std::uint64_t kv = pts.keys.at(v);
  rng::Stream stream(seed, rng::Lane::kLrpEdge, std::min(ku, kv), std::max(ku, kv));
  return stream.uniform(0);
}

bool lrp_edge(const PointSet& pts, const CouplingField& field, std::uint64_t seed, VertexId u,
              VertexId v) {
  if (u == v) return false;
  double prob = 1.0 - std::exp(-field.beta * field.j(pts, u, v));
  return lrp_edge_uniform(pts, seed, u, v) < prob;
}

Graph sample_lrp(const PointSet& pts, const CouplingField& field, std::uint64_t seed) {
  GraphBuilder b(pts.size());
  for (VertexId u = 0; u < pts.size(); ++u) {
    for (VertexId v = u + 1; v < pts.size(); ++v) {
      if (lrp_edge(pts, field, seed, u, v)) b.add_edge(u, v);
    }
  }
  return b.finish();
}

RadiusLaw RadiusLaw::uniform(double upper) {
  if (!(upper >= 0.0)) throw std::invalid_argument("RadiusLaw::uniform: bad upper end");
  return RadiusLaw{Kind::kUniform, upper, std::max(upper, 1.0)};
}

RadiusLaw RadiusLaw::constant(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("RadiusLaw::constant: bad value");
  return RadiusLaw{Kind::kConstant, value, std::max(value, 1.0)};
}

double RadiusLaw::sample(std::uint64_t seed, std::uint64_t key) const {
  switch (kind) {
    case Kind::kConstant:
      return param;
    case Kind::kUniform:
    default:
      return param * rng::Stream(seed, rng::Lane::kGrgRadius, key).uniform(0);
  }
}

bool RadiusLaw::validate_moments(std::uint64_t seed, int replicas) const {
  for (int n = 1; n <= 6; ++n) {
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < replicas; ++r) {
      double z = sample(seed, static_cast<std::uint64_t>(r) + 1);
      double zn = std::pow(z, n);
      sum += zn;
      sum_sq += zn * zn;
    }
    double mean = sum / replicas;
    double var = std::max(0.0, sum_sq / replicas - mean * mean);
    double sigma = std::sqrt(var / replicas);
    if (mean > std::pow(moment_k, n) + 3.0 * sigma) return false;
  }
  return true;
}

std::vector<double> grg_radii(const PointSet& pts, const RadiusLaw& law, std::uint64_t seed) {
  std::vector<double> r(pts.size());
  for (VertexId v = 0; v < pts.size(); ++v) r[v] = law.sample(seed, pts.keys[v]);
  return r;
}

Graph sample_grg(const PointSet& pts, const RadiusLaw& law, std::uint64_t seed) {
  std::vector<double> r = grg_radii(pts, law, seed);
  GraphBuilder b(pts.size());
  for (VertexId u = 0; u < pts.size(); ++u) {
    for (VertexId v = u + 1; v < pts.size(); ++v) {
      if (pts.distance(u, v) < std::min(r[u], r[v])) b.add_edge(u, v);
    }
  }
  return b.finish();
}

double p_sum(const PointSet& pts, const CouplingField& field) {
  if (!(field.p > 1.0)) throw std::invalid_argument("p_sum: require p > 1");
  double sup = 0.0;
  for (VertexId u = 0; u < pts.size(); ++u) {
    double s = 0.0;
    for (VertexId v = 0; v < pts.size(); ++v) {
      if (v == u) continue;
      s += std::pow(field.j(pts, u, v), 1.0 / field.p);
    }
    sup = std::max(sup, s);
  }
  return sup;
}

double s_sum(const PointSet& pts, double s) {
  if (!(s > 1.0)) throw std::invalid_argument("s_sum: require s > 1");
  double sup = 0.0;
  for (VertexId u = 0; u < pts.size(); ++u) {
    double acc = 0.0;
    for (VertexId v = 0; v < pts.size(); ++v) {
      if (v == u) continue;
      acc += std::pow(pts.distance(u, v), -s);
    }
    sup = std::max(sup, acc);
  }
  return sup;
}

DeloneReport delone_check(const PointSet& pts, double r_pack, double r_cov, int probes,
                          std::uint64_t seed) {
  if (pts.size() == 0) throw std::invalid_argument("delone_check: empty point set");
  DeloneReport rep;
  rep.probes = probes;

  double min_d = std::numeric_limits<double>::infinity();
  for (VertexId u = 0; u < pts.size(); ++u) {
    for (VertexId v = u + 1; v < pts.size(); ++v) {
      min_d = std::min(min_d, pts.distance(u, v));
    }
  }
  rep.min_pairwise_distance = pts.size() > 1 ? min_d : std::numeric_limits<double>::infinity();
  rep.uniformly_discrete = rep.min_pairwise_distance >= 2.0 * r_pack;

  // Probe centers confined to the window inradius so full r_cov balls stay
  // inside the sampled region.
  std::size_t dim = pts.points[0].size();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const auto& p : pts.points) {
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  rng::Sequence probe(seed, rng::Lane::kProbe);
  double worst = 0.0;
  bool dense = true;
  for (int q = 0; q < probes; ++q) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double a = lo[i] + r_cov;
      double b = hi[i] - r_cov;
      x[i] = a <= b ? a + (b - a) * probe.next_uniform() : 0.5 * (lo[i] + hi[i]);
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& p : pts.points) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double d = p[i] - x[i];
        d2 += d * d;
      }
      nearest = std::min(nearest, std::sqrt(d2));
    }
    worst = std::max(worst, nearest);
    if (nearest > r_cov) dense = false;
  }
  rep.worst_probe_gap = worst;
  rep.relatively_dense = dense;
  return rep;
}

}  // namespace particleforge
