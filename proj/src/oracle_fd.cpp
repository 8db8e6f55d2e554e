// Cartesian cloaking check.
//
// Unknowns live on the nodes of a uniform (N+1)^2 grid over [-L, L]^2 with
// u = x1 on the boundary. Every square cell is split along its rising
// diagonal into two linear triangles. Where a circular interface crosses a
// triangle edge an extra node is placed on the crossing and shared with the
// neighbouring triangle, and the cut triangle is subdivided along the chord
// between its crossings. The result is a conforming linear element space
// fitted to a polygonal interface, so the curved interfaces cost O(h^2)
// rather than the O(h) of coefficient averaging on unfitted cells. Each
// small triangle uses its region's tensor at its centroid.

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "emt/closed_form.hpp"
#include "emt/oracle.hpp"

namespace emt::oracle {

namespace {

struct Region {
  double r_in;
  double r_out;
  TensorProfile k;
};

struct Point {
  double x, y;
};

Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }

/// Symmetric Cartesian tensor.
struct Tensor2 {
  double xx, xy, yy;

  Point apply(Point v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

using Local = std::array<std::array<double, 3>, 3>;

std::vector<Region> regions_for(const Assemblage& a, double sigma_exterior) {
  const RadialProfile p = profile_for(a);
  std::vector<Region> regions;
  if (p.core_sigma) {
    const double s = *p.core_sigma;
    regions.push_back({0.0, p.r_core, [s](double) { return PolarTensor{s, 0.0, s}; }});
  }
  for (const auto& seg : p.segments) regions.push_back({seg.r_begin, seg.r_end, seg.k});
  regions.push_back({1.0, std::numeric_limits<double>::infinity(),
                     [sigma_exterior](double) {
                       return PolarTensor{sigma_exterior, 0.0, sigma_exterior};
                     }});
  return regions;
}

std::size_t region_of(const std::vector<Region>& regions, double r) {
  for (std::size_t k = 0; k + 1 < regions.size(); ++k)
    if (r < regions[k].r_out) return k;
  return regions.size() - 1;
}

Tensor2 to_cartesian(const PolarTensor& k, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // Q = [e_r e_theta], K_cart = Q K Q^T
  return Tensor2{
      k.k_rr * c * c - 2.0 * k.k_rtheta * c * s + k.k_thetatheta * s * s,
      (k.k_rr - k.k_thetatheta) * c * s + k.k_rtheta * (c * c - s * s),
      k.k_rr * s * s + 2.0 * k.k_rtheta * c * s + k.k_thetatheta * c * c,
  };
}

/// Region tensor at a point, with the radius clamped into the region so a
/// sample taken just across the chord still sees this material.
Tensor2 tensor_at(const Region& region, Point p) {
  const double r = norm(p);
  const double lo = region.r_in;
  const double hi = std::isfinite(region.r_out) ? region.r_out : std::max(r, lo);
  const double span = hi - lo;
  const double rc = std::clamp(r, lo + 1e-9 * span, hi - 1e-9 * span);
  return to_cartesian(region.k(rc), std::atan2(p.y, p.x));
}

/// Gradients of the three barycentric basis functions and the area.
std::array<Point, 3> linear_gradients(const std::array<Point, 3>& v, double& area) {
  const double twice = cross(v[1] - v[0], v[2] - v[0]);
  area = 0.5 * std::abs(twice);
  std::array<Point, 3> g{};
  for (int i = 0; i < 3; ++i) {
    const Point e = v[(i + 2) % 3] - v[(i + 1) % 3];
    g[i] = Point{-e.y / twice, e.x / twice};
  }
  return g;
}

Local plain_element(const std::array<Point, 3>& v, const Tensor2& k) {
  double area = 0.0;
  const auto g = linear_gradients(v, area);
  Local s{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[i][j] = area * dot(g[i], k.apply(g[j]));
  return s;
}

/// Parameter t in [0, 1] where the segment a-b crosses |x| = radius.
double circle_crossing(Point a, Point b, double radius) {
  const Point d = b - a;
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(a, d);
  const double qc = dot(a, a) - radius * radius;
  const double disc = std::sqrt(std::max(0.0, qb * qb - 4.0 * qa * qc));
  double t = (-qb + disc) / (2.0 * qa);
  if (t < 0.0 || t > 1.0) t = (-qb - disc) / (2.0 * qa);
  return std::clamp(t, 0.0, 1.0);
}

struct SubTriangle {
  std::array<std::size_t, 3> nodes;
  std::size_t region;
};

/// Grid triangles split along the interface chords. Nodes are indexed
/// grid-first ((n+1)^2 of them, row-major) followed by the crossing nodes.
class FittedMesh {
 public:
  FittedMesh(int n, double half_width, const std::vector<Region>& regions)
      : n_(n), h_(2.0 * half_width / n), half_width_(half_width), regions_(regions) {
    points_.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    labels_.reserve(points_.capacity());
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        points_.push_back({coord(i), coord(j)});
        labels_.push_back(label(points_.back()));
      }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        split({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
        split({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
      }
  }

  double coord(int i) const { return -half_width_ + i * h_; }
  std::size_t node(int i, int j) const {
    return static_cast<std::size_t>(j) * (n_ + 1) + static_cast<std::size_t>(i);
  }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<SubTriangle>& triangles() const { return triangles_; }

 private:
  // 2k inside region k; 2k + 1 for a node lying (within a tiny band) on the
  // circle between regions k and k + 1. Treating those as on the circle
  // avoids crossings a hair away from a vertex.
  int label(Point p) const {
    const double r = norm(p);
    const double band = 1e-4 * h_;
    for (std::size_t k = 0; k + 1 < regions_.size(); ++k) {
      if (std::abs(r - regions_[k].r_out) < band) return static_cast<int>(2 * k + 1);
      if (r < regions_[k].r_out) return static_cast<int>(2 * k);
    }
    return static_cast<int>(2 * (regions_.size() - 1));
  }

  std::size_t crossing(std::size_t a, std::size_t b, double radius) {
    const auto [first, second] = std::minmax(a, b);
    const std::uint64_t id = (static_cast<std::uint64_t>(first) << 32) | second;
    if (const auto it = crossings_.find(id); it != crossings_.end()) return it->second;
    const Point pa = points_[first];
    const Point pb = points_[second];
    points_.push_back(pa + circle_crossing(pa, pb, radius) * (pb - pa));
    crossings_.emplace(id, points_.size() - 1);
    return points_.size() - 1;
  }

  void add(std::size_t a, std::size_t b, std::size_t c, std::size_t region) {
    triangles_.push_back({{a, b, c}, region});
  }

  std::size_t centroid_region(const std::array<std::size_t, 3>& v) const {
    const Point c = (1.0 / 3.0) * (points_[v[0]] + points_[v[1]] + points_[v[2]]);
    return region_of(regions_, norm(c));
  }

  void split(const std::array<std::size_t, 3>& v) {
    const std::array<int, 3> lab{labels_[v[0]], labels_[v[1]], labels_[v[2]]};
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (int l : lab) {
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    // Whole triangle in one region, possibly touching its boundary circles.
    if (hi - lo <= 1) {
      add(v[0], v[1], v[2], lo % 2 == 0 ? static_cast<std::size_t>(lo / 2)
                          : hi % 2 == 0 ? static_cast<std::size_t>(hi / 2)
                                        : centroid_region(v));
      return;
    }
    // Anything wider than one interface means the grid cannot resolve a
    // layer; sample the centroid there.
    if (hi - lo > 2 || lo % 2 == 1) {
      add(v[0], v[1], v[2], centroid_region(v));
      return;
    }
    const std::size_t inner = static_cast<std::size_t>(lo / 2);
    const double radius = regions_[inner].r_out;
    auto region_at = [&](int i) { return static_cast<std::size_t>(lab[i] / 2); };

    for (int i = 0; i < 3; ++i) {
      if (lab[i] % 2 == 1) {
        // Vertex on the circle, the other two on opposite sides.
        const std::size_t a = v[(i + 1) % 3];
        const std::size_t b = v[(i + 2) % 3];
        const std::size_t d = crossing(a, b, radius);
        add(v[i], a, d, region_at((i + 1) % 3));
        add(v[i], d, b, region_at((i + 2) % 3));
        return;
      }
    }
    int lone = 0;
    for (int i = 0; i < 3; ++i)
      if (lab[i] != lab[(i + 1) % 3] && lab[i] != lab[(i + 2) % 3]) lone = i;
    const std::size_t p0 = v[lone];
    const std::size_t p1 = v[(lone + 1) % 3];
    const std::size_t p2 = v[(lone + 2) % 3];
    const std::size_t d = crossing(p0, p1, radius);
    const std::size_t e = crossing(p0, p2, radius);
    const std::size_t rest = region_at((lone + 1) % 3);
    add(p0, d, e, region_at(lone));
    // Quadrilateral d, p1, p2, e: cut along the shorter diagonal.
    if (norm(points_[d] - points_[p2]) <= norm(points_[p1] - points_[e])) {
      add(d, p1, p2, rest);
      add(d, p2, e, rest);
    } else {
      add(d, p1, e, rest);
      add(p1, p2, e, rest);
    }
  }

  int n_;
  double h_;
  double half_width_;
  const std::vector<Region>& regions_;
  std::vector<Point> points_;
  std::vector<int> labels_;
  std::vector<SubTriangle> triangles_;
  std::unordered_map<std::uint64_t, std::size_t> crossings_;
};

class CloakingProblem {
 public:
  CloakingProblem(const Assemblage& a, const FdOptions& options)
      : assemblage_(a), n_(options.grid_n), half_width_(options.box_half_width),
        h_(2.0 * options.box_half_width / options.grid_n), tol_(options.solver_tol) {}

  double coord(int i) const { return -half_width_ + i * h_; }

  /// Solves for the given exterior conductivity; returns node values, grid
  /// nodes first (row-major over (n+1)^2), then the crossing nodes.
  std::vector<double> solve(double sigma_exterior, const std::vector<double>* guess) {
    const auto regions = regions_for(assemblage_, sigma_exterior);
    const FittedMesh mesh(n_, half_width_, regions);
    const auto& points = mesh.points();

    // Compact numbering of the free nodes.
    std::vector<Eigen::Index> free(points.size(), -1);
    Eigen::Index count = 0;
    for (std::size_t p = 0; p < points.size(); ++p)
      if (!on_boundary(p)) free[p] = count++;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(count) * 7);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);

    for (const auto& tri : mesh.triangles()) {
      const std::array<Point, 3> v{points[tri.nodes[0]], points[tri.nodes[1]],
                                   points[tri.nodes[2]]};
      const Point centroid = (1.0 / 3.0) * (v[0] + v[1] + v[2]);
      const Local e = plain_element(v, tensor_at(regions[tri.region], centroid));
      for (int p = 0; p < 3; ++p) {
        const Eigen::Index row = free[tri.nodes[p]];
        if (row < 0) continue;
        for (int q = 0; q < 3; ++q) {
          const Eigen::Index col = free[tri.nodes[q]];
          if (col < 0)
            rhs(row) -= e[p][q] * points[tri.nodes[q]].x;
          else
            triplets.emplace_back(row, col, e[p][q]);
        }
      }
    }

    Eigen::SparseMatrix<double> a(count, count);
    a.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(tol_);
    cg.setMaxIterations(20 * n_ + 1000);
    cg.compute(a);
    if (cg.info() != Eigen::Success)
      throw Error(ErrorCode::LinearSolveFailure, "preconditioner setup failed");

    Eigen::VectorXd x0(count);
    for (std::size_t p = 0; p < points.size(); ++p)
      if (free[p] >= 0) x0(free[p]) = guess && p < guess->size() ? (*guess)[p] : points[p].x;
    const Eigen::VectorXd x = cg.solveWithGuess(rhs, x0);
    if (cg.info() != Eigen::Success)
      throw Error(ErrorCode::LinearSolveFailure, "conjugate gradients did not converge");
    iterations_ = static_cast<int>(cg.iterations());
    residual_ = cg.error();

    std::vector<double> u(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) u[p] = free[p] < 0 ? points[p].x : x(free[p]);
    return u;
  }

  /// max |u - x1| over nodes with 1.2 <= |x| <= 1.8, scaled by max |x1|
  /// there (1.8).
  double farfield_norm(const std::vector<double>& u) const {
    double worst = 0.0;
    for (int j = 0; j <= n_; ++j) {
      for (int i = 0; i <= n_; ++i) {
        const double r = std::hypot(coord(i), coord(j));
        if (r >= 1.2 && r <= 1.8) worst = std::max(worst, std::abs(u[node(i, j)] - coord(i)));
      }
    }
    return worst / 1.8;
  }

  /// cos(theta) moment of u - x1 on the circle r = 1.5.
  double dipole_moment(const std::vector<double>& u) const {
    constexpr int samples = 512;
    double sum = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / samples;
      const double x = 1.5 * std::cos(theta);
      const double y = 1.5 * std::sin(theta);
      sum += (interpolate(u, x, y) - x) * std::cos(theta);
    }
    return 2.0 * sum / samples;
  }

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == n_ || j == n_; }
  bool on_boundary(std::size_t p) const {
    const auto side = static_cast<std::size_t>(n_ + 1);
    if (p >= side * side) return false;
    return on_boundary(static_cast<int>(p % side), static_cast<int>(p / side));
  }
  std::size_t node(int i, int j) const {
    return static_cast<std::size_t>(j) * (n_ + 1) + static_cast<std::size_t>(i);
  }

  // Linear interpolation on the same triangles the solve used.
  double interpolate(const std::vector<double>& u, double x, double y) const {
    const double gx = (x + half_width_) / h_;
    const double gy = (y + half_width_) / h_;
    const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, n_ - 1);
    const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, n_ - 1);
    const double tx = gx - i;
    const double ty = gy - j;
    const double u00 = u[node(i, j)];
    const double u11 = u[node(i + 1, j + 1)];
    if (tx >= ty) return u00 + tx * (u[node(i + 1, j)] - u00) + ty * (u11 - u[node(i + 1, j)]);
    return u00 + ty * (u[node(i, j + 1)] - u00) + tx * (u11 - u[node(i, j + 1)]);
  }

  Assemblage assemblage_;
  int n_;
  double half_width_;
  double h_;
  double tol_;
  int iterations_ = 0;
  double residual_ = 0.0;
};

}  // namespace

FdResult fd_solve(const Assemblage& a, const FdOptions& options) {
  validate(a);
  if (dimension(a) != 2)
    throw Error(ErrorCode::MethodGeometryMismatch, "the Cartesian check is planar only");
  if (options.grid_n < 64) throw Error(ErrorCode::GridTooCoarse, "grid_n must be >= 64");
  if (!(options.box_half_width >= 2.0))
    throw Error(ErrorCode::Usage, "box_half_width must be >= 2");

  const double closed = closed_form::effective_conductivity(a).sigma_star;
  const double exterior = options.sigma_star_scale * closed;
  CloakingProblem problem(a, options);
  const auto u = problem.solve(exterior, nullptr);

  FdResult result{problem.farfield_norm(u), exterior, std::nullopt, problem.iterations(),
                  problem.residual()};
  if (options.estimate_sigma) {
    // One secant step on the exterior dipole moment.
    const double shifted = exterior * (1.0 + 1e-3);
    const double m0 = problem.dipole_moment(u);
    const auto u1 = problem.solve(shifted, &u);
    const double m1 = problem.dipole_moment(u1);
    if (m1 != m0) result.sigma_star_numeric = exterior - m0 * (shifted - exterior) / (m1 - m0);
  }
  return result;
}

}  // namespace emt::oracle
