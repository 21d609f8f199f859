#include "graspness/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "graspness/point_sampling.hpp"

namespace graspness {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign_or_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

SdfSample box_sdf(const Box& box, const Vec3& p) {
  const Vec3 q = p.cwiseAbs() - box.half_extents;
  const double max_q = q.maxCoeff();
  if (max_q > 0.0) {
    Vec3 g = q.cwiseMax(0.0);
    for (int i = 0; i < 3; ++i) g[i] *= sign_or_plus(p[i]);
    const double d = g.norm();
    return {d, g / d};
  }
  // Inside or on the surface: nearest face, ties resolved z > y > x.
  int axis = 2;
  for (int i : {1, 0}) {
    if (q[i] > q[axis]) axis = i;
  }
  Vec3 n = Vec3::Zero();
  n[axis] = sign_or_plus(p[axis]);
  return {max_q, n};
}

SdfSample sphere_sdf(const Sphere& s, const Vec3& p) {
  const double len = p.norm();
  const Vec3 n = len > 0.0 ? Vec3(p / len) : Vec3::UnitZ();
  return {len - s.radius, n};
}

SdfSample cylinder_sdf(const Cylinder& c, const Vec3& p) {
  const double radial = std::hypot(p.x(), p.y());
  const Vec3 u = radial > 0.0 ? Vec3(p.x() / radial, p.y() / radial, 0.0) : Vec3::UnitX();
  const double dr = radial - c.radius;
  const double dz = std::abs(p.z()) - c.half_height;
  const Vec3 axial(0.0, 0.0, sign_or_plus(p.z()));
  if (dr > 0.0 || dz > 0.0) {
    const double er = std::max(dr, 0.0);
    const double ez = std::max(dz, 0.0);
    const Vec3 g = er * u + ez * axial;
    return {std::hypot(er, ez), g.normalized()};
  }
  if (dz > dr) return {dz, axial};
  return {dr, u};
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Signed solid angle of triangle abc seen from p (Van Oosterom & Strackee).
double solid_angle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ra = a - p, rb = b - p, rc = c - p;
  const double la = ra.norm(), lb = rb.norm(), lc = rc.norm();
  const double num = ra.dot(rb.cross(rc));
  const double den = la * lb * lc + ra.dot(rb) * lc + rb.dot(rc) * la + rc.dot(ra) * lb;
  return 2.0 * std::atan2(num, den);
}

Vec3 face_normal(const TriMesh& m, const std::array<int, 3>& t) {
  const Vec3& a = m.vertices[static_cast<std::size_t>(t[0])];
  const Vec3& b = m.vertices[static_cast<std::size_t>(t[1])];
  const Vec3& c = m.vertices[static_cast<std::size_t>(t[2])];
  return (b - a).cross(c - a).normalized();
}

double triangle_area(const TriMesh& m, const std::array<int, 3>& t) {
  const Vec3& a = m.vertices[static_cast<std::size_t>(t[0])];
  const Vec3& b = m.vertices[static_cast<std::size_t>(t[1])];
  const Vec3& c = m.vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * (b - a).cross(c - a).norm();
}

SdfSample mesh_sdf(const TriMesh& m, const Vec3& p) {
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  double winding = 0.0;
  for (std::size_t i = 0; i < m.triangles.size(); ++i) {
    const auto& t = m.triangles[i];
    const Vec3& a = m.vertices[static_cast<std::size_t>(t[0])];
    const Vec3& b = m.vertices[static_cast<std::size_t>(t[1])];
    const Vec3& c = m.vertices[static_cast<std::size_t>(t[2])];
    const double d2 = (closest_point_on_triangle(p, a, b, c) - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
    winding += solid_angle(p, a, b, c);
  }
  const bool inside = std::abs(winding / (4.0 * kPi)) > 0.5;
  const double d = std::sqrt(best_d2);
  return {inside ? -d : d, face_normal(m, m.triangles[best])};
}

void append(PointCloud& cloud, const Vec3& p, const Vec3& n) {
  cloud.positions.push_back(p);
  cloud.normals.push_back(n);
}

int cells(double length, double spacing) {
  return std::max(1, static_cast<int>(std::lround(length / spacing)));
}

void sample_box(const Box& box, double s, PointCloud& out) {
  const Vec3& h = box.half_extents;
  for (int axis = 0; axis < 3; ++axis) {
    const int b = (axis + 1) % 3, c = (axis + 2) % 3;
    const int nb = cells(2.0 * h[b], s), nc = cells(2.0 * h[c], s);
    for (double side : {1.0, -1.0}) {
      Vec3 n = Vec3::Zero();
      n[axis] = side;
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nc; ++j) {
          Vec3 p;
          p[axis] = side * h[axis];
          p[b] = -h[b] + (i + 0.5) * 2.0 * h[b] / nb;
          p[c] = -h[c] + (j + 0.5) * 2.0 * h[c] / nc;
          append(out, p, n);
        }
      }
    }
  }
}

void sample_sphere(const Sphere& sphere, double s, PointCloud& out) {
  const double area = 4.0 * kPi * sphere.radius * sphere.radius;
  const int n = std::max(1, static_cast<int>(std::lround(area / (s * s))));
  for (const Vec3& d : fibonacci_sphere<double>(n)) append(out, sphere.radius * d, d);
}

void sample_cylinder(const Cylinder& cyl, double s, PointCloud& out) {
  const double r = cyl.radius, hh = cyl.half_height;
  const int n_theta = std::max(3, cells(2.0 * kPi * r, s));
  const int n_z = cells(2.0 * hh, s);
  for (int i = 0; i < n_theta; ++i) {
    const double th = 2.0 * kPi * (i + 0.5) / n_theta;
    const Vec3 u(std::cos(th), std::sin(th), 0.0);
    for (int j = 0; j < n_z; ++j) {
      const double z = -hh + (j + 0.5) * 2.0 * hh / n_z;
      append(out, Vec3(r * u.x(), r * u.y(), z), u);
    }
  }
  const int n_rings = cells(r, s);
  for (double side : {1.0, -1.0}) {
    for (int k = 0; k < n_rings; ++k) {
      const double rho = (k + 0.5) * r / n_rings;
      const int m = cells(2.0 * kPi * rho, s);
      for (int i = 0; i < m; ++i) {
        const double th = 2.0 * kPi * (i + 0.5) / m;
        append(out, Vec3(rho * std::cos(th), rho * std::sin(th), side * hh), Vec3(0.0, 0.0, side));
      }
    }
  }
}

void sample_mesh(const TriMesh& mesh, double s, std::uint64_t seed, PointCloud& out) {
  std::vector<double> cdf(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    total += triangle_area(mesh, mesh.triangles[i]);
    cdf[i] = total;
  }
  const int n = std::max(1, static_cast<int>(std::lround(total / (s * s))));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    const double pick = unit(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), pick);
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    const auto& tri = mesh.triangles[t];
    const double r1 = std::sqrt(unit(rng)), r2 = unit(rng);
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
    append(out, (1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c, face_normal(mesh, tri));
  }
}

}  // namespace

void validate_shape(const Shape& shape) {
  std::visit(Overloaded{
                 [](const Box& b) {
                   if (!(b.half_extents.minCoeff() > 0.0)) throw InvalidArgument("box half extents must be positive");
                 },
                 [](const Sphere& s) {
                   if (!(s.radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
                 },
                 [](const Cylinder& c) {
                   if (!(c.radius > 0.0) || !(c.half_height > 0.0)) {
                     throw InvalidArgument("cylinder dimensions must be positive");
                   }
                 },
                 [](const TriMesh& m) {
                   if (m.triangles.empty()) throw InvalidArgument("mesh has no triangles");
                   for (const auto& t : m.triangles) {
                     for (int v : t) {
                       if (v < 0 || static_cast<std::size_t>(v) >= m.vertices.size()) {
                         throw InvalidArgument("mesh triangle references a missing vertex");
                       }
                     }
                     if (!(triangle_area(m, t) > 0.0)) throw InvalidArgument("mesh has a degenerate triangle");
                   }
                 },
             },
             shape);
}

bool is_watertight(const TriMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
  }
  std::size_t undirected = 0;
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    const auto twin = directed.find({edge.second, edge.first});
    if (twin == directed.end()) return false;
    if (edge.first < edge.second) ++undirected;
  }

  // Union-find over referenced vertices to count connected surfaces.
  std::vector<int> parent(mesh.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<char> used(mesh.vertices.size(), 0);
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      used[static_cast<std::size_t>(t[e])] = 1;
      parent[static_cast<std::size_t>(find(t[e]))] = find(t[(e + 1) % 3]);
    }
  }
  long vertices = 0, components = 0;
  for (std::size_t v = 0; v < used.size(); ++v) {
    if (!used[v]) continue;
    ++vertices;
    if (find(static_cast<int>(v)) == static_cast<int>(v)) ++components;
  }
  const long euler = vertices - static_cast<long>(undirected) + static_cast<long>(mesh.triangles.size());
  return euler == 2 * components;
}

SdfSample sdf_and_normal(const Shape& shape, const Vec3& point) {
  return std::visit(Overloaded{
                        [&](const Box& b) { return box_sdf(b, point); },
                        [&](const Sphere& s) { return sphere_sdf(s, point); },
                        [&](const Cylinder& c) { return cylinder_sdf(c, point); },
                        [&](const TriMesh& m) { return mesh_sdf(m, point); },
                    },
                    shape);
}

double surface_area(const Shape& shape) {
  return std::visit(Overloaded{
                        [](const Box& b) {
                          const Vec3 e = 2.0 * b.half_extents;
                          return 2.0 * (e.x() * e.y() + e.y() * e.z() + e.z() * e.x());
                        },
                        [](const Sphere& s) { return 4.0 * kPi * s.radius * s.radius; },
                        [](const Cylinder& c) {
                          return 2.0 * kPi * c.radius * (2.0 * c.half_height) + 2.0 * kPi * c.radius * c.radius;
                        },
                        [](const TriMesh& m) {
                          double a = 0.0;
                          for (const auto& t : m.triangles) a += triangle_area(m, t);
                          return a;
                        },
                    },
                    shape);
}

PointCloud sample_surface(const Shape& shape, double spacing, std::uint64_t seed) {
  if (!(spacing > 0.0)) throw InvalidArgument("sample_surface: spacing must be positive");
  validate_shape(shape);
  PointCloud out;
  std::visit(Overloaded{
                 [&](const Box& b) { sample_box(b, spacing, out); },
                 [&](const Sphere& s) { sample_sphere(s, spacing, out); },
                 [&](const Cylinder& c) { sample_cylinder(c, spacing, out); },
                 [&](const TriMesh& m) { sample_mesh(m, spacing, seed, out); },
             },
             shape);
  return out;
}

TriMesh make_box_mesh(const Vec3& h) {
  TriMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.emplace_back((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(), (i & 4) ? h.z() : -h.z());
  }
  m.triangles = {{0, 2, 1}, {1, 2, 3},   // -z
                 {4, 5, 6}, {5, 7, 6},   // +z
                 {0, 1, 4}, {1, 5, 4},   // -y
                 {2, 6, 3}, {3, 6, 7},   // +y
                 {0, 4, 2}, {2, 4, 6},   // -x
                 {1, 3, 5}, {3, 7, 5}};  // +x
  return m;
}

}  // namespace graspness
