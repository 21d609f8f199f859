#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "graspness/core.hpp"

namespace graspness {

struct Box {
  Vec3 half_extents;
};

struct Sphere {
  double radius;
};

/// Axis along local z.
struct Cylinder {
  double radius;
  double half_height;
};

/// Triangle mesh with counter-clockwise (outward) winding.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

using Shape = std::variant<Box, Sphere, Cylinder, TriMesh>;

struct SdfSample {
  double distance;  // negative inside
  Vec3 normal;      // outward unit normal
};

/// Throws InvalidArgument on non-positive dimensions or malformed meshes.
void validate_shape(const Shape& shape);

/// Closed two-manifold check: every edge shared by exactly two triangles
/// with opposite orientation, and V - E + F == 2 per connected surface of
/// genus zero (checked as V - E + F even and > 0).
bool is_watertight(const TriMesh& mesh);

/// Signed distance and outward normal of `point` given in the shape frame.
/// Points equidistant from several box faces resolve to +z, then +y, then +x.
SdfSample sdf_and_normal(const Shape& shape, const Vec3& point);

double surface_area(const Shape& shape);

/// Approximately uniform surface samples at `spacing` with analytic
/// normals. Primitives use stratified lattices; meshes use area-weighted
/// random sampling driven by `seed`.
PointCloud sample_surface(const Shape& shape, double spacing, std::uint64_t seed);

/// Closed box mesh (12 triangles), handy for mesh-backed objects.
TriMesh make_box_mesh(const Vec3& half_extents);

}  // namespace graspness
