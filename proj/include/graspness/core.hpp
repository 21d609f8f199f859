#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace graspness {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// Object-to-world (or camera-to-world) placement.
using RigidTransform = Eigen::Isometry3d;

/// Raised when a precondition on the inputs is violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is called on an object in the wrong state
/// (e.g. querying an empty index).
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an internal invariant does not hold.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A direction with Euclidean norm 1 (within 1e-9). Only constructible by
/// normalization so a stored value always honours the invariant.
class UnitVec3 {
 public:
  UnitVec3() : v_(Vec3::UnitZ()) {}

  static UnitVec3 normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw InvalidArgument("cannot normalize a zero or non-finite vector");
    }
    return UnitVec3(v / n);
  }
  /// Wraps an already unit-length vector; checks the norm.
  static UnitVec3 from_unit(const Vec3& v, double tol = 1e-9) {
    if (std::abs(v.norm() - 1.0) > tol) {
      throw InvalidArgument("vector is not unit length");
    }
    return UnitVec3(v);
  }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double dot(const Vec3& o) const { return v_.dot(o); }
  UnitVec3 operator-() const { return UnitVec3(-v_); }

 private:
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// True when the linear part is orthonormal with determinant +1.
inline bool is_rigid(const RigidTransform& t, double tol = 1e-9) {
  const Mat3 r = t.linear();
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

inline RigidTransform make_transform(const Mat3& rotation, const Vec3& translation) {
  RigidTransform t = RigidTransform::Identity();
  t.linear() = rotation;
  t.translation() = translation;
  return t;
}

/// Point positions plus optional per-point attributes. Every non-empty
/// attribute has exactly one entry per position.
struct PointCloud {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;               // empty when the cloud has no normals
  std::vector<std::uint8_t> normal_valid;  // empty means every normal is valid
  std::vector<int> object_id;              // -1 marks background
  std::vector<std::uint8_t> objectness;    // 1 on object surfaces
  std::map<std::string, std::vector<double>, std::less<>> scalars;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  bool has_normals() const { return !normals.empty(); }
  bool has_object_id() const { return !object_id.empty(); }

  bool normal_is_valid(std::size_t i) const {
    return normal_valid.empty() || normal_valid[i] != 0;
  }

  /// Throws InvalidArgument if a channel length or the objectness/object_id
  /// coupling is inconsistent.
  void validate() const;
};

inline void PointCloud::validate() const {
  const std::size_t n = positions.size();
  auto check = [n](std::size_t len, const char* what) {
    if (len != 0 && len != n) {
      throw InvalidArgument(std::string("channel '") + what + "' length does not match positions");
    }
  };
  check(normals.size(), "normals");
  check(normal_valid.size(), "normal_valid");
  check(object_id.size(), "object_id");
  check(objectness.size(), "objectness");
  for (const auto& [name, values] : scalars) check(values.size(), name.c_str());
  if (!objectness.empty() && !object_id.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((objectness[i] == 0) != (object_id[i] < 0)) {
        throw InvalidArgument("objectness and object_id disagree at point " + std::to_string(i));
      }
    }
  }
}

}  // namespace graspness
