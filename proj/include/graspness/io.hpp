#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graspness/core.hpp"
#include "graspness/engine.hpp"
#include "graspness/gripper.hpp"
#include "graspness/quality.hpp"
#include "graspness/sampling.hpp"
#include "graspness/scene.hpp"

namespace graspness {

/// Raised for unreadable or malformed files.
class IoError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class PlyFormat { BinaryLittleEndian, Ascii };

/// Vertex properties written: x y z, then nx ny nz when the cloud has
/// normals, objectness (uchar) and object_id (int) when present, and
/// graspness (float) when the cloud has that scalar channel.
std::string ply_bytes(const PointCloud& cloud, PlyFormat format = PlyFormat::BinaryLittleEndian);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud,
               PlyFormat format = PlyFormat::BinaryLittleEndian);
/// Reads ascii and binary little-endian vertex PLY files. Unknown scalar
/// properties land in `scalars`.
PointCloud read_ply(const std::filesystem::path& path);
PointCloud parse_ply(const std::string& bytes);

/// View-graspness sidecar: "GSNV1", u32 N, u32 V, then N*V little-endian
/// float32 values, row-major.
std::string view_sidecar_bytes(const Eigen::MatrixXd& view);
void write_view_sidecar(const std::filesystem::path& path, const Eigen::MatrixXd& view);
Eigen::MatrixXd read_view_sidecar(const std::filesystem::path& path);

/// Scene description as stored in scene files.
struct SceneDescription {
  std::vector<ObjectInstance> instances;
  Table table;
  std::optional<CameraModel> camera;
  double spacing = 0.005;
};

std::string scene_to_json(const SceneDescription& scene);
SceneDescription scene_from_json(const std::string& text);
SceneDescription load_scene_file(const std::filesystem::path& path);
Scene assemble(const SceneDescription& description, std::uint64_t seed);

/// Cylinder grouping parameters.
struct GroupConfig {
  double radius = 0.05;
  double height_min = -0.02;
  double height_max = 0.04;
  std::size_t points = 16;

  void validate() const;
};

struct Config {
  GridConfig grid;
  GripperModel gripper;
  QualityConfig quality;
  SamplingConfig sampling;
  EngineConfig engine;
  GroupConfig group;
  std::uint64_t seed = 0;

  GraspnessParams graspness() const { return {grid, gripper, quality, engine.aggregation}; }
  void validate() const;
};

/// Parses TOML text. Unknown tables or keys and out-of-range values raise
/// InvalidArgument.
Config parse_config(const std::string& text);
Config load_config_file(const std::filesystem::path& path);

/// Grasp list CSV: center, view, angle, depth, width, score, then the jaw
/// offset along the closing axis and the object id.
std::string grasps_to_csv(std::span<const GraspPose> grasps);
std::vector<GraspPose> grasps_from_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace graspness
