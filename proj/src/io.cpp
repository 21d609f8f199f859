#include "graspness/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>
#include <tomlplusplus/toml.hpp>

namespace graspness {

static_assert(std::endian::native == std::endian::little, "binary writers assume a little-endian host");

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------- PLY

namespace {

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

PlyType ply_type(const std::string& name) {
  if (name == "char" || name == "int8") return PlyType::Int8;
  if (name == "uchar" || name == "uint8") return PlyType::UInt8;
  if (name == "short" || name == "int16") return PlyType::Int16;
  if (name == "ushort" || name == "uint16") return PlyType::UInt16;
  if (name == "int" || name == "int32") return PlyType::Int32;
  if (name == "uint" || name == "uint32") return PlyType::UInt32;
  if (name == "float" || name == "float32") return PlyType::Float32;
  if (name == "double" || name == "float64") return PlyType::Float64;
  throw IoError("ply: unsupported property type '" + name + "'");
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::Int8:
    case PlyType::UInt8: return 1;
    case PlyType::Int16:
    case PlyType::UInt16: return 2;
    case PlyType::Int32:
    case PlyType::UInt32:
    case PlyType::Float32: return 4;
    case PlyType::Float64: return 8;
  }
  return 0;
}

template <typename T>
double get(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return static_cast<double>(v);
}

double decode(PlyType t, const char* p) {
  switch (t) {
    case PlyType::Int8: return get<std::int8_t>(p);
    case PlyType::UInt8: return get<std::uint8_t>(p);
    case PlyType::Int16: return get<std::int16_t>(p);
    case PlyType::UInt16: return get<std::uint16_t>(p);
    case PlyType::Int32: return get<std::int32_t>(p);
    case PlyType::UInt32: return get<std::uint32_t>(p);
    case PlyType::Float32: return get<float>(p);
    case PlyType::Float64: return get<double>(p);
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type;
};

}  // namespace

std::string ply_bytes(const PointCloud& cloud, PlyFormat format) {
  cloud.validate();
  const auto g = cloud.scalars.find("graspness");
  const bool has_g = g != cloud.scalars.end();
  std::ostringstream header;
  header << "ply\n"
         << (format == PlyFormat::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
         << "element vertex " << cloud.size() << "\n"
         << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_normals()) header << "property float nx\nproperty float ny\nproperty float nz\n";
  if (!cloud.objectness.empty()) header << "property uchar objectness\n";
  if (cloud.has_object_id()) header << "property int object_id\n";
  if (has_g) header << "property float graspness\n";
  header << "end_header\n";
  std::string out = header.str();

  if (format == PlyFormat::Ascii) {
    std::ostringstream body;
    body << std::setprecision(9);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Vec3& p = cloud.positions[i];
      body << static_cast<float>(p.x()) << ' ' << static_cast<float>(p.y()) << ' ' << static_cast<float>(p.z());
      if (cloud.has_normals()) {
        const Vec3& n = cloud.normals[i];
        body << ' ' << static_cast<float>(n.x()) << ' ' << static_cast<float>(n.y()) << ' ' << static_cast<float>(n.z());
      }
      if (!cloud.objectness.empty()) body << ' ' << static_cast<int>(cloud.objectness[i]);
      if (cloud.has_object_id()) body << ' ' << cloud.object_id[i];
      if (has_g) body << ' ' << static_cast<float>(g->second[i]);
      body << '\n';
    }
    out += body.str();
    return out;
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    put(out, static_cast<float>(p.x()));
    put(out, static_cast<float>(p.y()));
    put(out, static_cast<float>(p.z()));
    if (cloud.has_normals()) {
      const Vec3& n = cloud.normals[i];
      put(out, static_cast<float>(n.x()));
      put(out, static_cast<float>(n.y()));
      put(out, static_cast<float>(n.z()));
    }
    if (!cloud.objectness.empty()) put(out, cloud.objectness[i]);
    if (cloud.has_object_id()) put(out, static_cast<std::int32_t>(cloud.object_id[i]));
    if (has_g) put(out, static_cast<float>(g->second[i]));
  }
  return out;
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud, PlyFormat format) {
  write_file(path, ply_bytes(cloud, format));
}

PointCloud parse_ply(const std::string& bytes) {
  std::size_t pos = 0;
  auto next_line = [&]() {
    const std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) throw IoError("ply: truncated header");
    std::string line = bytes.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    return line;
  };
  if (next_line() != "ply") throw IoError("ply: missing magic");
  bool ascii = false;
  std::size_t count = 0;
  bool in_vertex = false, seen_vertex = false;
  std::vector<PlyProperty> props;
  for (;;) {
    const std::string line = next_line();
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "end_header") break;
    if (word == "comment" || word == "obj_info" || word.empty()) continue;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii") {
        ascii = true;
      } else if (fmt != "binary_little_endian") {
        throw IoError("ply: unsupported format '" + fmt + "'");
      }
    } else if (word == "element") {
      std::string name;
      long long n = -1;
      ls >> name >> n;
      if (name == "vertex") {
        if (n < 0) throw IoError("ply: bad vertex count");
        count = static_cast<std::size_t>(n);
        in_vertex = seen_vertex = true;
      } else {
        if (n != 0) throw IoError("ply: only vertex elements are supported");
        in_vertex = false;
      }
    } else if (word == "property") {
      std::string type, name;
      ls >> type;
      if (type == "list") throw IoError("ply: list properties are not supported");
      ls >> name;
      if (in_vertex) props.push_back({name, ply_type(type)});
    } else {
      throw IoError("ply: unexpected header line '" + line + "'");
    }
  }
  if (!seen_vertex) throw IoError("ply: no vertex element");

  std::vector<std::vector<double>> columns(props.size(), std::vector<double>(count));
  if (ascii) {
    std::istringstream body(bytes.substr(pos));
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t k = 0; k < props.size(); ++k) {
        if (!(body >> columns[k][i])) throw IoError("ply: truncated ascii body");
      }
    }
  } else {
    std::size_t stride = 0;
    for (const auto& p : props) stride += ply_size(p.type);
    if (bytes.size() - pos < stride * count) throw IoError("ply: truncated binary body");
    const char* base = bytes.data() + pos;
    for (std::size_t i = 0; i < count; ++i) {
      const char* row = base + i * stride;
      for (std::size_t k = 0; k < props.size(); ++k) {
        columns[k][i] = decode(props[k].type, row);
        row += ply_size(props[k].type);
      }
    }
  }

  auto column = [&](const std::string& name) -> const std::vector<double>* {
    for (std::size_t k = 0; k < props.size(); ++k) {
      if (props[k].name == name) return &columns[k];
    }
    return nullptr;
  };
  const auto *x = column("x"), *y = column("y"), *z = column("z");
  if (!x || !y || !z) throw IoError("ply: vertex positions missing");
  PointCloud cloud;
  cloud.positions.resize(count);
  for (std::size_t i = 0; i < count; ++i) cloud.positions[i] = Vec3((*x)[i], (*y)[i], (*z)[i]);
  const auto *nx = column("nx"), *ny = column("ny"), *nz = column("nz");
  if (nx && ny && nz) {
    cloud.normals.resize(count);
    for (std::size_t i = 0; i < count; ++i) cloud.normals[i] = Vec3((*nx)[i], (*ny)[i], (*nz)[i]);
  }
  if (const auto* o = column("objectness")) {
    for (double v : *o) cloud.objectness.push_back(static_cast<std::uint8_t>(v));
  }
  if (const auto* id = column("object_id")) {
    for (double v : *id) cloud.object_id.push_back(static_cast<int>(v));
  }
  for (std::size_t k = 0; k < props.size(); ++k) {
    const std::string& n = props[k].name;
    if (n == "x" || n == "y" || n == "z" || n == "nx" || n == "ny" || n == "nz" || n == "objectness" ||
        n == "object_id") {
      continue;
    }
    cloud.scalars[n] = columns[k];
  }
  cloud.validate();
  return cloud;
}

PointCloud read_ply(const std::filesystem::path& path) { return parse_ply(read_file(path)); }

// ---------------------------------------------------------------- sidecar

std::string view_sidecar_bytes(const Eigen::MatrixXd& view) {
  std::string out = "GSNV1";
  put(out, static_cast<std::uint32_t>(view.rows()));
  put(out, static_cast<std::uint32_t>(view.cols()));
  for (Eigen::Index i = 0; i < view.rows(); ++i) {
    for (Eigen::Index j = 0; j < view.cols(); ++j) put(out, static_cast<float>(view(i, j)));
  }
  return out;
}

void write_view_sidecar(const std::filesystem::path& path, const Eigen::MatrixXd& view) {
  write_file(path, view_sidecar_bytes(view));
}

Eigen::MatrixXd read_view_sidecar(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 13 || bytes.compare(0, 5, "GSNV1") != 0) throw IoError("sidecar: bad header");
  std::uint32_t n = 0, v = 0;
  std::memcpy(&n, bytes.data() + 5, 4);
  std::memcpy(&v, bytes.data() + 9, 4);
  if (bytes.size() != 13 + static_cast<std::size_t>(n) * v * 4) throw IoError("sidecar: size does not match header");
  Eigen::MatrixXd out(n, v);
  const char* p = bytes.data() + 13;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < v; ++j, p += 4) out(i, j) = get<float>(p);
  }
  return out;
}

// ---------------------------------------------------------------- scene JSON

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 json_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw IoError(std::string("scene: '") + what + "' must be 3 numbers");
  return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

json pose_json(const RigidTransform& t) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(t.linear()(r, c));
  }
  return {{"rotation", rot}, {"translation", vec_json(t.translation())}};
}

RigidTransform json_pose(const json& j) {
  RigidTransform t = RigidTransform::Identity();
  if (j.contains("rotation")) {
    const json& r = j.at("rotation");
    if (!r.is_array() || r.size() != 9) throw IoError("scene: 'rotation' must be 9 numbers (row-major)");
    Mat3 m;
    for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = r.at(static_cast<std::size_t>(k)).get<double>();
    t.linear() = m;
  }
  if (j.contains("translation")) t.translation() = json_vec(j.at("translation"), "translation");
  if (!is_rigid(t, 1e-6)) throw IoError("scene: pose rotation is not orthonormal");
  return t;
}

json shape_json(const Shape& shape) {
  if (const auto* b = std::get_if<Box>(&shape)) return {{"type", "box"}, {"half_extents", vec_json(b->half_extents)}};
  if (const auto* s = std::get_if<Sphere>(&shape)) return {{"type", "sphere"}, {"radius", s->radius}};
  if (const auto* c = std::get_if<Cylinder>(&shape)) {
    return {{"type", "cylinder"}, {"radius", c->radius}, {"half_height", c->half_height}};
  }
  const auto& m = std::get<TriMesh>(shape);
  json verts = json::array(), tris = json::array();
  for (const Vec3& v : m.vertices) verts.push_back(vec_json(v));
  for (const auto& t : m.triangles) tris.push_back(json::array({t[0], t[1], t[2]}));
  return {{"type", "mesh"}, {"vertices", verts}, {"triangles", tris}};
}

Shape json_shape(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "box") return Box{json_vec(j.at("half_extents"), "half_extents")};
  if (type == "sphere") return Sphere{j.at("radius").get<double>()};
  if (type == "cylinder") return Cylinder{j.at("radius").get<double>(), j.at("half_height").get<double>()};
  if (type == "mesh") {
    TriMesh m;
    for (const json& v : j.at("vertices")) m.vertices.push_back(json_vec(v, "vertices"));
    for (const json& t : j.at("triangles")) {
      if (!t.is_array() || t.size() != 3) throw IoError("scene: triangles must have 3 indices");
      m.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
    return m;
  }
  throw IoError("scene: unknown shape type '" + type + "'");
}

json camera_json(const CameraModel& c) {
  return {{"width", c.width}, {"height", c.height}, {"fx", c.fx}, {"fy", c.fy},
          {"cx", c.cx},       {"cy", c.cy},         {"pose", pose_json(c.pose)}};
}

CameraModel json_camera(const json& j) {
  CameraModel c;
  const int width = j.value("width", c.width);
  const int height = j.value("height", c.height);
  if (j.contains("eye")) {
    const Vec3 target = j.contains("target") ? json_vec(j.at("target"), "target") : Vec3::Zero();
    const double focal = j.value("fx", c.fx);
    c = CameraModel::look_at(json_vec(j.at("eye"), "eye"), target, Vec3::UnitZ(), width, height, focal);
  } else {
    c.width = width;
    c.height = height;
    c.cx = 0.5 * width;
    c.cy = 0.5 * height;
    if (j.contains("pose")) c.pose = json_pose(j.at("pose"));
  }
  c.fx = j.value("fx", c.fx);
  c.fy = j.value("fy", c.fx);
  c.cx = j.value("cx", c.cx);
  c.cy = j.value("cy", c.cy);
  c.validate();
  return c;
}

}  // namespace

std::string scene_to_json(const SceneDescription& scene) {
  json objects = json::array();
  for (const auto& inst : scene.instances) {
    objects.push_back({{"id", inst.id}, {"shape", shape_json(inst.shape)}, {"pose", pose_json(inst.pose)}});
  }
  json j;
  j["objects"] = objects;
  if (scene.table.enabled) {
    j["table"] = {{"radius", scene.table.radius}, {"thickness", scene.table.thickness}};
  } else {
    j["table"] = nullptr;
  }
  if (scene.camera) j["camera"] = camera_json(*scene.camera);
  j["spacing"] = scene.spacing;
  return j.dump(2) + "\n";
}

SceneDescription scene_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw IoError("scene: top level must be an object");
    SceneDescription out;
    if (j.contains("objects")) {
      for (const json& o : j.at("objects")) {
        ObjectInstance inst;
        inst.id = o.at("id").get<int>();
        inst.shape = json_shape(o.at("shape"));
        if (o.contains("pose")) inst.pose = json_pose(o.at("pose"));
        out.instances.push_back(std::move(inst));
      }
    }
    if (j.contains("table")) {
      const json& t = j.at("table");
      if (t.is_null() || (t.is_boolean() && !t.get<bool>())) {
        out.table.enabled = false;
      } else if (t.is_object()) {
        out.table.enabled = t.value("enabled", true);
        out.table.radius = t.value("radius", out.table.radius);
        out.table.thickness = t.value("thickness", out.table.thickness);
      }
    }
    if (j.contains("camera") && !j.at("camera").is_null()) out.camera = json_camera(j.at("camera"));
    out.spacing = j.value("spacing", out.spacing);
    if (!(out.spacing > 0.0)) throw IoError("scene: spacing must be positive");
    return out;
  } catch (const json::exception& e) {
    throw IoError(std::string("scene: ") + e.what());
  }
}

SceneDescription load_scene_file(const std::filesystem::path& path) { return scene_from_json(read_file(path)); }

Scene assemble(const SceneDescription& description, std::uint64_t seed) {
  Scene s = assemble_scene(description.instances, description.table, description.spacing, seed);
  s.camera = description.camera;
  return s;
}

// ---------------------------------------------------------------- config

void GroupConfig::validate() const {
  if (!(radius > 0.0)) throw InvalidArgument("group: radius must be positive");
  if (!(height_min < height_max)) throw InvalidArgument("group: height range is empty");
  if (points < 1) throw InvalidArgument("group: K must be >= 1");
}

void Config::validate() const {
  grid.validate();
  gripper.validate();
  quality.validate();
  sampling.validate();
  engine.validate();
  group.validate();
}

namespace {

class TableReader {
 public:
  TableReader(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  template <typename T>
  void read(const char* key, T& target) {
    seen_.push_back(key);
    if (table_ == nullptr) return;
    const toml::node* node = table_->get(key);
    if (node == nullptr) return;
    if constexpr (std::is_same_v<T, std::string>) {
      if (const auto v = node->value<std::string>()) {
        target = *v;
        return;
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (const auto v = node->value<double>()) {
        target = *v;
        return;
      }
    } else {
      if (const auto v = node->value<std::int64_t>()) {
        if (*v < 0 && std::is_unsigned_v<T>) throw InvalidArgument(where(key) + " must be non-negative");
        target = static_cast<T>(*v);
        return;
      }
    }
    throw InvalidArgument(where(key) + " has the wrong type");
  }

  void read_list(const char* key, std::vector<double>& target) {
    seen_.push_back(key);
    if (table_ == nullptr) return;
    const toml::node* node = table_->get(key);
    if (node == nullptr) return;
    const toml::array* arr = node->as_array();
    if (arr == nullptr) throw InvalidArgument(where(key) + " must be an array");
    target.clear();
    for (const auto& el : *arr) {
      const auto v = el.value<double>();
      if (!v) throw InvalidArgument(where(key) + " must contain numbers");
      target.push_back(*v);
    }
  }

  void finish() const {
    if (table_ == nullptr) return;
    for (const auto& [k, v] : *table_) {
      if (std::find(seen_.begin(), seen_.end(), k.str()) == seen_.end()) {
        throw InvalidArgument("config: unknown key '" + std::string(k.str()) + "' in [" + name_ + "]");
      }
    }
  }

 private:
  std::string where(const char* key) const { return "config: [" + name_ + "] " + key; }

  const toml::table* table_;
  std::string name_;
  std::vector<std::string_view> seen_;
};

const toml::table* section(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (n == nullptr) return nullptr;
  const toml::table* t = n->as_table();
  if (t == nullptr) throw InvalidArgument(std::string("config: '") + name + "' must be a table");
  return t;
}

}  // namespace

Config parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw InvalidArgument(std::string("config: ") + std::string(e.description()));
  }
  Config c;
  for (const auto& [k, v] : root) {
    const std::string_view key = k.str();
    if (key != "grid" && key != "gripper" && key != "quality" && key != "sampling" && key != "engine" &&
        key != "group" && key != "seed") {
      throw InvalidArgument("config: unknown entry '" + std::string(key) + "'");
    }
  }
  if (const toml::node* s = root.get("seed")) {
    const auto v = s->value<std::int64_t>();
    if (!v || *v < 0) throw InvalidArgument("config: seed must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(*v);
  }

  TableReader grid(section(root, "grid"), "grid");
  int depth_count = -1;
  grid.read("views", c.grid.views);
  grid.read("angles", c.grid.angles);
  grid.read_list("depths", c.grid.depths);
  grid.read("depth_count", depth_count);
  grid.finish();
  if (depth_count >= 0 && depth_count != c.grid.depth_count()) {
    throw InvalidArgument("config: [grid] depth_count does not match the depths list");
  }

  TableReader g(section(root, "gripper"), "gripper");
  g.read("max_width", c.gripper.max_width);
  g.read("finger_length", c.gripper.finger_length);
  g.read("finger_thickness", c.gripper.finger_thickness);
  g.read("finger_height", c.gripper.finger_height);
  g.read("palm_depth", c.gripper.palm_depth);
  g.finish();

  TableReader q(section(root, "quality"), "quality");
  q.read("mu_min", c.quality.mu_min);
  q.read("mu_max", c.quality.mu_max);
  q.read("score_threshold_c", c.quality.score_threshold);
  q.read("contact_band", c.quality.contact_band);
  q.finish();

  TableReader s(section(root, "sampling"), "sampling");
  std::string point = std::string(to_string(c.sampling.point_strategy));
  std::string view = std::string(to_string(c.sampling.view_strategy));
  double rotation_deg = c.sampling.nms_rotation * 180.0 / std::numbers::pi;
  s.read("point_strategy", point);
  s.read("view_strategy", view);
  s.read("M", c.sampling.seeds);
  s.read("delta", c.sampling.threshold);
  s.read("nms_translation", c.sampling.nms_translation);
  s.read("nms_rotation_deg", rotation_deg);
  s.finish();
  c.sampling.point_strategy = parse_point_strategy(point);
  c.sampling.view_strategy = parse_view_strategy(view);
  c.sampling.nms_rotation = rotation_deg * std::numbers::pi / 180.0;
  c.sampling.rng_seed = c.seed;

  TableReader e(section(root, "engine"), "engine");
  std::string aggregation = std::string(to_string(c.engine.aggregation));
  e.read("aggregation", aggregation);
  e.read("cutoff", c.engine.cutoff);
  e.read("voxel", c.engine.voxel);
  e.finish();
  c.engine.aggregation = parse_aggregation(aggregation);

  TableReader gr(section(root, "group"), "group");
  gr.read("radius", c.group.radius);
  gr.read("height_min", c.group.height_min);
  gr.read("height_max", c.group.height_max);
  gr.read("K", c.group.points);
  gr.finish();

  c.validate();
  return c;
}

Config load_config_file(const std::filesystem::path& path) { return parse_config(read_file(path)); }

// ---------------------------------------------------------------- grasps CSV

std::string grasps_to_csv(std::span<const GraspPose> grasps) {
  std::ostringstream os;
  os << "center_x,center_y,center_z,view_x,view_y,view_z,angle,depth,width,score,closing_offset,object_id\n";
  os << std::setprecision(17);
  for (const GraspPose& g : grasps) {
    os << g.center.x() << ',' << g.center.y() << ',' << g.center.z() << ',' << g.view.x() << ',' << g.view.y() << ','
       << g.view.z() << ',' << g.angle << ',' << g.depth << ',' << g.width << ',' << g.score << ','
       << g.closing_offset << ',' << g.object_id << '\n';
  }
  return os.str();
}

std::vector<GraspPose> grasps_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("grasp csv: missing header");
  std::vector<GraspPose> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        f.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("grasp csv: bad number '" + cell + "'");
      }
    }
    if (f.size() != 12) throw IoError("grasp csv: expected 12 columns");
    GraspPose g;
    g.center = Vec3(f[0], f[1], f[2]);
    const Vec3 v(f[3], f[4], f[5]);
    // Written views are unit length to within printing precision; keep them
    // bit-identical so a read-write round trip is stable.
    g.view = std::abs(v.norm() - 1.0) <= 1e-12 ? UnitVec3::from_unit(v, 1e-12) : UnitVec3::normalized(v);
    g.angle = f[6];
    g.depth = f[7];
    g.width = f[8];
    g.score = f[9];
    g.closing_offset = f[10];
    g.object_id = static_cast<int>(f[11]);
    out.push_back(g);
  }
  return out;
}

}  // namespace graspness
