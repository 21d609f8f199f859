// graspness: scene generation, rendering, graspness landscapes, grasp
// sampling, evaluation and benchmarking from the command line.

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graspness/engine.hpp"
#include "graspness/io.hpp"
#include "graspness/metrics.hpp"
#include "graspness/point_sampling.hpp"
#include "graspness/sampling.hpp"
#include "graspness/scene.hpp"

namespace fs = std::filesystem;
using namespace graspness;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitInvariant = 3;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string output;
};

Config load_config(const Globals& g) {
  Config c = g.config_path.empty() ? Config{} : load_config_file(g.config_path);
  if (g.seed) {
    c.seed = *g.seed;
    c.sampling.rng_seed = *g.seed;
  }
  c.validate();
  return c;
}

void emit_text(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
  } else {
    write_file(g.output, text);
  }
}

fs::path require_output(const Globals& g, const char* command) {
  if (g.output.empty()) throw InvalidArgument(std::string(command) + ": --output is required");
  return g.output;
}

fs::path sidecar_path(const fs::path& ply) {
  fs::path p = ply;
  p.replace_extension(".gsnv");
  return p;
}

CameraModel scene_camera(const SceneDescription& d) { return d.camera ? *d.camera : CameraModel::tabletop_default(); }

void check_unit_interval(const Eigen::VectorXd& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) >= 0.0 && v(i) <= 1.0)) throw InvariantViolation(std::string(what) + " left [0, 1]");
  }
}

// ---------------------------------------------------------------- commands

struct SceneGenArgs {
  int objects = -1;
  std::string spec;
  double table_radius = 0.5;
  bool no_table = false;
  double spacing = 0.005;
};

void cmd_scene_gen(const Globals& g, const SceneGenArgs& a) {
  const Config c = load_config(g);
  SceneDescription d;
  if (!a.spec.empty()) {
    d = load_scene_file(a.spec);
  } else {
    RandomSceneOptions opt;
    opt.objects = a.objects;
    d.instances = random_instances(c.seed, opt);
    d.table.radius = a.table_radius;
    d.table.enabled = !a.no_table;
    d.spacing = a.spacing;
    d.camera = CameraModel::tabletop_default();
  }
  // Assembling validates ids, shapes and table contact.
  (void)assemble(d, c.seed);
  emit_text(g, scene_to_json(d));
}

struct RenderArgs {
  std::string scene;
  bool ascii = false;
  bool camera_frame = false;
  bool no_downsample = false;
  double noise = 0.0;
  int width = 0, height = 0;
  double focal = 0.0;
  std::vector<double> eye, target;
};

void cmd_render(const Globals& g, const RenderArgs& a) {
  const Config c = load_config(g);
  const fs::path out = require_output(g, "render");
  const SceneDescription d = load_scene_file(a.scene);
  const Scene scene = assemble(d, c.seed);
  CameraModel cam = scene_camera(d);
  if (!a.eye.empty() || !a.target.empty() || a.width > 0 || a.height > 0 || a.focal > 0.0) {
    const Vec3 eye = a.eye.size() == 3 ? Vec3(a.eye[0], a.eye[1], a.eye[2]) : cam.position();
    const Vec3 target = a.target.size() == 3 ? Vec3(a.target[0], a.target[1], a.target[2])
                                             : Vec3(cam.position() + cam.pose.linear().col(2));
    cam = CameraModel::look_at(eye, target, Vec3::UnitZ(), a.width > 0 ? a.width : cam.width,
                               a.height > 0 ? a.height : cam.height, a.focal > 0.0 ? a.focal : cam.fx);
  }
  RenderOptions opt;
  opt.world_frame = !a.camera_frame;
  opt.depth_noise_stddev = a.noise;
  opt.noise_seed = c.seed;
  PointCloud cloud = render_depth_view(scene, cam, opt);
  if (!a.no_downsample) cloud = voxel_downsample(cloud, c.engine.voxel);
  write_ply(out, cloud, a.ascii ? PlyFormat::Ascii : PlyFormat::BinaryLittleEndian);
}

struct GraspnessArgs {
  std::string scene;
  std::string level = "scene";
  std::string view_output;
  bool ascii = false;
};

PointCloud landscape_cloud(const GraspableLandscape& l) {
  PointCloud cloud;
  cloud.positions = l.positions;
  cloud.normals = l.normals;
  cloud.object_id = l.object_id;
  cloud.objectness.assign(l.size(), 1);
  cloud.scalars["graspness"] = std::vector<double>(l.point.data(), l.point.data() + l.point.size());
  return cloud;
}

void cmd_graspness(const Globals& g, const GraspnessArgs& a) {
  const Config c = load_config(g);
  const fs::path out = require_output(g, "graspness");
  if (a.level != "scene" && a.level != "object") throw InvalidArgument("graspness: --level must be scene or object");
  const SceneDescription d = load_scene_file(a.scene);
  const Scene scene = assemble(d, c.seed);
  const SceneContext context(scene);
  GraspableLandscape l = scene_graspness(context, c.graspness(), a.level == "scene");
  normalize_landscape(l);
  check_unit_interval(l.point, "normalized point graspness");
  const PlyFormat fmt = a.ascii ? PlyFormat::Ascii : PlyFormat::BinaryLittleEndian;
  write_ply(out, landscape_cloud(l), fmt);
  write_view_sidecar(sidecar_path(out), l.view);
  if (!a.view_output.empty()) {
    const PointCloud rendered = voxel_downsample(render_depth_view(scene, scene_camera(d)), c.engine.voxel);
    const ProjectedLandscape p = project_to_view(l, rendered, c.engine.cutoff);
    write_ply(a.view_output, p.cloud, fmt);
    write_view_sidecar(sidecar_path(a.view_output), p.view);
  }
}

struct SampleArgs {
  std::string scene;
  std::string partial;
  std::string point_strategy, view_strategy;
  std::size_t seeds = 0;
  bool no_nms = false;
};

void cmd_sample(const Globals& g, const SampleArgs& a) {
  Config c = load_config(g);
  if (!a.point_strategy.empty()) c.sampling.point_strategy = parse_point_strategy(a.point_strategy);
  if (!a.view_strategy.empty()) c.sampling.view_strategy = parse_view_strategy(a.view_strategy);
  if (a.seeds > 0) c.sampling.seeds = a.seeds;
  c.validate();
  const SceneDescription d = load_scene_file(a.scene);
  const Scene scene = assemble(d, c.seed);
  const SceneContext context(scene);
  const GraspnessParams params = c.graspness();

  PointCloud cloud;
  Eigen::MatrixXd view;
  if (!a.partial.empty()) {
    cloud = read_ply(a.partial);
    view = read_view_sidecar(sidecar_path(a.partial));
    if (static_cast<std::size_t>(view.rows()) != cloud.size() || view.cols() != params.grid.views) {
      throw InvalidArgument("sample: sidecar does not match the partial cloud or grid");
    }
  } else {
    GraspableLandscape l = scene_graspness(context, params, true);
    normalize_landscape(l);
    const PointCloud rendered = voxel_downsample(render_depth_view(scene, scene_camera(d)), c.engine.voxel);
    ProjectedLandscape p = project_to_view(l, rendered, c.engine.cutoff);
    cloud = std::move(p.cloud);
    view = std::move(p.view);
  }
  if (!cloud.has_object_id()) throw InvalidArgument("sample: partial cloud has no object_id channel");
  if (c.sampling.view_strategy == ViewStrategy::Normal && !cloud.has_normals()) {
    throw InvalidArgument("sample: the normal view strategy needs normals");
  }

  const SeedSet seeds = sample_seeds(cloud, c.sampling, &view);
  const std::vector<UnitVec3> views = fibonacci_views(params.grid.views);
  std::vector<std::optional<GraspPose>> found(seeds.indices.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(seeds.indices.size()); ++s) {
    const std::size_t i = seeds.indices[static_cast<std::size_t>(s)];
    if (cloud.object_id[i] < 0) continue;
    std::mt19937_64 rng(task_seed(c.seed, static_cast<std::size_t>(s)));
    const Eigen::RowVectorXd scores = seeds.view_graspness.row(s);
    const Vec3 normal = cloud.has_normals() ? cloud.normals[i] : Vec3::UnitZ();
    const int j = select_view(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())),
                              c.sampling.view_strategy, normal, views, rng);
    found[static_cast<std::size_t>(s)] =
        best_grasp_at_seed(context, cloud.positions[i], cloud.object_id[i], views[static_cast<std::size_t>(j)], params);
  }
  std::vector<GraspPose> grasps;
  for (const auto& f : found) {
    if (f) grasps.push_back(*f);
  }
  sort_by_score(grasps);
  if (!a.no_nms) grasps = grasp_nms(grasps, c.sampling.nms_translation, c.sampling.nms_rotation);
  grasps = collision_filter(grasps, context.index(), params.gripper);
  emit_text(g, grasps_to_csv(grasps));
}

struct EvalArgs {
  std::string pred, label;
  int bins = 20;
  std::string landscape;
  double threshold = 0.3;
  std::string scene, grasps;
  std::size_t k = 10;
  std::vector<double> mu{0.2, 0.4, 0.8};
};

std::vector<double> graspness_channel(const std::string& path) {
  const PointCloud cloud = read_ply(path);
  const auto it = cloud.scalars.find("graspness");
  if (it == cloud.scalars.end()) throw InvalidArgument("eval: '" + path + "' has no graspness channel");
  std::vector<double> v = it->second;
  // Stored as float32; clamp rounding spill so ranks stay defined.
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  return v;
}

void cmd_eval_ranking(const Globals& g, const EvalArgs& a) {
  const std::vector<double> pred = graspness_channel(a.pred);
  const std::vector<double> label = graspness_channel(a.label);
  std::ostringstream os;
  os << std::setprecision(10) << "ranking_error " << ranking_error(pred, label, a.bins) << "\n";
  emit_text(g, os.str());
}

void cmd_eval_fraction(const Globals& g, const EvalArgs& a) {
  const PointCloud cloud = read_ply(a.landscape);
  const auto it = cloud.scalars.find("graspness");
  if (it == cloud.scalars.end()) throw InvalidArgument("eval: landscape has no graspness channel");
  std::vector<double> values;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!cloud.has_object_id() || cloud.object_id[i] >= 0) values.push_back(it->second[i]);
  }
  std::ostringstream os;
  os << std::setprecision(10) << "graspable_fraction " << graspable_fraction(values, a.threshold) << "\n";
  emit_text(g, os.str());
}

void cmd_eval_precision(const Globals& g, const EvalArgs& a) {
  const Config c = load_config(g);
  const SceneDescription d = load_scene_file(a.scene);
  const Scene scene = assemble(d, c.seed);
  const SceneContext context(scene);
  const std::vector<GraspPose> grasps = grasps_from_csv(read_file(a.grasps));
  const std::vector<double> p =
      precision_at_k(grasps, context, c.graspness(), a.mu, std::min(a.k, grasps.size()));
  std::ostringstream os;
  os << std::setprecision(10);
  for (std::size_t i = 0; i < p.size(); ++i) os << "precision_at_" << std::min(a.k, grasps.size()) << "_mu_" << a.mu[i] << " " << p[i] << "\n";
  emit_text(g, os.str());
}

struct BenchArgs {
  std::vector<std::string> scenes;
  int random_scenes = 0;
  int trials = 5;
  std::size_t seeds = 0;
  std::vector<std::string> strategies;
};

void cmd_bench(const Globals& g, const BenchArgs& a) {
  const Config c = load_config(g);
  const GraspnessParams params = c.graspness();
  std::vector<BenchScene> scenes;
  for (const std::string& path : a.scenes) {
    const SceneDescription d = load_scene_file(path);
    scenes.push_back(prepare_bench_scene(assemble(d, c.seed), scene_camera(d), params, c.engine));
  }
  for (int i = 0; i < a.random_scenes; ++i) {
    const std::uint64_t s = task_seed(c.seed, static_cast<std::size_t>(i));
    Scene scene = assemble_scene(random_instances(s), Table{}, 0.005, s);
    scenes.push_back(prepare_bench_scene(std::move(scene), CameraModel::tabletop_default(), params, c.engine));
  }
  if (scenes.empty()) throw InvalidArgument("bench: give scene files or --random-scenes");
  BenchOptions opt;
  opt.trials = a.trials;
  opt.seeds = a.seeds > 0 ? a.seeds : c.sampling.seeds;
  opt.threshold = c.sampling.threshold;
  opt.rng_seed = c.seed;
  if (!a.strategies.empty()) {
    opt.strategies.clear();
    for (const std::string& s : a.strategies) opt.strategies.push_back(parse_point_strategy(s));
  }
  const BenchReport report = run_sampling_benchmark(scenes, params, opt);
  if (g.output.empty()) {
    std::cout << report.to_csv();
    std::cerr << report.summary_table();
  } else {
    write_file(g.output, report.to_csv());
    std::cout << report.summary_table();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graspness landscapes for parallel-jaw grasping on synthetic scenes"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "TOML configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Root random seed");
  app.add_option("--jobs", g.jobs, "Worker threads (default: logical cores)")->check(CLI::PositiveNumber);
  app.add_option("--output,-o", g.output, "Output path");

  SceneGenArgs sg;
  auto* scene_gen = app.add_subcommand("scene-gen", "Write a scene file (random clutter or a normalized copy of --spec)");
  scene_gen->add_option("--objects", sg.objects, "Number of random objects (default: 3 to 8 from the seed)")
      ->check(CLI::Range(0, 64));
  scene_gen->add_option("--spec", sg.spec, "Existing scene file to validate and rewrite")->check(CLI::ExistingFile);
  scene_gen->add_option("--table-radius", sg.table_radius, "Table radius in metres");
  scene_gen->add_flag("--no-table", sg.no_table, "Leave out the table");
  scene_gen->add_option("--spacing", sg.spacing, "Surface sampling spacing in metres");

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a partial point cloud (PLY)");
  render->add_option("scene", ra.scene, "Scene file")->required();
  render->add_flag("--ascii", ra.ascii, "Write ASCII PLY");
  render->add_flag("--camera-frame", ra.camera_frame, "Express points in the camera frame");
  render->add_flag("--no-downsample", ra.no_downsample, "Skip voxel downsampling");
  render->add_option("--noise", ra.noise, "Gaussian depth noise (metres)");
  render->add_option("--width", ra.width, "Image width");
  render->add_option("--height", ra.height, "Image height");
  render->add_option("--focal", ra.focal, "Focal length in pixels");
  render->add_option("--eye", ra.eye, "Camera position x y z")->expected(3);
  render->add_option("--target", ra.target, "Look-at point x y z")->expected(3);

  GraspnessArgs ga;
  auto* grasp = app.add_subcommand("graspness", "Compute the graspness landscape (PLY + .gsnv sidecar)");
  grasp->add_option("scene", ga.scene, "Scene file")->required();
  grasp->add_option("--level", ga.level, "scene (with collisions) or object");
  grasp->add_option("--view-output", ga.view_output, "Also write the landscape projected onto the rendered view");
  grasp->add_flag("--ascii", ga.ascii, "Write ASCII PLY");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Sample seeds and views and write the best grasps (CSV)");
  sample->add_option("scene", sa.scene, "Scene file")->required();
  sample->add_option("--partial", sa.partial, "Partial cloud with graspness (from graspness --view-output)");
  sample->add_option("--point-strategy", sa.point_strategy, "uniform-random, fps, graspable-random, graspable-fps");
  sample->add_option("--view-strategy", sa.view_strategy, "normal, top-1, pvs");
  sample->add_option("--seeds", sa.seeds, "Number of seed points M");
  sample->add_flag("--no-nms", sa.no_nms, "Skip grasp-NMS");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluation metrics");
  eval->require_subcommand(1);
  auto* ranking = eval->add_subcommand("ranking", "Ranking error between two graspness clouds");
  ranking->add_option("--pred", ea.pred, "Predicted graspness PLY")->required();
  ranking->add_option("--label", ea.label, "Label graspness PLY")->required();
  ranking->add_option("--bins", ea.bins, "Rank bins K")->check(CLI::PositiveNumber);
  auto* fraction = eval->add_subcommand("fraction", "Fraction of object points above a graspness threshold");
  fraction->add_option("landscape", ea.landscape, "Landscape PLY")->required();
  fraction->add_option("--threshold", ea.threshold, "Graspness threshold");
  auto* precision = eval->add_subcommand("precision", "Oracle precision@k of a grasp list");
  precision->add_option("scene", ea.scene, "Scene file")->required();
  precision->add_option("grasps", ea.grasps, "Grasp CSV")->required();
  precision->add_option("--k", ea.k, "Top-k");
  precision->add_option("--mu", ea.mu, "Friction thresholds");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Sampling-strategy benchmark (CSV rows + summary)");
  bench->add_option("scenes", ba.scenes, "Scene files");
  bench->add_option("--random-scenes", ba.random_scenes, "Number of generated clutter scenes");
  bench->add_option("--trials", ba.trials, "Trials per strategy and scene")->check(CLI::PositiveNumber);
  bench->add_option("--seeds", ba.seeds, "Number of seed points M");
  bench->add_option("--strategies", ba.strategies, "Point strategies to compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  if (g.jobs > 0) omp_set_num_threads(g.jobs);
  try {
    if (*scene_gen) cmd_scene_gen(g, sg);
    if (*render) cmd_render(g, ra);
    if (*grasp) cmd_graspness(g, ga);
    if (*sample) cmd_sample(g, sa);
    if (*ranking) cmd_eval_ranking(g, ea);
    if (*fraction) cmd_eval_fraction(g, ea);
    if (*precision) cmd_eval_precision(g, ea);
    if (*bench) cmd_bench(g, ba);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const InvalidState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return 0;
}
