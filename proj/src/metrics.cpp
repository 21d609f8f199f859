#include "graspness/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "graspness/point_sampling.hpp"

namespace graspness {

int graspness_rank(double value, int bins) {
  if (bins < 1) throw InvalidArgument("rank: bin count must be >= 1");
  if (!(value >= 0.0) || !(value <= 1.0)) throw InvalidArgument("rank: value outside [0, 1]");
  return std::min(static_cast<int>(std::floor(value * bins)), bins - 1);
}

double ranking_error(std::span<const double> pred, std::span<const double> label, int bins) {
  if (pred.size() != label.size()) throw InvalidArgument("ranking_error: length mismatch");
  if (pred.empty()) throw InvalidArgument("ranking_error: empty input");
  long long total = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    total += std::abs(graspness_rank(pred[i], bins) - graspness_rank(label[i], bins));
  }
  return static_cast<double>(total) / static_cast<double>(pred.size()) / bins;
}

double graspable_fraction(std::span<const double> values, double threshold) {
  if (values.empty()) throw InvalidArgument("graspable_fraction: empty input");
  const auto count = std::count_if(values.begin(), values.end(), [&](double v) { return v > threshold; });
  return static_cast<double>(count) / static_cast<double>(values.size());
}

double grasp_mu_star(const GraspPose& grasp, const SceneContext& context, const GraspnessParams& params) {
  if (!context.has_object(grasp.object_id)) return std::numeric_limits<double>::infinity();
  const ObjectSurface surface = context.object_surface(grasp.object_id);
  const ContactPair contacts = find_contacts(grasp.frame(), grasp.depth, surface.points, surface.normals,
                                             params.gripper, params.quality.contact_band);
  return min_antipodal_friction(contacts);
}

std::vector<double> precision_at_k(std::span<const GraspPose> grasps, const SceneContext& context,
                                   const GraspnessParams& params, std::span<const double> mu_thresholds,
                                   std::size_t k) {
  if (grasps.empty()) throw InvalidArgument("precision_at_k: no grasps");
  if (k < 1 || k > grasps.size()) throw InvalidArgument("precision_at_k: need 1 <= k <= |grasps|");
  std::vector<double> mu(k);
  std::vector<char> free(k);
  for (std::size_t i = 0; i < k; ++i) {
    free[i] = !check_collision(grasps[i].bodies(params.gripper), context.index());
    mu[i] = grasp_mu_star(grasps[i], context, params);
  }
  std::vector<double> out;
  for (double t : mu_thresholds) {
    std::size_t good = 0;
    for (std::size_t i = 0; i < k; ++i) good += (free[i] && mu[i] <= t) ? 1 : 0;
    out.push_back(static_cast<double>(good) / static_cast<double>(k));
  }
  return out;
}

BenchScene prepare_bench_scene(Scene scene, const CameraModel& camera, const GraspnessParams& params,
                               const EngineConfig& engine) {
  engine.validate();
  BenchScene out;
  out.scene = std::make_unique<Scene>(std::move(scene));
  out.context = std::make_unique<SceneContext>(*out.scene);
  out.landscape = scene_graspness(*out.context, params, true);
  normalize_landscape(out.landscape);
  const PointCloud rendered = voxel_downsample(render_depth_view(*out.scene, camera), engine.voxel);
  out.partial = project_to_view(out.landscape, rendered, engine.cutoff);
  return out;
}

std::uint64_t task_seed(std::uint64_t root, std::size_t task_index) {
  return root ^ static_cast<std::uint64_t>(task_index);
}

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& stddev) {
  mean = 0.0;
  stddev = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double x : v) stddev += (x - mean) * (x - mean);
  stddev = std::sqrt(stddev / static_cast<double>(v.size()));
}

BenchRow run_task(const BenchScene& bs, const GraspnessParams& params, const BenchOptions& options,
                  PointStrategy strategy, std::uint64_t seed) {
  const PointCloud& cloud = bs.partial.cloud;
  SamplingConfig sc;
  sc.point_strategy = strategy;
  sc.view_strategy = ViewStrategy::Top1;
  sc.seeds = options.seeds;
  sc.threshold = options.threshold;
  sc.rng_seed = seed;
  const SeedSet seeds = sample_seeds(cloud, sc, &bs.partial.view);
  const std::vector<UnitVec3> views = fibonacci_views(params.grid.views);

  BenchRow row;
  row.strategy = std::string(to_string(strategy));
  row.seed_count = seeds.indices.size();
  std::vector<std::optional<GraspPose>> found(seeds.indices.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(seeds.indices.size()); ++s) {
    const std::size_t i = seeds.indices[static_cast<std::size_t>(s)];
    const int id = cloud.object_id[i];
    if (id < 0) continue;
    std::mt19937_64 unused(0);
    const Eigen::RowVectorXd row_scores = seeds.view_graspness.row(s);
    const int j = select_view(std::span<const double>(row_scores.data(), static_cast<std::size_t>(row_scores.size())),
                              ViewStrategy::Top1, Vec3::Zero(), views, unused);
    found[static_cast<std::size_t>(s)] =
        best_grasp_at_seed(*bs.context, cloud.positions[i], id, views[static_cast<std::size_t>(j)], params, true);
  }

  double sum_g = 0.0;
  std::size_t feasible = 0;
  std::set<int> seeded;
  std::vector<GraspPose> grasps;
  for (std::size_t s = 0; s < seeds.indices.size(); ++s) {
    sum_g += seeds.graspness[s];
    const int id = cloud.object_id[seeds.indices[s]];
    if (id >= 0) seeded.insert(id);
    if (found[s]) {
      ++feasible;
      grasps.push_back(*found[s]);
    }
  }
  std::set<int> visible;
  for (int id : cloud.object_id) {
    if (id >= 0) visible.insert(id);
  }
  const double n = static_cast<double>(std::max<std::size_t>(seeds.indices.size(), 1));
  row.mean_graspness = sum_g / n;
  row.feasible_fraction = static_cast<double>(feasible) / n;
  row.coverage = visible.empty() ? 0.0 : static_cast<double>(seeded.size()) / static_cast<double>(visible.size());
  sort_by_score(grasps);
  grasps = grasp_nms(grasps);
  if (grasps.empty()) {
    row.precision.assign(options.mu_thresholds.size(), 0.0);
  } else {
    row.precision = precision_at_k(grasps, *bs.context, params, options.mu_thresholds,
                                   std::min(options.precision_k, grasps.size()));
  }
  return row;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

BenchReport run_sampling_benchmark(std::span<const BenchScene> scenes, const GraspnessParams& params,
                                   const BenchOptions& options) {
  if (scenes.empty()) throw InvalidArgument("benchmark: at least one scene is required");
  if (options.strategies.empty()) throw InvalidArgument("benchmark: at least one strategy is required");
  if (options.trials < 1) throw InvalidArgument("benchmark: trials must be >= 1");
  if (options.precision_k < 1) throw InvalidArgument("benchmark: precision k must be >= 1");
  BenchReport report;
  report.options = options;
  std::size_t task = 0;
  for (PointStrategy strategy : options.strategies) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> g, f, c;
    std::vector<std::vector<double>> p(options.mu_thresholds.size());
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      for (int t = 0; t < options.trials; ++t) {
        BenchRow row = run_task(scenes[i], params, options, strategy, task_seed(options.rng_seed, task++));
        row.scene = static_cast<int>(i);
        row.trial = t;
        g.push_back(row.mean_graspness);
        f.push_back(row.feasible_fraction);
        c.push_back(row.coverage);
        for (std::size_t k = 0; k < p.size(); ++k) p[k].push_back(row.precision[k]);
        report.rows.push_back(std::move(row));
      }
    }
    BenchSummary s;
    s.strategy = std::string(to_string(strategy));
    mean_std(g, s.mean_graspness, s.mean_graspness_std);
    mean_std(f, s.feasible_fraction, s.feasible_fraction_std);
    mean_std(c, s.coverage, s.coverage_std);
    for (const auto& pk : p) {
      double m = 0.0, sd = 0.0;
      mean_std(pk, m, sd);
      s.precision.push_back(m);
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.summary.push_back(s);
  }
  return report;
}

std::string BenchReport::to_csv() const {
  std::ostringstream os;
  os << "strategy,scene,trial,seeds,mean_gt_graspness,feasible_fraction,coverage";
  for (double t : options.mu_thresholds) os << ",precision_at_" << options.precision_k << "_mu_" << fmt(t);
  os << "\n";
  for (const BenchRow& r : rows) {
    os << r.strategy << ',' << r.scene << ',' << r.trial << ',' << r.seed_count << ',' << fmt(r.mean_graspness) << ','
       << fmt(r.feasible_fraction) << ',' << fmt(r.coverage);
    for (double v : r.precision) os << ',' << fmt(v);
    os << "\n";
  }
  return os.str();
}

std::string BenchReport::summary_table() const {
  std::ostringstream os;
  os << std::left << std::setw(18) << "strategy" << std::setw(22) << "mean GT graspness" << std::setw(22)
     << "feasible seeds" << std::setw(22) << "object coverage";
  for (double t : options.mu_thresholds) os << "P@" << options.precision_k << "(mu<=" << fmt(t) << ")  ";
  os << "seconds\n" << std::fixed << std::setprecision(4);
  for (const BenchSummary& s : summary) {
    std::ostringstream a, b, c;
    a << std::fixed << std::setprecision(4) << s.mean_graspness << " +- " << s.mean_graspness_std;
    b << std::fixed << std::setprecision(4) << s.feasible_fraction << " +- " << s.feasible_fraction_std;
    c << std::fixed << std::setprecision(4) << s.coverage << " +- " << s.coverage_std;
    os << std::setw(18) << s.strategy << std::setw(22) << a.str() << std::setw(22) << b.str() << std::setw(22) << c.str();
    for (double v : s.precision) os << std::setw(16) << v;
    os << std::setprecision(2) << s.seconds << std::setprecision(4) << "\n";
  }
  os << "precision is an oracle precision@k on synthetic scenes, not a benchmark AP\n";
  return os.str();
}

}  // namespace graspness
