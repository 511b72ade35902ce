// Command-line front end: scene generation, reconstruction, evaluation and
// the two benchmark sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "voxmvs/evaluation.hpp"
#include "voxmvs/io.hpp"
#include "voxmvs/pipeline.hpp"
#include "voxmvs/scenegen.hpp"

namespace fs = std::filesystem;
using namespace voxmvs;

namespace {

struct PipelineFlags {
  std::string config_path;
  PipelineConfig config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "pipeline config file");
    cmd->add_option("--r1", config.r1, "coarsest voxel resolution");
    cmd->add_option("--delta", config.delta, "resolution common ratio");
    cmd->add_option("--target-resolution", config.target_resolution,
                    "finest voxel resolution");
    cmd->add_option("--s", config.s, "sub-volume side in voxels");
    cmd->add_option("--overlap-voxels", config.overlap_voxels, "cell overlap");
    cmd->add_option("--alpha", config.alpha, "occlusion sensitivity");
    cmd->add_option("--n-v", config.n_v, "view pairs per sub-volume");
    cmd->add_option("--scorer", config.scorer, "relative-weight scorer name");
    cmd->add_option("--patch-side", config.patch_side, "descriptor patch side");
    cmd->add_option("--tau", config.tau, "binarization threshold");
    cmd->add_option("--tau-intermediate", config.tau_intermediate,
                    "threshold at intermediate levels");
    cmd->add_option("--ray-pool", config.ray_pool, "enable ray pooling");
    cmd->add_option("--ray-pool-levels", config.ray_pool_levels,
                    "'finest' or 'all'");
    cmd->add_option("--predictor-name", config.predictor.name, "predictor name");
    cmd->add_option("--window-radius", config.predictor.window_radius,
                    "predictor aggregation radius");
    cmd->add_option("--sigma-color", config.predictor.sigma_color,
                    "predictor color bandwidth");
    cmd->add_option("--seed", config.seed, "run seed");
    cmd->add_option("--threads", config.threads, "worker threads");
  }

  // Config file overrides defaults; explicitly passed flags override the file.
  PipelineConfig resolve(const CLI::App* cmd) const {
    PipelineConfig resolved = config;
    if (!config_path.empty()) {
      const ConfigFile file = parse_config(config_path);
      const ConfigSection& g = file.global;
      PipelineConfig from_file;
      from_file.r1 = g.get_double("r1", from_file.r1);
      from_file.delta = g.get_int("delta", from_file.delta);
      from_file.target_resolution =
          g.get_double("target_resolution", from_file.target_resolution);
      from_file.s = g.get_int("s", from_file.s);
      from_file.overlap_voxels = g.get_int("overlap_voxels", from_file.overlap_voxels);
      from_file.alpha = g.get_double("alpha", from_file.alpha);
      from_file.n_v = g.get_int("n_v", from_file.n_v);
      from_file.scorer = g.get("scorer", from_file.scorer);
      from_file.patch_side = g.get_int("patch_side", from_file.patch_side);
      from_file.tau = g.get_double("tau", from_file.tau);
      from_file.tau_intermediate =
          g.get_double("tau_intermediate", from_file.tau_intermediate);
      from_file.ray_pool = g.get_int("ray_pool", from_file.ray_pool ? 1 : 0) != 0;
      from_file.ray_pool_levels = g.get("ray_pool_levels", from_file.ray_pool_levels);
      from_file.seed = static_cast<uint64_t>(g.get_int("seed", 0));
      from_file.threads = g.get_int("threads", from_file.threads);
      if (const ConfigSection* p = file.find("predictor")) {
        from_file.predictor.name = p->get("name", from_file.predictor.name);
        from_file.predictor.window_radius =
            p->get_int("window_radius", from_file.predictor.window_radius);
        from_file.predictor.sigma_color =
            p->get_double("sigma_color", from_file.predictor.sigma_color);
        for (const auto& [key, value] : p->values) {
          if (key.rfind("blur_sigma_level_", 0) == 0) {
            from_file.predictor.blur_sigma_per_level[std::stoi(key.substr(17))] =
                std::stod(value);
          }
        }
      }
      // overlay flags the user actually passed
      auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
      if (!passed("--r1")) resolved.r1 = from_file.r1;
      if (!passed("--delta")) resolved.delta = from_file.delta;
      if (!passed("--target-resolution"))
        resolved.target_resolution = from_file.target_resolution;
      if (!passed("--s")) resolved.s = from_file.s;
      if (!passed("--overlap-voxels")) resolved.overlap_voxels = from_file.overlap_voxels;
      if (!passed("--alpha")) resolved.alpha = from_file.alpha;
      if (!passed("--n-v")) resolved.n_v = from_file.n_v;
      if (!passed("--scorer")) resolved.scorer = from_file.scorer;
      if (!passed("--patch-side")) resolved.patch_side = from_file.patch_side;
      if (!passed("--tau")) resolved.tau = from_file.tau;
      if (!passed("--tau-intermediate"))
        resolved.tau_intermediate = from_file.tau_intermediate;
      if (!passed("--ray-pool")) resolved.ray_pool = from_file.ray_pool;
      if (!passed("--ray-pool-levels"))
        resolved.ray_pool_levels = from_file.ray_pool_levels;
      if (!passed("--predictor-name")) resolved.predictor.name = from_file.predictor.name;
      if (!passed("--window-radius"))
        resolved.predictor.window_radius = from_file.predictor.window_radius;
      if (!passed("--sigma-color"))
        resolved.predictor.sigma_color = from_file.predictor.sigma_color;
      if (!passed("--seed")) resolved.seed = from_file.seed;
      if (!passed("--threads")) resolved.threads = from_file.threads;
      resolved.predictor.blur_sigma_per_level = from_file.predictor.blur_sigma_per_level;
    }
    return resolved;
  }
};

Box read_bbox(const std::string& path) {
  const ConfigFile cfg = parse_config(path);
  Box b;
  b.min = cfg.global.get_vec3("min", Vec3::Zero());
  b.size = cfg.global.get_vec3("size", Vec3::Ones());
  return b;
}

void write_bbox(const std::string& path, const Box& b) {
  std::ofstream out(path);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "min = %.17g %.17g %.17g\nsize = %.17g %.17g %.17g\n",
                b.min.x(), b.min.y(), b.min.z(), b.size.x(), b.size.y(), b.size.z());
  out << buf;
}

std::string image_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "view_%03d.ppm", id);
  return buf;
}

std::vector<CameraView> load_scene_inputs(const std::string& cameras_path,
                                          const std::string& images_dir) {
  std::vector<CameraView> views = read_cameras(cameras_path);
  for (CameraView& cam : views) {
    cam.image = read_ppm((fs::path(images_dir) / image_name(cam.id)).string());
  }
  return views;
}

void write_manifest(const std::string& path, const PipelineConfig& c,
                    const std::vector<std::pair<std::string, std::string>>& inputs) {
  std::ofstream out(path);
  out << "r1 = " << c.r1 << "\ndelta = " << c.delta
      << "\ntarget_resolution = " << c.target_resolution << "\ns = " << c.s
      << "\noverlap_voxels = " << c.overlap_voxels << "\nalpha = " << c.alpha
      << "\nn_v = " << c.n_v << "\nscorer = " << c.scorer
      << "\npatch_side = " << c.patch_side << "\ntau = " << c.tau
      << "\ntau_intermediate = " << c.tau_intermediate
      << "\nray_pool = " << (c.ray_pool ? 1 : 0)
      << "\nray_pool_levels = " << c.ray_pool_levels
      << "\npredictor = " << c.predictor.name
      << "\nwindow_radius = " << c.predictor.window_radius
      << "\nsigma_color = " << c.predictor.sigma_color << "\nseed = " << c.seed
      << "\nthreads = " << c.threads << "\n";
  for (const auto& [name, file] : inputs) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(file_content_hash(file)));
    out << "input " << name << " " << buf << "\n";
  }
}

int run_gen_scene(const std::string& config_path, const std::string& out_dir,
                  double gt_resolution) {
  const SceneSpec spec = scene_from_config(parse_config(config_path));
  fs::create_directories(out_dir);
  const std::vector<CameraView> views = render(spec);
  write_cameras((fs::path(out_dir) / "cameras.txt").string(), views);
  for (const CameraView& cam : views) {
    write_ppm((fs::path(out_dir) / image_name(cam.id)).string(), cam.image);
  }
  write_bbox((fs::path(out_dir) / "bbox.txt").string(), spec.reconstruction_bbox());
  fs::copy_file(config_path, fs::path(out_dir) / "scene.cfg",
                fs::copy_options::overwrite_existing);
  if (gt_resolution > 0.0) {
    write_ply((fs::path(out_dir) / "gt.ply").string(),
              ground_truth_cloud(spec, gt_resolution));
  }
  std::cout << "wrote " << views.size() << " views to " << out_dir << "\n";
  return 0;
}

int run_reconstruct(const std::string& cameras, const std::string& images_dir,
                    const std::string& bbox_path, const std::string& out_dir,
                    const PipelineConfig& config) {
  const std::vector<CameraView> views = load_scene_inputs(cameras, images_dir);
  const Box bbox = read_bbox(bbox_path);
  fs::create_directories(out_dir);
  const ReconstructionResult result = reconstruct(views, bbox, config);
  write_ply((fs::path(out_dir) / "final.ply").string(), result.final_cloud);
  for (const SurfacePointCloud& cloud : result.per_level) {
    char name[32];
    std::snprintf(name, sizeof(name), "level_%d.ply", cloud.level);
    write_ply((fs::path(out_dir) / name).string(), cloud);
  }
  write_ledger_csv((fs::path(out_dir) / "ledger.csv").string(), result.ledger);
  {
    std::ofstream report(fs::path(out_dir) / "report.txt");
    report << "points = " << result.final_cloud.points.size() << "\n";
    report << "levels = " << result.per_level.size() << "\n";
    report << "speedup_ratio = " << speedup_ratio(result.ledger) << "\n";
    if (result.empty_level_warning) report << "warning = empty-level\n";
    if (result.degenerate_precision_warning) report << "warning = degenerate-precision\n";
  }
  std::vector<std::pair<std::string, std::string>> inputs = {
      {"cameras", cameras}, {"bbox", bbox_path}};
  write_manifest((fs::path(out_dir) / "manifest.txt").string(), config, inputs);
  if (result.degenerate_precision_warning) {
    std::cerr << "warning: degenerate-precision (predictor saturated)\n";
  }
  if (result.empty_level_warning) {
    std::cerr << "warning: empty-level (no surface found)\n";
  }
  std::cout << "final cloud: " << result.final_cloud.points.size() << " points\n";
  return 0;
}

int run_evaluate(const std::string& pred_path, const std::string& ref_path,
                 double threshold, const std::string& csv_path) {
  const SurfacePointCloud pred = read_ply(pred_path);
  const SurfacePointCloud ref = read_ply(ref_path);
  const EvalReport report = evaluate_clouds(pred, ref, threshold);
  std::cout << eval_report_text(report);
  if (!csv_path.empty()) {
    write_eval_csv(csv_path, report);
  }
  return 0;
}

int run_bench_sparsity(const std::string& scene_config, int max_sparsity,
                       int batchsize, double threshold, const std::string& out_csv,
                       const PipelineConfig& config) {
  const SceneSpec spec = scene_from_config(parse_config(scene_config));
  const std::vector<CameraView> all_views = render(spec);
  const Box bbox = spec.reconstruction_bbox();
  const SurfacePointCloud gt =
      ground_truth_cloud(spec, config.target_resolution);
  if (threshold <= 0.0) threshold = 2.0 * config.target_resolution;

  std::vector<int> ids;
  for (const CameraView& v : all_views) ids.push_back(v.id);

  std::ofstream out(out_csv);
  out << "sparsity,batchsize,num_views,precision_pct,recall_pct,f_score\n";
  for (int n = 1; n <= max_sparsity; ++n) {
    const int b = std::min(batchsize, n);
    const std::vector<int> chosen = sparsity_sample(ids, n, b);
    std::vector<CameraView> views;
    for (int id : chosen) {
      for (const CameraView& v : all_views) {
        if (v.id == id) views.push_back(v);
      }
    }
    if (views.size() < 2) break;
    const ReconstructionResult result = reconstruct(views, bbox, config);
    PercentageMetric m;
    if (!result.final_cloud.points.empty()) {
      m = f_score(result.final_cloud, gt, threshold);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%zu,%.6g,%.6g,%.6g\n", n, b,
                  views.size(), m.precision_pct, m.recall_pct, m.f);
    out << buf;
    std::cout << buf;
  }
  return 0;
}

int run_bench_cubes(const std::string& scene_config,
                    const std::vector<double>& targets, const std::string& out_csv,
                    const PipelineConfig& base_config) {
  const SceneSpec spec = scene_from_config(parse_config(scene_config));
  const std::vector<CameraView> views = render(spec);
  const Box bbox = spec.reconstruction_bbox();

  std::ofstream out(out_csv);
  out << "target_resolution,relative_resolution,levels,total_processed,"
         "dense_baseline,speedup_ratio\n";
  for (double target : targets) {
    PipelineConfig config = base_config;
    config.target_resolution = target;
    const ReconstructionResult result = reconstruct(views, bbox, config);
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%zu,%lld,%lld,%.6g\n", target,
                  result.ledger.relative_resolution, result.ledger.levels.size(),
                  static_cast<long long>(result.ledger.total_processed()),
                  static_cast<long long>(result.ledger.dense_baseline),
                  speedup_ratio(result.ledger));
    out << buf;
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse multi-view stereo reconstruction"};
  app.require_subcommand(1);

  // gen-scene
  auto* gen = app.add_subcommand("gen-scene", "render a synthetic scene");
  std::string gen_config, gen_out = "scene_out";
  double gen_gt_res = 0.0;
  gen->add_option("--config", gen_config, "scene config file")->required();
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--gt-resolution", gen_gt_res, "also write gt.ply at this resolution");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "run the coarse-to-fine pipeline");
  std::string rec_cameras, rec_images, rec_bbox, rec_out = "run";
  PipelineFlags rec_flags;
  rec->add_option("--cameras", rec_cameras, "camera file")->required();
  rec->add_option("--images-dir", rec_images, "directory of view_###.ppm")->required();
  rec->add_option("--bbox", rec_bbox, "bounding-box file")->required();
  rec->add_option("--out", rec_out, "output directory");
  rec_flags.attach(rec);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "compare two point clouds");
  std::string eval_pred, eval_ref, eval_csv;
  double eval_threshold = 1.0;
  eval->add_option("--pred", eval_pred, "predicted PLY")->required();
  eval->add_option("--ref", eval_ref, "reference PLY")->required();
  eval->add_option("--threshold", eval_threshold, "distance threshold");
  eval->add_option("--csv", eval_csv, "also write a CSV report");

  // bench-sparsity
  auto* bs = app.add_subcommand("bench-sparsity", "f-score vs view sparsity");
  std::string bs_scene, bs_out = "sparsity.csv";
  int bs_max = 4, bs_batch = 1;
  double bs_threshold = 0.0;
  PipelineFlags bs_flags;
  bs->add_option("--scene-config", bs_scene, "scene config file")->required();
  bs->add_option("--max-sparsity", bs_max, "largest sparsity n");
  bs->add_option("--batchsize", bs_batch, "views per sparse position");
  bs->add_option("--threshold", bs_threshold, "f-score distance threshold");
  bs->add_option("--out", bs_out, "output CSV");
  bs_flags.attach(bs);

  // bench-cubes
  auto* bc = app.add_subcommand("bench-cubes", "speedup vs relative resolution");
  std::string bc_scene, bc_out = "cubes.csv";
  std::vector<double> bc_targets;
  PipelineFlags bc_flags;
  bc->add_option("--scene-config", bc_scene, "scene config file")->required();
  bc->add_option("--targets", bc_targets, "target resolutions to sweep")->required();
  bc->add_option("--out", bc_out, "output CSV");
  bc_flags.attach(bc);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen_scene(gen_config, gen_out, gen_gt_res);
    if (rec->parsed())
      return run_reconstruct(rec_cameras, rec_images, rec_bbox, rec_out,
                             rec_flags.resolve(rec));
    if (eval->parsed())
      return run_evaluate(eval_pred, eval_ref, eval_threshold, eval_csv);
    if (bs->parsed())
      return run_bench_sparsity(bs_scene, bs_max, bs_batch, bs_threshold, bs_out,
                                bs_flags.resolve(bs));
    if (bc->parsed())
      return run_bench_cubes(bc_scene, bc_targets, bc_out, bc_flags.resolve(bc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
