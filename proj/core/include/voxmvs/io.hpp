#pragma once

#include <map>
#include <string>
#include <vector>

#include "voxmvs/evaluation.hpp"
#include "voxmvs/geometry.hpp"
#include "voxmvs/multiscale.hpp"
#include "voxmvs/scenegen.hpp"

namespace voxmvs {

// ---- images (binary portable pixmap, P6) ----
void write_ppm(const std::string& path, const Image& image);
Image read_ppm(const std::string& path);

// ---- point clouds (ASCII PLY, double x/y/z) ----
void write_ply(const std::string& path, const SurfacePointCloud& cloud);
SurfacePointCloud read_ply(const std::string& path);

// ---- cameras: one per line, `id fx fy cx cy r11..r33 t1 t2 t3` ----
void write_cameras(const std::string& path, const std::vector<CameraView>& views);
std::vector<CameraView> read_cameras(const std::string& path);

// ---- key-value config with [section] headers; sections may repeat ----
struct ConfigSection {
  std::string name;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  Vec3 get_vec3(const std::string& key, const Vec3& fallback) const;
};

struct ConfigFile {
  ConfigSection global;  // entries before the first section header
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& name) const;
};

ConfigFile parse_config(const std::string& path);
ConfigFile parse_config_text(const std::string& text);

SceneSpec scene_from_config(const ConfigFile& config);

// ---- reports ----
void write_eval_csv(const std::string& path, const EvalReport& report);
std::string eval_report_text(const EvalReport& report);
void write_ledger_csv(const std::string& path, const CubeCountLedger& ledger);

uint64_t file_content_hash(const std::string& path);

}  // namespace voxmvs
