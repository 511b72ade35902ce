#include "voxmvs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voxmvs {

namespace {
[[noreturn]] void io_fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}
}  // namespace

void write_ppm(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail("io-open-failed", path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(3) * image.width);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const float* px = image.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const float v = std::clamp(px[c], 0.0f, 1.0f);
        row[3 * x + c] = static_cast<unsigned char>(std::lround(v * 255.0f));
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size()));
  }
  if (!out) io_fail("io-write-failed", path);
}

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("io-open-failed", path);
  std::string magic;
  in >> magic;
  if (magic != "P6") io_fail("io-bad-ppm", path);
  int width = 0, height = 0, maxval = 0;
  // skip comments
  auto next_int = [&](int& value) {
    while (true) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      in >> value;
      return;
    }
  };
  next_int(width);
  next_int(height);
  next_int(maxval);
  if (!in || width <= 0 || height <= 0 || maxval != 255) io_fail("io-bad-ppm", path);
  in.get();  // single whitespace after header
  Image img;
  img.width = width;
  img.height = height;
  img.data.resize(static_cast<std::size_t>(3) * width * height);
  std::vector<unsigned char> raw(img.data.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) io_fail("io-bad-ppm", path);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    img.data[i] = raw[i] / 255.0f;
  }
  return img;
}

void write_ply(const std::string& path, const SurfacePointCloud& cloud) {
  std::ofstream out(path);
  if (!out) io_fail("io-open-failed", path);
  out << "ply\nformat ascii 1.0\n";
  out << "comment level " << cloud.level << " resolution " << cloud.resolution << "\n";
  out << "element vertex " << cloud.points.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "end_header\n";
  char buf[128];
  for (const Vec3& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  if (!out) io_fail("io-write-failed", path);
}

SurfacePointCloud read_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("io-open-failed", path);
  std::string line;
  std::size_t count = 0;
  SurfacePointCloud cloud;
  bool header_done = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    if (token == "element") {
      std::string what;
      ss >> what >> count;
      if (what != "vertex") io_fail("io-bad-ply", path);
    } else if (token == "comment") {
      std::string key;
      ss >> key;
      if (key == "level") {
        ss >> cloud.level >> key >> cloud.resolution;
      }
    } else if (token == "end_header") {
      header_done = true;
      break;
    }
  }
  if (!header_done) io_fail("io-bad-ply", path);
  cloud.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double x, y, z;
    if (!(in >> x >> y >> z)) io_fail("io-bad-ply", path);
    cloud.points.emplace_back(x, y, z);
  }
  return cloud;
}

void write_cameras(const std::string& path, const std::vector<CameraView>& views) {
  std::ofstream out(path);
  if (!out) io_fail("io-open-failed", path);
  char buf[64];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), " %.17g", v);
    out << buf;
  };
  for (const CameraView& cam : views) {
    out << cam.id;
    emit(cam.intrinsics(0, 0));
    emit(cam.intrinsics(1, 1));
    emit(cam.intrinsics(0, 2));
    emit(cam.intrinsics(1, 2));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) emit(cam.rotation(r, c));
    for (int r = 0; r < 3; ++r) emit(cam.translation(r));
    out << "\n";
  }
  if (!out) io_fail("io-write-failed", path);
}

std::vector<CameraView> read_cameras(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("io-open-failed", path);
  std::vector<CameraView> views;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    CameraView cam;
    double fx, fy, cx, cy;
    if (!(ss >> cam.id >> fx >> fy >> cx >> cy)) io_fail("io-bad-cameras", path);
    cam.intrinsics = Mat3::Identity();
    cam.intrinsics(0, 0) = fx;
    cam.intrinsics(1, 1) = fy;
    cam.intrinsics(0, 2) = cx;
    cam.intrinsics(1, 2) = cy;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (!(ss >> cam.rotation(r, c))) io_fail("io-bad-cameras", path);
    for (int r = 0; r < 3; ++r)
      if (!(ss >> cam.translation(r))) io_fail("io-bad-cameras", path);
    views.push_back(cam);
  }
  return views;
}

std::string ConfigSection::get(const std::string& key,
                               const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : std::stod(it->second);
}

int ConfigSection::get_int(const std::string& key, int fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : std::stoi(it->second);
}

Vec3 ConfigSection::get_vec3(const std::string& key, const Vec3& fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::istringstream ss(it->second);
  Vec3 v;
  if (!(ss >> v.x() >> v.y() >> v.z())) {
    throw std::runtime_error("config-bad-vec3: " + key);
  }
  return v;
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile config;
  ConfigSection* current = &config.global;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      config.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      current = &config.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config-bad-line: " + line);
    }
    current->values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return config;
}

ConfigFile parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("io-open-failed", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

Shape shape_from_section(const ConfigSection& section) {
  const std::string type = section.get("type");
  if (type == "sphere") {
    return SphereShape{section.get_vec3("center", Vec3::Zero()),
                       section.get_double("radius", 1.0)};
  }
  if (type == "box") {
    return BoxShape{section.get_vec3("min", Vec3::Zero()),
                    section.get_vec3("max", Vec3::Ones())};
  }
  if (type == "plane") {
    return PlanePatch{section.get_vec3("point", Vec3::Zero()),
                      section.get_vec3("normal", Vec3(0, 0, 1)),
                      section.get_double("extent", 1.0)};
  }
  throw std::runtime_error("config-bad-shape: " + type);
}

}  // namespace

SceneSpec scene_from_config(const ConfigFile& config) {
  SceneSpec spec;
  for (const auto& section : config.sections) {
    if (section.name == "shape") {
      spec.shapes.push_back(shape_from_section(section));
    } else if (section.name == "occluder") {
      spec.occluders.push_back(shape_from_section(section));
    } else if (section.name == "texture") {
      const std::string type = section.get("type", "checker");
      if (type == "checker") {
        CheckerTexture t;
        t.period = section.get_double("period", t.period);
        t.color_a = section.get_vec3("color_a", t.color_a);
        t.color_b = section.get_vec3("color_b", t.color_b);
        spec.texture = t;
      } else if (type == "noise") {
        NoiseTexture t;
        t.seed = static_cast<uint64_t>(section.get_int("seed", 0));
        t.scale = section.get_double("scale", t.scale);
        t.octaves = section.get_int("octaves", t.octaves);
        t.persistence = section.get_double("persistence", t.persistence);
        t.lacunarity = section.get_double("lacunarity", t.lacunarity);
        spec.texture = t;
      } else if (type == "gradient") {
        GradientTexture t;
        t.axis = section.get_int("axis", t.axis);
        t.span = section.get_double("span", t.span);
        spec.texture = t;
      } else {
        throw std::runtime_error("config-bad-texture: " + type);
      }
    } else if (section.name == "rig") {
      spec.rig.num_cameras = section.get_int("num_cameras", spec.rig.num_cameras);
      spec.rig.radius = section.get_double("radius", spec.rig.radius);
      spec.rig.height = section.get_double("height", spec.rig.height);
      spec.rig.look_at = section.get_vec3("look_at", spec.rig.look_at);
      spec.rig.focal_px = section.get_double("focal_px", spec.rig.focal_px);
    } else if (section.name == "bbox") {
      Box b;
      b.min = section.get_vec3("min", Vec3::Zero());
      b.size = section.get_vec3("size", Vec3::Ones());
      spec.bbox = b;
    }
  }
  spec.image_width = config.global.get_int("image_width", spec.image_width);
  spec.image_height = config.global.get_int("image_height", spec.image_height);
  spec.seed = static_cast<uint64_t>(config.global.get_int("seed", 0));
  if (spec.shapes.empty()) {
    throw std::runtime_error("invalid-scene");
  }
  return spec;
}

void write_eval_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) io_fail("io-open-failed", path);
  out << "mean_accuracy,median_accuracy,mean_completeness,median_completeness,"
         "precision_pct,recall_pct,f_score,overall_distance,dist_threshold\n";
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                report.mean_accuracy, report.median_accuracy,
                report.mean_completeness, report.median_completeness,
                report.precision_pct, report.recall_pct, report.f_score,
                report.overall_distance, report.dist_threshold);
  out << buf;
}

std::string eval_report_text(const EvalReport& report) {
  std::ostringstream out;
  out << "accuracy      mean " << report.mean_accuracy << "  median "
      << report.median_accuracy << "\n";
  out << "completeness  mean " << report.mean_completeness << "  median "
      << report.median_completeness << "\n";
  out << "overall (distance) " << report.overall_distance << "\n";
  out << "precision " << report.precision_pct << "%  recall " << report.recall_pct
      << "%  f-score " << report.f_score << "  (threshold "
      << report.dist_threshold << ")\n";
  return out.str();
}

void write_ledger_csv(const std::string& path, const CubeCountLedger& ledger) {
  std::ofstream out(path);
  if (!out) io_fail("io-open-failed", path);
  out << "level,cells_scheduled,cells_processed\n";
  for (const auto& l : ledger.levels) {
    out << l.level << "," << l.cells_scheduled << "," << l.cells_processed << "\n";
  }
  out << "dense_baseline," << ledger.dense_baseline << ",\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", speedup_ratio(ledger));
  out << "speedup_ratio," << buf << ",\n";
}

uint64_t file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail("io-open-failed", path);
  uint64_t hash = 14695981039346656037ULL;  // FNV-1a
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return hash;
}

}  // namespace voxmvs
