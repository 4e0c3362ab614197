#include "spinegrade/core/study_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace sg::core {

static_assert(std::endian::native == std::endian::little,
              "raw volume format is little-endian; big-endian hosts are unsupported");

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_bytes(const fs::path& p, const void* data, std::size_t n) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + p.string());
  f.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!f) throw IoError("write failed: " + p.string());
}

std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("missing file: " + p.string());
  const auto size = f.tellg();
  f.seekg(0);
  std::vector<char> buf(static_cast<std::size_t>(size));
  f.read(buf.data(), size);
  if (!f) throw IoError("read failed: " + p.string());
  return buf;
}

json read_json(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw IoError("missing file: " + p.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw IoError("unparseable metadata in " + p.string() + ": " + e.what());
  }
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + p.string());
  f << j.dump(2) << "\n";
  if (!f) throw IoError("write failed: " + p.string());
}

}  // namespace

void save_study(const Study& study, const fs::path& directory) {
  study.validate();
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory " + directory.string() + ": " + ec.message());

  json meta;
  meta["subject_id"] = study.subject_id;
  meta["sex"] = to_string(study.sex);
  meta["shape"] = {study.volume.s, study.volume.h, study.volume.w};
  meta["dtype"] = "f32le";
  meta["pixel_spacing_mm"] = {study.pixel_spacing_mm[0], study.pixel_spacing_mm[1]};
  meta["slice_thickness_mm"] = study.slice_thickness_mm;
  write_json(directory / "study.json", meta);

  write_bytes(directory / "volume.raw", study.volume.data.data(),
              study.volume.data.size() * sizeof(float));

  if (study.mask) {
    write_bytes(directory / "mask.raw", study.mask->data.data(), study.mask->data.size());
  }
  if (study.grades) {
    json g;
    for (const auto& [level, grade] : *study.grades) g[to_string(level)] = grade;
    write_json(directory / "grades.json", g);
  }
}

Study load_study(const fs::path& directory) {
  const json meta = read_json(directory / "study.json");
  Study study;
  try {
    study.subject_id = meta.at("subject_id").get<std::string>();
    study.sex = sex_from_string(meta.at("sex").get<std::string>());
    const auto shape = meta.at("shape");
    study.volume.s = shape.at(0).get<int>();
    study.volume.h = shape.at(1).get<int>();
    study.volume.w = shape.at(2).get<int>();
    if (meta.at("dtype").get<std::string>() != "f32le")
      throw IoError("study.json: unsupported dtype");
    study.pixel_spacing_mm[0] = meta.at("pixel_spacing_mm").at(0).get<double>();
    study.pixel_spacing_mm[1] = meta.at("pixel_spacing_mm").at(1).get<double>();
    study.slice_thickness_mm = meta.at("slice_thickness_mm").get<double>();
  } catch (const json::exception& e) {
    throw IoError("unparseable metadata in " + (directory / "study.json").string() + ": " +
                  e.what());
  }

  const std::size_t n =
      static_cast<std::size_t>(study.volume.s) * study.volume.h * study.volume.w;

  const auto vol_bytes = read_bytes(directory / "volume.raw");
  if (vol_bytes.size() != n * sizeof(float))
    throw IoError("volume.raw byte-count mismatch: expected " +
                  std::to_string(n * sizeof(float)) + ", got " +
                  std::to_string(vol_bytes.size()));
  study.volume.data.resize(n);
  std::memcpy(study.volume.data.data(), vol_bytes.data(), vol_bytes.size());

  if (fs::exists(directory / "mask.raw")) {
    const auto mask_bytes = read_bytes(directory / "mask.raw");
    if (mask_bytes.size() != n)
      throw IoError("mask.raw byte-count mismatch: expected " + std::to_string(n) + ", got " +
                    std::to_string(mask_bytes.size()));
    MaskVolume mask(study.volume.s, study.volume.h, study.volume.w);
    std::memcpy(mask.data.data(), mask_bytes.data(), mask_bytes.size());
    study.mask = std::move(mask);
  }

  if (fs::exists(directory / "grades.json")) {
    const json g = read_json(directory / "grades.json");
    Grades grades;
    for (const auto& [key, value] : g.items()) grades[level_from_string(key)] = value.get<int>();
    study.grades = std::move(grades);
  }

  study.validate();
  return study;
}

std::vector<fs::path> find_study_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  if (!fs::exists(root)) throw IoError("missing directory: " + root.string());
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "study.json"))
      dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace sg::core
