#include "spinegrade/locate/locate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "spinegrade/image.hpp"

namespace sg::locate {

namespace fs = std::filesystem;
using core::DiscLevel;
using core::LabelScheme;
using nlohmann::json;

std::vector<StructureBox> component_boxes(const MaskImage& mask, int slice_index) {
  const int h = static_cast<int>(mask.rows()), w = static_cast<int>(mask.cols());

  // Two-pass union-find labeling; 8-connectivity within equal mask values.
  std::vector<int> comp(static_cast<std::size_t>(h) * w, -1);
  std::vector<int> parent;
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::uint8_t v = mask(r, c);
      if (v == 0) continue;
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      int id = -1;
      // previously visited 8-neighbours: W, NW, N, NE
      const int nr[4] = {r, r - 1, r - 1, r - 1};
      const int nc[4] = {c - 1, c - 1, c, c + 1};
      for (int kk = 0; kk < 4; ++kk) {
        if (nr[kk] < 0 || nc[kk] < 0 || nc[kk] >= w) continue;
        if (mask(nr[kk], nc[kk]) != v) continue;
        const int nid = comp[static_cast<std::size_t>(nr[kk]) * w + nc[kk]];
        if (id == -1) {
          id = nid;
        } else {
          unite(id, nid);
        }
      }
      if (id == -1) {
        id = static_cast<int>(parent.size());
        parent.push_back(id);
      }
      comp[idx] = id;
    }
  }

  struct CompInfo {
    int label = 0;
    long area = 0;
    PixelBox box{1 << 30, 1 << 30, -1, -1};
  };
  std::vector<CompInfo> comps(parent.size());

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      if (comp[idx] < 0) continue;
      const int root = find(comp[idx]);
      auto& info = comps[root];
      info.label = mask(r, c);
      ++info.area;
      info.box.row_min = std::min(info.box.row_min, r);
      info.box.col_min = std::min(info.box.col_min, c);
      info.box.row_max = std::max(info.box.row_max, r);
      info.box.col_max = std::max(info.box.col_max, c);
    }
  }

  std::vector<StructureBox> best(LabelScheme::kNumClasses);
  std::vector<bool> seen(LabelScheme::kNumClasses, false);
  for (const auto& info : comps) {
    if (info.area == 0) continue;
    auto better = [&](const CompInfo& cand, const StructureBox& cur) {
      if (cand.area != cur.area_px) return cand.area > cur.area_px;
      if (cand.box.row_min != cur.box.row_min) return cand.box.row_min < cur.box.row_min;
      return cand.box.col_min < cur.box.col_min;
    };
    if (!seen[info.label] || better(info, best[info.label])) {
      best[info.label] = {info.label, info.box, slice_index, info.area};
      seen[info.label] = true;
    }
  }

  std::vector<StructureBox> out;
  for (int label = 1; label < LabelScheme::kNumClasses; ++label) {
    if (seen[label]) out.push_back(best[label]);
  }
  return out;
}

FsuExtraction extract_fsus(const MaskImage& mask, double margin_frac, int slice_index) {
  if (margin_frac < 0) throw ValidationError("extract_fsus: margin_frac must be nonnegative");
  const auto boxes = component_boxes(mask, slice_index);
  std::array<const StructureBox*, LabelScheme::kNumClasses> by_label{};
  for (const auto& b : boxes) by_label[b.label] = &b;

  FsuExtraction result;
  const int h = static_cast<int>(mask.rows()), w = static_cast<int>(mask.cols());

  for (DiscLevel level : core::kAllLevels) {
    const int disc = LabelScheme::disc_label(level);
    const auto [vb_below, vb_above] = LabelScheme::adjacent_vbs(disc);
    if (!by_label[disc]) {
      result.diagnostics.push_back(core::to_string(level) + ": disc label " +
                                   std::to_string(disc) + " absent");
      continue;
    }
    if (!by_label[vb_below] || !by_label[vb_above]) {
      const int missing = !by_label[vb_below] ? vb_below : vb_above;
      result.diagnostics.push_back(core::to_string(level) + ": adjacent VB '" +
                                   LabelScheme::structure_name(missing) + "' absent");
      continue;
    }

    PixelBox u = by_label[disc]->box;
    for (int vb : {vb_below, vb_above}) {
      u.row_min = std::min(u.row_min, by_label[vb]->box.row_min);
      u.col_min = std::min(u.col_min, by_label[vb]->box.col_min);
      u.row_max = std::max(u.row_max, by_label[vb]->box.row_max);
      u.col_max = std::max(u.col_max, by_label[vb]->box.col_max);
    }
    const int dh = static_cast<int>(std::lround(margin_frac * u.height()));
    const int dw = static_cast<int>(std::lround(margin_frac * u.width()));
    PixelBox expanded{std::max(0, u.row_min - dh), std::max(0, u.col_min - dw),
                      std::min(h - 1, u.row_max + dh), std::min(w - 1, u.col_max + dw)};

    FSURegion region;
    region.level = level;
    region.disc_label = disc;
    region.vb_labels = {vb_below, vb_above};
    region.box = expanded;
    region.disc_box = by_label[disc]->box;
    region.slice_index = slice_index;
    result.regions.push_back(region);
  }

  if (result.regions.empty())
    throw ValidationError("extract_fsus: no FSU extractable from mask (" +
                          std::to_string(result.diagnostics.size()) + " levels diagnosed)");
  return result;
}

std::vector<int> slice_indices(int total_slices, int n) {
  if (n < 1 || n > total_slices)
    throw ValidationError("slice_indices: n outside 1..S (n=" + std::to_string(n) +
                          ", S=" + std::to_string(total_slices) + ")");
  const int mid = total_slices / 2;
  const int start = mid - n / 2;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = start + i;
  return idx;
}

FSUStack crop_resample(const core::Study& study, const FSURegion& fsu, int n) {
  const auto indices = slice_indices(study.volume.s, n);
  if (fsu.box.height() < 1 || fsu.box.width() < 1)
    throw ValidationError("crop_resample: degenerate box");

  FSUStack stack;
  stack.level = fsu.level;
  stack.n = n;
  stack.subject_id = study.subject_id;
  stack.sex = study.sex;
  stack.source_box = fsu.box;
  if (study.grades) stack.grade = study.grades->at(fsu.level);
  stack.pixels = core::Volume(n, FSUStack::kSize, FSUStack::kSize);

  for (int i = 0; i < n; ++i) {
    const auto plane = study.volume.slice(indices[i]);
    ImageF crop = plane.block(fsu.box.row_min, fsu.box.col_min, fsu.box.height(),
                              fsu.box.width());
    ImageF resized = img::resize_bilinear(crop, FSUStack::kSize, FSUStack::kSize);
    std::memcpy(stack.pixels.data.data() +
                    static_cast<std::size_t>(i) * FSUStack::kSize * FSUStack::kSize,
                resized.data(), sizeof(float) * FSUStack::kSize * FSUStack::kSize);
  }

  // Percentile clip + min-max over the whole stack.
  const double lo = img::percentile_of(stack.pixels.data, 0.5);
  const double hi = img::percentile_of(stack.pixels.data, 99.5);
  const double range = hi - lo;
  if (range < 1e-12) {
    std::fill(stack.pixels.data.begin(), stack.pixels.data.end(), 0.5f);
  } else {
    for (auto& v : stack.pixels.data) {
      const double clipped = std::clamp(static_cast<double>(v), lo, hi);
      v = static_cast<float>((clipped - lo) / range);
    }
  }
  return stack;
}

double anatomical_order_violations(const MaskImage& mask) {
  // Bottom-up anatomical sequence: S1, L5-S1, L5, L4-L5, L4, L3-L4, L3,
  // L2-L3, L2, L1-L2, L1 (labels 1,7,2,8,3,9,4,10,5,11,6).
  static constexpr int order[11] = {1, 7, 2, 8, 3, 9, 4, 10, 5, 11, 6};
  const auto boxes = component_boxes(mask);
  std::array<const StructureBox*, LabelScheme::kNumClasses> by_label{};
  for (const auto& b : boxes) by_label[b.label] = &b;

  int pairs = 0, violations = 0;
  const StructureBox* prev = nullptr;
  for (int label : order) {
    const StructureBox* cur = by_label[label];
    if (!cur) continue;
    if (prev) {
      ++pairs;
      const double prev_center = 0.5 * (prev->box.row_min + prev->box.row_max);
      const double cur_center = 0.5 * (cur->box.row_min + cur->box.row_max);
      // bottom-up means strictly decreasing row centre
      if (cur_center >= prev_center) ++violations;
    }
    prev = cur;
  }
  return pairs == 0 ? 0.0 : static_cast<double>(violations) / pairs;
}

void save_fsu(const FSUStack& stack, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory " + directory.string() + ": " + ec.message());

  json meta;
  meta["level"] = core::to_string(stack.level);
  meta["n"] = stack.n;
  meta["subject_id"] = stack.subject_id;
  meta["sex"] = core::to_string(stack.sex);
  if (stack.grade) meta["grade"] = *stack.grade;
  meta["source_box"] = {stack.source_box.row_min, stack.source_box.col_min,
                        stack.source_box.row_max, stack.source_box.col_max};
  meta["size"] = FSUStack::kSize;
  {
    std::ofstream f(directory / "fsu.json", std::ios::trunc);
    if (!f) throw IoError("cannot write " + (directory / "fsu.json").string());
    f << meta.dump(2) << "\n";
  }
  {
    std::ofstream f(directory / "pixels.raw", std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + (directory / "pixels.raw").string());
    f.write(reinterpret_cast<const char*>(stack.pixels.data.data()),
            static_cast<std::streamsize>(stack.pixels.data.size() * sizeof(float)));
  }
}

FSUStack load_fsu(const fs::path& directory) {
  std::ifstream mf(directory / "fsu.json");
  if (!mf) throw IoError("missing file: " + (directory / "fsu.json").string());
  json meta;
  try {
    meta = json::parse(mf);
  } catch (const json::parse_error& e) {
    throw IoError("unparseable fsu.json in " + directory.string() + ": " + e.what());
  }

  FSUStack stack;
  stack.level = core::level_from_string(meta.at("level").get<std::string>());
  stack.n = meta.at("n").get<int>();
  stack.subject_id = meta.at("subject_id").get<std::string>();
  stack.sex = core::sex_from_string(meta.at("sex").get<std::string>());
  if (meta.contains("grade")) stack.grade = meta.at("grade").get<int>();
  const auto& sb = meta.at("source_box");
  stack.source_box = {sb.at(0).get<int>(), sb.at(1).get<int>(), sb.at(2).get<int>(),
                      sb.at(3).get<int>()};

  std::ifstream pf(directory / "pixels.raw", std::ios::binary | std::ios::ate);
  if (!pf) throw IoError("missing file: " + (directory / "pixels.raw").string());
  const auto bytes = static_cast<std::size_t>(pf.tellg());
  const std::size_t expected =
      static_cast<std::size_t>(stack.n) * FSUStack::kSize * FSUStack::kSize * sizeof(float);
  if (bytes != expected)
    throw IoError("pixels.raw byte-count mismatch in " + directory.string());
  pf.seekg(0);
  stack.pixels = core::Volume(stack.n, FSUStack::kSize, FSUStack::kSize);
  pf.read(reinterpret_cast<char*>(stack.pixels.data.data()),
          static_cast<std::streamsize>(bytes));
  if (!pf) throw IoError("read failed: " + (directory / "pixels.raw").string());
  return stack;
}

std::vector<fs::path> find_fsu_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  if (!fs::exists(root)) throw IoError("missing directory: " + root.string());
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "fsu.json"))
      dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace sg::locate
