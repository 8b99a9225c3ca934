#include "pothole/dataset.hpp"

#include <map>

#include "pothole/error.hpp"
#include "pothole/io.hpp"

namespace pothole::dataset {
namespace fs = std::filesystem;

namespace {

std::map<std::string, fs::path> by_stem(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& p : io::list_rasters(dir)) out.emplace(p.stem().string(), p);
  return out;
}

}  // namespace

fs::path DatasetLayout::disparity_dir(const std::string& split) const {
  const auto t = split_dir(split) / "tdisp";
  return fs::is_directory(t) ? t : split_dir(split) / "disp";
}

std::vector<Item> DatasetLayout::items(const std::string& split) const {
  if (!fs::is_directory(split_dir(split))) {
    throw InvalidArgument("dataset split not found: " + split_dir(split).string());
  }
  const auto rgb = by_stem(split_dir(split) / "rgb");
  const auto disp = by_stem(disparity_dir(split));
  const auto label = by_stem(split_dir(split) / "label");
  for (const auto& [stem, path] : label) {
    if (!disp.count(stem)) throw InvalidArgument("label without disparity file: " + path.string());
  }
  std::vector<Item> out;
  for (const auto& [stem, path] : disp) {
    Item item{stem, {}, path, {}};
    if (auto it = rgb.find(stem); it != rgb.end()) item.rgb = it->second;
    if (auto it = label.find(stem); it != label.end()) item.label = it->second;
    out.push_back(std::move(item));
  }
  return out;
}

std::array<std::size_t, 3> DatasetLayout::split_sizes() const {
  std::array<std::size_t, 3> sizes{};
  for (std::size_t i = 0; i < kSplits.size(); ++i) {
    if (fs::is_directory(split_dir(kSplits[i]))) sizes[i] = items(kSplits[i]).size();
  }
  return sizes;
}

void DatasetLayout::create() const {
  for (const char* split : kSplits) {
    for (const char* sub : {"rgb", "disp", "label"}) fs::create_directories(split_dir(split) / sub);
  }
}

}  // namespace pothole::dataset
