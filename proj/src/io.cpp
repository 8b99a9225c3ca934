#include "pothole/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "pothole/error.hpp"

namespace pothole::io {
namespace fs = std::filesystem;
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = msg;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

RawImage read_png(const fs::path& path) {
  FilePtr f = open_file(path, "rb");
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  RawImage out;
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> buffer;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": " + message);
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  const auto width = png_get_image_width(png, info);
  const auto height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": not a single-channel grayscale image");
  }
  if (depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    depth = 8;
  }
  if (depth == 16) png_set_swap(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.bit_depth = depth;
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  out.pixels.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t i = y * width + x;
      if (depth == 16) {
        std::uint16_t s;
        std::memcpy(&s, rows[y] + 2 * x, 2);
        out.pixels[i] = s;
      } else {
        out.pixels[i] = rows[y][x];
      }
    }
  }
  return out;
}

RawImage read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  auto next_token = [&]() {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(in, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(c);
    }
    return tok;
  };
  if (next_token() != "P5") throw IoError(path.string() + ": not a binary PGM (P5)");
  RawImage out;
  long maxval = 0;
  try {
    out.width = std::stoi(next_token());
    out.height = std::stoi(next_token());
    maxval = std::stol(next_token());
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  if (maxval <= 0 || maxval > 65535) throw IoError(path.string() + ": unsupported PGM maxval");
  if (out.width <= 0 || out.height <= 0) throw IoError(path.string() + ": zero-area image");
  out.bit_depth = maxval > 255 ? 16 : 8;
  const std::size_t n = static_cast<std::size_t>(out.width) * out.height;
  const std::size_t bytes = n * (out.bit_depth == 16 ? 2 : 1);
  std::vector<unsigned char> data(bytes);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) throw IoError(path.string() + ": truncated PGM");
  out.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.pixels[i] = out.bit_depth == 16
                        ? static_cast<std::uint16_t>((data[2 * i] << 8) | data[2 * i + 1])
                        : data[i];
  }
  return out;
}

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("scale must be positive");
}

}  // namespace

RawImage read_raster(const fs::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path.string());
  unsigned char magic[8] = {};
  probe.read(reinterpret_cast<char*>(magic), 8);
  const auto got = probe.gcount();
  probe.close();
  RawImage img;
  if (got == 8 && png_sig_cmp(magic, 0, 8) == 0) {
    img = read_png(path);
  } else if (got >= 2 && magic[0] == 'P' && magic[1] == '5') {
    img = read_pgm(path);
  } else {
    throw IoError(path.string() + ": unsupported raster format (expected PNG or P5 PGM)");
  }
  if (img.width <= 0 || img.height <= 0) throw IoError(path.string() + ": zero-area image");
  if (img.bit_depth != 8 && img.bit_depth != 16) {
    throw IoError(path.string() + ": unsupported bit depth");
  }
  return img;
}

void write_png(const fs::path& path, const RawImage& image) {
  if (image.bit_depth != 8 && image.bit_depth != 16) throw IoError("unsupported bit depth");
  FilePtr f = open_file(path, "wb");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
  if (!png) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  const int bpp = image.bit_depth / 8;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(image.width) * bpp);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": " + message);
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, image.width, image.height, image.bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const std::uint16_t s = image.pixels[static_cast<std::size_t>(y) * image.width + x];
      if (bpp == 2) {
        row[2 * x] = static_cast<std::uint8_t>(s >> 8);
        row[2 * x + 1] = static_cast<std::uint8_t>(s & 0xff);
      } else {
        row[x] = static_cast<std::uint8_t>(s);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_pgm(const fs::path& path, const RawImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << '\n' << image.max_value() << '\n';
  for (std::uint16_t s : image.pixels) {
    if (image.bit_depth == 16) {
      out.put(static_cast<char>(s >> 8));
      out.put(static_cast<char>(s & 0xff));
    } else {
      out.put(static_cast<char>(s));
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

DisparityImage load_disparity(const fs::path& path, double scale) {
  check_scale(scale);
  const RawImage raw = read_raster(path);
  std::vector<double> values(raw.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = raw.pixels[i] == 0 ? DisparityImage::kInvalid : raw.pixels[i] * scale;
  }
  return DisparityImage(raw.width, raw.height, std::move(values));
}

void save_disparity(const fs::path& path, const DisparityImage& image, double scale) {
  check_scale(scale);
  RawImage raw{image.width(), image.height(), 16, {}};
  raw.pixels.resize(image.size());
  const auto values = image.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!DisparityImage::is_valid(values[i])) {
      raw.pixels[i] = 0;
      continue;
    }
    const double q = std::round(values[i] / scale);
    if (q > 65535.0) {
      throw IoError(path.string() + ": disparity " + std::to_string(values[i]) +
                    " exceeds the 16-bit range at this scale");
    }
    raw.pixels[i] = static_cast<std::uint16_t>(std::max(1.0, q));
  }
  write_png(path, raw);
}

DisparityImage load_transformed(const fs::path& path, double scale) {
  check_scale(scale);
  const RawImage raw = read_raster(path);
  std::vector<double> values(raw.pixels.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = raw.pixels[i] == 0 ? DisparityImage::kInvalid : (raw.pixels[i] - 1) * scale;
  }
  return DisparityImage::transformed(raw.width, raw.height, std::move(values));
}

void save_transformed(const fs::path& path, const DisparityImage& image, double scale) {
  check_scale(scale);
  RawImage raw{image.width(), image.height(), 16, {}};
  raw.pixels.resize(image.size());
  const auto values = image.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!DisparityImage::is_valid(values[i])) {
      raw.pixels[i] = 0;
      continue;
    }
    const double q = 1.0 + std::round(std::max(0.0, values[i]) / scale);
    if (q > 65535.0) {
      throw IoError(path.string() + ": transformed value exceeds the 16-bit range at this scale");
    }
    raw.pixels[i] = static_cast<std::uint16_t>(q);
  }
  write_png(path, raw);
}

LabelMask load_mask(const fs::path& path) {
  const RawImage raw = read_raster(path);
  std::vector<std::uint8_t> labels(raw.pixels.size());
  std::transform(raw.pixels.begin(), raw.pixels.end(), labels.begin(),
                 [](std::uint16_t s) { return static_cast<std::uint8_t>(s != 0); });
  return LabelMask(raw.width, raw.height, std::move(labels));
}

void save_mask(const fs::path& path, const LabelMask& mask) {
  RawImage raw{mask.width(), mask.height(), 8, {}};
  raw.pixels.resize(mask.size());
  const auto labels = mask.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) raw.pixels[i] = labels[i] ? 255 : 0;
  write_png(path, raw);
}

Raster load_normalized(const fs::path& path) {
  const RawImage raw = read_raster(path);
  Raster out{raw.width, raw.height, std::vector<double>(raw.pixels.size())};
  const double maxv = raw.max_value();
  for (std::size_t i = 0; i < raw.pixels.size(); ++i) out.values[i] = raw.pixels[i] / maxv;
  return out;
}

void save_gray8(const fs::path& path, const Raster& raster) {
  RawImage raw{raster.width, raster.height, 8, {}};
  raw.pixels.resize(raster.values.size());
  for (std::size_t i = 0; i < raster.values.size(); ++i) {
    raw.pixels[i] = static_cast<std::uint16_t>(std::clamp(std::round(raster.values[i]), 0.0, 255.0));
  }
  write_png(path, raw);
}

bool is_raster_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm";
}

std::vector<fs::path> list_rasters(const fs::path& path) {
  if (!fs::is_directory(path)) {
    if (!fs::exists(path)) throw IoError("no such file or directory: " + path.string());
    return {path};
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && is_raster_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace pothole::io
