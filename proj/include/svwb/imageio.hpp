#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "svwb/error.hpp"
#include "svwb/image.hpp"
#include "svwb/srgb.hpp"

namespace svwb {

// Decoded-but-not-linearized raster: interleaved RGB samples at 8 or 16
// bits, already widened to uint16 storage.
struct EncodedRaster {
  int width = 0;
  int height = 0;
  int bit_depth = 8;  // 8 or 16
  std::vector<uint16_t> samples;

  uint16_t max_value() const { return bit_depth == 16 ? 65535 : 255; }
};

namespace detail {

inline void validate_raster_shape(const EncodedRaster& r, const std::string& path) {
  if (r.width < 1 || r.height < 1) {
    throw io_error(path + ": empty image");
  }
  if (r.bit_depth != 8 && r.bit_depth != 16) {
    throw io_error(path + ": unsupported bit depth " + std::to_string(r.bit_depth) +
                   " (only 8 and 16 are supported)");
  }
}

struct PngFile {
  std::FILE* fp = nullptr;
  explicit PngFile(const std::string& path, const char* mode) : fp(std::fopen(path.c_str(), mode)) {}
  ~PngFile() {
    if (fp) std::fclose(fp);
  }
  PngFile(const PngFile&) = delete;
  PngFile& operator=(const PngFile&) = delete;
};

// Quiet libpng handlers: failures surface as io_error, not stderr chatter.
inline void png_error_to_longjmp(png_structp png, png_const_charp) { png_longjmp(png, 1); }
inline void png_swallow_warning(png_structp, png_const_charp) {}

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReadState() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                 png_swallow_warning);
    if (!png) throw io_error("libpng: failed to allocate read state");
    info = png_create_info_struct(png);
    if (!info) {
      png_destroy_read_struct(&png, nullptr, nullptr);
      throw io_error("libpng: failed to allocate info state");
    }
  }
  ~PngReadState() { png_destroy_read_struct(&png, &info, nullptr); }
  PngReadState(const PngReadState&) = delete;
  PngReadState& operator=(const PngReadState&) = delete;
};

struct PngWriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriteState() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_to_longjmp,
                                  png_swallow_warning);
    if (!png) throw io_error("libpng: failed to allocate write state");
    info = png_create_info_struct(png);
    if (!info) {
      png_destroy_write_struct(&png, nullptr);
      throw io_error("libpng: failed to allocate info state");
    }
  }
  ~PngWriteState() { png_destroy_write_struct(&png, &info); }
  PngWriteState(const PngWriteState&) = delete;
  PngWriteState& operator=(const PngWriteState&) = delete;
};

inline EncodedRaster decode_png_file(const std::string& path) {
  PngFile file(path, "rb");
  if (!file.fp) throw io_error("cannot open '" + path + "' for reading");
  PngReadState state;

  EncodedRaster raster;
  std::vector<png_byte> bytes;
  std::vector<png_bytep> rows;

  // libpng reports errors by longjmp'ing back here; RAII cleans up.
  if (setjmp(png_jmpbuf(state.png))) {
    throw io_error(path + ": corrupt or unsupported PNG stream");
  }
  png_structp png = state.png;
  png_infop info = state.info;

  png_init_io(png, file.fp);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8 && bit_depth != 16) {
    throw io_error(path + ": unsupported PNG bit depth " + std::to_string(bit_depth) +
                   " (only 8 and 16 are supported)");
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  raster.width = static_cast<int>(png_get_image_width(png, info));
  raster.height = static_cast<int>(png_get_image_height(png, info));
  raster.bit_depth = png_get_bit_depth(png, info);
  const size_t rowbytes = png_get_rowbytes(png, info);
  bytes.resize(rowbytes * static_cast<size_t>(raster.height));
  rows.resize(static_cast<size_t>(raster.height));
  for (int y = 0; y < raster.height; ++y) {
    rows[static_cast<size_t>(y)] = bytes.data() + static_cast<size_t>(y) * rowbytes;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);

  const size_t n = static_cast<size_t>(raster.width) * raster.height * 3;
  raster.samples.resize(n);
  if (raster.bit_depth == 8) {
    for (size_t i = 0; i < n; ++i) raster.samples[i] = bytes[i];
  } else {
    // PNG 16-bit samples are big-endian on the wire.
    for (size_t i = 0; i < n; ++i) {
      raster.samples[i] = static_cast<uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }
  }
  validate_raster_shape(raster, path);
  return raster;
}

inline void encode_png_file(const EncodedRaster& raster, const std::string& path) {
  validate_raster_shape(raster, path);
  PngFile file(path, "wb");
  if (!file.fp) throw io_error("cannot open '" + path + "' for writing");
  PngWriteState state;

  std::vector<png_byte> bytes;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(state.png))) {
    throw io_error(path + ": PNG write failed");
  }
  png_structp png = state.png;
  png_infop info = state.info;

  png_init_io(png, file.fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(raster.width),
               static_cast<png_uint_32>(raster.height), raster.bit_depth, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const size_t n = static_cast<size_t>(raster.width) * raster.height * 3;
  const size_t rowbytes = static_cast<size_t>(raster.width) * 3 * (raster.bit_depth / 8);
  bytes.resize(rowbytes * static_cast<size_t>(raster.height));
  if (raster.bit_depth == 8) {
    for (size_t i = 0; i < n; ++i) bytes[i] = static_cast<png_byte>(raster.samples[i]);
  } else {
    for (size_t i = 0; i < n; ++i) {
      bytes[2 * i] = static_cast<png_byte>(raster.samples[i] >> 8);
      bytes[2 * i + 1] = static_cast<png_byte>(raster.samples[i] & 0xff);
    }
  }
  rows.resize(static_cast<size_t>(raster.height));
  for (int y = 0; y < raster.height; ++y) {
    rows[static_cast<size_t>(y)] = bytes.data() + static_cast<size_t>(y) * rowbytes;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
}

inline EncodedRaster decode_ppm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");

  // Reads one header token, skipping whitespace and '#' comments. Consumes
  // the single whitespace byte terminating the token, which for the maxval
  // token is exactly the separator preceding the binary payload.
  auto next_token = [&in, &path]() -> std::string {
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
      }
      c = in.get();
    }
    std::string tok;
    while (c != EOF && !std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      c = in.get();
    }
    if (tok.empty()) throw io_error(path + ": truncated PPM header");
    return tok;
  };

  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '6') {
    throw io_error(path + ": not a binary PPM (P6) stream");
  }
  long width = 0, height = 0, maxval = 0;
  try {
    width = std::stol(next_token());
    height = std::stol(next_token());
    maxval = std::stol(next_token());
  } catch (const std::logic_error&) {
    throw io_error(path + ": malformed PPM header");
  }
  if (width < 1 || height < 1) throw io_error(path + ": empty image");
  if (maxval != 255 && maxval != 65535) {
    throw io_error(path + ": unsupported PPM maxval " + std::to_string(maxval) +
                   " (only 255 and 65535 are supported)");
  }

  EncodedRaster raster;
  raster.width = static_cast<int>(width);
  raster.height = static_cast<int>(height);
  raster.bit_depth = maxval == 255 ? 8 : 16;
  const size_t n = static_cast<size_t>(width) * static_cast<size_t>(height) * 3;
  std::vector<char> payload(n * (raster.bit_depth / 8));
  in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (static_cast<size_t>(in.gcount()) != payload.size()) {
    throw io_error(path + ": truncated PPM pixel data");
  }
  raster.samples.resize(n);
  const auto* bytes = reinterpret_cast<const unsigned char*>(payload.data());
  if (raster.bit_depth == 8) {
    for (size_t i = 0; i < n; ++i) raster.samples[i] = bytes[i];
  } else {
    for (size_t i = 0; i < n; ++i) {
      raster.samples[i] = static_cast<uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
    }
  }
  return raster;
}

inline void encode_ppm_file(const EncodedRaster& raster, const std::string& path) {
  validate_raster_shape(raster, path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "P6\n" << raster.width << " " << raster.height << "\n"
      << static_cast<int>(raster.max_value()) << "\n";
  std::vector<char> payload;
  payload.reserve(raster.samples.size() * (raster.bit_depth / 8));
  for (uint16_t s : raster.samples) {
    if (raster.bit_depth == 16) payload.push_back(static_cast<char>(s >> 8));
    payload.push_back(static_cast<char>(s & 0xff));
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw io_error(path + ": short write");
}

inline bool has_png_signature(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() >= 8 && png_sig_cmp(sig, 0, 8) == 0;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

// Reads a PNG or binary PPM (dispatch by content, not extension) and lifts
// it to linear XYZ. By default samples are treated as sRGB-encoded; with
// assume_linear the transfer curve is skipped and only the RGB-to-XYZ basis
// change applies (for synthetic linear data).
inline LinearImage load_image(const std::string& path, bool assume_linear = false) {
  EncodedRaster raster;
  if (detail::has_png_signature(path)) {
    raster = detail::decode_png_file(path);
  } else {
    raster = detail::decode_ppm_file(path);
  }
  LinearImage img(raster.width, raster.height);
  const double scale = 1.0 / raster.max_value();
  auto px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i) {
    const double r = raster.samples[3 * i + 0] * scale;
    const double g = raster.samples[3 * i + 1] * scale;
    const double b = raster.samples[3 * i + 2] * scale;
    if (assume_linear) {
      px[i] = kSrgbToXyzMatrix * Vec3{r, g, b};
    } else {
      px[i] = srgb_to_linear_xyz(r, g, b);
    }
  }
  return img;
}

// Writes PNG or PPM depending on the file extension (.png / .ppm / .pnm).
// Out-of-gamut values are clamped during sRGB encoding; this is the only
// layer that clamps.
inline void save_image(const LinearImage& img, const std::string& path, int bit_depth = 8,
                       bool assume_linear = false) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw config_error("save_image: bit depth must be 8 or 16, got " + std::to_string(bit_depth));
  }
  EncodedRaster raster;
  raster.width = img.width();
  raster.height = img.height();
  raster.bit_depth = bit_depth;
  const double maxval = raster.max_value();
  raster.samples.resize(img.pixel_count() * 3);
  auto px = img.pixels();
  for (size_t i = 0; i < px.size(); ++i) {
    double rgb[3];
    if (assume_linear) {
      const Vec3 lin = xyz_to_srgb_matrix() * px[i];
      rgb[0] = lin.x;
      rgb[1] = lin.y;
      rgb[2] = lin.z;
      for (double& v : rgb) v = std::min(1.0, std::max(0.0, v));
    } else {
      const EncodedSrgb enc = linear_xyz_to_srgb(px[i]);
      rgb[0] = enc.r;
      rgb[1] = enc.g;
      rgb[2] = enc.b;
    }
    for (int c = 0; c < 3; ++c) {
      raster.samples[3 * i + c] = static_cast<uint16_t>(std::lround(rgb[c] * maxval));
    }
  }
  if (detail::ends_with(path, ".png")) {
    detail::encode_png_file(raster, path);
  } else if (detail::ends_with(path, ".ppm") || detail::ends_with(path, ".pnm")) {
    detail::encode_ppm_file(raster, path);
  } else {
    throw config_error("save_image: cannot infer format from '" + path +
                       "' (expected .png, .ppm, or .pnm)");
  }
}

}  // namespace svwb
