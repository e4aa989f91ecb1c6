#pragma once

// Float images and the PFM / PPM codecs.
//
// PFM layout written here is bit-exact:
//   "PF\n" (3 channels) or "Pf\n" (1 channel)
//   "<width> <height>\n"
//   "-1.0\n"                      (negative scale = little-endian)
//   float32 samples, rows stored bottom-to-top.
// In memory, row 0 is the top row.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "math.hpp"

namespace roomgt {

struct image {
  int                width    = 0;
  int                height   = 0;
  int                channels = 0;
  std::vector<float> data     = {};

  image() = default;
  image(int width, int height, int channels, float value = 0)
      : width{width}
      , height{height}
      , channels{channels}
      , data(size_t(width) * size_t(height) * size_t(channels), value) {}

  bool   empty() const { return data.empty(); }
  size_t index(int x, int y, int c = 0) const {
    return (size_t(y) * size_t(width) + size_t(x)) * size_t(channels) + size_t(c);
  }
  float& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
  float  at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }

  vec3 rgb_at(int x, int y) const {
    if (channels == 1) {
      double v = at(x, y);
      return {v, v, v};
    }
    return {at(x, y, 0), at(x, y, 1), at(x, y, 2)};
  }
  void set_rgb(int x, int y, vec3 v) {
    at(x, y, 0) = float(v.x);
    at(x, y, 1) = float(v.y);
    at(x, y, 2) = float(v.z);
  }

  friend bool operator==(const image&, const image&) = default;
};

inline bool all_finite(const image& img) {
  for (auto v : img.data)
    if (!std::isfinite(v)) return false;
  return true;
}

// Serialized PFM bytes. Throws on non-finite samples or bad shape.
inline std::string encode_pfm(const image& img) {
  if (img.channels != 1 && img.channels != 3)
    throw error("pfm: channels must be 1 or 3, got " + std::to_string(img.channels));
  if (img.width <= 0 || img.height <= 0)
    throw error("pfm: empty image");
  if (img.data.size() != size_t(img.width) * img.height * img.channels)
    throw error("pfm: sample count does not match dimensions");
  if (!all_finite(img)) throw error("pfm: image contains non-finite samples");

  auto header = std::string(img.channels == 3 ? "PF\n" : "Pf\n") +
                std::to_string(img.width) + " " + std::to_string(img.height) +
                "\n-1.0\n";
  auto row_floats = size_t(img.width) * img.channels;
  auto out        = header;
  out.resize(header.size() + img.data.size() * 4);
  auto* dst = out.data() + header.size();
  for (int y = img.height - 1; y >= 0; y--) {
    const float* row = img.data.data() + size_t(y) * row_floats;
    for (size_t i = 0; i < row_floats; i++) {
      auto bits = std::bit_cast<uint32_t>(row[i]);
      if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap32(bits);
      std::memcpy(dst, &bits, 4);
      dst += 4;
    }
  }
  return out;
}

inline image decode_pfm(const std::string& bytes, const std::string& name = "pfm") {
  auto stream = std::istringstream(bytes);
  auto magic  = std::string{};
  stream >> magic;
  int channels = 0;
  if (magic == "PF") channels = 3;
  else if (magic == "Pf") channels = 1;
  else throw parse_error(name, "bad PFM magic '" + magic + "'");
  int    width = 0, height = 0;
  double scale = 0;
  if (!(stream >> width >> height >> scale))
    throw parse_error(name, "truncated PFM header");
  if (width <= 0 || height <= 0 || scale == 0)
    throw parse_error(name, "invalid PFM header values");
  stream.get();  // single whitespace byte after scale
  auto offset = size_t(stream.tellg());
  auto img    = image(width, height, channels);
  if (bytes.size() < offset + img.data.size() * 4)
    throw parse_error(name, "truncated PFM payload");
  bool swap = (scale < 0) != (std::endian::native == std::endian::little);
  auto row_floats = size_t(width) * channels;
  const char* src = bytes.data() + offset;
  for (int y = height - 1; y >= 0; y--) {
    float* row = img.data.data() + size_t(y) * row_floats;
    for (size_t i = 0; i < row_floats; i++) {
      uint32_t bits;
      std::memcpy(&bits, src, 4);
      src += 4;
      if (swap) bits = __builtin_bswap32(bits);
      row[i] = std::bit_cast<float>(bits);
    }
  }
  return img;
}

inline std::string read_binary(const std::filesystem::path& path) {
  auto fs = std::ifstream(path, std::ios::binary);
  if (!fs) throw io_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(fs), std::istreambuf_iterator<char>()};
}

inline void write_binary(const std::filesystem::path& path, const std::string& bytes) {
  auto fs = std::ofstream(path, std::ios::binary);
  if (!fs) throw io_error("cannot write " + path.string());
  fs.write(bytes.data(), std::streamsize(bytes.size()));
  if (!fs) throw io_error("write failed: " + path.string());
}

inline void write_pfm(const image& img, const std::filesystem::path& path) {
  write_binary(path, encode_pfm(img));
}

inline image read_pfm(const std::filesystem::path& path) {
  return decode_pfm(read_binary(path), path.string());
}

// Binary 8-bit PPM (P6). Values are taken as linear [0,1].
inline image read_ppm(const std::filesystem::path& path) {
  auto bytes  = read_binary(path);
  auto stream = std::istringstream(bytes);
  auto magic  = std::string{};
  stream >> magic;
  if (magic != "P6") throw parse_error(path.string(), "only binary P6 PPM is supported");
  auto next_int = [&]() {
    stream >> std::ws;
    while (stream.peek() == '#') {
      std::string line;
      std::getline(stream, line);
      stream >> std::ws;
    }
    int v = 0;
    if (!(stream >> v)) throw parse_error(path.string(), "truncated PPM header");
    return v;
  };
  int width = next_int(), height = next_int(), maxval = next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw parse_error(path.string(), "unsupported PPM dimensions or depth");
  stream.get();
  auto offset = size_t(stream.tellg());
  auto img    = image(width, height, 3);
  if (bytes.size() < offset + img.data.size())
    throw parse_error(path.string(), "truncated PPM payload");
  for (size_t i = 0; i < img.data.size(); i++)
    img.data[i] = float((unsigned char)bytes[offset + i]) / float(maxval);
  return img;
}

// 8-bit preview: clamp, gamma 2.2.
inline std::string encode_ppm_preview(const image& img, double exposure = 1) {
  auto out = "P6\n" + std::to_string(img.width) + " " +
             std::to_string(img.height) + "\n255\n";
  for (int y = 0; y < img.height; y++) {
    for (int x = 0; x < img.width; x++) {
      auto c = img.rgb_at(x, y) * exposure;
      for (int k = 0; k < 3; k++) {
        auto v = std::pow(std::clamp(c[k], 0.0, 1.0), 1 / 2.2);
        out.push_back(char((unsigned char)std::lround(v * 255)));
      }
    }
  }
  return out;
}

inline void write_ppm_preview(const image& img, const std::filesystem::path& path) {
  write_binary(path, encode_ppm_preview(img));
}

// Reads PFM or PPM by extension.
inline image read_image(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".pfm" || ext == ".PFM") return read_pfm(path);
  if (ext == ".ppm" || ext == ".PPM") return read_ppm(path);
  throw io_error("unsupported image format: " + path.string());
}

}  // namespace roomgt
