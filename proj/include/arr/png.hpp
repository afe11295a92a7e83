#pragma once

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arr {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Image() = default;
  Image(int w, int h, std::array<std::uint8_t, 3> fill = {255, 255, 255})
      : width(w), height(h), rgb(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3) {
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
      rgb[i] = fill[0];
      rgb[i + 1] = fill[1];
      rgb[i + 2] = fill[2];
    }
  }

  std::uint8_t* at(int x, int y) {
    return rgb.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }
  const std::uint8_t* at(int x, int y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }

  friend bool operator==(const Image&, const Image&) = default;
};

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_chunk(std::vector<std::uint8_t>& out, const char* type,
                      const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace detail

/// 8-bit RGB PNG, filter type 0 on every row, fixed compression level.
inline std::vector<std::uint8_t> encode_png(const Image& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.rgb.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3)
    throw std::invalid_argument("encode_png: malformed image");
  std::vector<std::uint8_t> raw;
  const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
  raw.reserve((stride + 1) * static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    const auto* row = img.at(0, y);
    raw.insert(raw.end(), row, row + stride);
  }
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(size);
  if (compress2(z.data(), &size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw std::runtime_error("encode_png: zlib compression failed");
  z.resize(size);

  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  detail::put_u32(ihdr, static_cast<std::uint32_t>(img.width));
  detail::put_u32(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});
  detail::put_chunk(out, "IHDR", ihdr);
  detail::put_chunk(out, "IDAT", z);
  detail::put_chunk(out, "IEND", {});
  return out;
}

/// Inverse of encode_png for the subset it writes (RGB8, filter 0). Used by tests.
inline Image decode_png(const std::vector<std::uint8_t>& png) {
  auto u32 = [&](std::size_t at) {
    if (at + 4 > png.size()) throw std::runtime_error("decode_png: truncated");
    return (std::uint32_t{png[at]} << 24) | (std::uint32_t{png[at + 1]} << 16) |
           (std::uint32_t{png[at + 2]} << 8) | std::uint32_t{png[at + 3]};
  };
  if (png.size() < 8 || png[0] != 0x89 || png[1] != 'P') throw std::runtime_error("decode_png: not a PNG");
  std::size_t pos = 8;
  Image img;
  std::vector<std::uint8_t> z;
  while (pos + 12 <= png.size()) {
    const auto len = u32(pos);
    const std::string type(png.begin() + static_cast<std::ptrdiff_t>(pos + 4),
                           png.begin() + static_cast<std::ptrdiff_t>(pos + 8));
    const std::size_t data = pos + 8;
    if (data + len + 4 > png.size()) throw std::runtime_error("decode_png: truncated chunk");
    const auto crc = crc32(0L, png.data() + pos + 4, static_cast<uInt>(len + 4));
    if (crc != u32(data + len)) throw std::runtime_error("decode_png: bad CRC in " + type);
    if (type == "IHDR") {
      img.width = static_cast<int>(u32(data));
      img.height = static_cast<int>(u32(data + 4));
      if (png[data + 8] != 8 || png[data + 9] != 2) throw std::runtime_error("decode_png: only RGB8");
    } else if (type == "IDAT") {
      z.insert(z.end(), png.begin() + static_cast<std::ptrdiff_t>(data),
               png.begin() + static_cast<std::ptrdiff_t>(data + len));
    }
    pos = data + len + 4;
  }
  const std::size_t stride = static_cast<std::size_t>(img.width) * 3;
  std::vector<std::uint8_t> raw((stride + 1) * static_cast<std::size_t>(img.height));
  uLongf size = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &size, z.data(), static_cast<uLong>(z.size())) != Z_OK || size != raw.size())
    throw std::runtime_error("decode_png: bad image data");
  img.rgb.resize(stride * static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    const auto* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
    if (row[0] != 0) throw std::runtime_error("decode_png: unsupported filter");
    std::copy(row + 1, row + 1 + stride, img.at(0, y));
  }
  return img;
}

}  // namespace arr
