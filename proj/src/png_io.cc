// Copyright 2026 The Dimlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dimlight/png_io.h"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "dimlight/error.h"

namespace dimlight {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr OpenFile(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  return file;
}

void WritePng(const std::filesystem::path& path, int width, int height,
              int color_type, int bit_depth,
              const std::vector<png_bytep>& rows) {
  FilePtr file = OpenFile(path, "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIo, "libpng init failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorKind::kIo, "failed to encode " + path.string());
  }
  png_init_io(png, file.get());
  // Fixed settings so identical pixels always give identical bytes.
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

PngPixels ReadPng(const std::filesystem::path& path) {
  FilePtr file = OpenFile(path, "rb");
  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorKind::kIo, "not a PNG file: " + path.string());
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::kIo, "libpng init failed for " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorKind::kIo, "failed to decode " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (png_get_bit_depth(png, info) == 16) png_set_swap(png);
  png_read_update_info(png, info);

  PngPixels pixels;
  pixels.width = static_cast<int>(png_get_image_width(png, info));
  pixels.height = static_cast<int>(png_get_image_height(png, info));
  pixels.channels = png_get_channels(png, info);
  pixels.bit_depth = png_get_bit_depth(png, info);

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  std::vector<png_byte> buffer(row_bytes * pixels.height);
  std::vector<png_bytep> rows(pixels.height);
  for (int y = 0; y < pixels.height; ++y) rows[y] = &buffer[y * row_bytes];
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t count =
      static_cast<std::size_t>(pixels.width) * pixels.height * pixels.channels;
  pixels.samples.resize(count);
  if (pixels.bit_depth == 16) {
    for (std::size_t i = 0; i < count; ++i) {
      pixels.samples[i] = static_cast<std::uint16_t>(buffer[2 * i] |
                                                     (buffer[2 * i + 1] << 8));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) pixels.samples[i] = buffer[i];
  }
  return pixels;
}

Rgb8Image ReadRgb8Png(const std::filesystem::path& path) {
  const PngPixels pixels = ReadPng(path);
  Rgb8Image image;
  image.width = pixels.width;
  image.height = pixels.height;
  image.data.resize(static_cast<std::size_t>(pixels.width) * pixels.height * 3);
  const int shift = pixels.bit_depth == 16 ? 8 : 0;
  const bool gray = pixels.channels < 3;
  for (std::size_t p = 0; p < image.data.size() / 3; ++p) {
    for (int c = 0; c < 3; ++c) {
      const std::size_t src = p * pixels.channels + (gray ? 0 : c);
      image.data[p * 3 + c] =
          static_cast<std::uint8_t>(pixels.samples[src] >> shift);
    }
  }
  return image;
}

Raster<std::uint16_t> ReadGray16Png(const std::filesystem::path& path) {
  const PngPixels pixels = ReadPng(path);
  if (pixels.channels != 1) {
    throw Error(ErrorKind::kStructural,
                "expected a single-channel PNG: " + path.string());
  }
  Raster<std::uint16_t> raster;
  raster.width = pixels.width;
  raster.height = pixels.height;
  raster.data = pixels.samples;
  return raster;
}

void WriteRgb8Png(const std::filesystem::path& path, const Rgb8Image& image) {
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y) {
    rows[y] = const_cast<png_bytep>(&image.data[static_cast<std::size_t>(y) *
                                                image.width * 3]);
  }
  WritePng(path, image.width, image.height, PNG_COLOR_TYPE_RGB, 8, rows);
}

void WriteGray16Png(const std::filesystem::path& path,
                    const Raster<std::uint16_t>& raster) {
  std::vector<png_bytep> rows(raster.height);
  for (int y = 0; y < raster.height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(const_cast<std::uint16_t*>(
        &raster.data[static_cast<std::size_t>(y) * raster.width]));
  }
  WritePng(path, raster.width, raster.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

}  // namespace dimlight
