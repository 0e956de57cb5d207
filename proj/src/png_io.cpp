// Copyright 2026 The depthpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

#include "depthpose/dataio.hpp"
#include "depthpose/error.hpp"

namespace depthpose {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Heap state so nothing on the stack is modified between setjmp and longjmp.
struct ReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngImage image;
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> buffer;
  char message[256] = {0};
};

void ErrorFn(png_structp png, png_const_charp msg) {
  auto* buf = static_cast<char*>(png_get_error_ptr(png));
  std::snprintf(buf, 256, "%s", msg);
  png_longjmp(png, 1);
}

void WarningFn(png_structp, png_const_charp) {}

}  // namespace

PngImage ReadPng(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorKind::kLoad, "cannot open " + path.string());
  std::uint8_t sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorKind::kLoad, path.string() + " is not a PNG file");
  }
  auto st = std::make_unique<ReadState>();
  st->png = png_create_read_struct(PNG_LIBPNG_VER_STRING, st->message, ErrorFn, WarningFn);
  if (st->png == nullptr) throw Error(ErrorKind::kLoad, "libpng initialization failed");
  st->info = png_create_info_struct(st->png);
  if (st->info == nullptr) {
    png_destroy_read_struct(&st->png, nullptr, nullptr);
    throw Error(ErrorKind::kLoad, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(st->png))) {
    png_destroy_read_struct(&st->png, &st->info, nullptr);
    throw Error(ErrorKind::kLoad, "cannot decode " + path.string() + ": " + st->message);
  }
  png_init_io(st->png, file.get());
  png_set_sig_bytes(st->png, 8);
  png_read_info(st->png, st->info);

  const int color = png_get_color_type(st->png, st->info);
  const int depth = png_get_bit_depth(st->png, st->info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st->png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(st->png);
  if (png_get_valid(st->png, st->info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(st->png);
  png_set_strip_alpha(st->png);
  png_read_update_info(st->png, st->info);

  PngImage& img = st->image;
  img.width = static_cast<int>(png_get_image_width(st->png, st->info));
  img.height = static_cast<int>(png_get_image_height(st->png, st->info));
  img.bit_depth = png_get_bit_depth(st->png, st->info);
  img.channels = png_get_channels(st->png, st->info);
  const std::size_t row_bytes = png_get_rowbytes(st->png, st->info);
  st->buffer.resize(row_bytes * img.height);
  st->rows.resize(img.height);
  for (int y = 0; y < img.height; ++y) st->rows[y] = st->buffer.data() + row_bytes * y;
  png_read_image(st->png, st->rows.data());
  png_read_end(st->png, nullptr);
  png_destroy_read_struct(&st->png, &st->info, nullptr);

  if ((img.channels != 1 && img.channels != 3) || (img.bit_depth != 8 && img.bit_depth != 16)) {
    throw Error(ErrorKind::kLoad, path.string() + ": unsupported PNG layout");
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * img.channels;
  img.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    img.samples[i] = img.bit_depth == 16
                         ? static_cast<std::uint16_t>((st->buffer[2 * i] << 8) | st->buffer[2 * i + 1])
                         : st->buffer[i];
  }
  return std::move(img);
}

void WritePng(const std::filesystem::path& path, const PngImage& img) {
  if ((img.channels != 1 && img.channels != 3) || (img.bit_depth != 8 && img.bit_depth != 16) ||
      img.samples.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
    throw Error(ErrorKind::kInvalidArgument, "PNG layout not writable");
  }
  const int bytes = img.bit_depth / 8;
  auto st = std::make_unique<ReadState>();
  st->buffer.resize(img.samples.size() * bytes);
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    if (bytes == 2) {
      st->buffer[2 * i] = static_cast<std::uint8_t>(img.samples[i] >> 8);
      st->buffer[2 * i + 1] = static_cast<std::uint8_t>(img.samples[i] & 0xff);
    } else {
      st->buffer[i] = static_cast<std::uint8_t>(img.samples[i]);
    }
  }
  const std::size_t row_bytes = static_cast<std::size_t>(img.width) * img.channels * bytes;
  st->rows.resize(img.height);
  for (int y = 0; y < img.height; ++y) st->rows[y] = st->buffer.data() + row_bytes * y;

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorKind::kLoad, "cannot write " + path.string());
  st->png = png_create_write_struct(PNG_LIBPNG_VER_STRING, st->message, ErrorFn, WarningFn);
  if (st->png == nullptr) throw Error(ErrorKind::kLoad, "libpng initialization failed");
  st->info = png_create_info_struct(st->png);
  if (st->info == nullptr) {
    png_destroy_write_struct(&st->png, nullptr);
    throw Error(ErrorKind::kLoad, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(st->png))) {
    png_destroy_write_struct(&st->png, &st->info);
    throw Error(ErrorKind::kLoad, "cannot encode " + path.string() + ": " + st->message);
  }
  png_init_io(st->png, file.get());
  png_set_IHDR(st->png, st->info, img.width, img.height, img.bit_depth,
               img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(st->png, st->info);
  png_write_image(st->png, st->rows.data());
  png_write_end(st->png, nullptr);
  png_destroy_write_struct(&st->png, &st->info);
}

}  // namespace depthpose
