// Copyright 2026 The ProxyForge Authors.
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

#include "proxyforge/raster/image_io.hpp"

#include <png.h>
#include <setjmp.h>
#include <cstdio>
// jpeglib.h needs size_t and FILE declared first.
#include <jpeglib.h>

#include <array>
#include <cstring>
#include <memory>
#include <string>

#include "proxyforge/error.hpp"

namespace proxyforge::raster {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  std::FILE* f = std::fopen(path.c_str(), mode);
  if (f == nullptr) {
    if (mode[0] == 'r' && !std::filesystem::exists(path)) {
      fail(ErrorCode::kMissingFile, path.string());
    }
    fail(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return FilePtr(f);
}

void png_error_handler(png_structp png, png_const_charp) {
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct PngReadResult {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> bytes;
};

PngReadResult read_png_raw(const std::filesystem::path& path, bool keep16) {
  FilePtr file = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                           png_warning_handler);
  if (png == nullptr) fail(ErrorCode::kIoFailure, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  PngReadResult result;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::kIoFailure, "malformed PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  if (depth == 16) {
    if (keep16) png_set_swap(png);
    else png_set_strip_16(png);
  }
  png_read_update_info(png, info);

  result.width = static_cast<int>(png_get_image_width(png, info));
  result.height = static_cast<int>(png_get_image_height(png, info));
  result.channels = png_get_channels(png, info);
  result.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  result.bytes.resize(stride * static_cast<std::size_t>(result.height));
  rows.resize(static_cast<std::size_t>(result.height));
  for (int y = 0; y < result.height; ++y) rows[static_cast<std::size_t>(y)] = result.bytes.data() + stride * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return result;
}

void write_png_raw(const std::filesystem::path& path, int width, int height, int color_type,
                   int bit_depth, const std::uint8_t* bytes, std::size_t stride, bool swap16) {
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler,
                                            png_warning_handler);
  if (png == nullptr) fail(ErrorCode::kIoFailure, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIoFailure, "PNG encode failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (swap16) png_set_swap(png);
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(bytes + stride * static_cast<std::size_t>(y));
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) fail(ErrorCode::kIoFailure, "write failed: " + path.string());
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  longjmp(mgr->jump, 1);
}

ImageBuf read_jpeg(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> pixels;
  int width = 0, height = 0, channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    fail(ErrorCode::kIoFailure, "malformed JPEG: " + path.string());
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  const std::size_t stride = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  pixels.resize(stride * static_cast<std::size_t>(height));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  ImageBuf out(width, height, channels);
  std::memcpy(out.data().data(), pixels.data(), pixels.size());
  return out;
}

}  // namespace

ImageBuf read_image(const std::filesystem::path& path) {
  std::array<unsigned char, 8> sig{};
  {
    FilePtr file = open_file(path, "rb");
    if (std::fread(sig.data(), 1, sig.size(), file.get()) < 3) {
      fail(ErrorCode::kIoFailure, "truncated image: " + path.string());
    }
  }
  if (sig[0] == 0xFF && sig[1] == 0xD8) return read_jpeg(path);
  if (png_sig_cmp(sig.data(), 0, sig.size()) != 0) {
    fail(ErrorCode::kIoFailure, "unsupported image format: " + path.string());
  }
  PngReadResult raw = read_png_raw(path, false);
  if (raw.channels != 1 && raw.channels != 3) {
    fail(ErrorCode::kIoFailure, "unsupported PNG channel layout: " + path.string());
  }
  ImageBuf out(raw.width, raw.height, raw.channels);
  std::memcpy(out.data().data(), raw.bytes.data(), out.size());
  return out;
}

void write_png(const std::filesystem::path& path, const ImageBuf& img) {
  const int color_type = img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  write_png_raw(path, img.width(), img.height(), color_type, 8, img.data().data(),
                static_cast<std::size_t>(img.width()) * static_cast<std::size_t>(img.channels()), false);
}

Gray16 read_png16(const std::filesystem::path& path) {
  PngReadResult raw = read_png_raw(path, true);
  if (raw.channels != 1) fail(ErrorCode::kIoFailure, "expected single-channel PNG: " + path.string());
  Gray16 out{raw.width, raw.height, std::vector<std::uint16_t>(static_cast<std::size_t>(raw.width) * raw.height)};
  if (raw.bit_depth == 16) {
    std::memcpy(out.data.data(), raw.bytes.data(), out.data.size() * 2);
  } else {
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = static_cast<std::uint16_t>(raw.bytes[i] * 257);
  }
  return out;
}

void write_png16(const std::filesystem::path& path, const Gray16& img) {
  write_png_raw(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 16,
                reinterpret_cast<const std::uint8_t*>(img.data.data()),
                static_cast<std::size_t>(img.width) * 2, true);
}

}  // namespace proxyforge::raster
