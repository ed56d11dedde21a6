#include <csetjmp>
#include <cstdio>
#include <cstdlib>

#include <jpeglib.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "detail/jpeg.hpp"
#include "volmark/error.hpp"

namespace volmark::detail {

namespace {

struct ErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf escape;
  char message[JMSG_LENGTH_MAX];
};

void on_error(j_common_ptr info) {
  auto* mgr = reinterpret_cast<ErrorManager*>(info->err);
  (*info->err->format_message)(info, mgr->message);
  std::longjmp(mgr->escape, 1);
}

// No C++ objects with destructors may live between setjmp and longjmp here.
bool encode_decode(const std::vector<unsigned char>& in, std::size_t width, std::size_t height, int quality,
                   std::vector<unsigned char>& out, char* message) {
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  {
    jpeg_compress_struct c{};
    ErrorManager err{};
    c.err = jpeg_std_error(&err.base);
    err.base.error_exit = on_error;
    if (setjmp(err.escape)) {
      jpeg_destroy_compress(&c);
      std::free(buffer);
      std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
      return false;
    }
    jpeg_create_compress(&c);
    jpeg_mem_dest(&c, &buffer, &size);
    c.image_width = static_cast<JDIMENSION>(width);
    c.image_height = static_cast<JDIMENSION>(height);
    c.input_components = 1;
    c.in_color_space = JCS_GRAYSCALE;
    jpeg_set_defaults(&c);
    jpeg_set_quality(&c, quality, TRUE);
    jpeg_start_compress(&c, TRUE);
    while (c.next_scanline < c.image_height) {
      JSAMPROW row = const_cast<unsigned char*>(in.data()) + c.next_scanline * width;
      jpeg_write_scanlines(&c, &row, 1);
    }
    jpeg_finish_compress(&c);
    jpeg_destroy_compress(&c);
  }
  {
    jpeg_decompress_struct d{};
    ErrorManager err{};
    d.err = jpeg_std_error(&err.base);
    err.base.error_exit = on_error;
    if (setjmp(err.escape)) {
      jpeg_destroy_decompress(&d);
      std::free(buffer);
      std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
      return false;
    }
    jpeg_create_decompress(&d);
    jpeg_mem_src(&d, buffer, size);
    jpeg_read_header(&d, TRUE);
    d.out_color_space = JCS_GRAYSCALE;
    jpeg_start_decompress(&d);
    while (d.output_scanline < d.output_height) {
      JSAMPROW row = out.data() + d.output_scanline * width;
      jpeg_read_scanlines(&d, &row, 1);
    }
    jpeg_finish_decompress(&d);
    jpeg_destroy_decompress(&d);
  }
  std::free(buffer);
  return true;
}

}  // namespace

Volume jpeg_slices(const Volume& v, int quality) {
  const auto& d = v.dims();
  const std::size_t plane = d.x * d.y;
  Volume out = v;
  std::vector<unsigned char> in8(plane), out8(plane);
  char message[JMSG_LENGTH_MAX] = {};

  for (std::size_t z = 0; z < d.z; ++z) {
    const auto slice = v.voxels.values().subspan(z * plane, plane);
    const auto [lo_it, hi_it] = std::minmax_element(slice.begin(), slice.end());
    const double lo = *lo_it, hi = *hi_it;
    const double step = hi - lo <= 255.0 ? 1.0 : (hi - lo) / 255.0;
    for (std::size_t i = 0; i < plane; ++i)
      in8[i] = static_cast<unsigned char>(std::floor((slice[i] - lo) / step + 0.5));
    if (!encode_decode(in8, d.x, d.y, quality, out8, message))
      throw Error(ErrorCode::BadParameter, std::string("JPEG codec failed: ") + message);
    for (std::size_t i = 0; i < plane; ++i) {
      const double value = std::floor(lo + out8[i] * step + 0.5);
      out.voxels[z * plane + i] = static_cast<std::uint16_t>(std::clamp(value, 0.0, static_cast<double>(v.max_value())));
    }
  }
  return out;
}

}  // namespace volmark::detail
