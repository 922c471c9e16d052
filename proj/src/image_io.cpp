#include "platepipe/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace platepipe {

namespace {

std::string lower_ext(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

Image load_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw ParseError("png read failed: " + path + ": " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image img = Image::create(static_cast<int>(png.width), static_cast<int>(png.height),
                            color ? 3 : 1);
  if (!png_image_finish_read(&png, nullptr, img.data.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw ParseError("png decode failed: " + path + ": " + msg);
  }
  return img;
}

void save_png(const Image& img, const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, img.data.data(), 0, nullptr)) {
    throw Error("png write failed: " + path + ": " + png.message);
  }
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_trampoline(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_jpeg(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw ParseError("cannot open " + path);

  jpeg_decompress_struct cinfo;
  JpegErrorMgr jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_trampoline;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw ParseError("jpeg decode failed: " + path + ": " + jerr.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components >= 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_start_decompress(&cinfo);

  Image img = Image::create(static_cast<int>(cinfo.output_width),
                            static_cast<int>(cinfo.output_height),
                            cinfo.output_components >= 3 ? 3 : 1);
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = img.data.data() + static_cast<std::size_t>(cinfo.output_scanline) * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

void save_jpeg(const Image& img, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw Error("cannot open " + path + " for writing");

  jpeg_compress_struct cinfo;
  JpegErrorMgr jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_trampoline;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_compress(&cinfo);
    throw Error("jpeg encode failed: " + path + ": " + jerr.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, f.get());
  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = img.channels;
  cinfo.in_color_space = img.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 95, TRUE);
  jpeg_start_compress(&cinfo, TRUE);

  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(img.data.data() +
                                        static_cast<std::size_t>(cinfo.next_scanline) * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
}

}  // namespace

Image load_image(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "png") return load_png(path);
  if (ext == "jpg" || ext == "jpeg") return load_jpeg(path);
  throw ParseError("unsupported image format: " + path);
}

void save_image(const Image& img, const std::string& path) {
  if (!img.valid()) throw DimensionMismatchError("save_image: invalid image");
  const std::string ext = lower_ext(path);
  if (ext == "png") {
    save_png(img, path);
  } else if (ext == "jpg" || ext == "jpeg") {
    save_jpeg(img, path);
  } else {
    throw ParseError("unsupported image format: " + path);
  }
}

}  // namespace platepipe
