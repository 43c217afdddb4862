#include "roadgen/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen {

namespace fs = std::filesystem;

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(std::max(0, w)) * std::max(0, h), fill) {}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "mask dimensions must be >= 1");
  bits_.assign(static_cast<std::size_t>(width) * height, 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidArgument, "mask dimensions must be >= 1");
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorKind::InvalidArgument, "mask data length differs from width*height");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::from_gray(const GrayImage& img, std::uint8_t threshold) {
  if (img.empty()) throw Error(ErrorKind::ImageEmpty, "image has no pixels");
  BinaryMask m(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) m.bits_[i] = img.pixels[i] >= threshold ? 1 : 0;
  return m;
}

GrayImage BinaryMask::to_gray() const {
  GrayImage img(width_, height_);
  for (std::size_t i = 0; i < bits_.size(); ++i) img.pixels[i] = bits_[i] ? 255 : 0;
  return img;
}

namespace {

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

GrayImage decode_png(const std::string& bytes, const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  // Composite any alpha onto white so transparent sketch backgrounds read as paper.
  png_color background{255, 255, 255};
  if (!png_image_finish_read(&image, &background, img.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorKind::ParseError, path.string() + ": " + image.message);
  }
  return img;
}

GrayImage decode_pgm(const std::string& bytes, const fs::path& path) {
  auto fail = [&](const std::string& why) { return Error(ErrorKind::ParseError, path.string() + ": " + why); };
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    long v = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos++] - '0');
      any = true;
      if (v > 1'000'000) throw fail("header value too large");
    }
    if (!any) throw fail("truncated PGM header");
    return v;
  };
  const bool binary = bytes[1] == '5';
  const long w = next_token();
  const long h = next_token();
  const long maxval = next_token();
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw fail("bad PGM header");
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  const std::size_t n = img.pixels.size();
  auto scale = [maxval](long v) { return static_cast<std::uint8_t>(std::min<long>(255, v * 255 / maxval)); };
  if (binary) {
    ++pos;  // single whitespace after maxval
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + n * bpp) throw fail("truncated PGM raster");
    for (std::size_t i = 0; i < n; ++i) {
      long v = static_cast<unsigned char>(bytes[pos + i * bpp]);
      if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos + i * 2 + 1]);
      img.pixels[i] = scale(v);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) img.pixels[i] = scale(next_token());
  }
  return img;
}

}  // namespace

GrayImage read_gray_image(const fs::path& path) {
  const std::string bytes = read_all(path);
  if (bytes.size() >= 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) == 0) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '2')) {
    return decode_pgm(bytes, path);
  }
  throw Error(ErrorKind::ParseError, path.string() + ": not a PNG or PGM image");
}

void write_gray_image(const fs::path& path, const GrayImage& img) {
  if (img.empty()) throw Error(ErrorKind::ImageEmpty, "refusing to write an empty image");
  if (path.extension() == ".pgm") {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (!out.flush()) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
    return;
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr)) {
    throw Error(ErrorKind::IoFailure, path.string() + ": " + image.message);
  }
}

}  // namespace roadgen
