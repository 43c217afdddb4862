#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace roadgen {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  bool empty() const { return width <= 0 || height <= 0; }
  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Row-major {0,1} raster; 1 marks a road pixel.
class BinaryMask {
 public:
  BinaryMask() = default;
  /// Throws Error{InvalidArgument} unless width, height >= 1.
  BinaryMask(int width, int height);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::uint8_t at(int x, int y) const { return bits_[index(x, y)]; }
  void set(int x, int y, bool on) { bits_[index(x, y)] = on ? 1 : 0; }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void set_index(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::size_t count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

  /// pixel >= threshold => road.
  static BinaryMask from_gray(const GrayImage& img, std::uint8_t threshold = 128);
  /// road => 255, background => 0.
  GrayImage to_gray() const;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Loads PNG (any colour type, converted to gray) or binary/ASCII PGM.
/// Throws Error{IoFailure} for unreadable files, Error{ParseError} for
/// unsupported or corrupt content.
GrayImage read_gray_image(const std::filesystem::path& path);

/// Format follows the extension: .pgm writes binary PGM, anything else PNG.
void write_gray_image(const std::filesystem::path& path, const GrayImage& img);

}  // namespace roadgen
