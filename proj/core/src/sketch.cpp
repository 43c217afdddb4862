#include "roadgen/sketch.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "roadgen/error.hpp"

namespace roadgen::sketch {

namespace {

struct Tap {
  int src;
  double weight;
};

/// Per-output-index source taps for a 1-D resample from `in` to `out` samples.
std::vector<std::vector<Tap>> resample_taps(int in, int out) {
  std::vector<std::vector<Tap>> taps(static_cast<std::size_t>(out));
  const double ratio = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    auto& t = taps[static_cast<std::size_t>(o)];
    if (ratio >= 1.0) {
      // Area average over [o*ratio, (o+1)*ratio).
      const double lo = o * ratio;
      const double hi = lo + ratio;
      for (int s = static_cast<int>(std::floor(lo)); s < static_cast<int>(std::ceil(hi)) && s < in; ++s) {
        const double cover = std::min(hi, s + 1.0) - std::max(lo, static_cast<double>(s));
        if (cover > 0.0) t.push_back({s, cover / ratio});
      }
    } else {
      const double centre = (o + 0.5) * ratio - 0.5;
      const int s0 = static_cast<int>(std::floor(centre));
      const double f = centre - s0;
      t.push_back({std::clamp(s0, 0, in - 1), 1.0 - f});
      t.push_back({std::clamp(s0 + 1, 0, in - 1), f});
    }
  }
  return taps;
}

}  // namespace

GrayImage resize_to_max_dimension(const GrayImage& img, int max_dim) {
  if (img.empty()) throw Error(ErrorKind::ImageEmpty, "image has no pixels");
  const int longest = std::max(img.width, img.height);
  if (longest == max_dim) return img;
  const double s = static_cast<double>(max_dim) / longest;
  const int w = std::max(1, static_cast<int>(std::lround(img.width * s)));
  const int h = std::max(1, static_cast<int>(std::lround(img.height * s)));

  const auto xt = resample_taps(img.width, w);
  const auto yt = resample_taps(img.height, h);
  std::vector<double> rows(static_cast<std::size_t>(w) * img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (const auto& tap : xt[static_cast<std::size_t>(x)]) acc += tap.weight * img.at(tap.src, y);
      rows[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (const auto& tap : yt[static_cast<std::size_t>(y)]) {
        acc += tap.weight * rows[static_cast<std::size_t>(tap.src) * w + x];
      }
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
    }
  }
  return out;
}

GrayImage median3x3(const GrayImage& img) {
  if (img.empty()) throw Error(ErrorKind::ImageEmpty, "image has no pixels");
  GrayImage out(img.width, img.height);
  std::array<std::uint8_t, 9> win{};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::size_t k = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          win[k++] = img.at(std::clamp(x + dx, 0, img.width - 1), std::clamp(y + dy, 0, img.height - 1));
        }
      }
      std::nth_element(win.begin(), win.begin() + 4, win.end());
      out.at(x, y) = win[4];
    }
  }
  return out;
}

int otsu_threshold(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (auto p : img.pixels) hist[p] += 1.0;
  const double total = static_cast<double>(img.pixels.size());
  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[static_cast<std::size_t>(i)];

  double w0 = 0.0;
  double sum0 = 0.0;
  double best = -1.0;
  int best_t = -1;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[static_cast<std::size_t>(t)];
    sum0 += t * hist[static_cast<std::size_t>(t)];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;
}

BinaryMask close3x3(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask dilated(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool on = false;
      for (int dy = -1; dy <= 1 && !on; ++dy) {
        for (int dx = -1; dx <= 1 && !on; ++dx) {
          on = mask.in_bounds(x + dx, y + dy) && mask.at(x + dx, y + dy);
        }
      }
      dilated.set(x, y, on);
    }
  }
  BinaryMask closed(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool on = true;
      for (int dy = -1; dy <= 1 && on; ++dy) {
        for (int dx = -1; dx <= 1 && on; ++dx) {
          on = !dilated.in_bounds(x + dx, y + dy) || dilated.at(x + dx, y + dy);
        }
      }
      closed.set(x, y, on);
    }
  }
  return closed;
}

BinaryMask preprocess_sketch(const GrayImage& image) {
  if (image.empty()) throw Error(ErrorKind::ImageEmpty, "sketch has no pixels");
  const GrayImage denoised = median3x3(resize_to_max_dimension(image));
  BinaryMask mask(denoised.width, denoised.height);
  const int t = otsu_threshold(denoised);
  if (t < 0) return mask;

  std::size_t dark = 0;
  for (auto p : denoised.pixels) dark += p <= t ? 1 : 0;
  const bool strokes_dark = dark * 2 <= denoised.pixels.size();
  for (std::size_t i = 0; i < denoised.pixels.size(); ++i) {
    const bool is_dark = denoised.pixels[i] <= t;
    mask.set_index(i, is_dark == strokes_dark);
  }
  return close3x3(mask);
}

}  // namespace roadgen::sketch
