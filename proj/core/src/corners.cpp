#include "roadgen/corners.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "roadgen/error.hpp"

namespace roadgen::extract {

void validate(const CornerParams& p) {
  if (p.window < 1 || p.window % 2 == 0) throw Error(ErrorKind::InvalidArgument, "corner window must be odd and >= 1");
  if (!(p.quality > 0.0 && p.quality <= 1.0)) throw Error(ErrorKind::InvalidArgument, "corner quality must be in (0,1]");
  if (!(p.min_distance >= 0.0)) throw Error(ErrorKind::InvalidArgument, "min_distance must be >= 0");
  if (p.max_corners < 1) throw Error(ErrorKind::InvalidArgument, "max_corners must be >= 1");
}

Gradients sobel(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Gradients g{{w, h, std::vector<double>(mask.size())}, {w, h, std::vector<double>(mask.size())}};
  auto px = [&](int x, int y) -> int { return mask.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int dx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const int dy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                     (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      g.gx.values[i] = dx;
      g.gy.values[i] = dy;
    }
  }
  return g;
}

namespace {

/// Box sum over a (2r+1)^2 window, clipped to the image. Inputs are small
/// integers so the running sums are exact.
std::vector<double> box_sum(const std::vector<double>& in, int w, int h, int r) {
  std::vector<double> tmp(in.size());
  std::vector<double> out(in.size());
  for (int y = 0; y < h; ++y) {
    const double* row = &in[static_cast<std::size_t>(y) * w];
    double acc = 0.0;
    for (int x = 0; x <= std::min(r, w - 1); ++x) acc += row[x];
    for (int x = 0; x < w; ++x) {
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
      if (x + r + 1 < w) acc += row[x + r + 1];
      if (x - r >= 0) acc -= row[x - r];
    }
  }
  for (int x = 0; x < w; ++x) {
    double acc = 0.0;
    for (int y = 0; y <= std::min(r, h - 1); ++y) acc += tmp[static_cast<std::size_t>(y) * w + x];
    for (int y = 0; y < h; ++y) {
      out[static_cast<std::size_t>(y) * w + x] = acc;
      if (y + r + 1 < h) acc += tmp[static_cast<std::size_t>(y + r + 1) * w + x];
      if (y - r >= 0) acc -= tmp[static_cast<std::size_t>(y - r) * w + x];
    }
  }
  return out;
}

}  // namespace

Field min_eigen_response(const BinaryMask& mask, int window) {
  if (window < 1 || window % 2 == 0) throw Error(ErrorKind::InvalidArgument, "window must be odd and >= 1");
  const int w = mask.width();
  const int h = mask.height();
  const Gradients g = sobel(mask);
  const std::size_t n = mask.size();
  std::vector<double> xx(n), xy(n), yy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gx = g.gx.values[i];
    const double gy = g.gy.values[i];
    xx[i] = gx * gx;
    xy[i] = gx * gy;
    yy[i] = gy * gy;
  }
  const int r = window / 2;
  const auto sxx = box_sum(xx, w, h, r);
  const auto sxy = box_sum(xy, w, h, r);
  const auto syy = box_sum(yy, w, h, r);

  Field resp{w, h, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = sxx[i] + syy[i];
    // t^2 - 4d rewritten as (a-c)^2 + 4b^2: never negative.
    const double disc = (sxx[i] - syy[i]) * (sxx[i] - syy[i]) + 4.0 * sxy[i] * sxy[i];
    resp.values[i] = std::max(0.0, (t - std::sqrt(disc)) / 2.0);
  }
  return resp;
}

namespace {

struct Peak {
  double r;
  int x;
  int y;
};

/// 3x3 local maxima of the response reaching quality * max response.
std::vector<Peak> response_peaks(const Field& resp, double quality) {
  const int w = resp.width;
  const int h = resp.height;
  const double max_r = resp.values.empty() ? 0.0 : *std::max_element(resp.values.begin(), resp.values.end());
  if (max_r <= 0.0) return {};
  const double floor = quality * max_r;
  std::vector<Peak> peaks;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = resp.at(x, y);
      if (v <= 0.0 || v < floor) continue;
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1 && peak; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if ((dx || dy) && nx >= 0 && ny >= 0 && nx < w && ny < h && resp.at(nx, ny) > v) peak = false;
        }
      }
      if (peak) peaks.push_back({v, x, y});
    }
  }
  return peaks;
}

}  // namespace

std::vector<PlanarPoint> shi_tomasi_corners(const BinaryMask& mask, const CornerParams& params) {
  validate(params);
  const Field resp = min_eigen_response(mask, params.window);
  auto cands = response_peaks(resp, params.quality);
  std::sort(cands.begin(), cands.end(), [](const Peak& a, const Peak& b) {
    return std::tie(b.r, a.y, a.x) < std::tie(a.r, b.y, b.x);
  });

  const double min_d2 = params.min_distance * params.min_distance;
  std::vector<PlanarPoint> out;
  for (const auto& c : cands) {
    const bool clear = std::none_of(out.begin(), out.end(), [&](const PlanarPoint& p) {
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      return dx * dx + dy * dy < min_d2;
    });
    if (!clear) continue;
    out.push_back({static_cast<double>(c.x), static_cast<double>(c.y)});
    if (static_cast<int>(out.size()) >= params.max_corners) break;
  }
  return out;
}

}  // namespace roadgen::extract
