#include <gtest/gtest.h>

#include "roadgen/sketch.hpp"
#include "support/error_kind.hpp"

using namespace roadgen;
using namespace roadgen::sketch;
using roadgen::testing::kind_of;

namespace {

GrayImage white_page(int w, int h) { return GrayImage(w, h, 255); }

void ink(GrayImage& img, int x0, int x1, int y0, int y1, std::uint8_t v = 0) {
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) img.at(x, y) = v;
  }
}

}  // namespace

TEST(Resize, LongerSideBecomesTarget) {
  const auto r = resize_to_max_dimension(white_page(1024, 256));
  EXPECT_EQ(r.width, 512);
  EXPECT_EQ(r.height, 128);
  const auto up = resize_to_max_dimension(white_page(50, 100));
  EXPECT_EQ(up.width, 256);
  EXPECT_EQ(up.height, 512);
  for (auto p : up.pixels) EXPECT_EQ(p, 255);
}

TEST(Resize, AreaAverageWhenShrinking) {
  GrayImage img(4, 1);
  img.pixels = {0, 100, 200, 255};
  const auto r = resize_to_max_dimension(img, 2);
  ASSERT_EQ(r.width, 2);
  EXPECT_EQ(r.pixels[0], 50);
  EXPECT_NEAR(r.pixels[1], 227.5, 0.5);
}

TEST(Median, RemovesSaltNoise) {
  auto img = white_page(9, 9);
  img.at(4, 4) = 0;
  img.at(0, 0) = 0;
  const auto m = median3x3(img);
  for (auto p : m.pixels) EXPECT_EQ(p, 255);
}

TEST(Otsu, SingleValuedAndBimodal) {
  EXPECT_EQ(otsu_threshold(white_page(4, 4)), -1);
  GrayImage img(10, 1);
  img.pixels = {10, 12, 11, 10, 12, 200, 210, 205, 200, 199};
  const int t = otsu_threshold(img);
  EXPECT_GE(t, 12);
  EXPECT_LT(t, 199);
}

TEST(Close, BridgesOnePixelGap) {
  BinaryMask m(12, 9);
  for (int x = 2; x <= 9; ++x) m.set(x, 4, x != 5);
  const auto c = close3x3(m);
  EXPECT_EQ(c.at(5, 4), 1);
  for (int x = 2; x <= 9; ++x) EXPECT_EQ(c.at(x, 4), 1) << x;
  EXPECT_EQ(c.at(5, 3), 0);
  EXPECT_EQ(c.at(0, 4), 0);
}

TEST(Close, BorderStrokeSurvives) {
  BinaryMask m(6, 6);
  for (int x = 0; x < 6; ++x) m.set(x, 0, true);
  EXPECT_EQ(close3x3(m), m);
}

TEST(Preprocess, BlankPageGivesEmptyMask) {
  const auto m = preprocess_sketch(white_page(300, 200));
  EXPECT_EQ(m.width(), 512);
  EXPECT_EQ(m.count(), 0u);
}

TEST(Preprocess, ThreePixelStroke) {
  auto img = white_page(512, 512);
  ink(img, 100, 400, 255, 257);
  const auto m = preprocess_sketch(img);
  std::size_t agree = 0;
  for (int y = 0; y < 512; ++y) {
    for (int x = 0; x < 512; ++x) {
      const bool stroke = x >= 100 && x <= 400 && y >= 255 && y <= 257;
      agree += (m.at(x, y) == 1) == stroke;
    }
  }
  EXPECT_GE(static_cast<double>(agree) / (512.0 * 512.0), 0.95);
  for (int x = 102; x <= 398; ++x) EXPECT_EQ(m.at(x, 256), 1);
}

TEST(Preprocess, GapInStrokeIsFilled) {
  auto img = white_page(512, 512);
  ink(img, 50, 200, 99, 101);
  ink(img, 202, 350, 99, 101);
  const auto m = preprocess_sketch(img);
  // the stroke's centre line runs unbroken across the gap
  for (int x = 60; x <= 340; ++x) EXPECT_EQ(m.at(x, 100), 1) << "x=" << x;
  EXPECT_EQ(m.at(201, 97), 0);
}

TEST(Preprocess, LightStrokesOnDarkPage) {
  GrayImage img(512, 512, 20);
  ink(img, 10, 500, 300, 302, 230);
  const auto m = preprocess_sketch(img);
  EXPECT_EQ(m.at(250, 301), 1);
  EXPECT_EQ(m.at(250, 100), 0);
}

TEST(Preprocess, EmptyImage) {
  EXPECT_EQ(kind_of([] { preprocess_sketch(GrayImage{}); }), ErrorKind::ImageEmpty);
}
