#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "footfall/error.hpp"
#include "footfall/ingest/preprocess.hpp"

namespace footfall::ingest {
namespace {

PixelImage random_image(std::mt19937_64& rng, std::size_t h, std::size_t w) {
  PixelImage img{h, w, std::vector<std::uint8_t>(h * w * 3)};
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng() & 0xff);
  return img;
}

// Bilinear with half-pixel centers and edge clamping, in double precision.
double reference_sample(const PixelImage& img, std::size_t th, std::size_t tw, std::size_t y,
                        std::size_t x, std::size_t channel) {
  auto coord = [](std::size_t d, std::size_t dst, std::size_t src) {
    double p = (static_cast<double>(d) + 0.5) * static_cast<double>(src) / static_cast<double>(dst) - 0.5;
    p = std::clamp(p, 0.0, static_cast<double>(src - 1));
    const auto lo = static_cast<std::size_t>(std::floor(p));
    return std::tuple{lo, std::min(lo + 1, src - 1), p - static_cast<double>(lo)};
  };
  const auto [y0, y1, wy] = coord(y, th, img.height);
  const auto [x0, x1, wx] = coord(x, tw, img.width);
  auto px = [&](std::size_t yy, std::size_t xx) { return static_cast<double>(img.at(yy, xx, channel)); };
  const double top = px(y0, x0) * (1 - wx) + px(y0, x1) * wx;
  const double bottom = px(y1, x0) * (1 - wx) + px(y1, x1) * wx;
  return top * (1 - wy) + bottom * wy;
}

TEST(Preprocess, IdentityResizeOnlyReordersChannels) {
  const PixelImage img{2, 2, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}};
  const auto t = preprocess(img, 2, 2);
  EXPECT_EQ(t.shape, (std::array<std::size_t, 4>{1, 3, 2, 2}));
  for (std::size_t y = 0; y < 2; ++y) {
    for (std::size_t x = 0; x < 2; ++x) {
      EXPECT_EQ(t.at(0, y, x), img.at(y, x, 2));
      EXPECT_EQ(t.at(1, y, x), img.at(y, x, 1));
      EXPECT_EQ(t.at(2, y, x), img.at(y, x, 0));
    }
  }
}

TEST(Preprocess, SinglePixelBecomesBgr) {
  const PixelImage img{1, 1, {10, 20, 30}};
  const auto t = preprocess(img, 1, 1);
  EXPECT_EQ(t.values, (std::vector<float>{30.0f, 20.0f, 10.0f}));
}

TEST(Preprocess, ConstantImageStaysConstant) {
  PixelImage img{8, 8, {}};
  for (int i = 0; i < 64; ++i) img.data.insert(img.data.end(), {200, 17, 99});
  const auto t = preprocess(img, 4, 4);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) {
      EXPECT_EQ(t.at(0, y, x), 99.0f);
      EXPECT_EQ(t.at(1, y, x), 17.0f);
      EXPECT_EQ(t.at(2, y, x), 200.0f);
    }
  }
}

TEST(Preprocess, RejectsEmptyAndInconsistentImages) {
  try {
    preprocess(PixelImage{0, 4, {}}, 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyImage);
  }
  try {
    preprocess(PixelImage{2, 2, {1, 2, 3}}, 2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidField);
  }
  EXPECT_THROW(preprocess(PixelImage{1, 1, {1, 2, 3}}, 0, 2), Error);
}

TEST(Preprocess, MatchesDoublePrecisionBilinearReference) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = 1 + rng() % 40, w = 1 + rng() % 40, th = 1 + rng() % 40, tw = 1 + rng() % 40;
    const auto img = random_image(rng, h, w);
    const auto t = preprocess(img, th, tw);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t y = 0; y < th; ++y) {
        for (std::size_t x = 0; x < tw; ++x) {
          ASSERT_NEAR(t.at(c, y, x), reference_sample(img, th, tw, y, x, 2 - c), 1e-3)
              << h << "x" << w << " -> " << th << "x" << tw;
        }
      }
    }
  }
}

TEST(Preprocess, ShapeAndSwapPropertiesOverRandomImages) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto h = 1 + rng() % 24, w = 1 + rng() % 24, th = 1 + rng() % 24, tw = 1 + rng() % 24;
    const auto img = random_image(rng, h, w);
    EXPECT_EQ(swap_red_blue(swap_red_blue(img)), img);

    const auto t = preprocess(img, th, tw);
    EXPECT_EQ(t.shape, (std::array<std::size_t, 4>{1, 3, th, tw}));
    EXPECT_EQ(t.values.size(), 3 * th * tw);

    // Swapping R and B in the source swaps the first and last output planes.
    const auto swapped = preprocess(swap_red_blue(img), th, tw);
    const std::size_t plane = th * tw;
    for (std::size_t i = 0; i < plane; ++i) {
      ASSERT_EQ(swapped.values[i], t.values[2 * plane + i]);
      ASSERT_EQ(swapped.values[plane + i], t.values[plane + i]);
      ASSERT_EQ(swapped.values[2 * plane + i], t.values[i]);
    }
  }
}

}  // namespace
}  // namespace footfall::ingest
