#include "srmvs/image.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "srmvs/errors.h"

namespace srmvs {
namespace {

TEST(ImageTest, ConstructionChecksShape) {
  EXPECT_THROW(Image(0, 4, 1), InvalidArgumentError);
  EXPECT_THROW(Image(4, -1, 1), InvalidArgumentError);
  EXPECT_THROW(Image(4, 4, 2), InvalidArgumentError);
  EXPECT_THROW(Image(2, 2, 1, std::vector<double>(3)), InvalidArgumentError);
  const Image img(5, 3, 3, 0.25);
  EXPECT_EQ(img.Data().size(), 45u);
  EXPECT_EQ(img.At(4, 2, 2), 0.25);
}

TEST(ImageTest, RowMajorChannelInterleaved) {
  Image img(3, 2, 3);
  img.At(2, 1, 1) = 0.5;
  EXPECT_EQ(img.Data()[(1 * 3 + 2) * 3 + 1], 0.5);
}

TEST(ImageTest, ToGrayUsesLumaWeights) {
  Image rgb(1, 1, 3);
  rgb.At(0, 0, 0) = 1.0;
  EXPECT_NEAR(rgb.ToGray().At(0, 0), 0.299, 1e-15);
  const Image gray(2, 2, 1, 0.3);
  EXPECT_EQ(gray.ToGray(), gray);
}

TEST(ImageTest, Clamp01) {
  Image img(4, 1, 1, std::vector<double>{-0.5, 0.5, 1.5,
                                         std::numeric_limits<double>::quiet_NaN()});
  img.Clamp01();
  EXPECT_EQ(img.At(0, 0), 0.0);
  EXPECT_EQ(img.At(1, 0), 0.5);
  EXPECT_EQ(img.At(2, 0), 1.0);
  EXPECT_EQ(img.At(3, 0), 0.0);
}

}  // namespace
}  // namespace srmvs
