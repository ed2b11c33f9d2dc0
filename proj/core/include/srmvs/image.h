#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srmvs {

// Row-major, channel-interleaved raster of intensities in [0, 1].
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0);
  Image(int width, int height, int channels, std::vector<double> data);

  int Width() const { return width_; }
  int Height() const { return height_; }
  int Channels() const { return channels_; }
  bool Empty() const { return data_.empty(); }

  double At(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double& At(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const double> Data() const { return data_; }
  std::span<double> Data() { return data_; }

  // Luminance (Rec. 601 weights) for three-channel images, a copy otherwise.
  Image ToGray() const;

  // Clamps every sample to [0, 1]; NaN becomes 0.
  void Clamp01();

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<double> data_;
};

}  // namespace srmvs
