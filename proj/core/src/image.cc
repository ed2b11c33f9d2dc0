#include "srmvs/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "srmvs/errors.h"

namespace srmvs {

Image::Image(int width, int height, int channels, double fill)
    : Image(width, height, channels,
            std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                    std::max(height, 0) *
                                    std::max(channels, 0),
                                fill)) {}

Image::Image(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgumentError("image dimensions must be positive, got " +
                               std::to_string(width) + "x" +
                               std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw InvalidArgumentError("image must have 1 or 3 channels, got " +
                               std::to_string(channels));
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw InvalidArgumentError("image data length does not match dimensions");
  }
}

Image Image::ToGray() const {
  if (channels_ == 1) {
    return *this;
  }
  Image gray(width_, height_, 1);
  auto out = gray.Data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* px = &data_[3 * i];
    out[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  }
  return gray;
}

void Image::Clamp01() {
  for (double& v : data_) {
    v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  }
}

}  // namespace srmvs
