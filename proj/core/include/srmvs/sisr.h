#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srmvs/camera.h"
#include "srmvs/image.h"

namespace srmvs {

// Positive rational scale factor.
struct ScaleSpec {
  int numerator = 2;
  int denominator = 1;

  ScaleSpec() = default;
  ScaleSpec(int num, int den = 1);

  double Value() const {
    return static_cast<double>(numerator) / denominator;
  }
  // round(k * n), computed exactly on integers (halves round up).
  int ScaledSize(int n) const;
  ScaleSpec Inverse() const { return ScaleSpec(denominator, numerator); }

  // Accepts "2", "0.5", "1/4".
  static ScaleSpec Parse(const std::string& text);
  std::string ToString() const;

  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

enum class SetLabel { kLR, kBC, kEXT, kHR };

const char* ToString(SetLabel label);
SetLabel ParseSetLabel(const std::string& text);

struct SequenceSet {
  SetLabel label = SetLabel::kHR;
  std::vector<View> views;

  // Throws ValidationError on duplicate names or invalid views.
  void Validate() const;
  const View* Find(const std::string& name) const;
};

// Catmull-Rom cubic convolution kernel (a = -0.5).
double CubicKernel(double x);

// Bicubic interpolation with clamp-to-edge addressing; not clamped to [0,1].
void BicubicSample(const Image& image, double u, double v, double* out);

// Output is round(k*w) x round(k*h). Source coordinate of output pixel x is
// (x + 0.5) / k - 0.5; no prefilter when shrinking. Output clamped to [0,1].
Image ResampleBicubic(const Image& image, const ScaleSpec& spec);

PinholeCamera ScaleIntrinsics(const PinholeCamera& camera,
                              const ScaleSpec& spec);

SequenceSet SuperResolveSet(const SequenceSet& set, const ScaleSpec& spec);

// Loads `<view name>.<ext>` for every view from `directory`. Files on disk
// with no matching view are skipped and reported in `warnings`.
SequenceSet IngestExternalSr(const SequenceSet& set,
                             const std::filesystem::path& directory,
                             const ScaleSpec& spec,
                             std::vector<std::string>* warnings = nullptr);

}  // namespace srmvs
