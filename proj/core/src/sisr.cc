#include "srmvs/sisr.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "srmvs/dataset_io.h"
#include "srmvs/errors.h"

namespace srmvs {
namespace {

constexpr double kCubicA = -0.5;

struct Taps {
  std::array<int, 4> index;
  std::array<double, 4> weight;
};

Taps ComputeTaps(double s, int n) {
  const double base = std::floor(s);
  const double t = s - base;
  Taps taps;
  for (int i = 0; i < 4; ++i) {
    const int idx = static_cast<int>(base) - 1 + i;
    taps.index[i] = std::clamp(idx, 0, n - 1);
    taps.weight[i] = CubicKernel(t - (i - 1));
  }
  return taps;
}

std::vector<Taps> AxisTaps(int out_size, int in_size, double k) {
  std::vector<Taps> taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    taps[i] = ComputeTaps((i + 0.5) / k - 0.5, in_size);
  }
  return taps;
}

}  // namespace

ScaleSpec::ScaleSpec(int num, int den) {
  if (num <= 0 || den <= 0) {
    throw InvalidArgumentError("scale factor must be positive, got " +
                               std::to_string(num) + "/" +
                               std::to_string(den));
  }
  const int g = std::gcd(num, den);
  numerator = num / g;
  denominator = den / g;
}

int ScaleSpec::ScaledSize(int n) const {
  const long long twice = 2LL * numerator * n + denominator;
  return static_cast<int>(twice / (2LL * denominator));
}

ScaleSpec ScaleSpec::Parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t pos_a = 0;
      std::size_t pos_b = 0;
      const std::string a = text.substr(0, slash);
      const std::string b = text.substr(slash + 1);
      const int num = std::stoi(a, &pos_a);
      const int den = std::stoi(b, &pos_b);
      if (pos_a != a.size() || pos_b != b.size()) throw std::invalid_argument("");
      return ScaleSpec(num, den);
    }
    std::size_t pos = 0;
    const double value = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("");
    for (int den = 1; den <= 1000; ++den) {
      const double num = value * den;
      if (std::abs(num - std::round(num)) < 1e-9 && std::round(num) >= 1.0) {
        return ScaleSpec(static_cast<int>(std::round(num)), den);
      }
    }
  } catch (const InvalidArgumentError&) {
    throw;
  } catch (const std::exception&) {
  }
  throw InvalidArgumentError("cannot parse scale factor '" + text + "'");
}

std::string ScaleSpec::ToString() const {
  if (denominator == 1) return std::to_string(numerator);
  return std::to_string(numerator) + "/" + std::to_string(denominator);
}

const char* ToString(SetLabel label) {
  switch (label) {
    case SetLabel::kLR: return "LR";
    case SetLabel::kBC: return "BC";
    case SetLabel::kEXT: return "EXT";
    case SetLabel::kHR: return "HR";
  }
  return "?";
}

SetLabel ParseSetLabel(const std::string& text) {
  for (const SetLabel label :
       {SetLabel::kLR, SetLabel::kBC, SetLabel::kEXT, SetLabel::kHR}) {
    if (text == ToString(label)) return label;
  }
  throw InvalidArgumentError("unknown sequence label '" + text + "'");
}

void SequenceSet::Validate() const {
  std::vector<std::string> violations;
  std::set<std::string> names;
  for (const View& view : views) {
    if (!names.insert(view.name).second) {
      violations.push_back("duplicate view name '" + view.name + "'");
    }
    try {
      view.Validate();
    } catch (const ValidationError& e) {
      violations.insert(violations.end(), e.Violations().begin(),
                        e.Violations().end());
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

const View* SequenceSet::Find(const std::string& name) const {
  for (const View& view : views) {
    if (view.name == name) return &view;
  }
  return nullptr;
}

double CubicKernel(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) {
    return ((kCubicA + 2.0) * ax - (kCubicA + 3.0)) * ax * ax + 1.0;
  }
  if (ax < 2.0) {
    return ((kCubicA * ax - 5.0 * kCubicA) * ax + 8.0 * kCubicA) * ax -
           4.0 * kCubicA;
  }
  return 0.0;
}

void BicubicSample(const Image& image, double u, double v, double* out) {
  const Taps tx = ComputeTaps(u, image.Width());
  const Taps ty = ComputeTaps(v, image.Height());
  for (int c = 0; c < image.Channels(); ++c) {
    double sum = 0.0;
    for (int j = 0; j < 4; ++j) {
      double row = 0.0;
      for (int i = 0; i < 4; ++i) {
        row += tx.weight[i] * image.At(tx.index[i], ty.index[j], c);
      }
      sum += ty.weight[j] * row;
    }
    out[c] = sum;
  }
}

Image ResampleBicubic(const Image& image, const ScaleSpec& spec) {
  const int out_w = spec.ScaledSize(image.Width());
  const int out_h = spec.ScaledSize(image.Height());
  if (out_w < 1 || out_h < 1) {
    throw InvalidArgumentError("resampling " + std::to_string(image.Width()) +
                               "x" + std::to_string(image.Height()) + " by " +
                               spec.ToString() + " gives an empty image");
  }
  const double k = spec.Value();
  const int channels = image.Channels();
  const std::vector<Taps> col_taps = AxisTaps(out_w, image.Width(), k);
  const std::vector<Taps> row_taps = AxisTaps(out_h, image.Height(), k);

  // Horizontal pass: out_w x in_h.
  Image horizontal(out_w, image.Height(), channels);
  for (int y = 0; y < image.Height(); ++y) {
    for (int x = 0; x < out_w; ++x) {
      const Taps& t = col_taps[x];
      for (int c = 0; c < channels; ++c) {
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
          sum += t.weight[i] * image.At(t.index[i], y, c);
        }
        horizontal.At(x, y, c) = sum;
      }
    }
  }

  Image out(out_w, out_h, channels);
  for (int y = 0; y < out_h; ++y) {
    const Taps& t = row_taps[y];
    for (int x = 0; x < out_w; ++x) {
      for (int c = 0; c < channels; ++c) {
        double sum = 0.0;
        for (int j = 0; j < 4; ++j) {
          sum += t.weight[j] * horizontal.At(x, t.index[j], c);
        }
        out.At(x, y, c) = sum;
      }
    }
  }
  out.Clamp01();
  return out;
}

PinholeCamera ScaleIntrinsics(const PinholeCamera& camera,
                              const ScaleSpec& spec) {
  const double k = spec.Value();
  PinholeCamera out = camera;
  out.fx = k * camera.fx;
  out.fy = k * camera.fy;
  out.cx = k * (camera.cx + 0.5) - 0.5;
  out.cy = k * (camera.cy + 0.5) - 0.5;
  out.width = spec.ScaledSize(camera.width);
  out.height = spec.ScaledSize(camera.height);
  return out;
}

SequenceSet SuperResolveSet(const SequenceSet& set, const ScaleSpec& spec) {
  SequenceSet out;
  out.label = SetLabel::kBC;
  out.views.reserve(set.views.size());
  for (const View& view : set.views) {
    View scaled;
    scaled.name = view.name;
    scaled.pose = view.pose;
    scaled.camera = ScaleIntrinsics(view.camera, spec);
    scaled.image = ResampleBicubic(view.image, spec);
    out.views.push_back(std::move(scaled));
  }
  return out;
}

SequenceSet IngestExternalSr(const SequenceSet& set,
                             const std::filesystem::path& directory,
                             const ScaleSpec& spec,
                             std::vector<std::string>* warnings) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    throw NotFoundError("external SR directory '" + directory.string() +
                        "' does not exist");
  }
  const std::array<const char*, 2> extensions = {".pgm", ".ppm"};

  SequenceSet out;
  out.label = SetLabel::kEXT;
  for (const View& view : set.views) {
    fs::path file;
    for (const char* ext : extensions) {
      const fs::path candidate = directory / (view.name + ext);
      if (fs::exists(candidate)) {
        file = candidate;
        break;
      }
    }
    if (file.empty()) {
      throw NotFoundError("no external SR image for view '" + view.name +
                          "' in " + directory.string());
    }
    View scaled;
    scaled.name = view.name;
    scaled.pose = view.pose;
    scaled.camera = ScaleIntrinsics(view.camera, spec);
    scaled.image = ReadImage(file);
    if (scaled.image.Width() != scaled.camera.width ||
        scaled.image.Height() != scaled.camera.height) {
      throw FormatError(file.string() + ": expected " +
                        std::to_string(scaled.camera.width) + "x" +
                        std::to_string(scaled.camera.height) + ", got " +
                        std::to_string(scaled.image.Width()) + "x" +
                        std::to_string(scaled.image.Height()));
    }
    out.views.push_back(std::move(scaled));
  }

  if (warnings != nullptr) {
    std::vector<fs::path> entries;
    for (const auto& entry : fs::directory_iterator(directory)) {
      entries.push_back(entry.path());
    }
    std::sort(entries.begin(), entries.end());
    for (const fs::path& path : entries) {
      const std::string ext = path.extension().string();
      if (ext != ".pgm" && ext != ".ppm") continue;
      if (set.Find(path.stem().string()) == nullptr) {
        warnings->push_back("ignoring " + path.string() +
                            ": no view with that name");
      }
    }
  }
  return out;
}

}  // namespace srmvs
