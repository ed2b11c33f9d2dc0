#include "srmvs/patch_match.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/LU>

#include "srmvs/errors.h"

namespace srmvs {
namespace {

constexpr double kVarianceFloor = 1e-12;
constexpr double kOutOfBoundsCost = 2.0;
// Initial relative depth and normal (radians) perturbation ranges; each
// halving level divides both by two.
constexpr double kDepthPerturbation = 0.1;
constexpr double kNormalPerturbation = 0.5;

double WeightedNccFromSums(double sw, double sr, double ss, double srr,
                           double sss, double srs) {
  const double mr = sr / sw;
  const double ms = ss / sw;
  const double var_r = srr / sw - mr * mr;
  const double var_s = sss / sw - ms * ms;
  if (var_r < kVarianceFloor || var_s < kVarianceFloor) return 0.0;
  const double cov = srs / sw - mr * ms;
  return std::clamp(cov / std::sqrt(var_r * var_s), -1.0, 1.0);
}

// Bilinear lookup in a single-channel raster; false outside the image.
inline bool SampleGray(const double* data, int w, int h, double u, double v,
                       double* out) {
  if (!(u >= 0.0 && v >= 0.0 && u <= w - 1 && v <= h - 1)) return false;
  int x0 = static_cast<int>(u);
  int y0 = static_cast<int>(v);
  if (x0 > w - 2) x0 = std::max(w - 2, 0);
  if (y0 > h - 2) y0 = std::max(h - 2, 0);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = u - x0;
  const double ay = v - y0;
  const double* r0 = data + static_cast<std::size_t>(y0) * w;
  const double* r1 = data + static_cast<std::size_t>(y1) * w;
  const double top = r0[x0] + ax * (r0[x1] - r0[x0]);
  const double bottom = r1[x0] + ax * (r1[x1] - r1[x0]);
  *out = top + ay * (bottom - top);
  return true;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

 private:
  std::mt19937_64 engine_;
};

struct SourceGeometry {
  Eigen::Matrix3d a;  // K_s * R_rel * K_r^-1
  Eigen::Vector3d b;  // K_s * t_rel
  const double* gray = nullptr;
  int width = 0;
  int height = 0;
};

Eigen::Matrix3d Intrinsics(const PinholeCamera& c) {
  Eigen::Matrix3d k;
  k << c.fx, 0.0, c.cx, 0.0, c.fy, c.cy, 0.0, 0.0, 1.0;
  return k;
}

// Everything needed to score hypotheses at one reference pixel.
struct Window {
  std::vector<double> qx, qy, weight, ref;
  double sw = 0.0, sr = 0.0, srr = 0.0;
};

class Solver {
 public:
  Solver(const View& ref, const std::vector<View>& sources,
         const PatchMatchConfig& cfg)
      : cfg_(cfg), camera_(ref.camera), width_(ref.camera.width),
        height_(ref.camera.height) {
    ref_gray_ = ref.image.ToGray();
    const Eigen::Matrix3d kr_inv = Intrinsics(ref.camera).inverse();
    kinv_ = kr_inv;
    src_gray_.reserve(sources.size());
    for (const View& src : sources) {
      src_gray_.push_back(src.image.ToGray());
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const View& src = sources[i];
      const Eigen::Matrix3d r_rel = src.pose.rotation *
                                    ref.pose.rotation.transpose();
      const Eigen::Vector3d t_rel =
          src.pose.translation - r_rel * ref.pose.translation;
      const Eigen::Matrix3d ks = Intrinsics(src.camera);
      SourceGeometry g;
      g.a = ks * r_rel * kr_inv;
      g.b = ks * t_rel;
      g.gray = src_gray_[i].Data().data();
      g.width = src.camera.width;
      g.height = src.camera.height;
      sources_.push_back(g);
    }
    const int r = cfg_.window_radius;
    const double sd = cfg_.SigmaDist();
    spatial_.resize((2 * r + 1) * (2 * r + 1));
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        spatial_[(dy + r) * (2 * r + 1) + dx + r] =
            std::exp(-(dx * dx + dy * dy) / (2.0 * sd * sd));
      }
    }
    per_source_.resize(sources_.size());
  }

  Eigen::Vector3d Ray(int x, int y) const {
    return {(x - camera_.cx) / camera_.fx, (y - camera_.cy) / camera_.fy, 1.0};
  }

  void BuildWindow(int x, int y, Window* win) const {
    const int r = cfg_.window_radius;
    const double inv_2sc2 = 1.0 / (2.0 * cfg_.sigma_color * cfg_.sigma_color);
    const double* gray = ref_gray_.Data().data();
    const double center = gray[static_cast<std::size_t>(y) * width_ + x];
    win->qx.clear();
    win->qy.clear();
    win->weight.clear();
    win->ref.clear();
    win->sw = win->sr = win->srr = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
      const int yy = y + dy;
      if (yy < 0 || yy >= height_) continue;
      for (int dx = -r; dx <= r; ++dx) {
        const int xx = x + dx;
        if (xx < 0 || xx >= width_) continue;
        const double value = gray[static_cast<std::size_t>(yy) * width_ + xx];
        const double dc = value - center;
        const double w = spatial_[(dy + r) * (2 * r + 1) + dx + r] *
                         std::exp(-dc * dc * inv_2sc2);
        win->qx.push_back(xx);
        win->qy.push_back(yy);
        win->weight.push_back(w);
        win->ref.push_back(value);
      }
    }
  }

  double SourceCost(const SourceGeometry& src, const Window& win,
                    const Eigen::Matrix3d& h) const {
    const std::size_t n = win.qx.size();
    std::size_t outside = 0;
    double sw = 0.0, sr = 0.0, ss = 0.0, srr = 0.0, sss = 0.0, srs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double qx = win.qx[i];
      const double qy = win.qy[i];
      const double hz = h(2, 0) * qx + h(2, 1) * qy + h(2, 2);
      double value;
      if (!(hz > 0.0) ||
          !SampleGray(src.gray, src.width, src.height,
                      (h(0, 0) * qx + h(0, 1) * qy + h(0, 2)) / hz,
                      (h(1, 0) * qx + h(1, 1) * qy + h(1, 2)) / hz, &value)) {
        ++outside;
        continue;
      }
      const double w = win.weight[i];
      const double rv = win.ref[i];
      sw += w;
      sr += w * rv;
      ss += w * value;
      srr += w * rv * rv;
      sss += w * value * value;
      srs += w * rv * value;
    }
    if (2 * outside > n || !(sw > 0.0)) return kOutOfBoundsCost;
    return 1.0 - WeightedNccFromSums(sw, sr, ss, srr, sss, srs);
  }

  double Cost(int x, int y, const Window& win, double depth,
              const Eigen::Vector3d& normal) {
    const double plane_offset = depth * normal.dot(Ray(x, y));
    // Plane in the reference frame: n^T X = plane_offset (< 0).
    const Eigen::RowVector3d m = normal.transpose() * kinv_ / plane_offset;
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      const Eigen::Matrix3d h = sources_[s].a + sources_[s].b * m;
      per_source_[s] = SourceCost(sources_[s], win, h);
    }
    return Aggregate();
  }

  double Aggregate() {
    const std::size_t total = per_source_.size();
    std::size_t keep = total;
    if (cfg_.source_views_per_pixel > 0) {
      keep = std::min<std::size_t>(cfg_.source_views_per_pixel, total);
    }
    if (keep < total) {
      std::partial_sort(per_source_.begin(), per_source_.begin() + keep,
                        per_source_.end());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < keep; ++i) sum += per_source_[i];
    return sum / static_cast<double>(keep);
  }

  bool Admissible(int x, int y, double depth,
                  const Eigen::Vector3d& normal) const {
    return depth >= cfg_.depth_min && depth <= cfg_.depth_max &&
           normal.dot(Ray(x, y)) < 0.0;
  }

  Eigen::Vector3d RandomNormal(int x, int y, Rng& rng) const {
    const Eigen::Vector3d ray = Ray(x, y);
    while (true) {
      Eigen::Vector3d n(rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0),
                        rng.Uniform(-1.0, 1.0));
      const double len = n.norm();
      if (len > 1.0 || len < 1e-3) continue;
      n /= len;
      const double facing = n.dot(ray);
      if (facing == 0.0) continue;
      return facing < 0.0 ? n : -n;
    }
  }

  DepthMap Run(const IterationObserver& observer) {
    Rng rng(cfg_.rng_seed);
    DepthMap map(width_, height_, true);
    Window win;

    const double inv_min = 1.0 / cfg_.depth_max;
    const double inv_max = 1.0 / cfg_.depth_min;
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const double depth = 1.0 / rng.Uniform(inv_min, inv_max);
        const Eigen::Vector3d normal = RandomNormal(x, y, rng);
        map.Set(x, y, std::clamp(depth, cfg_.depth_min, cfg_.depth_max),
                normal, 0.0);
      }
    }
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        BuildWindow(x, y, &win);
        map.SetCost(x, y, Cost(x, y, win, map.Depth(x, y), map.Normal(x, y)));
      }
    }

    for (int iter = 1; iter <= cfg_.iterations; ++iter) {
      const bool forward = (iter % 2) == 1;
      Sweep(&map, forward, &win);
      Refine(&map, forward, &win, rng);
      if (observer) observer(iter, map);
    }

    const double max_cost = cfg_.MaxCost();
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        if (!(map.Cost(x, y) <= max_cost)) map.Invalidate(x, y);
      }
    }
    return map;
  }

 private:
  template <typename Fn>
  void ForEachPixel(bool forward, Fn&& fn) const {
    if (forward) {
      for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) fn(x, y);
    } else {
      for (int y = height_ - 1; y >= 0; --y)
        for (int x = width_ - 1; x >= 0; --x) fn(x, y);
    }
  }

  void TryAdopt(DepthMap* map, int x, int y, const Window& win, double depth,
                const Eigen::Vector3d& normal) {
    if (!Admissible(x, y, depth, normal)) return;
    const double cost = Cost(x, y, win, depth, normal);
    if (cost < map->Cost(x, y)) map->Set(x, y, depth, normal, cost);
  }

  void Sweep(DepthMap* map, bool forward, Window* win) {
    const int step = forward ? -1 : 1;
    ForEachPixel(forward, [&](int x, int y) {
      BuildWindow(x, y, win);
      const Eigen::Vector3d ray = Ray(x, y);
      const int neighbors[2][2] = {{x + step, y}, {x, y + step}};
      for (const auto& nb : neighbors) {
        if (nb[0] < 0 || nb[0] >= width_ || nb[1] < 0 || nb[1] >= height_) {
          continue;
        }
        const Eigen::Vector3d n = map->Normal(nb[0], nb[1]);
        const double offset = map->Depth(nb[0], nb[1]) * n.dot(Ray(nb[0], nb[1]));
        const double denom = n.dot(ray);
        if (!(denom < 0.0)) continue;
        TryAdopt(map, x, y, *win, offset / denom, n);
      }
    });
  }

  void Refine(DepthMap* map, bool forward, Window* win, Rng& rng) {
    ForEachPixel(forward, [&](int x, int y) {
      BuildWindow(x, y, win);
      double depth_range = kDepthPerturbation;
      double normal_range = kNormalPerturbation;
      for (int level = 0; level <= cfg_.perturbation_halving; ++level) {
        const double depth =
            map->Depth(x, y) * (1.0 + rng.Uniform(-depth_range, depth_range));
        Eigen::Vector3d normal =
            map->Normal(x, y) +
            normal_range * Eigen::Vector3d(rng.Uniform(-1.0, 1.0),
                                           rng.Uniform(-1.0, 1.0),
                                           rng.Uniform(-1.0, 1.0));
        normal.normalize();
        TryAdopt(map, x, y, *win, depth, normal);
        depth_range *= 0.5;
        normal_range *= 0.5;
      }
    });
  }

  PatchMatchConfig cfg_;
  PinholeCamera camera_;
  int width_;
  int height_;
  Image ref_gray_;
  Eigen::Matrix3d kinv_;
  std::vector<Image> src_gray_;
  std::vector<SourceGeometry> sources_;
  std::vector<double> spatial_;
  std::vector<double> per_source_;
};

}  // namespace

void PatchMatchConfig::Validate() const {
  std::vector<std::string> violations;
  if (window_radius < 1) violations.push_back("window_radius must be >= 1");
  if (!(min_ncc >= -1.0 && min_ncc <= 1.0)) {
    violations.push_back("min_ncc must lie in [-1, 1]");
  }
  if (iterations < 1) violations.push_back("iterations must be >= 1");
  if (!(depth_min > 0.0 && depth_min < depth_max)) {
    violations.push_back("depth range must satisfy 0 < depth_min < depth_max");
  }
  if (perturbation_halving < 0) {
    violations.push_back("perturbation_halving must be >= 0");
  }
  if (source_views_per_pixel < 0) {
    violations.push_back("source_views_per_pixel must be >= 0");
  }
  if (max_source_views < 1) violations.push_back("max_source_views must be >= 1");
  if (!(sigma_color > 0.0)) violations.push_back("sigma_color must be positive");
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

double Ncc(std::span<const double> ref_patch, std::span<const double> src_patch,
           std::span<const double> weights) {
  if (ref_patch.size() != weights.size() || src_patch.size() != weights.size()) {
    throw InvalidArgumentError("ncc patches and weights differ in size");
  }
  double sw = 0.0;
  double mr = 0.0;
  double ms = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw InvalidArgumentError("negative ncc weight");
    sw += weights[i];
    mr += weights[i] * ref_patch[i];
    ms += weights[i] * src_patch[i];
  }
  if (!(sw > 0.0)) throw InvalidArgumentError("ncc weights are all zero");
  mr /= sw;
  ms /= sw;
  double var_r = 0.0;
  double var_s = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double dr = ref_patch[i] - mr;
    const double ds = src_patch[i] - ms;
    var_r += weights[i] * dr * dr;
    var_s += weights[i] * ds * ds;
    cov += weights[i] * dr * ds;
  }
  var_r /= sw;
  var_s /= sw;
  cov /= sw;
  if (var_r < kVarianceFloor || var_s < kVarianceFloor) return 0.0;
  return std::clamp(cov / std::sqrt(var_r * var_s), -1.0, 1.0);
}

std::vector<double> BilateralWeights(const Image& gray, int center_x,
                                     int center_y, int radius,
                                     double sigma_color, double sigma_dist) {
  const int size = 2 * radius + 1;
  std::vector<double> weights(static_cast<std::size_t>(size) * size, 0.0);
  const double center = gray.At(center_x, center_y);
  for (int dy = -radius; dy <= radius; ++dy) {
    const int y = center_y + dy;
    if (y < 0 || y >= gray.Height()) continue;
    for (int dx = -radius; dx <= radius; ++dx) {
      const int x = center_x + dx;
      if (x < 0 || x >= gray.Width()) continue;
      const double dc = gray.At(x, y) - center;
      weights[(dy + radius) * size + dx + radius] =
          std::exp(-dc * dc / (2.0 * sigma_color * sigma_color)) *
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_dist * sigma_dist));
    }
  }
  return weights;
}

double Photoconsistency(const View& ref, const View& src, int x, int y,
                        const Hypothesis& hyp, const PatchMatchConfig& cfg) {
  PatchMatchConfig single = cfg;
  single.source_views_per_pixel = 0;
  Solver solver(ref, {src}, single);
  Window win;
  solver.BuildWindow(x, y, &win);
  return solver.Cost(x, y, win, hyp.depth, hyp.normal);
}

DepthMap EstimateDepthMap(const View& ref, const std::vector<View>& sources,
                          const PatchMatchConfig& cfg,
                          const IterationObserver& observer) {
  if (sources.empty()) {
    throw InvalidArgumentError("depth estimation for '" + ref.name +
                               "' needs at least one source view");
  }
  cfg.Validate();
  if (ref.camera.HasDistortion()) {
    throw InvalidArgumentError("reference view '" + ref.name +
                               "' must be undistorted");
  }
  for (const View& src : sources) {
    if (src.camera.HasDistortion()) {
      throw InvalidArgumentError("source view '" + src.name +
                                 "' must be undistorted");
    }
  }
  Solver solver(ref, sources, cfg);
  return solver.Run(observer);
}

PatchMatchConfig AdaptTextureless(const PatchMatchConfig& cfg, double k) {
  if (!(k >= 1.0)) {
    throw InvalidArgumentError("textureless adaptation needs k >= 1");
  }
  PatchMatchConfig out = cfg;
  out.window_radius = static_cast<int>(std::lround(k * cfg.window_radius));
  out.min_ncc = cfg.min_ncc / k;
  out.textureless_mode = true;
  return out;
}

std::vector<int> SelectSourceViews(const std::vector<View>& views, int ref,
                                   const PatchMatchConfig& cfg) {
  const Eigen::Vector3d axis = views[ref].pose.OpticalAxis();
  struct Candidate {
    double angle;
    int index;
  };
  std::vector<Candidate> in_range;
  std::vector<Candidate> all;
  for (int i = 0; i < static_cast<int>(views.size()); ++i) {
    if (i == ref) continue;
    const double c =
        std::clamp(axis.dot(views[i].pose.OpticalAxis()), -1.0, 1.0);
    const double angle = std::acos(c) * 180.0 / std::numbers::pi;
    all.push_back({angle, i});
    if (angle >= cfg.min_baseline_deg && angle <= cfg.max_baseline_deg) {
      in_range.push_back({angle, i});
    }
  }
  const double mid = 0.5 * (cfg.min_baseline_deg + cfg.max_baseline_deg);
  std::vector<Candidate>& pool = in_range.empty() ? all : in_range;
  std::stable_sort(pool.begin(), pool.end(),
                   [&](const Candidate& a, const Candidate& b) {
                     if (in_range.empty()) return a.angle < b.angle;
                     return std::abs(a.angle - mid) < std::abs(b.angle - mid);
                   });
  std::vector<int> selected;
  for (const Candidate& c : pool) {
    if (static_cast<int>(selected.size()) >= cfg.max_source_views) break;
    selected.push_back(c.index);
  }
  return selected;
}

}  // namespace srmvs
