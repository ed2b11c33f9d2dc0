#include "srmvs/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>

#include "srmvs/errors.h"

namespace srmvs {
namespace {

// Static k-d tree over a fixed point set. Distances are always
// (p - q).squaredNorm(), so results match a brute-force scan bit for bit.
class PointTree {
 public:
  explicit PointTree(const std::vector<Eigen::Vector3d>& points)
      : points_(points), order_(points.size()) {
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!order_.empty()) Build(0, static_cast<std::uint32_t>(order_.size()));
  }

  // Smallest squared distance to any point; exact whenever it is at most
  // `max_d2`, +inf or some value above `max_d2` otherwise.
  double NearestSquared(const Eigen::Vector3d& q, double max_d2) const {
    double best = std::numeric_limits<double>::infinity();
    if (!nodes_.empty()) Search(0, q, max_d2, &best);
    return best;
  }

 private:
  static constexpr std::uint32_t kLeafSize = 12;

  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
  };

  std::uint32_t Build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;
    Eigen::Vector3d lo = points_[order_[begin]];
    Eigen::Vector3d hi = lo;
    for (std::uint32_t i = begin; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    if (hi[axis] == lo[axis]) return id;  // all points coincide
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                       return points_[a][axis] < points_[b][axis];
                     });
    const double split = points_[order_[mid]][axis];
    const std::uint32_t left = Build(begin, mid);
    const std::uint32_t right = Build(mid, end);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  // Left holds coordinates <= split, right >= split along the axis.
  void Search(std::uint32_t id, const Eigen::Vector3d& q, double max_d2,
              double* best) const {
    const Node& n = nodes_[id];
    if (n.axis < 0) {
      for (std::uint32_t i = n.begin; i < n.end; ++i) {
        *best = std::min(*best, (points_[order_[i]] - q).squaredNorm());
      }
      return;
    }
    const double diff = q[n.axis] - n.split;
    const std::uint32_t near = diff <= 0.0 ? n.left : n.right;
    const std::uint32_t far = diff <= 0.0 ? n.right : n.left;
    Search(near, q, max_d2, best);
    const double bound = diff * diff;
    if (bound <= std::min(*best, max_d2)) Search(far, q, max_d2, best);
  }

  const std::vector<Eigen::Vector3d>& points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

// Per tolerance, how many `queries` have a `targets` point within it.
std::vector<std::size_t> CountWithin(
    const std::vector<Eigen::Vector3d>& queries,
    const std::vector<Eigen::Vector3d>& targets,
    const std::vector<double>& tolerances) {
  std::vector<std::size_t> counts(tolerances.size(), 0);
  if (queries.empty() || targets.empty()) return counts;
  const PointTree tree(targets);
  const double max_d2 = tolerances.back() * tolerances.back();
  for (const auto& q : queries) {
    const double d2 = tree.NearestSquared(q, max_d2);
    for (std::size_t t = 0; t < tolerances.size(); ++t) {
      if (d2 <= tolerances[t] * tolerances[t]) ++counts[t];
    }
  }
  return counts;
}

void CheckTolerances(const std::vector<double>& tolerances) {
  if (tolerances.empty()) {
    throw InvalidArgumentError("at least one tolerance is required");
  }
  for (std::size_t i = 0; i < tolerances.size(); ++i) {
    if (!(tolerances[i] > 0.0) || !std::isfinite(tolerances[i])) {
      throw InvalidArgumentError("tolerances must be positive and finite");
    }
    if (i > 0 && !(tolerances[i] > tolerances[i - 1])) {
      throw InvalidArgumentError("tolerances must be strictly increasing");
    }
  }
}

std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::vector<double> DefaultTolerancesCm() { return {1, 2, 5, 10, 20, 50}; }

std::vector<double> CmToMeters(const std::vector<double>& cm) {
  std::vector<double> out;
  out.reserve(cm.size());
  for (double v : cm) out.push_back(v * kMetersPerCm);
  return out;
}

double ScoreRow::F1(double accuracy, double completeness) {
  const double sum = accuracy + completeness;
  if (sum == 0.0) return 0.0;
  return 2.0 * accuracy * completeness / sum;
}

std::vector<double> ScoreTable::Tolerances() const {
  std::vector<double> out;
  for (const auto& row : rows) out.push_back(row.tolerance);
  return out;
}

void ScoreTable::Validate() const {
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ScoreRow& r = rows[i];
    if (i > 0 && !(r.tolerance > rows[i - 1].tolerance)) {
      violations.push_back("tolerances not strictly increasing at row " +
                           std::to_string(i));
    }
    if (std::abs(r.f1 - ScoreRow::F1(r.accuracy, r.completeness)) > 1e-12) {
      violations.push_back("f1 inconsistent at row " + std::to_string(i));
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

double Accuracy(const PointCloud& rec, const PointCloud& gt,
                double tolerance) {
  return Evaluate(rec, gt, {tolerance}).rows.front().accuracy;
}

double Completeness(const PointCloud& rec, const PointCloud& gt,
                    double tolerance) {
  return Evaluate(rec, gt, {tolerance}).rows.front().completeness;
}

ScoreTable Evaluate(const PointCloud& rec, const PointCloud& gt,
                    const std::vector<double>& tolerances) {
  CheckTolerances(tolerances);
  if (gt.Empty()) {
    throw InvalidArgumentError("ground-truth cloud is empty");
  }
  const auto acc = CountWithin(rec.points, gt.points, tolerances);
  const auto comp = CountWithin(gt.points, rec.points, tolerances);
  ScoreTable table;
  for (std::size_t t = 0; t < tolerances.size(); ++t) {
    ScoreRow row;
    row.tolerance = tolerances[t];
    row.accuracy = rec.Empty() ? 0.0
                               : static_cast<double>(acc[t]) /
                                     static_cast<double>(rec.Size());
    row.completeness =
        static_cast<double>(comp[t]) / static_cast<double>(gt.Size());
    row.f1 = ScoreRow::F1(row.accuracy, row.completeness);
    table.rows.push_back(row);
  }
  return table;
}

ScoreTable Aggregate(const std::vector<ScoreTable>& tables) {
  if (tables.empty()) {
    throw InvalidArgumentError("nothing to aggregate");
  }
  const auto tolerances = tables.front().Tolerances();
  ScoreTable out;
  out.scene = "aggregate";
  out.model = tables.front().model;
  for (const auto& t : tables) {
    if (t.Tolerances() != tolerances) {
      throw InvalidArgumentError("aggregated tables differ in tolerances");
    }
    if (t.model != out.model) out.model = "mixed";
  }
  const double n = static_cast<double>(tables.size());
  for (std::size_t r = 0; r < tolerances.size(); ++r) {
    ScoreRow row;
    row.tolerance = tolerances[r];
    for (const auto& t : tables) {
      row.accuracy += t.rows[r].accuracy;
      row.completeness += t.rows[r].completeness;
      row.f1 += t.rows[r].f1;
    }
    row.accuracy /= n;
    row.completeness /= n;
    row.f1 /= n;
    out.rows.push_back(row);
  }
  return out;
}

ImprovementReport Improvement(const ScoreTable& base,
                              const ScoreTable& variant) {
  if (base.Tolerances() != variant.Tolerances()) {
    throw InvalidArgumentError("compared tables differ in tolerances");
  }
  ImprovementReport report;
  for (std::size_t r = 0; r < base.rows.size(); ++r) {
    ImprovementRow row;
    row.tolerance = base.rows[r].tolerance;
    row.d_accuracy = 100.0 * (variant.rows[r].accuracy - base.rows[r].accuracy);
    row.d_completeness =
        100.0 * (variant.rows[r].completeness - base.rows[r].completeness);
    row.d_f1 = 100.0 * (variant.rows[r].f1 - base.rows[r].f1);
    report.mean.d_accuracy += row.d_accuracy;
    report.mean.d_completeness += row.d_completeness;
    report.mean.d_f1 += row.d_f1;
    report.rows.push_back(row);
  }
  if (!report.rows.empty()) {
    const double n = static_cast<double>(report.rows.size());
    report.mean.d_accuracy /= n;
    report.mean.d_completeness /= n;
    report.mean.d_f1 /= n;
  }
  return report;
}

std::string FormatCsv(const ScoreTable& table) {
  std::string out = "tau_cm,accuracy,completeness,f1\n";
  for (const auto& row : table.rows) {
    out += Fixed(row.tolerance / kMetersPerCm, 4) + "," +
           Fixed(row.accuracy, 4) + "," + Fixed(row.completeness, 4) + "," +
           Fixed(row.f1, 4) + "\n";
  }
  return out;
}

ScoreTable ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "tau_cm,accuracy,completeness,f1") {
    throw FormatError("score CSV: missing or wrong header");
  }
  ScoreTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[4];
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf%c", &v[0], &v[1], &v[2],
                    &v[3], &tail) != 4) {
      throw FormatError("score CSV line " + std::to_string(line_no) +
                        ": expected four numbers");
    }
    table.rows.push_back({v[0] * kMetersPerCm, v[1], v[2], v[3]});
  }
  return table;
}

std::string FormatTextTable(const std::vector<ScoreTable>& tables) {
  if (tables.empty()) return {};
  const auto tolerances = tables.front().Tolerances();
  for (const auto& t : tables) {
    if (t.Tolerances() != tolerances) {
      throw InvalidArgumentError("tabulated score tables differ in tolerances");
    }
  }
  const auto pad = [](const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
  };
  constexpr std::size_t kCol = 7;
  std::string header1 = pad("tau", 7) + " |";
  std::string header2 = pad("(cm)", 7) + " |";
  for (const auto& t : tables) {
    const std::string label = t.model.empty() ? "?" : t.model;
    header1 += pad(label, 3 * kCol) + " |";
    header2 += pad("F1", kCol) + pad("Acc", kCol) + pad("Comp", kCol) + " |";
  }
  std::string out = header1 + "\n" + header2 + "\n";
  out += std::string(header2.size(), '-') + "\n";
  for (std::size_t r = 0; r < tolerances.size(); ++r) {
    std::string line = pad(Fixed(tolerances[r] / kMetersPerCm, 0), 7) + " |";
    for (const auto& t : tables) {
      const ScoreRow& row = t.rows[r];
      line += pad(Fixed(100.0 * row.f1, 2), kCol) +
              pad(Fixed(100.0 * row.accuracy, 2), kCol) +
              pad(Fixed(100.0 * row.completeness, 2), kCol) + " |";
    }
    out += line + "\n";
  }
  return out;
}

std::string FormatImprovementCsv(const ImprovementReport& report) {
  std::string out = "tau_cm,d_accuracy_pp,d_completeness_pp,d_f1_pp\n";
  for (const auto& row : report.rows) {
    out += Fixed(row.tolerance / kMetersPerCm, 4) + "," +
           Fixed(row.d_accuracy, 4) + "," + Fixed(row.d_completeness, 4) +
           "," + Fixed(row.d_f1, 4) + "\n";
  }
  out += "mean," + Fixed(report.mean.d_accuracy, 4) + "," +
         Fixed(report.mean.d_completeness, 4) + "," +
         Fixed(report.mean.d_f1, 4) + "\n";
  return out;
}

}  // namespace srmvs
