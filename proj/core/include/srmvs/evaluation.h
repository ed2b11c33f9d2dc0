#pragma once

#include <string>
#include <vector>

#include "srmvs/point_cloud.h"

namespace srmvs {

// Scene units are meters; tolerances are reported in centimeters.
inline constexpr double kMetersPerCm = 0.01;

std::vector<double> DefaultTolerancesCm();
std::vector<double> CmToMeters(const std::vector<double>& cm);

struct ScoreRow {
  double tolerance = 0.0;  // scene units
  double accuracy = 0.0;
  double completeness = 0.0;
  double f1 = 0.0;

  static double F1(double accuracy, double completeness);
};

struct ScoreTable {
  std::string scene;
  std::string model;
  std::vector<ScoreRow> rows;

  std::vector<double> Tolerances() const;
  // Throws ValidationError when tolerances are not strictly increasing or
  // a row breaks the F1 identity.
  void Validate() const;
};

// Fraction of `rec` within `tolerance` of `gt`; 0 for empty `rec`.
double Accuracy(const PointCloud& rec, const PointCloud& gt, double tolerance);
// Fraction of `gt` within `tolerance` of `rec`; 0 for empty `rec`.
double Completeness(const PointCloud& rec, const PointCloud& gt,
                    double tolerance);

// Grid-accelerated; identical to brute force nearest-neighbor scoring.
ScoreTable Evaluate(const PointCloud& rec, const PointCloud& gt,
                    const std::vector<double>& tolerances);

// Mean of per-table accuracy, completeness and F1 per tolerance.
ScoreTable Aggregate(const std::vector<ScoreTable>& tables);

struct ImprovementRow {
  double tolerance = 0.0;
  double d_accuracy = 0.0;  // percentage points
  double d_completeness = 0.0;
  double d_f1 = 0.0;
};

struct ImprovementReport {
  std::vector<ImprovementRow> rows;
  ImprovementRow mean;  // tolerance field unused
};

ImprovementReport Improvement(const ScoreTable& base,
                              const ScoreTable& variant);

// `tau_cm,accuracy,completeness,f1` with four decimals.
std::string FormatCsv(const ScoreTable& table);
// Parses FormatCsv output.
ScoreTable ParseCsv(const std::string& text);

// Tolerance-by-model layout: one row per tolerance, one column group per
// table. All tables must share tolerances.
std::string FormatTextTable(const std::vector<ScoreTable>& tables);

std::string FormatImprovementCsv(const ImprovementReport& report);

}  // namespace srmvs
