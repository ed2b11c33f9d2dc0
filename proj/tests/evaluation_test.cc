#include "srmvs/evaluation.h"

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "srmvs/errors.h"

namespace srmvs {
namespace {

PointCloud Cloud(std::vector<Eigen::Vector3d> pts) {
  PointCloud c;
  c.points = std::move(pts);
  return c;
}

PointCloud RandomCloud(std::mt19937_64& rng, int n, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  PointCloud c;
  for (int i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
  return c;
}

TEST(EvaluateTest, IdenticalCloudsScoreOne) {
  std::mt19937_64 rng(1);
  const PointCloud c = RandomCloud(rng, 500, 1.0);
  const ScoreTable t = Evaluate(c, c, CmToMeters(DefaultTolerancesCm()));
  for (const ScoreRow& r : t.rows) {
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.completeness, 1.0);
    EXPECT_EQ(r.f1, 1.0);
  }
}

TEST(EvaluateTest, FarCloudScoresZero) {
  const PointCloud gt = Cloud({{0, 0, 0}, {1, 0, 0}});
  const PointCloud rec = Cloud({{0, 0, 0.1}, {1, 0, 0.1}});
  const ScoreTable t = Evaluate(rec, gt, {0.01});
  EXPECT_EQ(t.rows[0].accuracy, 0.0);
  EXPECT_EQ(t.rows[0].completeness, 0.0);
  EXPECT_EQ(t.rows[0].f1, 0.0);
}

TEST(EvaluateTest, WorkedExamples) {
  const PointCloud gt = Cloud({{0, 0, 0}});
  EXPECT_DOUBLE_EQ(Accuracy(Cloud({{0, 0, 0}, {0.05, 0, 0}}), gt, 0.01), 0.5);
  const PointCloud gt3 = Cloud({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
  EXPECT_DOUBLE_EQ(Completeness(Cloud({{0, 0, 0}, {1, 0, 0}}), gt3, 0.01), 2.0 / 3.0);
  EXPECT_EQ(Accuracy(PointCloud{}, gt, 0.01), 0.0);
  EXPECT_EQ(Completeness(PointCloud{}, gt, 0.01), 0.0);
  const ScoreTable t = Evaluate(PointCloud{}, gt, {0.01});
  EXPECT_EQ(t.rows[0].f1, 0.0);
  EXPECT_THROW(Evaluate(gt, PointCloud{}, {0.01}), InvalidArgumentError);
}

TEST(EvaluateTest, BoundaryIsInclusive) {
  const PointCloud gt = Cloud({{0, 0, 0}});
  EXPECT_EQ(Accuracy(Cloud({{0.25, 0, 0}}), gt, 0.25), 1.0);
  EXPECT_EQ(Accuracy(Cloud({{std::nextafter(0.25, 1.0), 0, 0}}), gt, 0.25), 0.0);
}

TEST(EvaluateTest, MatchesBruteForce) {
  std::mt19937_64 rng(2);
  const std::vector<double> taus = {0.001, 0.01, 0.03, 0.1, 0.4};
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud gt = RandomCloud(rng, 300, 0.5);
    PointCloud rec = RandomCloud(rng, 200, 0.5);
    // Near duplicates exercise the boundary.
    for (int i = 0; i < 50; ++i) rec.points.push_back(gt.points[i] + Eigen::Vector3d(0.01, 0, 0));
    const ScoreTable t = Evaluate(rec, gt, taus);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const oracle::Scores s = oracle::BruteForce(rec.points, gt.points, taus[i]);
      EXPECT_EQ(t.rows[i].accuracy, s.accuracy);
      EXPECT_EQ(t.rows[i].completeness, s.completeness);
      EXPECT_DOUBLE_EQ(t.rows[i].f1, s.f1);
    }
  }
}

TEST(EvaluateTest, MatchesBruteForceOnDegenerateClouds) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> grid(0, 20);
  const std::vector<double> taus = {0.01, 0.05, 0.1};
  // Lattice points on a plane, with duplicates; distances hit tau exactly.
  PointCloud gt, rec;
  for (int i = 0; i < 400; ++i) gt.points.emplace_back(0.05 * grid(rng), 0.05 * grid(rng), 0.0);
  for (int i = 0; i < 300; ++i) rec.points.emplace_back(0.05 * grid(rng), 0.05 * grid(rng), 0.05 * grid(rng) / 20.0);
  const ScoreTable t = Evaluate(rec, gt, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const oracle::Scores s = oracle::BruteForce(rec.points, gt.points, taus[i]);
    EXPECT_EQ(t.rows[i].accuracy, s.accuracy);
    EXPECT_EQ(t.rows[i].completeness, s.completeness);
  }
  const PointCloud same = Cloud(std::vector<Eigen::Vector3d>(50, Eigen::Vector3d(1, 2, 3)));
  EXPECT_EQ(Evaluate(same, same, taus).rows[0].f1, 1.0);
}

TEST(EvaluateTest, MonotoneInToleranceAndSymmetric) {
  std::mt19937_64 rng(3);
  const PointCloud a = RandomCloud(rng, 400, 0.5);
  const PointCloud b = RandomCloud(rng, 300, 0.5);
  const std::vector<double> taus = {0.005, 0.02, 0.05, 0.2};
  const ScoreTable ab = Evaluate(a, b, taus);
  const ScoreTable ba = Evaluate(b, a, taus);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    EXPECT_EQ(ab.rows[i].accuracy, ba.rows[i].completeness);
    EXPECT_EQ(ab.rows[i].completeness, ba.rows[i].accuracy);
    if (i > 0) {
      EXPECT_GE(ab.rows[i].accuracy, ab.rows[i - 1].accuracy);
      EXPECT_GE(ab.rows[i].completeness, ab.rows[i - 1].completeness);
    }
  }
  ab.Validate();
  EXPECT_THROW(Evaluate(a, b, {0.02, 0.01}), InvalidArgumentError);
}

ScoreTable Table(double acc, double comp) {
  ScoreTable t;
  t.rows.push_back({0.01, acc, comp, ScoreRow::F1(acc, comp)});
  return t;
}

TEST(AggregateTest, MeansPerTolerance) {
  const ScoreTable m = Aggregate({Table(0.2, 0.2), Table(0.4, 0.4)});
  EXPECT_DOUBLE_EQ(m.rows[0].accuracy, 0.3);
  EXPECT_DOUBLE_EQ(m.rows[0].completeness, 0.3);
  ScoreTable other = Table(0.1, 0.1);
  other.rows[0].tolerance = 0.02;
  EXPECT_THROW(Aggregate({Table(0.2, 0.2), other}), InvalidArgumentError);
  EXPECT_THROW(Aggregate({}), InvalidArgumentError);
}

TEST(ImprovementTest, PercentagePoints) {
  const ImprovementReport r = Improvement(Table(0.3580, 0.5), Table(0.4000, 0.4));
  EXPECT_NEAR(r.rows[0].d_accuracy, 4.20, 1e-9);
  EXPECT_NEAR(r.rows[0].d_completeness, -10.0, 1e-9);
  EXPECT_NEAR(r.mean.d_accuracy, 4.20, 1e-9);
}

TEST(ScoreTableTest, F1IdentityAndValidation) {
  EXPECT_EQ(ScoreRow::F1(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(ScoreRow::F1(0.5, 1.0), 2.0 / 3.0);
  ScoreTable t = Table(0.5, 1.0);
  t.rows[0].f1 = 0.9;
  EXPECT_THROW(t.Validate(), ValidationError);
}

TEST(ScoreCsvTest, RoundTrip) {
  ScoreTable t;
  t.rows = {{0.01, 0.5, 0.25, ScoreRow::F1(0.5, 0.25)},
            {0.02, 0.75, 0.5, ScoreRow::F1(0.75, 0.5)}};
  const std::string csv = FormatCsv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "tau_cm,accuracy,completeness,f1");
  const ScoreTable back = ParseCsv(csv);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_NEAR(back.rows[1].tolerance, 0.02, 1e-12);
  EXPECT_NEAR(back.rows[1].accuracy, 0.75, 1e-4);
  EXPECT_EQ(FormatCsv(back), csv);
  EXPECT_THROW(ParseCsv("nope\n"), FormatError);
  EXPECT_THROW(ParseCsv("tau_cm,accuracy,completeness,f1\n1,x,0,0\n"), FormatError);
}

TEST(ScoreCsvTest, TextTableHasOneRowPerTolerance) {
  ScoreTable a = Table(0.5, 0.5);
  a.model = "LR";
  ScoreTable b = Table(0.6, 0.7);
  b.model = "BC";
  const std::string text = FormatTextTable({a, b});
  EXPECT_NE(text.find("LR"), std::string::npos);
  EXPECT_NE(text.find("BC"), std::string::npos);
}

}  // namespace
}  // namespace srmvs
