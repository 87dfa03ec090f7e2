#include "swnet/experiments.h"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "json.hpp"
#include "swnet/analytic.h"
#include "swnet/errors.h"

namespace swnet {
namespace {

NetworkConfig config(std::size_t n, bool lrc = true) {
  NetworkConfig c;
  c.R = 20;
  c.n = n;
  c.lrc_enabled = lrc;
  c.seed = 5;
  return c;
}

std::string csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  write_summary_csv(out, rows);
  return out.str();
}

TEST(RunCell, ZeroSeparation) {
  const SummaryRow row = run_cell(config(500), 0.0, 20);
  EXPECT_EQ(row.mean_delivered, 0.0);
  EXPECT_EQ(row.fail_rate, 0.0);
  EXPECT_EQ(row.analytic_g, 0.0);
}

TEST(RunCell, NearTargetMatchesTwoHops) {
  const CellResult cell = simulate_cell(config(40000), 1.5, 200);
  EXPECT_EQ(cell.trajectory_violations, 0u);
  EXPECT_NEAR(cell.row.mean_delivered, 2.0, 1e-12);
  EXPECT_NEAR(cell.row.analytic_g, 2.0, 1e-12);
  EXPECT_LT(cell.row.fail_rate, 0.1);
  const auto sparse = run_cell(config(5000), 1.5, 100);
  EXPECT_EQ(sparse.mean_delivered, 2.0);
}

TEST(RunCell, DeterministicAndThreadIndependent) {
  const auto a = run_cell(config(1000), 3.0, 1);
  const auto b = run_cell(config(1000), 3.0, 1);
  EXPECT_EQ(csv({a}), csv({b}));
  const auto one = run_cell(config(1500), 4.2, 60, {TieBreak::uniform, 1});
  const auto three = run_cell(config(1500), 4.2, 60, {TieBreak::uniform, 3});
  EXPECT_EQ(csv({one}), csv({three}));
}

TEST(RunCell, EstimatorIdentityAndBounds) {
  for (double d : {2.2, 5.7}) {
    const SummaryRow row = run_cell(config(3000), d, 150);
    EXPECT_NEAR(row.mean_indicator, row.mean_delivered * (1 - row.fail_rate), 1e-12);
    EXPECT_LE(row.mean_indicator, row.mean_delivered);
    EXPECT_GE(row.fail_rate, 0.0);
    EXPECT_LE(row.fail_rate, 1.0);
    EXPECT_DOUBLE_EQ(row.abs_error, std::abs(row.mean_delivered - row.analytic_g));
  }
}

TEST(RunCell, ReferenceWithoutContactsIsFloorPlusOne) {
  const SummaryRow row = run_cell(config(8000, false), 2.5, 100);
  EXPECT_EQ(row.analytic_g, 3.0);
  EXPECT_EQ(row.mean_delivered, 3.0);
}

TEST(RunCell, RejectsBadInput) {
  EXPECT_THROW(run_cell(config(100), 1.0, 0), ValidationError);
  EXPECT_THROW(run_cell(config(100), 9.5, 1), ValidationError);
}

TEST(ReplayTrial, ReproducesCellTrials) {
  const CellResult cell = simulate_cell(config(2000), 6.0, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(replay_trial(config(2000), 6.0, i).outcome.tau(), cell.taus[i]);
  }
}

TEST(SeparationGrid, Values) {
  EXPECT_TRUE((SeparationGrid{1.0, 0.5, 0.25}.values().empty()));
  const auto v = SeparationGrid{0.0, 1.0, 0.25}.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_EQ((SeparationGrid{0.0, 0.3, 0.1}.values().size()), 4u);
  EXPECT_THROW((SeparationGrid{0, 1, 0}.values()), ValidationError);
}

TEST(Sweep, EmptyGridGivesEmptyTable) {
  SweepSpec spec;
  spec.config = config(100);
  spec.grid = {2.0, 1.0, 0.25};
  spec.trials = 10;
  spec.n_list = {100};
  const auto result = sweep_separation(spec);
  EXPECT_TRUE(result.rows.empty());
  EXPECT_TRUE(result.analytic.empty());
}

TEST(Sweep, RowsPerCell) {
  SweepSpec spec;
  spec.config = config(100);
  spec.grid = {0.0, 1.0, 0.5};
  spec.trials = 5;
  spec.n_list = {300, 600};
  const auto result = sweep_separation(spec);
  ASSERT_EQ(result.rows.size(), 6u);
  EXPECT_EQ(result.rows[1].n, 600u);
  EXPECT_EQ(result.rows[2].d, 0.5);
  EXPECT_EQ(result.analytic.size(), 3u);
}

TEST(Sweep, RejectsGridBeyondGuard) {
  SweepSpec spec;
  spec.config = config(100);
  spec.grid = {0.0, 9.25, 0.25};
  spec.n_list = {100};
  EXPECT_THROW(sweep_separation(spec), ValidationError);
}

TEST(Sweep, AnalyticCurveRisesThenSaturates) {
  const auto points = analytic_sweep(102, 1, {0.0, 50.0, 1.0});
  ASSERT_EQ(points.size(), 51u);
  for (std::size_t i = 1; i < points.size(); ++i) EXPECT_GT(points[i].g, points[i - 1].g);
  EXPECT_LT(points[50].g - points[49].g, 1e-3);
  // Early separations: close to one hop per r.
  EXPECT_NEAR(points[3].g, 4.0, 0.01);
  const auto fine = analytic_sweep(102, 1, {0.0, 50.0, 0.25});
  for (std::size_t i = 1; i < fine.size(); ++i) EXPECT_GE(fine[i].g, fine[i - 1].g);
}

TEST(Tail, Bound) {
  EXPECT_EQ(tail_bound(8.0, 1.0, 0.1), 9u);
  EXPECT_EQ(tail_bound(0.0, 1.0, 0.1), 1u);
  EXPECT_EQ(tail_bound(4.5, 1.0, 0.1), 6u);
  EXPECT_THROW(tail_bound(1.0, 1.0, 1.0), ValidationError);
}

TEST(Tail, ZeroSeparationNeverExceeds) {
  const TailEstimate t = tail_probability(config(50), 0.0, 30);
  EXPECT_EQ(t.exceed_probability, 0.0);
  EXPECT_EQ(t.bound, 1u);
}

TEST(Tail, DeliveredTrialsStayWithinBound) {
  const TailEstimate t = tail_probability(config(4000), 7.0, 200);
  EXPECT_EQ(t.delivered_over_bound, 0u);
  EXPECT_EQ(t.bound, 8u);
}

TEST(Convergence, SingleSizeHasNoTrend) {
  const auto study = convergence_study(config(1), 3.0, {800}, 20, 2);
  ASSERT_EQ(study.points.size(), 1u);
  EXPECT_EQ(study.points[0].per_seed.size(), 2u);
  EXPECT_EQ(study.error_non_increasing(), std::nullopt);
}

TEST(Convergence, RejectsUnsortedSizes) {
  EXPECT_THROW(convergence_study(config(1), 3.0, {800, 400}, 5, 1), ValidationError);
  EXPECT_THROW(convergence_study(config(1), 3.0, {}, 5, 1), ValidationError);
}

TEST(Convergence, WithoutContactsApproachesFloorPlusOne) {
  const auto study = convergence_study(config(1, false), 2.5, {1000, 8000}, 100, 1);
  EXPECT_EQ(study.points.back().median_mean_delivered, 3.0);
  EXPECT_EQ(study.points.back().trajectory_violations, 0u);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(ValidateLrc, WholeDomainAndExcludedBall) {
  const Rect whole{0, 0, 20, 20};
  const Rect inside_ball{9.7, 9.7, 10.3, 10.3};
  const auto v = validate_lrc_distribution(config(500), {10, 10}, {whole, inside_ball}, 300);
  EXPECT_EQ(v.with_contact, 300u);
  EXPECT_EQ(v.regions[0].observed, 1.0);
  EXPECT_NEAR(v.regions[0].predicted, 1.0, 1e-12);
  EXPECT_EQ(v.regions[1].observed, 0.0);
  EXPECT_EQ(v.regions[1].predicted, 0.0);
  EXPECT_EQ(v.regions[1].z, 0.0);
}

TEST(ValidateLrc, QuadrantsWithinFourSigma) {
  const auto regions = default_validation_regions(20, 1);
  const auto v = validate_lrc_distribution(config(2000), {10, 10}, regions, 3000, {TieBreak::uniform, 2});
  ASSERT_EQ(v.regions.size(), 5u);
  for (int q = 0; q < 4; ++q) EXPECT_NEAR(v.regions[q].predicted, 0.25, 1e-4);
  for (const auto& s : v.regions) EXPECT_LE(std::abs(s.z), 4.0);
}

TEST(Output, CsvHeaderAndJsonFields) {
  const SummaryRow row = run_cell(config(300), 1.0, 3);
  const std::string text = csv({row});
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "d,d_over_r,n,trials,mean_delivered,mean_indicator,std_delivered,fail_rate,analytic_g,abs_error");
  std::ostringstream js;
  write_summary_json(js, {row});
  const auto parsed = nlohmann::json::parse(js.str());
  ASSERT_EQ(parsed.size(), 1u);
  std::vector<std::string> keys;
  for (auto it = parsed[0].begin(); it != parsed[0].end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys.size(), 10u);
  EXPECT_EQ(parsed[0]["n"], 300);
}

TEST(Output, UndeliveredCellPrintsNan) {
  SummaryRow row;
  row.mean_delivered = std::nan("");
  row.abs_error = std::nan("");
  EXPECT_NE(csv({row}).find("nan"), std::string::npos);
  std::ostringstream js;
  write_summary_json(js, {row});
  EXPECT_TRUE(nlohmann::json::parse(js.str())[0]["mean_delivered"].is_null());
}

TEST(Output, InstanceAndTrajectoryDumps) {
  const auto trial = replay_trial(config(50), 2.0, 0);
  std::ostringstream a, b;
  write_instance_json(a, trial.instance);
  write_trajectory_json(b, trial.instance, trial.outcome);
  const auto inst = nlohmann::json::parse(a.str());
  EXPECT_EQ(inst["relays"].size(), 50u);
  EXPECT_EQ(inst["config"]["n"], 50);
  const auto traj = nlohmann::json::parse(b.str());
  EXPECT_EQ(traj["hops"].size(), trial.outcome.hops.size());
}

}  // namespace
}  // namespace swnet
