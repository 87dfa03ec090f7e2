#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swnet/geometry.h"
#include "swnet/network.h"
#include "swnet/routing.h"

namespace swnet {

struct RunOptions {
  TieBreak tie_break = TieBreak::uniform;
  unsigned threads = 1;  // 0 = hardware concurrency
};

// Aggregate of one (d, n) cell. mean_delivered averages tau over delivered
// trials; mean_indicator averages tau * 1{delivered} over all trials.
struct SummaryRow {
  double d = 0.0;
  double d_over_r = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_delivered = 0.0;
  double mean_indicator = 0.0;
  double std_delivered = 0.0;
  double fail_rate = 0.0;
  double analytic_g = 0.0;
  double abs_error = 0.0;
};

struct CellResult {
  SummaryRow row;
  std::vector<std::optional<std::size_t>> taus;  // per trial, nullopt = failed
  std::size_t trajectory_violations = 0;
  std::string first_violation;
};

// Seed of trial `index` under a master seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

struct TrialReplay {
  NetworkInstance instance;
  RoutingOutcome outcome;
};

// Rebuilds and routes trial `index` of a cell exactly as simulate_cell does.
TrialReplay replay_trial(const NetworkConfig& config, double d, std::size_t index,
                         const RunOptions& options = {});

// Routes `trials` fresh instances and aggregates. Every trajectory is run
// through check_trajectory. The reference value is g(d) with long-range
// contacts and floor(d/r) + 1 without.
CellResult simulate_cell(const NetworkConfig& config, double d, std::size_t trials,
                         const RunOptions& options = {});
SummaryRow run_cell(const NetworkConfig& config, double d, std::size_t trials,
                    const RunOptions& options = {});

// Separation grid in units of r: start, start + step, ... up to stop.
struct SeparationGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.25;

  std::vector<double> values() const;  // in units of r
};

struct SweepSpec {
  NetworkConfig config;
  SeparationGrid grid;
  std::size_t trials = 1000;
  std::vector<std::size_t> n_list;
};

struct AnalyticPoint {
  double d = 0.0;
  double d_over_r = 0.0;
  double g = 0.0;
};

struct SweepResult {
  std::vector<SummaryRow> rows;  // d-major, then n
  std::vector<AnalyticPoint> analytic;
};

// Validates the grid against [0, R/2 - r] and the config.
void validate_sweep(const SweepSpec& spec);
std::vector<AnalyticPoint> analytic_sweep(double R, double r, const SeparationGrid& grid);
SweepResult sweep_separation(const SweepSpec& spec, const RunOptions& options = {});

// floor(d / (r - delta)) + 1.
std::size_t tail_bound(double d, double r, double delta);

struct TailEstimate {
  std::size_t n = 0;
  std::size_t bound = 0;
  std::size_t trials = 0;
  double exceed_probability = 0.0;  // failures count as exceeding
  std::size_t delivered_over_bound = 0;
};

TailEstimate tail_from_cell(const CellResult& cell, double r, double delta);
TailEstimate tail_probability(const NetworkConfig& config, double d, std::size_t trials,
                              const RunOptions& options = {});

struct ConvergencePoint {
  std::size_t n = 0;
  std::vector<SummaryRow> per_seed;
  std::vector<TailEstimate> tails;
  double median_mean_delivered = 0.0;
  double median_mean_indicator = 0.0;
  double median_abs_error = 0.0;
  double median_tail_probability = 0.0;
  std::size_t delivered_over_bound = 0;
  std::size_t trajectory_violations = 0;
  std::string first_violation;
};

struct ConvergenceStudy {
  std::vector<ConvergencePoint> points;

  // nullopt with fewer than two points.
  std::optional<bool> error_non_increasing() const;
  std::optional<bool> tail_non_increasing() const;
};

// Master seed of repetition `rep`.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep);

// For each n (ascending) runs `seeds` repetitions of a cell and reports medians.
ConvergenceStudy convergence_study(const NetworkConfig& config, double d,
                                   const std::vector<std::size_t>& n_list, std::size_t trials,
                                   std::size_t seeds, const RunOptions& options = {});

struct RegionStat {
  Rect region;
  std::size_t hits = 0;
  double observed = 0.0;
  double predicted = 0.0;
  double z = 0.0;
};

struct LrcValidation {
  std::size_t draws = 0;
  std::size_t with_contact = 0;  // draws where the node had a candidate
  std::vector<RegionStat> regions;
};

// Fresh relays per draw; the node at `node_position` draws one long-range
// contact each time. Predicted fractions are area(A - B)/area(D - B) by
// quadrature; z-scores use the binomial standard deviation.
LrcValidation validate_lrc_distribution(const NetworkConfig& config, Point node_position,
                                        const std::vector<Rect>& regions, std::size_t draws,
                                        const RunOptions& options = {});

// Quadrants of the domain followed by one off-center rectangle.
std::vector<Rect> default_validation_regions(double R, double r);

double median(std::vector<double> values);

// Output. Numbers use the shortest round-trip representation.
inline constexpr const char* kSummaryCsvHeader =
    "d,d_over_r,n,trials,mean_delivered,mean_indicator,std_delivered,fail_rate,analytic_g,abs_error";
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_summary_json(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_analytic_csv(std::ostream& out, const std::vector<AnalyticPoint>& points);
void write_analytic_json(std::ostream& out, const std::vector<AnalyticPoint>& points);
void write_tail_csv(std::ostream& out, const std::vector<TailEstimate>& rows);
void write_tail_json(std::ostream& out, const std::vector<TailEstimate>& rows);
void write_lrc_csv(std::ostream& out, const LrcValidation& v);
void write_lrc_json(std::ostream& out, const LrcValidation& v);

// Debug dumps.
void write_instance_json(std::ostream& out, const NetworkInstance& instance);
void write_trajectory_json(std::ostream& out, const NetworkInstance& instance,
                           const RoutingOutcome& outcome);

std::string format_number(double v);

}  // namespace swnet
