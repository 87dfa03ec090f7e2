#include "swnet/experiments.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "swnet/analytic.h"
#include "swnet/errors.h"

namespace swnet {
namespace {

constexpr std::uint64_t kTrialStream = 0x747269616cULL;
constexpr std::uint64_t kRouteStream = 0x726f757465ULL;
constexpr std::uint64_t kRepetitionStream = 0x726570ULL;
constexpr std::uint64_t kLrcDrawStream = 0x6472617773ULL;

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(tasks, 1)));
}

// Calls fn(i) for i in [0, count) over a strided partition. fn must only
// write to slot i of its outputs, which keeps results independent of the
// thread count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double reference_hops(const NetworkConfig& config, double d) {
  if (!config.lrc_enabled) return no_lrc_delivery_time(d, config.r);
  return delivery_table(config.R, config.r).expected_hops(d);
}

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

template <typename Rows, typename WriteOne>
void write_json_array(std::ostream& out, const Rows& rows, WriteOne one) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) arr.push_back(one(row));
  out << arr.dump(2) << '\n';
}

nlohmann::ordered_json point_json(Point p) { return nlohmann::ordered_json::array({p.x, p.y}); }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(master, kTrialStream, index);
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep) {
  return derive_seed(master, kRepetitionStream, rep);
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2;
}

TrialReplay replay_trial(const NetworkConfig& config, double d, std::size_t index,
                         const RunOptions& options) {
  const std::uint64_t seed = trial_seed(config.seed, index);
  NetworkInstance instance = build_instance(config, d, seed);
  Rng rng(derive_seed(seed, kRouteStream, 0));
  RoutingOutcome outcome = route(instance, rng, options.tie_break);
  return {std::move(instance), std::move(outcome)};
}

CellResult simulate_cell(const NetworkConfig& config, double d, std::size_t trials,
                         const RunOptions& options) {
  config.validate();
  if (trials < 1) throw ValidationError("need at least one trial");
  const double reference = reference_hops(config, d);

  CellResult cell;
  cell.taus.resize(trials);
  std::vector<std::optional<std::string>> violations(trials);
  parallel_for(trials, options.threads, [&](std::size_t i) {
    const TrialReplay trial = replay_trial(config, d, i, options);
    cell.taus[i] = trial.outcome.tau();
    violations[i] = check_trajectory(trial.instance, trial.outcome);
  });

  for (std::size_t i = 0; i < trials; ++i) {
    if (!violations[i]) continue;
    if (cell.trajectory_violations++ == 0) {
      cell.first_violation = "trial " + std::to_string(i) + ": " + *violations[i];
    }
  }

  std::size_t delivered = 0;
  double sum = 0.0;
  for (const auto& tau : cell.taus) {
    if (!tau) continue;
    ++delivered;
    sum += static_cast<double>(*tau);
  }
  const double mean = delivered > 0 ? sum / static_cast<double>(delivered)
                                     : std::numeric_limits<double>::quiet_NaN();
  double ss = 0.0;
  for (const auto& tau : cell.taus) {
    if (tau) ss += (static_cast<double>(*tau) - mean) * (static_cast<double>(*tau) - mean);
  }

  SummaryRow& row = cell.row;
  row.d = d;
  row.d_over_r = d / config.r;
  row.n = config.n;
  row.trials = trials;
  row.mean_delivered = mean;
  row.mean_indicator = sum / static_cast<double>(trials);
  row.std_delivered = delivered > 1 ? std::sqrt(ss / static_cast<double>(delivered - 1)) : 0.0;
  row.fail_rate = static_cast<double>(trials - delivered) / static_cast<double>(trials);
  row.analytic_g = reference;
  row.abs_error = std::abs(mean - reference);
  return cell;
}

SummaryRow run_cell(const NetworkConfig& config, double d, std::size_t trials,
                    const RunOptions& options) {
  return simulate_cell(config, d, trials, options).row;
}

std::vector<double> SeparationGrid::values() const {
  if (!(step > 0.0)) throw ValidationError("d grid step must be positive");
  std::vector<double> out;
  if (stop < start) return out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

void validate_sweep(const SweepSpec& spec) {
  spec.config.validate();
  const double limit = spec.config.R / 2 - spec.config.r;
  for (double v : spec.grid.values()) {
    const double d = v * spec.config.r;
    if (d < 0.0 || d > limit) {
      throw ValidationError(
          "d grid leaves [0, R/2 - r] (edge-effect guard): d/r = " + format_number(v) +
          ", limit " + format_number(limit / spec.config.r));
    }
  }
  for (std::size_t n : spec.n_list) {
    if (n < 1) throw ValidationError("every n must be >= 1");
  }
}

std::vector<AnalyticPoint> analytic_sweep(double R, double r, const SeparationGrid& grid) {
  const DeliveryCurve curve = delivery_table(R, r);
  std::vector<AnalyticPoint> out;
  for (double v : grid.values()) {
    const double d = v * r;
    out.push_back({d, v, curve.expected_hops(d)});
  }
  return out;
}

SweepResult sweep_separation(const SweepSpec& spec, const RunOptions& options) {
  validate_sweep(spec);
  SweepResult result;
  result.analytic = analytic_sweep(spec.config.R, spec.config.r, spec.grid);
  if (spec.trials == 0) return result;
  for (double v : spec.grid.values()) {
    for (std::size_t n : spec.n_list) {
      NetworkConfig cfg = spec.config;
      cfg.n = n;
      result.rows.push_back(run_cell(cfg, v * cfg.r, spec.trials, options));
    }
  }
  return result;
}

std::size_t tail_bound(double d, double r, double delta) {
  if (!(delta > 0.0 && delta < r)) throw ValidationError("delta must satisfy 0 < delta < r");
  if (!(d >= 0.0)) throw ValidationError("d must be non-negative");
  return static_cast<std::size_t>(std::floor(d / (r - delta))) + 1;
}

TailEstimate tail_from_cell(const CellResult& cell, double r, double delta) {
  TailEstimate t;
  t.n = cell.row.n;
  t.bound = tail_bound(cell.row.d, r, delta);
  t.trials = cell.taus.size();
  std::size_t exceed = 0;
  for (const auto& tau : cell.taus) {
    if (!tau || *tau > t.bound) ++exceed;
    if (tau && *tau > t.bound) ++t.delivered_over_bound;
  }
  t.exceed_probability = t.trials ? static_cast<double>(exceed) / static_cast<double>(t.trials) : 0.0;
  return t;
}

TailEstimate tail_probability(const NetworkConfig& config, double d, std::size_t trials,
                              const RunOptions& options) {
  return tail_from_cell(simulate_cell(config, d, trials, options), config.r, config.delta);
}

std::optional<bool> ConvergenceStudy::error_non_increasing() const {
  if (points.size() < 2) return std::nullopt;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].median_abs_error > points[i - 1].median_abs_error) return false;
  }
  return true;
}

std::optional<bool> ConvergenceStudy::tail_non_increasing() const {
  if (points.size() < 2) return std::nullopt;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].median_tail_probability > points[i - 1].median_tail_probability) return false;
  }
  return true;
}

ConvergenceStudy convergence_study(const NetworkConfig& config, double d,
                                   const std::vector<std::size_t>& n_list, std::size_t trials,
                                   std::size_t seeds, const RunOptions& options) {
  if (n_list.empty()) throw ValidationError("n list is empty");
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw ValidationError("n list must be ascending");
  }
  if (seeds < 1) throw ValidationError("need at least one master seed");
  ConvergenceStudy study;
  for (std::size_t n : n_list) {
    ConvergencePoint point;
    point.n = n;
    std::vector<double> delivered, indicator, error, tail;
    for (std::size_t s = 0; s < seeds; ++s) {
      NetworkConfig cfg = config;
      cfg.n = n;
      cfg.seed = repetition_seed(config.seed, s);
      const CellResult cell = simulate_cell(cfg, d, trials, options);
      const TailEstimate t = tail_from_cell(cell, cfg.r, cfg.delta);
      point.per_seed.push_back(cell.row);
      point.tails.push_back(t);
      point.delivered_over_bound += t.delivered_over_bound;
      if (cell.trajectory_violations > 0 && point.first_violation.empty()) {
        point.first_violation = cell.first_violation;
      }
      point.trajectory_violations += cell.trajectory_violations;
      delivered.push_back(cell.row.mean_delivered);
      indicator.push_back(cell.row.mean_indicator);
      error.push_back(cell.row.abs_error);
      tail.push_back(t.exceed_probability);
    }
    point.median_mean_delivered = median(delivered);
    point.median_mean_indicator = median(indicator);
    point.median_abs_error = median(error);
    point.median_tail_probability = median(tail);
    study.points.push_back(std::move(point));
  }
  return study;
}

std::vector<Rect> default_validation_regions(double R, double r) {
  (void)r;
  const double h = R / 2;
  return {Rect{0, 0, h, h}, Rect{h, 0, R, h}, Rect{0, h, h, R}, Rect{h, h, R, R},
          Rect{0.1 * R, 0.55 * R, 0.35 * R, 0.9 * R}};
}

LrcValidation validate_lrc_distribution(const NetworkConfig& config, Point node_position,
                                        const std::vector<Rect>& regions, std::size_t draws,
                                        const RunOptions& options) {
  config.validate();
  const Domain dom(config.R);
  if (!dom.contains(node_position)) throw ValidationError("test node must lie inside the domain");
  for (const Rect& a : regions) {
    if (!(a.x0 <= a.x1 && a.y0 <= a.y1) || !a.within(dom)) {
      throw ValidationError("validation regions must be rectangles inside the domain");
    }
  }
  if (draws < 1) throw ValidationError("need at least one draw");

  // Index of the landing point, or nullopt if the node found no candidate.
  std::vector<std::optional<Point>> landing(draws);
  parallel_for(draws, options.threads, [&](std::size_t i) {
    Rng rng(derive_seed(config.seed, kLrcDrawStream, i));
    std::vector<Point> relays(config.n);
    for (auto& p : relays) p = sample_uniform_domain(rng, dom);
    const NetworkInstance instance(config, std::move(relays), node_position, dom.center());
    if (auto c = draw_long_range_contact(instance, NodeRef::source(), rng)) {
      landing[i] = instance.position(*c);
    }
  });

  LrcValidation out;
  out.draws = draws;
  for (const auto& p : landing) out.with_contact += p.has_value();
  const double total = region_area_minus_ball(dom, Rect{0, 0, config.R, config.R}, node_position, config.r);
  for (const Rect& a : regions) {
    RegionStat s;
    s.region = a;
    for (const auto& p : landing) s.hits += p && a.contains(*p);
    const double m = static_cast<double>(out.with_contact);
    s.observed = m > 0 ? static_cast<double>(s.hits) / m : 0.0;
    s.predicted = region_area_minus_ball(dom, a, node_position, config.r) / total;
    const double var = s.predicted * (1 - s.predicted) / std::max(m, 1.0);
    if (var > 0) {
      s.z = (s.observed - s.predicted) / std::sqrt(var);
    } else {
      s.z = s.observed == s.predicted ? 0.0 : std::numeric_limits<double>::infinity();
    }
    out.regions.push_back(s);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.d) << ',' << format_number(r.d_over_r) << ',' << r.n << ',' << r.trials
        << ',' << format_number(r.mean_delivered) << ',' << format_number(r.mean_indicator) << ','
        << format_number(r.std_delivered) << ',' << format_number(r.fail_rate) << ','
        << format_number(r.analytic_g) << ',' << format_number(r.abs_error) << '\n';
  }
}

void write_summary_json(std::ostream& out, const std::vector<SummaryRow>& rows) {
  write_json_array(out, rows, [](const SummaryRow& r) {
    return nlohmann::ordered_json{
        {"d", r.d},
        {"d_over_r", r.d_over_r},
        {"n", r.n},
        {"trials", r.trials},
        {"mean_delivered", number_or_null(r.mean_delivered)},
        {"mean_indicator", r.mean_indicator},
        {"std_delivered", r.std_delivered},
        {"fail_rate", r.fail_rate},
        {"analytic_g", r.analytic_g},
        {"abs_error", number_or_null(r.abs_error)}};
  });
}

void write_analytic_csv(std::ostream& out, const std::vector<AnalyticPoint>& points) {
  out << "d,d_over_r,analytic_g\n";
  for (const auto& p : points) {
    out << format_number(p.d) << ',' << format_number(p.d_over_r) << ',' << format_number(p.g) << '\n';
  }
}

void write_analytic_json(std::ostream& out, const std::vector<AnalyticPoint>& points) {
  write_json_array(out, points, [](const AnalyticPoint& p) {
    return nlohmann::ordered_json{{"d", p.d}, {"d_over_r", p.d_over_r}, {"analytic_g", p.g}};
  });
}

void write_tail_csv(std::ostream& out, const std::vector<TailEstimate>& rows) {
  out << "n,B,trials,exceed_probability,delivered_over_bound\n";
  for (const auto& t : rows) {
    out << t.n << ',' << t.bound << ',' << t.trials << ',' << format_number(t.exceed_probability)
        << ',' << t.delivered_over_bound << '\n';
  }
}

void write_tail_json(std::ostream& out, const std::vector<TailEstimate>& rows) {
  write_json_array(out, rows, [](const TailEstimate& t) {
    return nlohmann::ordered_json{{"n", t.n},
                                  {"B", t.bound},
                                  {"trials", t.trials},
                                  {"exceed_probability", t.exceed_probability},
                                  {"delivered_over_bound", t.delivered_over_bound}};
  });
}

void write_lrc_csv(std::ostream& out, const LrcValidation& v) {
  out << "x0,y0,x1,y1,hits,draws_with_contact,observed,predicted,z\n";
  for (const auto& s : v.regions) {
    out << format_number(s.region.x0) << ',' << format_number(s.region.y0) << ','
        << format_number(s.region.x1) << ',' << format_number(s.region.y1) << ',' << s.hits << ','
        << v.with_contact << ',' << format_number(s.observed) << ',' << format_number(s.predicted)
        << ',' << format_number(s.z) << '\n';
  }
}

void write_lrc_json(std::ostream& out, const LrcValidation& v) {
  write_json_array(out, v.regions, [&](const RegionStat& s) {
    return nlohmann::ordered_json{{"x0", s.region.x0},
                                  {"y0", s.region.y0},
                                  {"x1", s.region.x1},
                                  {"y1", s.region.y1},
                                  {"hits", s.hits},
                                  {"draws_with_contact", v.with_contact},
                                  {"observed", s.observed},
                                  {"predicted", s.predicted},
                                  {"z", number_or_null(s.z)}};
  });
}

void write_instance_json(std::ostream& out, const NetworkInstance& instance) {
  const auto& c = instance.config();
  nlohmann::ordered_json j;
  j["config"] = {{"R", c.R},         {"r", c.r},       {"delta", c.delta},
                 {"n", c.n},         {"lrc_enabled", c.lrc_enabled}, {"seed", c.seed}};
  j["source"] = point_json(instance.source());
  j["target"] = point_json(instance.target());
  nlohmann::ordered_json relays = nlohmann::ordered_json::array();
  for (const Point& p : instance.relays()) relays.push_back(point_json(p));
  j["relays"] = std::move(relays);
  nlohmann::ordered_json lrc = nlohmann::ordered_json::object();
  for (std::size_t slot = 0; slot <= instance.relay_count(); ++slot) {
    const NodeRef node = slot == 0 ? NodeRef::source() : NodeRef::relay(slot);
    if (auto contact = instance.long_range_contact(node)) {
      lrc[node.to_string()] = contact->relay_index();
    }
  }
  j["lrc"] = std::move(lrc);
  out << j.dump() << '\n';
}

void write_trajectory_json(std::ostream& out, const NetworkInstance& instance,
                           const RoutingOutcome& outcome) {
  nlohmann::ordered_json j;
  j["status"] = outcome.delivered() ? "delivered" : "no_candidate";
  j["tau"] = outcome.tau() ? nlohmann::ordered_json(*outcome.tau()) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json hops = nlohmann::ordered_json::array();
  for (const Hop& h : outcome.hops) {
    hops.push_back(nlohmann::ordered_json{{"from", h.from.to_string()},
                                          {"to", h.to.to_string()},
                                          {"kind", to_string(h.kind)},
                                          {"from_pos", point_json(instance.position(h.from))},
                                          {"to_pos", point_json(instance.position(h.to))},
                                          {"progress", h.progress}});
  }
  j["hops"] = std::move(hops);
  out << j.dump(2) << '\n';
}

}  // namespace swnet
