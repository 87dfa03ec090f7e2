#include "swnet/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swnet/analytic.h"
#include "swnet/errors.h"
#include "swnet/experiments.h"

namespace swnet {
namespace {

struct RunConfig {
  std::string command;
  double R = 20.0;
  double r = 1.0;
  double delta = 0.1;
  std::vector<std::size_t> n_list{2000};
  double d = 4.5;
  std::string d_grid = "0:9:0.25";
  std::size_t trials = 1000;
  std::size_t seeds = 5;
  std::uint64_t seed = 1;
  bool no_lrc = false;
  std::string tie_break = "uniform";
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
  bool absolute = false;
  bool analytic_only = false;
  std::string node;
  std::size_t draws = 10000;
  std::vector<std::string> regions;
  std::string dump;

  // Multiplier that turns user lengths into absolute lengths.
  double unit() const { return absolute ? 1.0 : r; }

  NetworkConfig network(std::size_t n) const {
    NetworkConfig c;
    c.r = r;
    c.R = R * unit();
    c.delta = delta * unit();
    c.n = n;
    c.lrc_enabled = !no_lrc;
    c.seed = seed;
    c.validate();
    return c;
  }

  RunOptions options() const { return {parse_tie_break(tie_break), threads}; }
};

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  while (std::getline(in, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string("malformed ") + what + ": '" + text + "'");
    }
  }
  if (out.size() != expected) throw ValidationError(std::string("malformed ") + what + ": '" + text + "'");
  return out;
}

SeparationGrid parse_grid(const RunConfig& rc) {
  const auto v = parse_numbers(rc.d_grid, 3, "--d-grid (expected start:stop:step)");
  const double to_r = rc.absolute ? 1.0 / rc.r : 1.0;
  SeparationGrid g{v[0] * to_r, v[1] * to_r, v[2] * to_r};
  if (!(g.step > 0.0)) throw ValidationError("--d-grid step must be positive");
  return g;
}

// Writes through a temporary file that is renamed into place only on success.
void emit(const RunConfig& rc, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (rc.out.empty()) {
    body(out);
    return;
  }
  const std::filesystem::path dest(rc.out);
  const std::filesystem::path tmp = dest.string() + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw ValidationError("cannot write output file '" + rc.out + "'");
    body(file);
    file.flush();
    if (!file) {
      std::filesystem::remove(tmp);
      throw ValidationError("failed writing output file '" + rc.out + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, dest, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot move output into place at '" + rc.out + "': " + ec.message());
  }
}

// Summary lines go to stdout unless stdout carries the data.
std::ostream& summary_stream(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  return rc.out.empty() ? err : out;
}

bool json_format(const RunConfig& rc) {
  if (rc.format == "csv") return false;
  if (rc.format == "json") return true;
  throw ValidationError("--format must be csv or json");
}

int cmd_analytic(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const double R = rc.R * rc.unit();
  const DeliveryCurve curve = delivery_table(R, rc.r);
  const bool json = json_format(rc);
  emit(rc, out, [&](std::ostream& s) {
    if (!json) {
      curve.write_csv(s);
      return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int k = 0; k <= curve.k_max() + 1; ++k) {
      nlohmann::ordered_json row{{"k", k}, {"g_k", curve.g(k)}};
      if (k >= 1 && k <= curve.k_max()) row["beta_k"] = curve.beta(k);
      if (k <= curve.k_max()) row["u_k"] = curve.u(k);
      arr.push_back(row);
    }
    s << arr.dump(2) << '\n';
  });
  auto& log = summary_stream(rc, out, err);
  log << "k_max=" << curve.k_max() << " alpha=" << format_number(curve.params().alpha)
      << " plateau=" << format_number(curve.plateau()) << '\n';
  return kExitOk;
}

void print_row(std::ostream& log, const SummaryRow& row) {
  log << "d/r=" << format_number(row.d_over_r) << " n=" << row.n << " trials=" << row.trials
      << " mean_delivered=" << format_number(row.mean_delivered)
      << " fail_rate=" << format_number(row.fail_rate)
      << " analytic=" << format_number(row.analytic_g) << '\n';
}

void emit_rows(const RunConfig& rc, std::ostream& out, const std::vector<SummaryRow>& rows) {
  const bool json = json_format(rc);
  emit(rc, out, [&](std::ostream& s) {
    json ? write_summary_json(s, rows) : write_summary_csv(s, rows);
  });
}

int cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const double d = rc.d * rc.unit();
  json_format(rc);
  std::vector<SummaryRow> rows;
  for (std::size_t n : rc.n_list) {
    const NetworkConfig cfg = rc.network(n);
    const CellResult cell = simulate_cell(cfg, d, rc.trials, rc.options());
    if (cell.trajectory_violations > 0) throw InvariantViolation(cell.first_violation);
    rows.push_back(cell.row);
  }
  if (!rc.dump.empty()) {
    const NetworkConfig cfg = rc.network(rc.n_list.front());
    const auto [instance, outcome] = replay_trial(cfg, d, 0, rc.options());
    RunConfig dump_rc = rc;
    dump_rc.out = rc.dump;
    emit(dump_rc, out, [&](std::ostream& s) {
      s << "{\"instance\":";
      write_instance_json(s, instance);
      s << ",\"trajectory\":";
      write_trajectory_json(s, instance, outcome);
      s << "}\n";
    });
  }
  emit_rows(rc, out, rows);
  for (const auto& row : rows) print_row(summary_stream(rc, out, err), row);
  return kExitOk;
}

int cmd_sweep(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  spec.config = rc.network(rc.n_list.front());
  spec.grid = parse_grid(rc);
  spec.trials = rc.analytic_only ? 0 : rc.trials;
  spec.n_list = rc.n_list;
  const bool json = json_format(rc);
  const SweepResult result = sweep_separation(spec, rc.options());
  if (rc.analytic_only) {
    emit(rc, out, [&](std::ostream& s) {
      json ? write_analytic_json(s, result.analytic) : write_analytic_csv(s, result.analytic);
    });
    summary_stream(rc, out, err) << result.analytic.size() << " analytic points\n";
    return kExitOk;
  }
  emit_rows(rc, out, result.rows);
  for (const auto& row : result.rows) print_row(summary_stream(rc, out, err), row);
  return kExitOk;
}

int cmd_convergence(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const NetworkConfig cfg = rc.network(rc.n_list.front());
  json_format(rc);
  const ConvergenceStudy study =
      convergence_study(cfg, rc.d * rc.unit(), rc.n_list, rc.trials, rc.seeds, rc.options());
  std::vector<SummaryRow> rows;
  for (const auto& p : study.points) {
    if (p.trajectory_violations > 0) throw InvariantViolation(p.first_violation);
    rows.insert(rows.end(), p.per_seed.begin(), p.per_seed.end());
  }
  emit_rows(rc, out, rows);
  auto& log = summary_stream(rc, out, err);
  for (const auto& p : study.points) {
    log << "n=" << p.n << " median_mean_delivered=" << format_number(p.median_mean_delivered)
        << " median_mean_indicator=" << format_number(p.median_mean_indicator)
        << " median_abs_error=" << format_number(p.median_abs_error)
        << " median_tail=" << format_number(p.median_tail_probability) << '\n';
  }
  if (auto trend = study.error_non_increasing()) {
    log << "abs_error non-increasing in n: " << (*trend ? "yes" : "no") << '\n';
  }
  return kExitOk;
}

int cmd_tail(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const double d = rc.d * rc.unit();
  const bool json = json_format(rc);
  std::vector<TailEstimate> rows;
  for (std::size_t n : rc.n_list) {
    const NetworkConfig cfg = rc.network(n);
    const CellResult cell = simulate_cell(cfg, d, rc.trials, rc.options());
    if (cell.trajectory_violations > 0) throw InvariantViolation(cell.first_violation);
    rows.push_back(tail_from_cell(cell, cfg.r, cfg.delta));
  }
  emit(rc, out, [&](std::ostream& s) { json ? write_tail_json(s, rows) : write_tail_csv(s, rows); });
  auto& log = summary_stream(rc, out, err);
  for (const auto& t : rows) {
    log << "n=" << t.n << " B=" << t.bound << " P{tau > B}=" << format_number(t.exceed_probability)
        << '\n';
  }
  return kExitOk;
}

int cmd_validate_lrc(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const NetworkConfig cfg = rc.network(rc.n_list.front());
  const double u = rc.unit();
  Point node{cfg.R / 2, cfg.R / 2};
  if (!rc.node.empty()) {
    const auto v = parse_numbers(rc.node, 2, "--node (expected x,y)");
    node = {v[0] * u, v[1] * u};
  }
  std::vector<Rect> regions;
  for (const auto& text : rc.regions) {
    const auto v = parse_numbers(text, 4, "--region (expected x0,y0,x1,y1)");
    regions.push_back({v[0] * u, v[1] * u, v[2] * u, v[3] * u});
  }
  if (regions.empty()) regions = default_validation_regions(cfg.R, cfg.r);
  const bool json = json_format(rc);
  const LrcValidation v = validate_lrc_distribution(cfg, node, regions, rc.draws, rc.options());
  emit(rc, out, [&](std::ostream& s) { json ? write_lrc_json(s, v) : write_lrc_csv(s, v); });
  auto& log = summary_stream(rc, out, err);
  for (const auto& s : v.regions) {
    log << "region [" << format_number(s.region.x0) << ',' << format_number(s.region.x1) << "]x["
        << format_number(s.region.y0) << ',' << format_number(s.region.y1)
        << "] observed=" << format_number(s.observed) << " predicted=" << format_number(s.predicted)
        << " z=" << format_number(s.z) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Expected delivery time of delta-greedy forwarding in planar small-world networks"};
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--R", rc.R, "Domain side length [units of r]")->capture_default_str();
  app.add_option("--r", rc.r, "Communication range [absolute length]")->capture_default_str();
  app.add_option("--delta", rc.delta, "Greediness slack delta, 0 < delta < r [units of r]")
      ->capture_default_str();
  app.add_option("--n", rc.n_list, "Relay node count(s), comma separated [count]")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--d", rc.d, "Source-target separation [units of r]")->capture_default_str();
  app.add_option("--d-grid", rc.d_grid, "Separation grid start:stop:step [units of r]")
      ->capture_default_str();
  app.add_option("--trials", rc.trials, "Trials per cell [count]")->capture_default_str();
  app.add_option("--seeds", rc.seeds, "Master seeds for median trends [count]")->capture_default_str();
  app.add_option("--seed", rc.seed, "Master random seed [integer]")->capture_default_str();
  app.add_flag("--no-lrc", rc.no_lrc, "Disable long-range contacts");
  app.add_option("--tie-break", rc.tie_break, "Local candidate choice: uniform or max-progress")
      ->check(CLI::IsMember({"uniform", "max-progress"}))
      ->capture_default_str();
  app.add_option("--out", rc.out, "Output file (default: stdout) [path]");
  app.add_option("--format", rc.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", rc.threads, "Worker threads, 0 = all cores [count]")->capture_default_str();
  app.add_flag("--absolute", rc.absolute, "Read --R, --delta, --d, --d-grid, --node, --region as absolute lengths");
  app.add_flag("--analytic-only", rc.analytic_only, "sweep: emit only the analytic curve over the grid");
  app.add_option("--node", rc.node, "validate-lrc: test node position x,y (default: center) [units of r]");
  app.add_option("--draws", rc.draws, "validate-lrc: independent contact draws [count]")->capture_default_str();
  app.add_option("--region", rc.regions, "validate-lrc: rectangle x0,y0,x1,y1, repeatable [units of r]");
  app.add_option("--dump", rc.dump, "simulate: JSON dump of trial 0's instance and trajectory [path]");

  using Handler = int (*)(const RunConfig&, std::ostream&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
      {"analytic", "Write the continuum-limit delivery table g_k", cmd_analytic},
      {"simulate", "Monte Carlo estimate of delivery time at one separation", cmd_simulate},
      {"sweep", "Delivery time over a grid of separations", cmd_sweep},
      {"convergence", "Error against the continuum limit as n grows", cmd_convergence},
      {"tail", "Empirical P{tau_n > B} with B = floor(d/(r - delta)) + 1", cmd_tail},
      {"validate-lrc", "Empirical long-range contact distribution vs area prediction", cmd_validate_lrc},
  };
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (const auto& [name, help, fn] : commands) {
      if (app.got_subcommand(name)) {
        rc.command = name;
        if (!(rc.r > 0.0)) throw ValidationError("--r must be positive");
        if (rc.n_list.empty()) throw ValidationError("--n needs at least one value");
        return fn(rc, out, err);
      }
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}

}  // namespace swnet
