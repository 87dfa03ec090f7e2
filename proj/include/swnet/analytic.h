#pragma once

#include <iosfwd>
#include <vector>

namespace swnet {

// Probability that a long-range contact drawn uniformly from the square of side
// R minus a ball of radius r lands within r of the target: pi r^2 / (R^2 - pi r^2).
double alpha(double R, double r);

// Index of the last regular band, floor(R/(2r) - 1).
int last_band(double R, double r);

struct ContinuumParams {
  double R = 0.0;
  double r = 0.0;
  double alpha = 0.0;
  int k_max = 0;

  // Validates R > 2r > 0 and derives alpha and k_max.
  static ContinuumParams make(double R, double r);

  // Largest separation free of edge effects, R/2 - r.
  double max_separation() const { return R / 2 - r; }
};

// Expected continuum-limit hop counts g_k for each separation band.
//
// Band k (k >= 2) covers (k-1) r <= d < k r; g_0 is the d = 0 case, g_1 covers
// 0 < d < r and g_{k_max+1} covers k_max r <= d <= R/2 - r. Increments
// u_k = g_{k+1} - g_k obey u_k = beta_k u_{k-1} with beta_k = 1 - alpha (k-1)^2.
class DeliveryCurve {
 public:
  explicit DeliveryCurve(ContinuumParams params);

  const ContinuumParams& params() const { return params_; }
  int k_max() const { return params_.k_max; }

  // 0 <= k <= k_max + 1.
  double g(int k) const;
  // 0 <= k <= k_max.
  double u(int k) const;
  // 1 <= i <= k_max.
  double beta(int i) const;

  const std::vector<double>& g_table() const { return g_; }
  double plateau() const { return g_.back(); }

  // Piecewise-constant g(d); throws ValidationError outside [0, R/2 - r].
  double expected_hops(double d) const;

  // CSV with header k,d_lo/r,d_hi/r,beta_k,u_k,g_k; one row per k = 0..k_max+1.
  // Undefined beta/u entries are left empty.
  void write_csv(std::ostream& out) const;

 private:
  ContinuumParams params_;
  std::vector<double> g_;
  std::vector<double> u_;
  std::vector<double> beta_;  // beta_[0] unused
};

DeliveryCurve delivery_table(double R, double r);

// Hop count with no long-range contacts: 0 at d = 0, floor(d/r) + 1 otherwise.
double no_lrc_delivery_time(double d, double r);

}  // namespace swnet
