#include "swnet/analytic.h"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "swnet/errors.h"

namespace swnet {
namespace {

void check_ratio(double R, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("r must be positive and finite");
  if (!(R > 2 * r) || !std::isfinite(R)) {
    throw ValidationError("domain side must exceed 2r (R/r > 2), got R/r = " +
                          std::to_string(R / r));
  }
}

std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double alpha(double R, double r) {
  check_ratio(R, r);
  const double ball = std::numbers::pi * r * r;
  return ball / (R * R - ball);
}

int last_band(double R, double r) {
  check_ratio(R, r);
  const double q = R / (2 * r) - 1;
  double k = std::floor(q);
  // R/r usually arrives as a decimal ratio; do not let 49.999999999999 lose a band.
  if (q - k > 1.0 - 1e-12) k += 1;
  return static_cast<int>(k);
}

ContinuumParams ContinuumParams::make(double R, double r) {
  return {R, r, swnet::alpha(R, r), last_band(R, r)};
}

DeliveryCurve::DeliveryCurve(ContinuumParams params) : params_(params) {
  const int k_max = params_.k_max;
  beta_.assign(k_max + 1, 0.0);
  u_.assign(k_max + 1, 0.0);
  g_.assign(k_max + 2, 0.0);
  u_[0] = 1.0;
  g_[0] = 0.0;
  g_[1] = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    const double km1 = k - 1;
    beta_[k] = 1.0 - params_.alpha * km1 * km1;
    if (!(beta_[k] > 0.0)) {
      throw InvariantViolation("beta_" + std::to_string(k) + " is not positive");
    }
    u_[k] = beta_[k] * u_[k - 1];
    g_[k + 1] = g_[k] + u_[k];
  }
}

double DeliveryCurve::g(int k) const { return g_.at(static_cast<std::size_t>(k)); }
double DeliveryCurve::u(int k) const { return u_.at(static_cast<std::size_t>(k)); }

double DeliveryCurve::beta(int i) const {
  if (i < 1) throw std::out_of_range("beta index starts at 1");
  return beta_.at(static_cast<std::size_t>(i));
}

double DeliveryCurve::expected_hops(double d) const {
  if (!(d >= 0.0) || d > params_.max_separation()) {
    throw ValidationError("separation d must satisfy 0 <= d <= R/2 - r (edge-effect guard), got d/r = " +
                          std::to_string(d / params_.r));
  }
  if (d == 0.0) return g_[0];
  const double band = std::floor(d / params_.r) + 1;
  const int k = band > params_.k_max + 1 ? params_.k_max + 1 : static_cast<int>(band);
  return g_[static_cast<std::size_t>(k)];
}

void DeliveryCurve::write_csv(std::ostream& out) const {
  const int k_max = params_.k_max;
  out << "k,d_lo/r,d_hi/r,beta_k,u_k,g_k\n";
  for (int k = 0; k <= k_max + 1; ++k) {
    double lo = 0.0;
    double hi = 0.0;
    if (k == k_max + 1) {
      lo = k_max;
      hi = params_.max_separation() / params_.r;
    } else if (k >= 1) {
      lo = k - 1;
      hi = k;
    }
    out << k << ',' << fmt(lo) << ',' << fmt(hi) << ',';
    if (k >= 1 && k <= k_max) out << fmt(beta_[k]);
    out << ',';
    if (k <= k_max) out << fmt(u_[k]);
    out << ',' << fmt(g_[k]) << '\n';
  }
}

DeliveryCurve delivery_table(double R, double r) {
  return DeliveryCurve(ContinuumParams::make(R, r));
}

double no_lrc_delivery_time(double d, double r) {
  if (!(r > 0.0)) throw ValidationError("r must be positive");
  if (!(d >= 0.0)) throw ValidationError("d must be non-negative");
  if (d == 0.0) return 0.0;
  return std::floor(d / r) + 1;
}

}  // namespace swnet
