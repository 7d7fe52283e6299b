// Copyright 2026 The gumbel-waves Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "gumbel/gw.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gumbel/io.hpp"
#include "gumbel/numeric.hpp"

namespace gumbel {

std::uint64_t gw_step(std::uint64_t m, double theta, Rng& rng) {
  if (m == 0) return 0;
  return poisson(rng, static_cast<double>(m) * theta);
}

LogReal GwCompactPath::size_at(int t) const {
  if (t < 0 || t > horizon) throw std::out_of_range("GwCompactPath::size_at outside [0, horizon]");
  if (static_cast<std::size_t>(t) < exact.size()) {
    const auto m = exact[static_cast<std::size_t>(t)];
    return m == 0 ? LogReal::zero() : LogReal::from_log(std::log(static_cast<double>(m)));
  }
  if (!switch_time) return LogReal::zero();
  const double base = std::log(static_cast<double>(exact[static_cast<std::size_t>(*switch_time)]));
  return LogReal::from_log(base + static_cast<double>(t - *switch_time) * std::log(theta));
}

GwCompactPath gw_simulate_compact(const GwConfig& cfg, Rng& rng) {
  if (cfg.switch_threshold < 1) throw std::invalid_argument("switch_threshold must be >= 1");
  if (!(cfg.theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (cfg.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  GwCompactPath p;
  p.theta = cfg.theta;
  p.horizon = cfg.horizon;
  std::uint64_t m = 1;
  p.exact.push_back(m);
  for (int t = 0; t < cfg.horizon; ++t) {
    if (m >= cfg.switch_threshold) {
      p.switch_time = t;
      return p;
    }
    m = gw_step(m, cfg.theta, rng);
    p.exact.push_back(m);
    if (m == 0) return p;
  }
  if (m >= cfg.switch_threshold) p.switch_time = cfg.horizon;
  return p;
}

GwPath gw_simulate_hybrid(const GwConfig& cfg, Rng& rng) {
  const GwCompactPath c = gw_simulate_compact(cfg, rng);
  GwPath path;
  path.switch_time = c.switch_time;
  path.sizes.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
  for (std::size_t t = 0; t < c.exact.size(); ++t) path.sizes.push_back(c.size_at(static_cast<int>(t)));
  const double log_theta = std::log(cfg.theta);
  while (path.sizes.size() < static_cast<std::size_t>(cfg.horizon) + 1) {
    const LogReal last = path.sizes.back();
    path.sizes.push_back(last.is_zero() ? last : LogReal::from_log(last.log() + log_theta));
  }
  return path;
}

namespace {

void check_envelope_args(double theta, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (!(theta > 1.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must exceed 1");
}

}  // namespace

double ConcentrationEnvelope::a(int t) const {
  const double lt = std::log(theta);
  return std::exp(-lt * (1.0 - 2.0 * epsilon) / 2.0) * -std::expm1(-c * t * lt);
}

double ConcentrationEnvelope::b(int t) const { return (1.0 - a(t)) / (1.0 - a(t - 1)); }
double ConcentrationEnvelope::B(int t) const { return (1.0 + a(t)) / (1.0 + a(t - 1)); }

AdmissibilityReport check_admissibility(double theta, double epsilon) {
  check_envelope_args(theta, epsilon);
  AdmissibilityReport rep;
  const double lt = std::log(theta);
  const double c = (1.0 - epsilon) / 2.0;
  const double h = (1.0 - 2.0 * epsilon) / 2.0;
  const double a_inf = std::exp(-h * lt);
  auto a = [&](double t) { return a_inf * -std::expm1(-c * t * lt); };
  const double one_minus_theta_c = -std::expm1(-c * lt);
  const double theta_c_minus_one = std::expm1(c * lt);
  const double p2e = std::exp(2.0 * epsilon * lt);

  bool failed[9] = {};
  auto fail = [&](int idx, int t) {
    if (!failed[idx]) {
      failed[idx] = true;
      rep.failed.push_back(idx);
      rep.details.push_back("condition " + std::to_string(idx) + " fails at t = " +
                            (t < 0 ? std::string("infinity") : std::to_string(t)));
    }
  };

  // Condition 7 does not depend on t.
  if (std::log(4.0) + lt - p2e / 4.0 > -p2e / 5.0) fail(7, 1);

  double prev_gap = kInf;
  for (int t = 1; t <= kAdmissibilityHorizon; ++t) {
    const double at = a(t);
    const double ap = a(t - 1);
    const double excess_B = theta_c_minus_one / (1.0 + ap) * std::exp((-c * t - h) * lt);
    const double Bt = 1.0 + excess_B;
    if (!(at > 0.0 && at < 1.0)) fail(1, t);
    if (!(excess_B > 0.0 && Bt < 1.5)) fail(2, t);
    if (!(t * lt >= (c * t - h) * lt)) fail(3, t);
    if (!(one_minus_theta_c * one_minus_theta_c / (2.0 * (1.0 - ap)) >= 0.25)) fail(4, t);
    if (!((1.0 - ap) * one_minus_theta_c * one_minus_theta_c / (3.0 * (1.0 + ap)) >= 0.25)) fail(5, t);
    if (!(Bt * (1.0 + ap) / theta_c_minus_one <= 1.0)) fail(6, t);
    const double lhs8 = t * lt - std::exp(epsilon * (t + 1) * lt) / 4.0;
    const double rhs8 = std::log(12.0 / (std::numbers::pi * std::numbers::pi * t * t)) + lt - p2e / 4.0;
    if (!(lhs8 <= rhs8)) fail(8, t);
    if (t == kAdmissibilityHorizon && !(lhs8 - rhs8 <= prev_gap)) fail(8, -1);
    prev_gap = lhs8 - rhs8;
  }
  // Conditions 1, 5 and 6 tighten monotonically as a_t increases to a_inf.
  if (!(a_inf < 1.0)) fail(1, -1);
  if (!((1.0 - a_inf) * one_minus_theta_c * one_minus_theta_c / (3.0 * (1.0 + a_inf)) >= 0.25)) fail(5, -1);
  if (!((1.0 + a_inf) / theta_c_minus_one <= 1.0)) fail(6, -1);

  rep.admissible = rep.failed.empty();
  return rep;
}

ConcentrationEnvelope envelope(double theta, double epsilon) {
  check_envelope_args(theta, epsilon);
  ConcentrationEnvelope env;
  env.theta = theta;
  env.epsilon = epsilon;
  env.c = (1.0 - epsilon) / 2.0;
  env.halfwidth = 2.0 * std::pow(theta, -(1.0 - 2.0 * epsilon) / 2.0);
  env.failure_bound = std::exp(-std::pow(theta, 2.0 * epsilon) / 5.0);
  env.admissibility = check_admissibility(theta, epsilon);
  return env;
}

ConcentrationEnvelope require_admissible(double theta, double epsilon) {
  ConcentrationEnvelope env = envelope(theta, epsilon);
  if (!env.admissibility.admissible) {
    std::string msg = "theta = " + format_double(theta) + " is inadmissible for epsilon = " +
                      format_double(epsilon) + ":";
    for (const auto& d : env.admissibility.details) msg += " " + d + ";";
    throw std::domain_error(msg);
  }
  return env;
}

double poisson_tail_bound_lower(double b, double theta) {
  if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("lower Poisson bound needs 0 < b < 1");
  if (!(theta > 1.0)) throw std::invalid_argument("lower Poisson bound needs theta > 1");
  if (std::floor(b * theta) < 1.0) throw std::invalid_argument("lower Poisson bound needs floor(b theta) >= 1");
  if (!((1.0 - b) * theta >= 1.0)) throw std::invalid_argument("lower Poisson bound needs (1 - b) theta >= 1");
  return theta * std::exp(-theta * (1.0 - b + b * std::log(b)));
}

double poisson_tail_bound_upper(double B, double theta) {
  if (!(B > 1.0)) throw std::invalid_argument("upper Poisson bound needs B > 1");
  if (!(theta > 0.0)) throw std::invalid_argument("upper Poisson bound needs theta > 0");
  return B / (B - 1.0) * std::exp(-theta * (1.0 - B + B * std::log(B)));
}

bool band_violated(const GwPath& path, double theta, double halfwidth) {
  const double lt = std::log(theta);
  for (std::size_t t = 0; t < path.sizes.size(); ++t) {
    const double ratio = std::exp(path.sizes[t].log() - static_cast<double>(t) * lt);
    if (std::abs(ratio - 1.0) > halfwidth) return true;
  }
  return false;
}

double poisson_gw_extinction(double theta) {
  if (theta <= 1.0) return 1.0;
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double next = std::exp(theta * (s - 1.0));
    if (std::abs(next - s) < 1e-16) return next;
    s = next;
  }
  return s;
}

void write_ensemble_csv(std::ostream& out, const std::vector<GwPath>& paths) {
  out << "replica,t,log_size,switched\n";
  for (std::size_t r = 0; r < paths.size(); ++r) {
    const auto& p = paths[r];
    for (std::size_t t = 0; t < p.sizes.size(); ++t) {
      const bool sw = p.switch_time && static_cast<int>(t) > *p.switch_time;
      out << r << ',' << t << ',' << format_double(p.sizes[t].log()) << ',' << (sw ? 1 : 0) << '\n';
    }
  }
}

}  // namespace gumbel
