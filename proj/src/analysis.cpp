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


#include "gumbel/analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gumbel/dfmm.hpp"
#include "gumbel/engine.hpp"
#include "gumbel/io.hpp"
#include "gumbel/numeric.hpp"

namespace gumbel {

double Efd::cdf(double x) const {
  if (empty()) return x >= 0.0 ? 1.0 : 0.0;
  const auto* begin = f.data();
  const auto* it = std::upper_bound(begin, begin + f.size(), x);
  if (it == begin) return 0.0;
  return cum(static_cast<Eigen::Index>(it - begin) - 1);
}

Efd efd_from_log_weights(const Eigen::ArrayXd& f, const Eigen::ArrayXd& log_w, std::string source) {
  if (f.size() != log_w.size()) throw std::invalid_argument("efd: size mismatch");
  Efd e;
  e.source = std::move(source);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (log_w(i) > -kInf) idx.push_back(i);
  }
  if (idx.empty()) return e;
  std::stable_sort(idx.begin(), idx.end(), [&f](Eigen::Index a, Eigen::Index b) { return f(a) < f(b); });
  double hi = -kInf;
  for (auto i : idx) hi = std::max(hi, log_w(i));
  std::vector<double> fs, ws;
  for (auto i : idx) {
    const double w = std::exp(log_w(i) - hi);
    if (!fs.empty() && fs.back() == f(i)) {
      ws.back() += w;
    } else {
      fs.push_back(f(i));
      ws.push_back(w);
    }
  }
  const auto m = static_cast<Eigen::Index>(fs.size());
  e.f = Eigen::Map<Eigen::ArrayXd>(fs.data(), m);
  e.cum.resize(m);
  KahanSum acc;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += ws[static_cast<std::size_t>(i)];
    e.cum(i) = acc.value();
  }
  const double total = e.cum(m - 1);
  e.cum /= total;
  e.cum(m - 1) = 1.0;
  KahanSum mean;
  for (Eigen::Index i = 0; i < m; ++i) mean += ws[static_cast<std::size_t>(i)] / total * e.f(i);
  e.S = mean.value();
  KahanSum var;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = e.f(i) - e.S;
    var += ws[static_cast<std::size_t>(i)] / total * d * d;
  }
  e.sigma = std::sqrt(std::max(0.0, var.value()));
  return e;
}

Efd efd_from_population(const Population& pop) {
  const auto m = static_cast<Eigen::Index>(pop.families.size());
  Eigen::ArrayXd f(m), lw(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    f(i) = pop.families[static_cast<std::size_t>(i)].fitness;
    lw(i) = pop.families[static_cast<std::size_t>(i)].abundance.log();
  }
  return efd_from_log_weights(f, lw, "engine");
}

Efd efd_from_profile(const WaveProfile& wp) { return efd_from_log_weights(wp.f, wp.log_weight, "dfmm"); }

Eigen::ArrayXd default_y_grid() { return Eigen::ArrayXd::LinSpaced(161, -4.0, 4.0); }

StandardizedWave standardized_wave(const Efd& efd, double v, double s, const Eigen::ArrayXd& y) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("standardized_wave: scale must be positive");
  StandardizedWave w;
  w.v = v;
  w.s = s;
  w.y = y;
  w.Psi.resize(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) w.Psi(i) = efd.cdf(v + s * y(i));
  return w;
}

double ks_to_gaussian(const StandardizedWave& w) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < w.y.size(); ++i) {
    if (std::abs(w.y(i)) > 4.0) continue;
    d = std::max(d, std::abs(w.Psi(i) - gaussian_cdf(w.y(i))));
  }
  return d;
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> standardized_density(const Eigen::ArrayXd& F, const Eigen::ArrayXd& psi,
                                                               double S, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("standardized_density: sigma must be positive");
  return {(F - S) / sigma, psi * sigma};
}

double density_sup_error(const Eigen::ArrayXd& y, const Eigen::ArrayXd& g, double y_max) {
  double d = kNaN;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y(i)) > y_max) continue;
    const double e = std::abs(g(i) - gaussian_pdf(y(i)));
    d = std::isnan(d) ? e : std::max(d, e);
  }
  return d;
}

std::vector<GrowthRow> growth_exponents(const std::vector<TrajectoryRecord>& records, const TailSpec& spec) {
  std::vector<GrowthRow> rows;
  for (const auto& r : records) {
    if (r.extinct || r.t < 2) continue;
    const double t = r.t;
    GrowthRow row;
    row.t = t;
    try {
      if (const auto* s2 = std::get_if<TypeII>(&spec)) {
        const auto g = predict(spec, t);
        row.target = g.exponent_target;
        row.w_target = g.w_exponent_target;
        auto stat = [&](double log_v) {
          if (s2->n == 1) return std::log(log_v) / g.logX_scale;
          if (s2->n == 2) return std::log(std::log(log_v)) / g.logX_scale;
          return std::log(std::log(log_v) / t) / g.logX_scale;
        };
        row.statistic = stat(r.log_X);
        row.w_statistic = r.W > 0.0 ? stat(std::log(r.W)) : kNaN;
      } else {
        const TypeI s1 = std::holds_alternative<TypeI>(spec)
                             ? std::get<TypeI>(spec)
                             : TypeI{1, std::get<DiscreteStretched>(spec).alpha, {}};
        const auto g = predict(TailSpec{s1}, t);
        row.statistic = r.log_X / g.logX_scale;
        row.target = g.exponent_target;
        row.w_statistic = r.W / *g.u;
        row.w_target = 1.0;
      }
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(row.statistic)) continue;
    rows.push_back(row);
  }
  return rows;
}

SlopeFit width_exponent(const std::vector<double>& t, const std::vector<double>& sigma, double burn_in) {
  if (t.size() != sigma.size()) throw std::invalid_argument("width_exponent: size mismatch");
  if (t.size() < 10) throw std::invalid_argument("width_exponent: need at least 10 points");
  const auto [tmin_it, tmax_it] = std::minmax_element(t.begin(), t.end());
  const double tmin = *tmin_it;
  const double tmax = *tmax_it;
  if (!(tmin > 0.0) || !(tmax >= 10.0 * tmin)) {
    throw std::invalid_argument("width_exponent: points must span at least one decade");
  }
  const double cut = tmin + burn_in * (tmax - tmin);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < cut || !(sigma[i] > 0.0)) continue;
    xs.push_back(std::log(t[i]));
    ys.push_back(std::log(sigma[i]));
  }
  if (xs.size() < 3) throw std::invalid_argument("width_exponent: too few points after burn-in");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(xs.size());
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.stderr_ = xs.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

double binomial_upper_tail(long long k, long long n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_upper_tail: bad parameters");
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n - k + 1));
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  for (long long i = k; i <= n; ++i) {
    const double di = static_cast<double>(i);
    terms.push_back(lgn - std::lgamma(di + 1.0) - std::lgamma(static_cast<double>(n - i) + 1.0) + di * lp +
                    static_cast<double>(n - i) * lq);
  }
  return std::min(1.0, std::exp(log_sum_exp(terms)));
}

void write_verdicts_json(std::ostream& out, const std::vector<Verdict>& verdicts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) {
    nlohmann::ordered_json j;
    j["statistic_name"] = v.name;
    j["statistic"] = v.statistic;
    j["target"] = v.target;
    j["tolerance"] = v.tolerance;
    j["pass"] = v.pass;
    j["tolerance_is_acceptance_choice"] = true;
    if (!v.note.empty()) j["note"] = v.note;
    arr.push_back(j);
  }
  out << arr.dump(2) << '\n';
}

void write_standardized_csv(std::ostream& out, const StandardizedWave& w) {
  out << "y,Psi,Upsilon\n";
  for (Eigen::Index i = 0; i < w.y.size(); ++i) {
    out << format_double(w.y(i)) << ',' << format_double(w.Psi(i)) << ',' << format_double(gaussian_cdf(w.y(i)))
        << '\n';
  }
}

}  // namespace gumbel
