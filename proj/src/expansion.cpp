#include "oscsum/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "oscsum/fitting.hpp"
#include "oscsum/series_powers.hpp"

namespace oscsum {

namespace {

Complex i_omega_nu(const FrequencyVector& freq, const Mode& nu) {
  double sd = small_divisor(freq, nu);
  if (sd == 0.0)
    throw ResonanceError("formal recursion: zero divisor at nu = " + nu.str());
  return Complex(0.0, sd);
}

// sum_nu a(nu) b(-nu), the zero mode of a*b without forming the product.
Complex zero_mode_pairing(const TrigSeries& a, const TrigSeries& b) {
  Complex acc(0.0, 0.0);
  for (auto& [nu, ca] : a.coeffs()) {
    Complex cb = b.at(-nu);
    if (cb != Complex(0.0, 0.0)) acc += ca * cb;
  }
  return acc;
}

void certify_diophantine(ProblemSpec& spec, int radius) {
  if (spec.freq.dim() < 2) return;
  if (spec.freq.tau < spec.freq.dim() - 1)
    throw PreconditionError("formal_orders: tau must be >= d-1 for d >= 2");
  auto scan = diophantine_scan(spec.freq, std::max(1, radius));
  if (spec.freq.C0 > 0.0) {
    if (scan.C0_est < spec.freq.C0 * (1.0 - 1e-12))
      throw DomainError("formal_orders: declared C0 = " + std::to_string(spec.freq.C0) +
                        " is not certified up to |nu| <= " + std::to_string(radius) +
                        " (scan minimum " + std::to_string(scan.C0_est) + " at nu = " +
                        scan.worst_mode.str() + ")");
  } else {
    spec.freq.C0 = scan.C0_est;
  }
}

SeriesExpansion formal_orders_quadratic(const ProblemSpec& spec, int K) {
  const int d = spec.freq.dim();
  const double c0 = spec.c0;
  const bool rv = spec.forcing.real_valued();
  const int budget = spec.forcing.support_budget();

  SeriesExpansion e{ExpansionKind::Formal, {}, {}, spec};
  e.orders.emplace_back(d, std::vector<std::pair<Mode, Complex>>{{Mode(d), Complex(c0, 0.0)}},
                        rv, std::nullopt, budget);
  e.constants.emplace_back(c0, 0.0);

  for (int k = 1; k <= K; ++k) {
    std::vector<std::pair<Mode, Complex>> entries;
    Complex ck(0.0, 0.0);
    if (k == 1) {
      for (auto& [nu, fnu] : spec.forcing.coeffs()) {
        if (nu.is_zero()) continue;
        entries.emplace_back(nu, fnu / i_omega_nu(spec.freq, nu));
      }
    } else {
      TrigSeries conv_sum(d);
      for (int k1 = 0; k1 <= k - 1; ++k1)
        conv_sum = conv_sum + convolve(e.orders[k1], e.orders[k - 1 - k1]);
      for (int kp = 1; kp <= k - 1; ++kp)
        ck += zero_mode_pairing(e.orders[k - kp], e.orders[kp]);
      ck *= -1.0 / (2.0 * c0);

      std::map<Mode, char> support;
      for (auto& [nu, a] : e.orders[k - 1].coeffs()) support[nu] = 1;
      for (auto& [nu, a] : conv_sum.coeffs()) support[nu] = 1;
      for (auto& [nu, ignored] : support) {
        if (nu.is_zero()) continue;
        Complex iwn = i_omega_nu(spec.freq, nu);
        entries.emplace_back(nu, -iwn * e.orders[k - 1].at(nu) - conv_sum.at(nu) / iwn);
      }
    }
    entries.emplace_back(Mode(d), ck);
    e.orders.emplace_back(d, std::move(entries), rv, std::nullopt, budget);
    e.constants.push_back(e.orders.back().at(Mode(d)));
  }
  return e;
}

SeriesExpansion formal_orders_general(const ProblemSpec& spec, int K) {
  const int d = spec.freq.dim();
  const double c0 = spec.c0;
  const bool rv = spec.forcing.real_valued();
  const int budget = spec.forcing.support_budget();
  const std::vector<double> g = spec.nonlinearity.taylor_at(c0);
  const int P = spec.nonlinearity.degree();
  const double g1 = g.size() > 1 ? g[1] : 0.0;
  if (g1 == 0.0)
    throw DomainError("formal_orders: g'(c0) vanishes; the order constants are not solvable");
  std::vector<double> gp_over_pfact(P + 1, 0.0);
  double fact = 1.0;
  for (int p = 0; p <= P; ++p) {
    if (p > 0) fact *= p;
    gp_over_pfact[p] = g[p] / fact;
  }

  SeriesExpansion e{ExpansionKind::Formal, {}, {}, spec};
  e.orders.emplace_back(d, std::vector<std::pair<Mode, Complex>>{{Mode(d), Complex(c0, 0.0)}},
                        rv, std::nullopt, budget);
  e.constants.emplace_back(c0, 0.0);

  OrderPowers pows(d, P);

  for (int k = 1; k <= K; ++k) {
    std::vector<std::pair<Mode, Complex>> entries;
    if (k == 1) {
      for (auto& [nu, fnu] : spec.forcing.coeffs()) {
        if (nu.is_zero()) continue;
        entries.emplace_back(nu, fnu / i_omega_nu(spec.freq, nu));
      }
    } else {
      TrigSeries gk(d);  // [g(x)]^{(k-1)}
      for (int p = 1; p <= std::min(P, k - 1); ++p) {
        const TrigSeries& yp = pows.power(p, k - 1);
        if (!yp.empty()) gk = gk + yp.scaled(Complex(gp_over_pfact[p], 0.0));
      }
      std::map<Mode, char> support;
      for (auto& [nu, a] : e.orders[k - 1].coeffs()) support[nu] = 1;
      for (auto& [nu, a] : gk.coeffs()) support[nu] = 1;
      for (auto& [nu, ignored] : support) {
        if (nu.is_zero()) continue;
        Complex iwn = i_omega_nu(spec.freq, nu);
        entries.emplace_back(nu, -iwn * e.orders[k - 1].at(nu) - gk.at(nu) / iwn);
      }
    }
    // Zero-mode compatibility: g1 c_k + sum_{p>=2} (g_p/p!) [y^p]^{(k)}_0 = 0.
    Complex rk(0.0, 0.0);
    for (int p = 2; p <= std::min(P, k); ++p)
      rk += gp_over_pfact[p] * pows.power(p, k).at(Mode(d));
    Complex ck = -rk / g1;
    entries.emplace_back(Mode(d), ck);
    e.orders.emplace_back(d, std::move(entries), rv, std::nullopt, budget);
    e.constants.push_back(e.orders.back().at(Mode(d)));
    pows.push_order(e.orders.back());  // y^(k) = x^(k) for k >= 1
  }
  return e;
}

SeriesExpansion formal_orders_linear(const ProblemSpec& spec, int K) {
  const int d = spec.freq.dim();
  SeriesExpansion e{ExpansionKind::Formal, {}, {}, spec};
  e.orders.emplace_back(d);
  e.constants.emplace_back(0.0, 0.0);
  for (int k = 1; k <= K; ++k) {
    std::vector<std::pair<Mode, Complex>> entries;
    if (k == 1) {
      for (auto& [nu, fnu] : spec.forcing.coeffs())
        if (!nu.is_zero()) entries.emplace_back(nu, fnu / i_omega_nu(spec.freq, nu));
    } else {
      for (auto& [nu, a] : e.orders[k - 1].coeffs())
        if (!nu.is_zero()) entries.emplace_back(nu, -i_omega_nu(spec.freq, nu) * a);
    }
    e.orders.emplace_back(d, std::move(entries), spec.forcing.real_valued());
    e.constants.emplace_back(0.0, 0.0);
  }
  return e;
}

}  // namespace

int reachable_radius(int K, int N) { return ((K + 1) / 2) * N; }

SeriesExpansion formal_orders(const ProblemSpec& spec, int K, NonlinearityPath path) {
  if (K < 1) throw PreconditionError("formal_orders: K must be >= 1");
  ProblemSpec sp = spec;
  int radius = reachable_radius(K, sp.forcing.support_radius());
  if (sp.forcing.support_budget() != TrigSeries::kNoBudget)
    radius = std::min(radius, sp.forcing.support_budget());
  certify_diophantine(sp, radius);

  if (sp.nonlinearity.is_none()) return formal_orders_linear(sp, K);
  if (path == NonlinearityPath::Auto && sp.nonlinearity.degree() == 2 &&
      sp.nonlinearity.coeffs()[0] == 0.0 && sp.nonlinearity.coeffs()[1] == 0.0 &&
      sp.nonlinearity.coeffs()[2] == 1.0)
    return formal_orders_quadratic(sp, K);
  return formal_orders_general(sp, K);
}

SupportReport support_check(const SeriesExpansion& e, int N) {
  SupportReport rep;
  rep.N = N;
  for (int k = 0; k < static_cast<int>(e.orders.size()); ++k) {
    SupportReport::Row row;
    row.k = k;
    row.max_abs_nu = e.orders[k].support_radius();
    row.bound = ((k + 1) / 2) * N;
    row.pass = row.max_abs_nu <= row.bound;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

GrowthReport growth_diagnostic(const SeriesExpansion& e, int k_min) {
  const int K = e.top_order();
  if (K < 6) throw PreconditionError("growth_diagnostic: needs at least 6 orders");
  GrowthReport rep;
  rep.k_min = k_min;
  rep.m.resize(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) rep.m[k] = e.orders[k].max_abs();

  std::vector<std::vector<double>> rows_geo, rows_fac;
  std::vector<double> y;
  for (int k = k_min; k <= K; ++k) {
    if (rep.m[k] <= 0.0) continue;
    double kk = k;
    rows_geo.push_back({1.0, kk});
    rows_fac.push_back({1.0, kk, std::lgamma(kk + 1.0)});
    y.push_back(std::log(rep.m[k]));
  }
  if (y.size() < 4) throw PreconditionError("growth_diagnostic: too few populated orders");

  LsqFit geo = least_squares(rows_geo, y);
  LsqFit fac = least_squares(rows_fac, y);
  rep.geo_c1 = geo.params[0];
  rep.geo_c2 = geo.params[1];
  rep.geo_sse = geo.sse;
  rep.geo_aic = geo.aic();
  rep.fac_c1 = fac.params[0];
  rep.fac_c2 = fac.params[1];
  rep.sigma_hat = fac.params[2];
  rep.fac_sse = fac.sse;
  rep.fac_aic = fac.aic();

  double tau = e.problem.freq.tau;
  for (double sig : {1.0, std::max(1.0, tau), 2.0 * tau}) {
    std::vector<std::vector<double>> rows2;
    std::vector<double> y2;
    for (std::size_t i = 0; i < y.size(); ++i) {
      rows2.push_back({rows_fac[i][0], rows_fac[i][1]});
      y2.push_back(y[i] - sig * rows_fac[i][2]);
    }
    LsqFit f2 = least_squares(rows2, y2);
    rep.fixed_sigma_sse["sigma=" + std::to_string(sig)] = f2.sse;
  }
  rep.best_model = (rep.fac_aic < rep.geo_aic) ? "factorial" : "geometric";
  return rep;
}

double chain_value_bound(const ProblemSpec& spec, int k) {
  if (k < 2) throw PreconditionError("chain_value_bound: needs k >= 2");
  double best = 0.0;
  for (auto& [nu, fnu] : spec.forcing.coeffs()) {
    if (nu.is_zero()) continue;
    double w = std::abs(small_divisor(spec.freq, nu));
    best = std::max(best, std::pow(w, k - 2) * std::abs(fnu));
  }
  return best;
}

double recursion_residual(const SeriesExpansion& e) {
  if (e.kind != ExpansionKind::Formal)
    throw PreconditionError("recursion_residual: formal expansions only");
  const ProblemSpec& spec = e.problem;
  const int d = spec.freq.dim();
  const int K = e.top_order();
  const int P = spec.nonlinearity.is_none() ? 0 : spec.nonlinearity.degree();
  std::vector<double> g = spec.nonlinearity.is_none()
                              ? std::vector<double>{}
                              : spec.nonlinearity.taylor_at(spec.c0);

  OrderPowers pows(d, std::max(P, 1));
  for (int k = 1; k <= K; ++k) pows.push_order(e.orders[k]);

  auto g_order = [&](int m) {
    TrigSeries acc(d);
    if (spec.nonlinearity.is_none()) return acc;
    double fact = 1.0;
    for (int p = 1; p <= std::min(P, m); ++p) {
      fact *= p;
      const TrigSeries& yp = pows.power(p, m);
      if (!yp.empty()) acc = acc + yp.scaled(Complex(g[p] / fact, 0.0));
    }
    return acc;
  };

  double worst = 0.0;
  for (int k = 1; k <= K; ++k) {
    TrigSeries gk = g_order(k - 1);
    double scale = std::max({1e-300, e.orders[k].max_abs(), e.orders[k - 1].max_abs(),
                             gk.max_abs()});
    std::map<Mode, char> support;
    for (auto& [nu, a] : e.orders[k].coeffs()) support[nu] = 1;
    for (auto& [nu, a] : e.orders[k - 1].coeffs()) support[nu] = 1;
    for (auto& [nu, a] : gk.coeffs()) support[nu] = 1;
    if (k == 1)
      for (auto& [nu, a] : spec.forcing.coeffs()) support[nu] = 1;
    for (auto& [nu, ignored] : support) {
      if (nu.is_zero()) continue;
      Complex iwn(0.0, small_divisor(spec.freq, nu));
      Complex res = iwn * e.orders[k].at(nu) + iwn * iwn * e.orders[k - 1].at(nu) + gk.at(nu);
      if (k == 1) res -= spec.forcing.at(nu);
      worst = std::max(worst, std::abs(res) / scale);
    }
    // zero-mode compatibility at order k: [g(x)]^{(k)}_0 = 0 for k >= 1
    TrigSeries gkk = g_order(k);
    double zscale = std::max(1e-300, gkk.max_abs());
    worst = std::max(worst, std::abs(gkk.at(Mode(d))) / zscale);
  }
  return worst;
}

double compatibility_residual(const SeriesExpansion& e) {
  const int K = e.top_order();
  double worst = 0.0;
  for (int k = 1; k <= K; ++k) {
    Complex acc(0.0, 0.0);
    double scale = 1e-300;
    for (int k1 = 0; k1 <= k; ++k1) {
      Complex term = zero_mode_pairing(e.orders[k1], e.orders[k - k1]);
      acc += term;
      scale = std::max(scale, std::abs(term));
    }
    worst = std::max(worst, std::abs(acc) / scale);
  }
  return worst;
}

}  // namespace oscsum
