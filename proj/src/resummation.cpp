#include "oscsum/resummation.hpp"

#include <algorithm>
#include <cmath>

#include "oscsum/fitting.hpp"
#include "oscsum/jet.hpp"
#include "oscsum/series_powers.hpp"

namespace oscsum {

namespace {

Complex dressed_denominator(double sd, Complex eps) {
  return Complex(0.0, sd) * (Complex(1.0, 0.0) + Complex(0.0, 1.0) * eps * sd);
}

Complex zero_mode_pairing(const TrigSeries& a, const TrigSeries& b) {
  Complex acc(0.0, 0.0);
  for (auto& [nu, ca] : a.coeffs()) {
    Complex cb = b.at(-nu);
    if (cb != Complex(0.0, 0.0)) acc += ca * cb;
  }
  return acc;
}

// F and B2 for the smallness threshold: declared decay data when present,
// the 2N trigonometric-polynomial bound for genuinely low-degree forcing,
// a least-squares fit of log|f_nu| against |nu| otherwise.
struct DecayData {
  double F = 0.0, B2 = 0.0;
  bool fitted = false;
};

DecayData decay_data(const TrigSeries& f) {
  DecayData d;
  if (f.decay_meta()) {
    double xi = f.decay_meta()->xi;
    d.F = f.decay_meta()->F;
    d.B2 = 2.0 * std::exp(-xi / 2) / (1.0 - std::exp(-xi / 2));
    return d;
  }
  int N = f.support_radius();
  double fmax = 0.0;
  for (auto& [nu, c] : f.coeffs())
    if (!nu.is_zero()) fmax = std::max(fmax, std::abs(c));
  if (N <= 3) {
    d.F = fmax;
    d.B2 = 2.0 * N;
    return d;
  }
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (auto& [nu, c] : f.coeffs()) {
    if (nu.is_zero() || c == Complex(0.0, 0.0)) continue;
    rows.push_back({1.0, static_cast<double>(nu.l1())});
    y.push_back(std::log(std::abs(c)));
  }
  LsqFit fit = least_squares(rows, y);
  double xi = std::max(1e-3, -fit.params[1]);
  d.F = std::exp(fit.params[0]);
  d.B2 = 2.0 * std::exp(-xi / 2) / (1.0 - std::exp(-xi / 2));
  d.fitted = true;
  return d;
}

void radius_estimates(const std::vector<TrigSeries>& orders, double& ratio_est,
                      double& root_est) {
  std::vector<double> m;
  for (auto& o : orders) m.push_back(o.max_abs());
  const int K = static_cast<int>(m.size()) - 1;
  double acc = 0.0;
  int n = 0;
  for (int k = std::max(1, K / 2); k < K; ++k) {
    if (m[k] > 0 && m[k + 1] > 0) {
      acc += std::log(m[k + 1] / m[k]);
      ++n;
    }
  }
  ratio_est = n ? std::exp(-acc / n) : 0.0;
  root_est = 0.0;
  for (int k = std::max(2, K - 3); k <= K; ++k)
    if (m[k] > 0) root_est = std::max(root_est, std::pow(m[k], 1.0 / k));
  root_est = root_est > 0 ? 1.0 / root_est : 0.0;
}

}  // namespace

Complex dressed_propagator(const Mode& nu, Complex eps, const FrequencyVector& freq) {
  if (nu.is_zero()) return Complex(1.0, 0.0);
  double sd = small_divisor(freq, nu);
  if (sd == 0.0)
    throw ResonanceError("dressed_propagator: zero divisor at nu = " + nu.str());
  Complex one_plus = Complex(1.0, 0.0) + Complex(0.0, 1.0) * eps * sd;
  if (std::abs(one_plus) < 1e-30)
    throw SingularityError("dressed_propagator: pole (1 + i eps w.nu = 0) at nu = " +
                           nu.str());
  return 1.0 / (Complex(0.0, sd) * one_plus);
}

ResummedResult resummed_orders(const ProblemSpec& spec, int K) {
  if (K < 1) throw PreconditionError("resummed_orders: K must be >= 1");
  const int d = spec.freq.dim();
  const Complex eps = spec.epsilon;
  const bool rv = spec.forcing.real_valued() && eps.imag() == 0.0;
  const int budget = spec.forcing.support_budget();

  ResummedResult out;
  out.expansion.kind = ExpansionKind::Resummed;
  out.expansion.problem = spec;

  const bool linear = spec.nonlinearity.is_none();
  const double c0 = spec.c0;
  std::vector<double> g;
  std::vector<double> gp_over_pfact;
  int P = 0;
  double g1 = 0.0;
  if (!linear) {
    g = spec.nonlinearity.taylor_at(c0);
    P = spec.nonlinearity.degree();
    g1 = g[1];
    if (g1 == 0.0)
      throw DomainError("resummed_orders: g'(c0) vanishes; order constants unsolvable");
    gp_over_pfact.assign(P + 1, 0.0);
    double fact = 1.0;
    for (int p = 0; p <= P; ++p) {
      if (p > 0) fact *= p;
      gp_over_pfact[p] = g[p] / fact;
    }
  }

  // Smallness threshold for committing to mu = 1 (single-frequency form).
  DecayData dd = decay_data(spec.forcing);
  out.decay_fitted = dd.fitted;
  if (!linear && c0 > 0.0 && d == 1) {
    double womega = std::abs(spec.freq.omega[0]);
    double m1 = std::max(1.0, 1.0 / (2.0 * c0));
    double m2 = std::max(dd.F * dd.B2, c0);
    out.eps_threshold = 1.0 / (4.0 / womega * m1 * m2);
  }

  auto& orders = out.expansion.orders;
  auto& constants = out.expansion.constants;
  orders.emplace_back(d, std::vector<std::pair<Mode, Complex>>{{Mode(d), Complex(c0, 0.0)}},
                      rv, std::nullopt, budget);
  constants.emplace_back(c0, 0.0);

  OrderPowers pows(d, std::max(P, 1));

  for (int k = 1; k <= K; ++k) {
    std::vector<std::pair<Mode, Complex>> entries;
    TrigSeries gk(d);  // mu-order k-1 of g(x), Taylor form about c0
    if (!linear && k >= 2) {
      for (int p = 1; p <= std::min(P, k - 1); ++p) {
        const TrigSeries& yp = pows.power(p, k - 1);
        if (!yp.empty()) gk = gk + yp.scaled(Complex(gp_over_pfact[p], 0.0));
      }
    }
    std::map<Mode, char> support;
    if (k == 1)
      for (auto& [nu, a] : spec.forcing.coeffs()) support[nu] = 1;
    for (auto& [nu, a] : gk.coeffs()) support[nu] = 1;
    for (auto& [nu, ignored] : support) {
      if (nu.is_zero()) continue;
      Complex rhs = -gk.at(nu);
      if (k == 1) rhs += spec.forcing.at(nu);
      entries.emplace_back(nu, eps * rhs * dressed_propagator(nu, eps, spec.freq));
    }
    Complex ck(0.0, 0.0);
    if (!linear) {
      if (spec.nonlinearity.degree() == 2 && spec.nonlinearity.coeffs()[2] == 1.0 &&
          spec.nonlinearity.coeffs()[1] == 0.0 && spec.nonlinearity.coeffs()[0] == 0.0) {
        for (int kp = 1; kp <= k - 1; ++kp)
          ck += zero_mode_pairing(orders[k - kp], orders[kp]);
        ck *= -1.0 / (2.0 * c0);
      } else {
        Complex rk(0.0, 0.0);
        for (int p = 2; p <= std::min(P, k); ++p)
          rk += gp_over_pfact[p] * pows.power(p, k).at(Mode(d));
        ck = -rk / g1;
      }
    }
    entries.emplace_back(Mode(d), ck);
    orders.emplace_back(d, std::move(entries), rv, std::nullopt, budget);
    constants.push_back(orders.back().at(Mode(d)));
    pows.push_order(orders.back());
  }

  radius_estimates(orders, out.radius_ratio, out.radius_root);

  if (eps.imag() == 0.0 && out.eps_threshold > 0.0 &&
      std::abs(eps) < out.eps_threshold) {
    out.domain_certified = true;
  } else if (d == 1) {
    int nu_max = std::max(1, orders.back().support_radius());
    auto check = propagator_domain_check(eps, spec.freq, nu_max);
    out.domain_certified = check.pass;
    if (!check.pass)
      out.warnings.push_back("dressed-denominator bound fails at nu = " +
                             check.argmin.str() + "; relying on measured decay only");
  }
  if (!out.domain_certified && out.radius_ratio <= 1.0)
    out.warnings.push_back("order norms do not certify mu = 1 (radius estimate " +
                           std::to_string(out.radius_ratio) + ")");
  return out;
}

PropagatorDomainCheck propagator_domain_check(Complex eps, const FrequencyVector& freq,
                                              int nu_max) {
  if (freq.dim() != 1)
    throw PreconditionError("propagator_domain_check: single-frequency problems only");
  if (nu_max < 1) throw PreconditionError("propagator_domain_check: nu_max must be >= 1");
  PropagatorDomainCheck out;
  out.bound = std::abs(freq.omega[0]) / 2.0;
  out.min_abs = std::numeric_limits<double>::infinity();
  out.argmin = Mode{1};
  for (int n = 1; n <= nu_max; ++n) {
    for (int sign : {1, -1}) {
      double sd = freq.omega[0] * n * sign;
      double v = std::abs(dressed_denominator(sd, eps));
      if (v < out.min_abs) {
        out.min_abs = v;
        out.argmin = Mode{n * sign};
      }
    }
  }
  out.margin = out.min_abs - out.bound;
  out.pass = out.min_abs >= out.bound;
  return out;
}

SolutionEval evaluate_solution(const SeriesExpansion& e, double t, double mu) {
  const int K = e.top_order();
  SolutionEval out;
  Complex acc(0.0, 0.0);
  double mupow = 1.0;
  std::vector<double> term(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    acc += mupow * evaluate(e.orders[k], e.problem.freq, t);
    term[k] = std::abs(mupow) * e.orders[k].max_abs();
    mupow *= mu;
  }
  double r = 0.0;
  int n = 0;
  for (int k = std::max(1, K - 3); k < K; ++k) {
    if (term[k] > 0 && term[k + 1] > 0) {
      r = std::max(r, term[k + 1] / term[k]);
      ++n;
    }
  }
  if (n > 0 && r >= 1.0)
    throw DomainError("evaluate_solution: order norms do not decay (ratio " +
                      std::to_string(r) + "); the partial sum is not converging");
  out.value = acc.real();
  out.truncation_estimate = n ? term[K] * r / (1.0 - r) : term[K];
  return out;
}

TrigSeries sum_series(const SeriesExpansion& e, double mu) {
  TrigSeries acc(e.problem.freq.dim());
  double mupow = 1.0;
  for (auto& o : e.orders) {
    acc = acc + o.scaled(Complex(mupow, 0.0));
    mupow *= mu;
  }
  return acc;
}

TrigSeries linear_exact(const ProblemSpec& spec) {
  if (std::abs(spec.forcing.at(Mode(spec.forcing.dim()))) != 0.0)
    throw PreconditionError("linear_exact: requires zero-average forcing");
  std::vector<std::pair<Mode, Complex>> entries;
  for (auto& [nu, fnu] : spec.forcing.coeffs()) {
    if (nu.is_zero()) continue;
    entries.emplace_back(nu, fnu * dressed_propagator(nu, spec.epsilon, spec.freq));
  }
  return TrigSeries(spec.forcing.dim(), std::move(entries));
}

TrigSeries apply_nonlinearity(const Nonlinearity& g, const TrigSeries& x) {
  const int d = x.dim();
  TrigSeries acc(d);
  if (g.is_none()) return acc;
  const auto& c = g.coeffs();
  acc = TrigSeries(d, {{Mode(d), Complex(c.back(), 0.0)}});
  for (int p = g.degree() - 1; p >= 0; --p) {
    acc = convolve(acc, x);
    if (c[p] != 0.0)
      acc = acc + TrigSeries(d, {{Mode(d), Complex(c[p], 0.0)}});
  }
  return acc;
}

double residual(const TrigSeries& x, const ProblemSpec& spec) {
  const int d = spec.freq.dim();
  const Complex eps = spec.epsilon;
  const bool linear = spec.nonlinearity.is_none();
  TrigSeries gx = linear ? TrigSeries(d) : apply_nonlinearity(spec.nonlinearity, x);

  std::map<Mode, char> support;
  for (auto& [nu, a] : x.coeffs()) support[nu] = 1;
  for (auto& [nu, a] : gx.coeffs()) support[nu] = 1;
  for (auto& [nu, a] : spec.forcing.coeffs()) support[nu] = 1;

  double worst = 0.0;
  for (auto& [nu, ignored] : support) {
    Complex r;
    if (nu.is_zero()) {
      r = linear ? spec.forcing.at(nu) : eps * (gx.at(nu) - spec.forcing.at(nu));
    } else {
      Complex iwn(0.0, small_divisor(spec.freq, nu));
      r = eps * iwn * iwn * x.at(nu) + iwn * x.at(nu);
      if (linear)
        r -= spec.forcing.at(nu);
      else
        r += eps * (gx.at(nu) - spec.forcing.at(nu));
    }
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::vector<TrigSeries> epsilon_expansion(const ProblemSpec& spec, int J) {
  if (!spec.nonlinearity.is_none() && spec.nonlinearity.degree() != 2)
    throw PreconditionError("epsilon_expansion: quadratic or linear models only");
  const int d = spec.freq.dim();
  const int K = J;  // mu-order k first contributes at eps^k
  const double c0 = spec.c0;
  const bool linear = spec.nonlinearity.is_none();

  using JetMap = std::map<Mode, Jet>;
  auto jet_at = [&](const JetMap& m, const Mode& nu) -> Jet {
    auto it = m.find(nu);
    return it == m.end() ? Jet(J) : it->second;
  };
  auto jconv_zero = [&](const JetMap& a, const JetMap& b) {
    Jet acc(J);
    for (auto& [nu, ja] : a) {
      auto it = b.find(-nu);
      if (it != b.end()) acc = acc + ja * it->second;
    }
    return acc;
  };

  const Jet eps_jet = Jet::variable(J);
  std::vector<JetMap> orders(1);
  orders[0][Mode(d)] = Jet::constant(J, Complex(c0, 0.0));

  for (int k = 1; k <= K; ++k) {
    JetMap cur;
    // Convolution sum over mu-orders k1 + k2 = k - 1.
    JetMap conv_sum;
    if (!linear && k >= 2) {
      for (int k1 = 0; k1 <= k - 1; ++k1) {
        const JetMap& a = orders[k1];
        const JetMap& b = orders[k - 1 - k1];
        for (auto& [n1, j1] : a)
          for (auto& [n2, j2] : b) {
            Mode nu = n1 + n2;
            auto [it, inserted] = conv_sum.try_emplace(nu, J);
            it->second = it->second + j1 * j2;
          }
      }
    }
    std::map<Mode, char> support;
    if (k == 1)
      for (auto& [nu, a] : spec.forcing.coeffs()) support[nu] = 1;
    for (auto& [nu, j] : conv_sum) support[nu] = 1;
    for (auto& [nu, ignored] : support) {
      if (nu.is_zero()) continue;
      double sd = small_divisor(spec.freq, nu);
      if (sd == 0.0) throw ResonanceError("epsilon_expansion: zero divisor at " + nu.str());
      // Denominator i sd (1 + i eps sd) as a jet in eps.
      Jet den = Jet::constant(J, Complex(0.0, sd)) +
                eps_jet * Complex(0.0, sd) * Complex(0.0, sd);
      Jet rhs(J);
      if (k == 1) rhs = Jet::constant(J, spec.forcing.at(nu));
      if (!linear && k >= 2) rhs = rhs - jet_at(conv_sum, nu);
      cur[nu] = eps_jet * rhs / den;
    }
    // Zero mode from the order-k compatibility sum (quadratic model).
    if (!linear && k >= 2) {
      Jet ck(J);
      for (int kp = 1; kp <= k - 1; ++kp) ck = ck + jconv_zero(orders[k - kp], orders[kp]);
      cur[Mode(d)] = ck * Complex(-1.0 / (2.0 * c0), 0.0);
    }
    orders.push_back(std::move(cur));
  }

  // Collect eps powers across mu-orders.
  std::vector<TrigSeries> out;
  for (int j = 0; j <= J; ++j) {
    std::map<Mode, Complex> acc;
    for (auto& ord : orders)
      for (auto& [nu, jet] : ord) acc[nu] += jet[j];
    std::vector<std::pair<Mode, Complex>> entries(acc.begin(), acc.end());
    out.emplace_back(d, std::move(entries));
  }
  return out;
}

}  // namespace oscsum
