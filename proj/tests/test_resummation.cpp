#include <cmath>

#include "doctest.h"
#include "oscsum/expansion.hpp"
#include "oscsum/resummation.hpp"

using namespace oscsum;

namespace {

TrigSeries sin_forcing(double alpha, double beta) {
  return TrigSeries(1,
                    {{Mode{0}, Complex(alpha, 0.0)},
                     {Mode{1}, Complex(0.0, -beta / 2)},
                     {Mode{-1}, Complex(0.0, beta / 2)}},
                    true);
}

ProblemSpec sin_problem(double alpha, double beta, Complex eps) {
  return ProblemSpec(sin_forcing(alpha, beta), FrequencyVector{{1.0}, 0, 0},
                     Nonlinearity::quadratic(), eps);
}

}  // namespace

TEST_CASE("dressed propagator values and pole") {
  FrequencyVector freq{{1.0}, 0, 0};
  CHECK(dressed_propagator(Mode{0}, Complex(0.3, 0.0), freq) == Complex(1.0, 0.0));

  // eps = 0 reduces to the undressed propagator.
  Complex p0 = dressed_propagator(Mode{2}, Complex(0.0, 0.0), freq);
  CHECK(std::abs(p0 - 1.0 / Complex(0.0, 2.0)) < 1e-16);

  // omega = 1, nu = 1, eps = 1: 1/(i(1+i)) = -(1+i)/2.
  Complex p1 = dressed_propagator(Mode{1}, Complex(1.0, 0.0), freq);
  CHECK(std::abs(p1 - Complex(-0.5, -0.5)) < 1e-16);

  CHECK_THROWS_AS(dressed_propagator(Mode{1}, Complex(0.0, 1.0), freq), SingularityError);
}

TEST_CASE("resummed first order and constants") {
  double alpha = 1.0, beta = 0.5, eps = 0.05;
  auto res = resummed_orders(sin_problem(alpha, beta, Complex(eps, 0.0)), 8);
  auto& e = res.expansion;

  for (int nv : {1, -1}) {
    Mode nu{nv};
    Complex expect = eps * sin_forcing(alpha, beta).at(nu) *
                     dressed_propagator(nu, Complex(eps, 0.0), e.problem.freq);
    CHECK(std::abs(e.orders[1].at(nu) - expect) <= 1e-16);
  }
  CHECK(std::abs(e.constants[1]) == 0.0);
  CHECK(res.eps_threshold > 0.0);
  CHECK(res.domain_certified);
  CHECK(compatibility_residual(e) < 1e-12);
}

TEST_CASE("resummed orders decay geometrically with rate proportional to eps") {
  auto r1 = resummed_orders(sin_problem(1.0, 0.5, Complex(0.05, 0.0)), 14);
  auto rep = growth_diagnostic(r1.expansion);
  CHECK(rep.best_model == "geometric");
  CHECK(rep.geometric_ratio() < 0.9);

  // Doubling eps halves the mu-radius estimate, within 20%.
  auto r2 = resummed_orders(sin_problem(1.0, 0.5, Complex(0.025, 0.0)), 14);
  double ratio = r2.radius_ratio / r1.radius_ratio;
  CHECK(ratio > 2.0 * 0.8);
  CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("constant forcing solves exactly at every order") {
  TrigSeries f(1, {{Mode{0}, Complex(2.25, 0.0)}}, true);
  ProblemSpec spec(f, FrequencyVector{{1.0}, 0, 0}, Nonlinearity::quadratic(),
                   Complex(0.1, 0.0));
  auto res = resummed_orders(spec, 6);
  for (int k = 1; k <= 6; ++k) CHECK(res.expansion.orders[k].l1_mass() == 0.0);
  auto eval = evaluate_solution(res.expansion, 1.234);
  CHECK(eval.value == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(eval.truncation_estimate == 0.0);
  CHECK(residual(sum_series(res.expansion), spec) < 1e-15);
}

TEST_CASE("linear model: closed form, vanishing higher orders, tiny residual") {
  TrigSeries f(1, {{Mode{1}, Complex(0.0, -0.5)}, {Mode{-1}, Complex(0.0, 0.5)}}, true);
  ProblemSpec spec(f, FrequencyVector{{1.0}, 0, 0}, Nonlinearity::none(), Complex(0.1, 0.0));

  TrigSeries x = linear_exact(spec);
  Complex expect = Complex(0.0, -0.5) / (Complex(0.0, 1.0) * Complex(1.0, 0.1));
  CHECK(std::abs(x.at(Mode{1}) - expect) < 1e-17);

  // The resummed recursion with the convolution removed: order 1 carries
  // eps times the closed form, orders >= 2 vanish identically.
  auto res = resummed_orders(spec, 5);
  for (auto& [nu, c] : x.coeffs()) {
    CHECK(std::abs(res.expansion.orders[1].at(nu) / spec.epsilon - c) <=
          1e-16 * std::abs(c));
  }
  for (int k = 2; k <= 5; ++k) CHECK(res.expansion.orders[k].size() == 0);

  CHECK(residual(x, spec) <= 1e-14);
}

TEST_CASE("residual of the mu partial sums decreases geometrically") {
  auto spec = sin_problem(1.0, 0.5, Complex(0.05, 0.0));
  auto res = resummed_orders(spec, 12);
  std::vector<double> r;
  for (int K = 2; K <= 12; K += 2) {
    SeriesExpansion partial = res.expansion;
    partial.orders.resize(K + 1);
    partial.constants.resize(K + 1);
    r.push_back(residual(sum_series(partial), spec));
  }
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] < r[i - 1] * 0.5);
  CHECK(r.back() < 1e-10);
}

TEST_CASE("dressed-denominator domain check") {
  FrequencyVector freq{{1.0}, 0, 0};
  double R = 0.2;

  auto real_eps = propagator_domain_check(Complex(0.15, 0.0), freq, 50);
  CHECK(real_eps.pass);
  CHECK(real_eps.min_abs >= 0.5);

  // eps on the imaginary axis at iR/2 sits on the pole accumulation axis:
  // nu = 2/(omega R) kills the bound.
  auto imag_eps = propagator_domain_check(Complex(0.0, R / 2), freq, 50);
  CHECK_FALSE(imag_eps.pass);
  CHECK(imag_eps.argmin == Mode{10});

  auto tiny = propagator_domain_check(Complex(1e-9, 0.0), freq, 50);
  CHECK(tiny.min_abs == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("eps re-expansion of the resummed series recovers the plain orders") {
  auto spec = sin_problem(1.0, 0.5, Complex(0.05, 0.0));
  int J = 6;
  auto eps_orders = epsilon_expansion(spec, J);
  auto formal = formal_orders(spec, J);
  for (int j = 0; j <= J; ++j) {
    double scale = std::max(formal.orders[j].max_abs(), 1e-300);
    for (auto& [nu, c] : formal.orders[j].coeffs())
      CHECK(std::abs(c - eps_orders[j].at(nu)) <= 1e-10 * scale);
    for (auto& [nu, c] : eps_orders[j].coeffs())
      CHECK(std::abs(c - formal.orders[j].at(nu)) <= 1e-10 * scale);
  }
}

TEST_CASE("outside the certified range a warning is attached, not an error") {
  // Large eps: threshold exceeded, decay may still hold empirically.
  auto res = resummed_orders(sin_problem(1.0, 0.5, Complex(1.5, 0.0)), 10);
  CHECK(res.eps_threshold < 1.5);
  // Real eps keeps the dressed bound valid, so the domain check still passes.
  CHECK(res.domain_certified);
}
