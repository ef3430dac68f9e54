#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "oscsum/fourier.hpp"

using namespace oscsum;

namespace {

TrigSeries sin_forcing(double alpha, double beta) {
  // f(t) = alpha + beta sin t: f_0 = alpha, f_{+1} = -i beta/2, f_{-1} = i beta/2
  return TrigSeries(1,
                    {{Mode{0}, Complex(alpha, 0.0)},
                     {Mode{1}, Complex(0.0, -beta / 2)},
                     {Mode{-1}, Complex(0.0, beta / 2)}},
                    /*real_valued=*/true);
}

TrigSeries random_sparse(std::mt19937& rng, int dim, int nmodes, int radius) {
  std::uniform_int_distribution<int> mode_dist(-radius, radius);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<std::pair<Mode, Complex>> entries;
  for (int i = 0; i < nmodes; ++i) {
    Mode nu(dim);
    for (int j = 0; j < dim; ++j) nu[j] = mode_dist(rng);
    entries.emplace_back(nu, Complex(amp(rng), amp(rng)));
  }
  return TrigSeries(dim, std::move(entries));
}

double rel_diff(const TrigSeries& a, const TrigSeries& b) {
  double scale = std::max({1e-300, a.max_abs(), b.max_abs()});
  double worst = 0.0;
  for (auto& [nu, c] : a.coeffs()) worst = std::max(worst, std::abs(c - b.at(nu)));
  for (auto& [nu, c] : b.coeffs()) worst = std::max(worst, std::abs(c - a.at(nu)));
  return worst / scale;
}

}  // namespace

TEST_CASE("mode basics") {
  Mode a{1, -2};
  CHECK(a.l1() == 3);
  CHECK(a.is_canonical());
  CHECK((-a).is_canonical() == false);
  CHECK(Mode{0, 0}.is_zero());
  CHECK(Mode{0, 3}.is_canonical());
  CHECK((Mode{1, 0} + Mode{-1, 2}) == Mode{0, 2});
}

TEST_CASE("convolution: delta is the identity") {
  std::mt19937 rng(7);
  TrigSeries s = random_sparse(rng, 2, 12, 4);
  TrigSeries delta(2, {{Mode{0, 0}, Complex(1.0, 0.0)}});
  CHECK(rel_diff(convolve(delta, s), s) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("convolution: square of alpha + beta sin t") {
  double alpha = 1.3, beta = 0.7;
  TrigSeries f = sin_forcing(alpha, beta);
  TrigSeries ff = convolve(f, f);
  // Expanding (alpha + beta sin t)^2 by hand and re-reading coefficients:
  CHECK(ff.at(Mode{0}).real() == doctest::Approx(alpha * alpha + beta * beta / 2).epsilon(1e-15));
  CHECK(ff.at(Mode{0}).imag() == doctest::Approx(0.0));
  CHECK(ff.at(Mode{2}).real() == doctest::Approx(-beta * beta / 4).epsilon(1e-15));
  CHECK(ff.at(Mode{2}).imag() == doctest::Approx(0.0));
}

TEST_CASE("convolution: support additivity") {
  TrigSeries a(1, {{Mode{1}, Complex(2.0, 0.0)}});
  TrigSeries b(1, {{Mode{-1}, Complex(3.0, 0.0)}});
  TrigSeries c = convolve(a, b);
  CHECK(c.size() == 1);
  CHECK(c.at(Mode{0}) == Complex(6.0, 0.0));
}

TEST_CASE("convolution is commutative and associative on random sparse series") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    TrigSeries a = random_sparse(rng, 2, 10, 3);
    TrigSeries b = random_sparse(rng, 2, 10, 3);
    TrigSeries c = random_sparse(rng, 2, 10, 3);
    CHECK(rel_diff(convolve(a, b), convolve(b, a)) < 1e-13);
    CHECK(rel_diff(convolve(convolve(a, b), c), convolve(a, convolve(b, c))) < 1e-13);
  }
}

TEST_CASE("evaluate: constants, sin forcing, factorization over products") {
  FrequencyVector freq{{1.0}, 0, 0};
  TrigSeries cst(1, {{Mode{0}, Complex(2.5, 0.0)}});
  CHECK(evaluate(cst, freq, 1.7).real() == doctest::Approx(2.5));

  TrigSeries f = sin_forcing(2.0, 0.5);
  CHECK(evaluate(f, freq, M_PI / 2).real() == doctest::Approx(2.5).epsilon(1e-14));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> tdist(-10.0, 10.0);
  TrigSeries a = random_sparse(rng, 1, 8, 5);
  TrigSeries b = random_sparse(rng, 1, 8, 5);
  TrigSeries ab = convolve(a, b);
  for (int i = 0; i < 20; ++i) {
    double t = tdist(rng);
    Complex lhs = evaluate(ab, freq, t);
    Complex rhs = evaluate(a, freq, t) * evaluate(b, freq, t);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("real-valued series evaluate to real numbers") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<std::pair<Mode, Complex>> entries;
  for (int n = -6; n <= 6; ++n) entries.emplace_back(Mode{n}, Complex(amp(rng), amp(rng)));
  TrigSeries s(1, entries, /*real_valued=*/true);
  for (auto& [nu, c] : s.coeffs()) CHECK(s.at(-nu) == std::conj(c));
  FrequencyVector freq{{1.0}, 0, 0};
  double mass = s.l1_mass();
  for (double t : {0.1, 0.9, 4.4}) CHECK(std::abs(evaluate(s, freq, t).imag()) < 1e-12 * mass);
}

TEST_CASE("small divisors") {
  double g0 = (std::sqrt(5.0) - 1.0) / 2.0;
  FrequencyVector freq{{1.0, g0}, 0, 1.0};
  CHECK(small_divisor(freq, Mode{-1, 2}) == doctest::Approx(std::sqrt(5.0) - 2.0).epsilon(1e-14));
  CHECK(small_divisor(freq, Mode{0, 0}) == 0.0);
  FrequencyVector one{{1.0}, 0, 0};
  CHECK(small_divisor(one, Mode{3}) == 3.0);
}

TEST_CASE("diophantine scan: integers, golden mean, exact resonance") {
  FrequencyVector one{{1.0}, 0, 0.0};
  auto scan1 = diophantine_scan(one, 10);
  CHECK(scan1.C0_est == doctest::Approx(1.0));
  CHECK(scan1.worst_mode == Mode{1});

  double g0 = (std::sqrt(5.0) - 1.0) / 2.0;
  FrequencyVector golden{{1.0, g0}, 0, 1.0};
  auto scan = diophantine_scan(golden, 100);
  // Independent brute force over the full (not just canonical) lattice.
  double expect = 1e300;
  Mode worst{0, 0};
  for (int a = -100; a <= 100; ++a) {
    for (int b = -100; b <= 100; ++b) {
      int l1 = std::abs(a) + std::abs(b);
      if (l1 == 0 || l1 > 100) continue;
      double v = std::abs(a + b * g0) * l1;
      if (v < expect) {
        expect = v;
        worst = Mode{a, b};
      }
    }
  }
  CHECK(scan.C0_est == doctest::Approx(expect).epsilon(1e-15));
  CHECK(scan.C0_est < 1.0);
  CHECK(scan.C0_est > 0.5);
  CHECK(std::abs(small_divisor(golden, scan.worst_mode)) ==
        doctest::Approx(std::abs(small_divisor(golden, worst))).epsilon(1e-15));

  // Monotone non-increasing in N.
  double prev = 1e300;
  for (int N : {5, 10, 20, 50, 100}) {
    double est = diophantine_scan(golden, N).C0_est;
    CHECK(est <= prev * (1 + 1e-15));
    prev = est;
  }

  FrequencyVector rational{{1.0, 0.5}, 0, 1.0};
  CHECK_THROWS_AS(diophantine_scan(rational, 10), ResonanceError);
  try {
    diophantine_scan(rational, 10);
  } catch (const ResonanceError& e) {
    CHECK(std::string(e.what()).find("(1,-2)") != std::string::npos);
  }
}

TEST_CASE("series text round trip is bit exact") {
  std::mt19937 rng(23);
  TrigSeries s = random_sparse(rng, 2, 20, 6);
  TrigSeries back = TrigSeries::from_text(s.to_text());
  CHECK(back.dim() == s.dim());
  CHECK(back.size() == s.size());
  for (auto& [nu, c] : s.coeffs()) {
    CHECK(back.at(nu).real() == c.real());
    CHECK(back.at(nu).imag() == c.imag());
  }
}

TEST_CASE("support budget prunes negligible tails and rejects fat ones") {
  // Tiny tail: mass beyond the budget is ~1e-18 of the total.
  TrigSeries a(1, {{Mode{0}, Complex(1.0, 0.0)}, {Mode{1}, Complex(1e-18, 0.0)}}, false,
               std::nullopt, /*support_budget=*/1);
  TrigSeries b(1, {{Mode{1}, Complex(1.0, 0.0)}}, false, std::nullopt, 1);
  TrigSeries c = convolve(a, b);
  CHECK(c.support_radius() <= 1);
  CHECK(c.at(Mode{1}) == Complex(1.0, 0.0));

  TrigSeries fat(1, {{Mode{0}, Complex(1.0, 0.0)}, {Mode{1}, Complex(0.5, 0.0)}}, false,
                 std::nullopt, 1);
  CHECK_THROWS_AS(convolve(fat, b), BudgetError);
}

TEST_CASE("decay envelope is validated at construction") {
  CHECK_NOTHROW(TrigSeries(1, {{Mode{2}, Complex(0.1, 0.0)}}, false,
                           DecayMeta{1.0, 1.0}));
  CHECK_THROWS_AS(TrigSeries(1, {{Mode{2}, Complex(0.5, 0.0)}}, false, DecayMeta{1.0, 1.0}),
                  PreconditionError);
}

TEST_CASE("nonlinearity taylor data and evaluation") {
  Nonlinearity q = Nonlinearity::quadratic();
  auto g = q.taylor_at(2.0);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == doctest::Approx(4.0));
  CHECK(g[1] == doctest::Approx(4.0));
  CHECK(g[2] == doctest::Approx(2.0));
  Nonlinearity cubic({0.0, 0.0, 3.0, -2.0}, "3x^2-2x^3");
  CHECK(cubic.value(0.5) == doctest::Approx(3 * 0.25 - 2 * 0.125));
  CHECK(cubic.deriv(0.5) == doctest::Approx(6 * 0.5 - 6 * 0.25));
  CHECK(cubic.deriv2(0.5) == doctest::Approx(6 - 12 * 0.5));
}

TEST_CASE("fixed point solve: branches and the degenerate cubic") {
  CHECK(fixed_point_solve(Nonlinearity::quadratic(), 4.0, -5.0, 5.0) == doctest::Approx(2.0));
  Nonlinearity cube({0.0, 0.0, 0.0, 1.0}, "x^3");
  CHECK(fixed_point_solve(cube, 8.0, 0.0, 5.0) == doctest::Approx(2.0));

  // g(x) = 3x^2 - 2x^3 with f0 = 1: on the positive branch the only root is
  // x = 1, where g' vanishes, so the solvability condition fails there.
  Nonlinearity bad({0.0, 0.0, 3.0, -2.0}, "3x^2-2x^3");
  CHECK_THROWS_AS(fixed_point_solve(bad, 1.0, 0.0, 3.0), DomainError);
  // The double root at x = 1 is invisible to sign-change bracketing, and the
  // remaining real root x = -1/2 sits outside the positive branch.
  CHECK(fixed_point_solve(bad, 1.0, -3.0, 3.0) == doctest::Approx(-0.5));
}

TEST_CASE("problem spec solves the constant at construction") {
  TrigSeries f = sin_forcing(4.0, 0.5);
  FrequencyVector freq{{1.0}, 0, 0};
  ProblemSpec spec(f, freq, Nonlinearity::quadratic(), Complex(0.1, 0.0));
  CHECK(spec.c0 == doctest::Approx(2.0));
  CHECK(spec.alpha() == doctest::Approx(4.0));

  TrigSeries zero_avg(1, {{Mode{1}, Complex(0.0, -0.5)}, {Mode{-1}, Complex(0.0, 0.5)}}, true);
  CHECK_NOTHROW(ProblemSpec(zero_avg, freq, Nonlinearity::none(), Complex(0.1, 0.0)));
  CHECK_THROWS_AS(ProblemSpec(f, freq, Nonlinearity::none(), Complex(0.1, 0.0)),
                  PreconditionError);
}
