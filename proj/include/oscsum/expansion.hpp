#pragma once

// Order-by-order power-series solution of eps x'' + x' + eps g(x) = eps f,
// computed in Fourier space, plus the support-bound and growth diagnostics.

#include <map>
#include <string>
#include <vector>

#include "oscsum/fourier.hpp"

namespace oscsum {

enum class ExpansionKind { Formal, Resummed, ResummedQP };

// Ordered coefficients of a series in the bookkeeping parameter: the k-th
// entry is a trig series, the zero modes are the constants c_k.
struct SeriesExpansion {
  ExpansionKind kind = ExpansionKind::Formal;
  std::vector<TrigSeries> orders;
  std::vector<Complex> constants;
  ProblemSpec problem;
  int top_order() const { return static_cast<int>(orders.size()) - 1; }
};

enum class NonlinearityPath { Auto, ForceGeneral };

// Support radius reachable at order K: ceil((K+1)/2) * N for a forcing of
// degree N (the even/odd support law of the recursion).
int reachable_radius(int K, int N);

// The formal expansion to order K.  For d >= 2 the Diophantine data must be
// certifiable by a scan up to the reachable radius (C0 == 0 adopts the scan
// estimate).  The quadratic model uses the dedicated recursion; any other
// polynomial goes through the Taylor-coefficient path, and ForceGeneral
// routes the quadratic through the general path too (used for cross-checks).
SeriesExpansion formal_orders(const ProblemSpec& spec, int K,
                              NonlinearityPath path = NonlinearityPath::Auto);

struct SupportReport {
  struct Row {
    int k;
    int max_abs_nu;
    int bound;
    bool pass;
  };
  std::vector<Row> rows;
  int N = 0;
  bool all_pass = true;
};

// Checks max populated |nu| against ceil((k+1)/2)*N per order.
SupportReport support_check(const SeriesExpansion& e, int N);

struct GrowthReport {
  std::vector<double> m;  // m_k = max_nu |orders[k](nu)|
  int k_min = 3;
  // ln m_k ~ c1 + c2 k  (geometric)
  double geo_c1 = 0, geo_c2 = 0, geo_sse = 0, geo_aic = 0;
  // ln m_k ~ c1 + c2 k + sigma ln k!  (factorial, sigma free)
  double fac_c1 = 0, fac_c2 = 0, sigma_hat = 0, fac_sse = 0, fac_aic = 0;
  std::map<std::string, double> fixed_sigma_sse;  // sigma in {1, max(1,tau), 2 tau}
  std::string best_model;                         // "geometric" or "factorial"
  double geometric_ratio() const { return std::exp(geo_c2); }
};

// Least-squares comparison of geometric vs factorial growth of the order
// norms.  Requires top order >= 6.  The first few orders are pre-asymptotic
// (the first two norms coincide for symmetric forcing), so the default fit
// window starts at k = 4.
GrowthReport growth_diagnostic(const SeriesExpansion& e, int k_min = 4);

// Largest chain-value magnitude |omega.nu|^(k-2) |f_nu| over the forcing
// support; a per-order lower-bound yardstick for the growth diagnostics.
double chain_value_bound(const ProblemSpec& spec, int k);

// Max Fourier-space residual of the defining recursion over all orders
// 1..K (and the zero-mode compatibility sums), relative to the order scale.
double recursion_residual(const SeriesExpansion& e);

// Zero-mode compatibility defect max_k |sum_{k1+k2=k} sum_nu x_nu x_-nu|
// for 1 <= k <= K, normalized by the largest term in the sum.
double compatibility_residual(const SeriesExpansion& e);

}  // namespace oscsum
