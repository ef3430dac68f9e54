#pragma once

// The resummed expansion: a series in the bookkeeping parameter mu whose
// coefficients carry the eps-dressed propagator 1/(i w nu (1 + i eps w nu)).
// It converges where the plain expansion diverges; mu = 1 recovers the
// solution.  Also the closed-form linear solution, equation residuals, and
// the re-expansion in powers of eps used for consistency checks.

#include <vector>

#include "oscsum/expansion.hpp"
#include "oscsum/fourier.hpp"

namespace oscsum {

// 1 at nu = 0, else 1/(i w.nu (1 + i eps w.nu)).  Throws SingularityError
// within 1e-30 of the pole eps = i/(w.nu).
Complex dressed_propagator(const Mode& nu, Complex eps, const FrequencyVector& freq);

struct ResummedResult {
  SeriesExpansion expansion;  // kind == Resummed
  // Explicit smallness threshold (4 |w|^-1 max{1, 1/2c0} max{F B2, c0})^-1
  // guaranteeing that setting mu = 1 stays inside the convergence disk.
  double eps_threshold = 0.0;
  bool decay_fitted = false;  // F, xi fitted from coefficients (low confidence)
  bool domain_certified = false;
  std::vector<std::string> warnings;
  double radius_ratio = 0.0;  // mu-radius estimate, ratio test on order norms
  double radius_root = 0.0;   // same, root test
};

// Orders of the mu-expansion for the (possibly general polynomial) model.
// Runs outside the certified eps range are allowed with a warning as long as
// the order norms still decay.
ResummedResult resummed_orders(const ProblemSpec& spec, int K);

struct PropagatorDomainCheck {
  double min_abs = 0.0;  // min over 0 < |nu| <= nu_max of |i w nu (1 + i eps w nu)|
  Mode argmin;
  double bound = 0.0;  // omega / 2
  double margin = 0.0;
  bool pass = false;
};

// Verifies the dressed-denominator lower bound |i w nu (1+i eps w nu)| >= w/2
// for a single-frequency problem at the given (possibly complex) eps.
PropagatorDomainCheck propagator_domain_check(Complex eps, const FrequencyVector& freq,
                                              int nu_max);

struct SolutionEval {
  double value = 0.0;
  double truncation_estimate = 0.0;
};

// Partial sum at the given mu (default 1) with a geometric tail estimate.
// Throws DomainError when the order norms do not decay.
SolutionEval evaluate_solution(const SeriesExpansion& e, double t, double mu = 1.0);

// Sum of mu^k orders[k] as a single series.
TrigSeries sum_series(const SeriesExpansion& e, double mu = 1.0);

// Closed-form solution of eps x'' + x' = f with zero-average f.
TrigSeries linear_exact(const ProblemSpec& spec);

// Applies the polynomial nonlinearity to a series (convolution powers).
TrigSeries apply_nonlinearity(const Nonlinearity& g, const TrigSeries& x);

// Sup over populated modes of the Fourier-space equation defect.  For the
// nonlinear model: |eps (i w nu)^2 x + i w nu x + eps [g(x)]_nu - eps f_nu|
// with the zero mode |eps| |[g(x)]_0 - f_0|; for the linear model the forcing
// enters without the eps factor.
double residual(const TrigSeries& x, const ProblemSpec& spec);

// Coefficients of the solution re-expanded in powers of eps through eps^J,
// computed by running the resummed recursion in truncated-power-series
// arithmetic and collecting mu-orders.  Quadratic and linear models only.
std::vector<TrigSeries> epsilon_expansion(const ProblemSpec& spec, int J);

}  // namespace oscsum
