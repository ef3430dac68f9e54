#pragma once

// Sparse multi-dimensional trigonometric series arithmetic plus the
// frequency/Diophantine utilities shared by every other module.
//
// A series is a finite map from integer mode vectors nu in Z^d to complex
// amplitudes; quasi-periodic supports are thin shells in Z^2, so storage is
// a sparse ordered map (also the source of deterministic file output).

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oscsum/errors.hpp"

namespace oscsum {

using Complex = std::complex<double>;

constexpr int kMaxDim = 4;

// Integer mode vector nu in Z^d.  |nu| always means the l1 norm.
class Mode {
 public:
  Mode() : dim_(1) { c_.fill(0); }
  explicit Mode(int d) : dim_(d) {
    if (d < 1 || d > kMaxDim) throw PreconditionError("Mode: dimension out of range");
    c_.fill(0);
  }
  Mode(std::initializer_list<int> xs) : dim_(static_cast<int>(xs.size())) {
    if (dim_ < 1 || dim_ > kMaxDim) throw PreconditionError("Mode: dimension out of range");
    c_.fill(0);
    int i = 0;
    for (int x : xs) c_[i++] = x;
  }

  int dim() const { return dim_; }
  int operator[](int i) const { return c_[i]; }
  int& operator[](int i) { return c_[i]; }

  int l1() const {
    int s = 0;
    for (int i = 0; i < dim_; ++i) s += std::abs(c_[i]);
    return s;
  }
  bool is_zero() const {
    for (int i = 0; i < dim_; ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  Mode operator-() const {
    Mode m(dim_);
    for (int i = 0; i < dim_; ++i) m.c_[i] = -c_[i];
    return m;
  }
  Mode operator+(const Mode& o) const {
    Mode m(dim_);
    for (int i = 0; i < dim_; ++i) m.c_[i] = c_[i] + o.c_[i];
    return m;
  }
  Mode operator-(const Mode& o) const {
    Mode m(dim_);
    for (int i = 0; i < dim_; ++i) m.c_[i] = c_[i] - o.c_[i];
    return m;
  }
  bool operator==(const Mode& o) const { return dim_ == o.dim_ && c_ == o.c_; }
  bool operator!=(const Mode& o) const { return !(*this == o); }
  bool operator<(const Mode& o) const {
    if (dim_ != o.dim_) return dim_ < o.dim_;
    for (int i = 0; i < dim_; ++i)
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
  }

  // True when the first nonzero component is positive (the canonical
  // representative of the pair {nu, -nu}); false for the zero mode.
  bool is_canonical() const {
    for (int i = 0; i < dim_; ++i) {
      if (c_[i] != 0) return c_[i] > 0;
    }
    return false;
  }

  std::string str() const;

 private:
  std::array<int, kMaxDim> c_;
  int dim_;
};

// Frequency vector omega together with its Diophantine constants:
// |omega.nu| >= C0 |nu|^-tau for all nu != 0.  C0 == 0 means "not yet
// certified"; diophantine_scan produces an estimate.
struct FrequencyVector {
  std::vector<double> omega;
  double C0 = 0.0;
  double tau = 0.0;

  int dim() const { return static_cast<int>(omega.size()); }
  void validate() const {
    if (omega.empty() || omega.size() > kMaxDim)
      throw PreconditionError("FrequencyVector: dimension out of range");
    if (C0 < 0) throw PreconditionError("FrequencyVector: C0 must be >= 0");
    if (dim() >= 2 && C0 > 0 && tau < dim() - 1)
      throw PreconditionError("FrequencyVector: tau must be >= d-1");
  }
};

// omega.nu, the quantity whose smallness drives everything.
double small_divisor(const FrequencyVector& freq, const Mode& nu);

struct DecayMeta {
  double F;   // amplitude scale, > 0
  double xi;  // exponential decay rate, > 0
};

// Immutable sparse trigonometric series.  A real-valued series keeps exact
// conjugate symmetry: the mirror coefficient of every canonical mode is
// derived as the conjugate at construction time, so symmetry cannot drift.
class TrigSeries {
 public:
  static constexpr int kNoBudget = std::numeric_limits<int>::max();

  explicit TrigSeries(int dim = 1) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw PreconditionError("TrigSeries: bad dimension");
  }
  TrigSeries(int dim, std::vector<std::pair<Mode, Complex>> entries,
             bool real_valued = false,
             std::optional<DecayMeta> decay = std::nullopt,
             int support_budget = kNoBudget);

  int dim() const { return dim_; }
  bool real_valued() const { return real_valued_; }
  const std::optional<DecayMeta>& decay_meta() const { return decay_; }
  int support_budget() const { return budget_; }

  const std::map<Mode, Complex>& coeffs() const { return coeffs_; }
  Complex at(const Mode& nu) const {
    auto it = coeffs_.find(nu);
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
  }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }

  // Largest populated |nu|_1 (0 for the empty series).
  int support_radius() const;
  double l1_mass() const;
  double max_abs() const;

  TrigSeries operator+(const TrigSeries& o) const;
  TrigSeries operator-(const TrigSeries& o) const;
  TrigSeries scaled(Complex a) const;

  // Drops entries with |coeff| <= threshold (used by callers that build
  // series incrementally; exact zeros are always dropped on construction).
  TrigSeries pruned(double threshold) const;

  std::string to_text() const;
  static TrigSeries from_text(const std::string& text);

 private:
  friend TrigSeries convolve(const TrigSeries&, const TrigSeries&);

  int dim_;
  std::map<Mode, Complex> coeffs_;
  std::optional<DecayMeta> decay_;
  bool real_valued_ = false;
  int budget_ = kNoBudget;
};

// Cauchy product: result(nu) = sum_{nu1+nu2=nu} a(nu1) b(nu2).
// Support is contained in support(a)+support(b).  If the result exceeds the
// tighter of the two budgets, the tail beyond the budget is pruned only when
// its l1 mass is below 1e-16 of the total; otherwise a BudgetError is thrown.
TrigSeries convolve(const TrigSeries& a, const TrigSeries& b);

// sum_nu s(nu) e^{i (omega.nu) t}
Complex evaluate(const TrigSeries& s, const FrequencyVector& freq, double t);

// Time derivative in Fourier space: multiplies each coefficient by i omega.nu.
TrigSeries time_derivative(const TrigSeries& s, const FrequencyVector& freq);

struct DiophantineScan {
  double C0_est;    // min over 0 < |nu| <= N of |omega.nu| |nu|^tau
  Mode worst_mode;  // attains the minimum (canonical representative)
  int N;
};

// Exhaustive scan over 0 < |nu|_1 <= N.  Throws ResonanceError naming nu if
// an exact resonance omega.nu == 0 is found.
DiophantineScan diophantine_scan(const FrequencyVector& freq, int N);

// Nonlinearity g(x), realized as a polynomial: g(x) = sum_p coeff[p] x^p.
// "none" (empty coefficient list) selects the linear equation and requires a
// zero-average forcing.  Taylor data g_p = d^p g / dx^p is exact.
class Nonlinearity {
 public:
  static Nonlinearity quadratic() { return Nonlinearity({0.0, 0.0, 1.0}, "x^2"); }
  static Nonlinearity none() { return Nonlinearity({}, "none"); }
  Nonlinearity(std::vector<double> coeffs, std::string desc)
      : coeffs_(std::move(coeffs)), desc_(std::move(desc)) {}

  bool is_none() const { return coeffs_.empty(); }
  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  const std::string& description() const { return desc_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;
  // g_p at the point c0, for p = 0..degree.
  std::vector<double> taylor_at(double c0) const;

 private:
  std::vector<double> coeffs_;
  std::string desc_;
};

// Root of g(x) = f0 with g'(root) != 0, searched on [lo, hi].  Among valid
// roots those with g' > 0 are preferred, then the one of smallest magnitude
// (larger value on a +/- tie), which picks the positive square root for the
// quadratic model.  Throws DomainError when no admissible root exists.
double fixed_point_solve(const Nonlinearity& g, double f0, double lo, double hi);

// The full problem: eps x'' + x' + eps g(x) = eps f(omega t).
struct ProblemSpec {
  TrigSeries forcing;        // f; f(0-mode) is the average alpha
  FrequencyVector freq;
  Nonlinearity nonlinearity = Nonlinearity::quadratic();
  Complex epsilon{0.0, 0.0};
  double root_lo = 0.0, root_hi = 0.0;  // fixed-point search interval; 0,0 = auto
  double c0 = 0.0;                      // solved at construction

  ProblemSpec(TrigSeries f, FrequencyVector fr, Nonlinearity g, Complex eps,
              double lo = 0.0, double hi = 0.0);

  double alpha() const { return forcing.at(Mode(forcing.dim())).real(); }
  double gamma() const { return 1.0 / epsilon.real(); }
};

}  // namespace oscsum
