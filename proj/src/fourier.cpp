#include "oscsum/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace oscsum {

std::string Mode::str() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  s += ")";
  return s;
}

double small_divisor(const FrequencyVector& freq, const Mode& nu) {
  if (freq.dim() != nu.dim())
    throw DimensionMismatchError("small_divisor: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < freq.dim(); ++i) s += freq.omega[i] * nu[i];
  return s;
}

TrigSeries::TrigSeries(int dim, std::vector<std::pair<Mode, Complex>> entries,
                       bool real_valued, std::optional<DecayMeta> decay,
                       int support_budget)
    : dim_(dim), decay_(decay), real_valued_(real_valued), budget_(support_budget) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("TrigSeries: bad dimension");
  if (decay_ && (decay_->F <= 0 || decay_->xi <= 0))
    throw PreconditionError("TrigSeries: decay envelope requires F > 0 and xi > 0");
  for (auto& [nu, a] : entries) {
    if (nu.dim() != dim) throw DimensionMismatchError("TrigSeries: mode dimension mismatch");
    if (a == Complex(0.0, 0.0)) continue;
    coeffs_[nu] += a;
  }
  if (real_valued_) {
    // Derive every mirror from the canonical half so coeff(-nu) == conj(coeff(nu))
    // holds exactly; the zero mode is forced real.
    std::map<Mode, Complex> sym;
    for (auto& [nu, a] : coeffs_) {
      if (nu.is_zero()) {
        sym[nu] = Complex(a.real(), 0.0);
      } else if (nu.is_canonical()) {
        Complex mirror = coeffs_.count(-nu) ? coeffs_.at(-nu) : std::conj(a);
        Complex avg = 0.5 * (a + std::conj(mirror));
        if (avg != Complex(0.0, 0.0)) {
          sym[nu] = avg;
          sym[-nu] = std::conj(avg);
        }
      }
    }
    coeffs_ = std::move(sym);
  }
  if (decay_) {
    for (auto& [nu, a] : coeffs_) {
      double bound = decay_->F * std::exp(-decay_->xi * nu.l1());
      if (std::abs(a) > bound * (1 + 1e-12))
        throw PreconditionError("TrigSeries: coefficient at " + nu.str() +
                                " violates the declared decay envelope");
    }
  }
  if (budget_ != kNoBudget && support_radius() > budget_)
    throw BudgetError("TrigSeries: initial support exceeds the budget radius");
}

int TrigSeries::support_radius() const {
  int r = 0;
  for (auto& [nu, a] : coeffs_) r = std::max(r, nu.l1());
  return r;
}

double TrigSeries::l1_mass() const {
  double m = 0.0;
  for (auto& [nu, a] : coeffs_) m += std::abs(a);
  return m;
}

double TrigSeries::max_abs() const {
  double m = 0.0;
  for (auto& [nu, a] : coeffs_) m = std::max(m, std::abs(a));
  return m;
}

TrigSeries TrigSeries::operator+(const TrigSeries& o) const {
  if (dim_ != o.dim_) throw DimensionMismatchError("TrigSeries::operator+: dimension mismatch");
  TrigSeries r(dim_);
  r.coeffs_ = coeffs_;
  for (auto& [nu, a] : o.coeffs_) {
    auto& slot = r.coeffs_[nu];
    slot += a;
    if (slot == Complex(0.0, 0.0)) r.coeffs_.erase(nu);
  }
  r.real_valued_ = real_valued_ && o.real_valued_;
  r.budget_ = std::min(budget_, o.budget_);
  return r;
}

TrigSeries TrigSeries::operator-(const TrigSeries& o) const {
  return *this + o.scaled(Complex(-1.0, 0.0));
}

TrigSeries TrigSeries::scaled(Complex a) const {
  TrigSeries r(dim_);
  if (a == Complex(0.0, 0.0)) return r;
  for (auto& [nu, c] : coeffs_) r.coeffs_[nu] = a * c;
  r.real_valued_ = real_valued_ && a.imag() == 0.0;
  r.budget_ = budget_;
  return r;
}

TrigSeries TrigSeries::pruned(double threshold) const {
  TrigSeries r(dim_);
  for (auto& [nu, a] : coeffs_)
    if (std::abs(a) > threshold) r.coeffs_[nu] = a;
  r.real_valued_ = real_valued_;
  r.budget_ = budget_;
  return r;
}

std::string TrigSeries::to_text() const {
  // Line format: one "nu_1 ... nu_d re im" row per mode under a "# d=<d>"
  // header; hexadecimal floats make the round trip bit-exact.
  std::string out = "# d=" + std::to_string(dim_) + "\n";
  char buf[64];
  for (auto& [nu, a] : coeffs_) {
    for (int i = 0; i < dim_; ++i) {
      out += std::to_string(nu[i]);
      out += ' ';
    }
    std::snprintf(buf, sizeof buf, "%a %a\n", a.real(), a.imag());
    out += buf;
  }
  return out;
}

TrigSeries TrigSeries::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int d = -1;
  std::vector<std::pair<Mode, Complex>> entries;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("d=");
      if (pos == std::string::npos)
        throw PreconditionError("TrigSeries::from_text: malformed header");
      d = std::stoi(line.substr(pos + 2));
      continue;
    }
    if (d < 0) throw PreconditionError("TrigSeries::from_text: missing header");
    std::istringstream row(line);
    Mode nu(d);
    for (int i = 0; i < d; ++i)
      if (!(row >> nu[i]))
        throw PreconditionError("TrigSeries::from_text: bad mode on line " +
                                std::to_string(lineno));
    std::string re_s, im_s;
    if (!(row >> re_s >> im_s))
      throw PreconditionError("TrigSeries::from_text: bad amplitude on line " +
                              std::to_string(lineno));
    entries.emplace_back(nu, Complex(std::strtod(re_s.c_str(), nullptr),
                                     std::strtod(im_s.c_str(), nullptr)));
  }
  if (d < 0) throw PreconditionError("TrigSeries::from_text: empty input");
  return TrigSeries(d, std::move(entries));
}

TrigSeries convolve(const TrigSeries& a, const TrigSeries& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("convolve: dimension mismatch");
  TrigSeries r(a.dim());
  for (auto& [n1, c1] : a.coeffs_)
    for (auto& [n2, c2] : b.coeffs_) r.coeffs_[n1 + n2] += c1 * c2;
  for (auto it = r.coeffs_.begin(); it != r.coeffs_.end();) {
    if (it->second == Complex(0.0, 0.0))
      it = r.coeffs_.erase(it);
    else
      ++it;
  }
  r.budget_ = std::min(a.support_budget(), b.support_budget());
  if (r.budget_ != TrigSeries::kNoBudget) {
    double total = r.l1_mass(), tail = 0.0;
    for (auto& [nu, c] : r.coeffs_)
      if (nu.l1() > r.budget_) tail += std::abs(c);
    if (tail > 0.0) {
      if (tail > 1e-16 * total)
        throw BudgetError("convolve: support budget would discard " +
                          std::to_string(tail / total) + " of the l1 mass");
      for (auto it = r.coeffs_.begin(); it != r.coeffs_.end();)
        it = (it->first.l1() > r.budget_) ? r.coeffs_.erase(it) : std::next(it);
    }
  }
  r.real_valued_ = a.real_valued() && b.real_valued();
  return r;
}

Complex evaluate(const TrigSeries& s, const FrequencyVector& freq, double t) {
  if (s.dim() != freq.dim()) throw DimensionMismatchError("evaluate: dimension mismatch");
  Complex acc(0.0, 0.0);
  for (auto& [nu, a] : s.coeffs()) {
    double phase = small_divisor(freq, nu) * t;
    acc += a * Complex(std::cos(phase), std::sin(phase));
  }
  return acc;
}

TrigSeries time_derivative(const TrigSeries& s, const FrequencyVector& freq) {
  std::vector<std::pair<Mode, Complex>> entries;
  entries.reserve(s.size());
  for (auto& [nu, a] : s.coeffs())
    entries.emplace_back(nu, Complex(0.0, small_divisor(freq, nu)) * a);
  return TrigSeries(s.dim(), std::move(entries));
}

namespace {

// Enumerates all nu with 0 < |nu|_1 <= N whose first nonzero component is
// positive; |omega.nu| is even in nu, so half the lattice suffices.
template <typename F>
void for_each_canonical_mode(int d, int N, F&& fn) {
  Mode nu(d);
  auto rec = [&](auto&& self, int i, int budget, bool nonzero_seen) -> void {
    if (i == d) {
      if (nonzero_seen) fn(nu);
      return;
    }
    int lo = nonzero_seen ? -budget : 0;  // leading entries stay >= 0
    for (int v = lo; v <= budget; ++v) {
      nu[i] = v;
      self(self, i + 1, budget - std::abs(v), nonzero_seen || v != 0);
    }
    nu[i] = 0;
  };
  rec(rec, 0, N, false);
}

}  // namespace

DiophantineScan diophantine_scan(const FrequencyVector& freq, int N) {
  freq.validate();
  if (N < 1) throw PreconditionError("diophantine_scan: N must be >= 1");
  DiophantineScan out{std::numeric_limits<double>::infinity(), Mode(freq.dim()), N};
  for_each_canonical_mode(freq.dim(), N, [&](const Mode& nu) {
    double sd = std::abs(small_divisor(freq, nu));
    if (sd < std::numeric_limits<double>::min())
      throw ResonanceError("diophantine_scan: exact resonance at nu = " + nu.str());
    double v = sd * std::pow(static_cast<double>(nu.l1()), freq.tau);
    if (v < out.C0_est) {
      out.C0_est = v;
      out.worst_mode = nu;
    }
  });
  return out;
}

double Nonlinearity::value(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Nonlinearity::deriv(double x) const {
  double acc = 0.0;
  for (int p = degree(); p >= 1; --p) acc = acc * x + p * coeffs_[p];
  return acc;
}

double Nonlinearity::deriv2(double x) const {
  double acc = 0.0;
  for (int p = degree(); p >= 2; --p) acc = acc * x + p * (p - 1) * coeffs_[p];
  return acc;
}

std::vector<double> Nonlinearity::taylor_at(double c0) const {
  // Repeated synthetic division by (x - c0) shifts the polynomial to powers
  // of (x - c0); the shifted coefficients times p! are the derivatives g_p.
  int n = degree();
  std::vector<double> work = coeffs_, shifted(n + 1, 0.0);
  for (int p = 0; p <= n; ++p) {
    int m = static_cast<int>(work.size()) - 1;
    std::vector<double> quot(std::max(0, m), 0.0);
    double carry = m >= 0 ? work[m] : 0.0;
    for (int j = m - 1; j >= 0; --j) {
      quot[j] = carry;
      carry = work[j] + c0 * carry;
    }
    shifted[p] = (m >= 0) ? carry : 0.0;
    work = std::move(quot);
    if (work.empty()) break;
  }
  std::vector<double> g(n + 1, 0.0);
  double fact = 1.0;
  for (int p = 0; p <= n; ++p) {
    if (p > 0) fact *= p;
    g[p] = shifted[p] * fact;
  }
  return g;
}

double fixed_point_solve(const Nonlinearity& g, double f0, double lo, double hi) {
  if (g.is_none())
    throw PreconditionError("fixed_point_solve: the linear model has no fixed-point equation");
  if (!(hi > lo)) throw PreconditionError("fixed_point_solve: empty search interval");

  auto h = [&](double x) { return g.value(x) - f0; };

  // Bracket sign changes on a fine grid, then polish with bisection + Newton.
  const int cells = 4096;
  std::vector<double> roots;
  double prev_x = lo, prev_h = h(lo);
  if (prev_h == 0.0) roots.push_back(lo);
  for (int i = 1; i <= cells; ++i) {
    double x = lo + (hi - lo) * i / cells;
    double hx = h(x);
    if (hx == 0.0) {
      roots.push_back(x);
    } else if (prev_h != 0.0 && ((prev_h < 0) != (hx < 0))) {
      double a = prev_x, b = x;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b), hm = h(m);
        if (hm == 0.0) {
          a = b = m;
          break;
        }
        if ((hm < 0) == (prev_h < 0))
          a = m;
        else
          b = m;
      }
      double r = 0.5 * (a + b);
      for (int it = 0; it < 8; ++it) {
        double d = g.deriv(r);
        if (d == 0.0) break;
        double step = h(r) / d;
        r -= step;
        if (std::abs(step) < 1e-17 * std::max(1.0, std::abs(r))) break;
      }
      roots.push_back(r);
    }
    prev_x = x;
    prev_h = hx;
  }

  double scale = std::max(1.0, std::abs(f0));
  std::vector<double> valid;
  for (double r : roots)
    if (std::abs(h(r)) <= 1e-14 * scale && std::abs(g.deriv(r)) > 1e-8 * scale) valid.push_back(r);

  if (valid.empty())
    throw DomainError(
        "fixed_point_solve: no root of g(x) = f0 with g'(x) != 0 in [" + std::to_string(lo) +
        ", " + std::to_string(hi) +
        "]; the solvability condition (a root with nonvanishing derivative) fails here");

  std::vector<double> pos;
  for (double r : valid)
    if (g.deriv(r) > 0) pos.push_back(r);
  const std::vector<double>& pool = pos.empty() ? valid : pos;
  double best = pool.front();
  for (double r : pool) {
    if (std::abs(r) < std::abs(best) - 1e-15 ||
        (std::abs(std::abs(r) - std::abs(best)) <= 1e-15 && r > best))
      best = r;
  }
  return best;
}

ProblemSpec::ProblemSpec(TrigSeries f, FrequencyVector fr, Nonlinearity g, Complex eps,
                         double lo, double hi)
    : forcing(std::move(f)), freq(std::move(fr)), nonlinearity(std::move(g)), epsilon(eps) {
  freq.validate();
  if (forcing.dim() != freq.dim())
    throw DimensionMismatchError("ProblemSpec: forcing/frequency dimension mismatch");
  double f0 = forcing.at(Mode(forcing.dim())).real();
  if (nonlinearity.is_none()) {
    if (std::abs(f0) > 0.0)
      throw PreconditionError("ProblemSpec: the linear model requires zero-average forcing");
    c0 = 0.0;
    root_lo = root_hi = 0.0;
    return;
  }
  if (lo == 0.0 && hi == 0.0) {
    // Default bracket: the positive branch, wide enough for g(x) ~ f0.
    double r = std::max(1.0, 4.0 * std::sqrt(std::max(1.0, std::abs(f0))));
    lo = 1e-8;
    hi = r * 4;
  }
  root_lo = lo;
  root_hi = hi;
  if (nonlinearity.degree() == 2 && nonlinearity.coeffs()[0] == 0.0 &&
      nonlinearity.coeffs()[1] == 0.0 && f0 <= 0.0)
    throw PreconditionError(
        "ProblemSpec: the quadratic model needs a positive forcing average (c0 = sqrt(alpha))");
  c0 = fixed_point_solve(nonlinearity, f0, lo, hi);
}

}  // namespace oscsum
