#pragma once

// Truncated univariate power series ("jets") over complex coefficients.
// Used to expand resummed quantities in powers of the small parameter and
// compare against the plain order-by-order expansion.

#include <complex>
#include <vector>

#include "oscsum/errors.hpp"

namespace oscsum {

class Jet {
 public:
  using C = std::complex<double>;

  explicit Jet(int degree) : c_(degree + 1, C(0.0, 0.0)) {}
  static Jet constant(int degree, C v) {
    Jet j(degree);
    j.c_[0] = v;
    return j;
  }
  // The expansion variable itself (value 0 at the expansion point).
  static Jet variable(int degree) {
    Jet j(degree);
    if (degree >= 1) j.c_[1] = C(1.0, 0.0);
    return j;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  C operator[](int k) const { return c_[k]; }
  C& operator[](int k) { return c_[k]; }

  Jet operator+(const Jet& o) const {
    check(o);
    Jet r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  Jet operator-(const Jet& o) const {
    check(o);
    Jet r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  Jet operator*(const Jet& o) const {
    check(o);
    Jet r(degree());
    for (int i = 0; i <= degree(); ++i) {
      if (c_[i] == C(0.0, 0.0)) continue;
      for (int j = 0; i + j <= degree(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
    }
    return r;
  }
  Jet operator*(C a) const {
    Jet r = *this;
    for (auto& x : r.c_) x *= a;
    return r;
  }

  Jet reciprocal() const {
    if (c_[0] == C(0.0, 0.0))
      throw PreconditionError("Jet::reciprocal: leading coefficient vanishes");
    Jet r(degree());
    r.c_[0] = C(1.0, 0.0) / c_[0];
    for (int n = 1; n <= degree(); ++n) {
      C acc(0.0, 0.0);
      for (int j = 1; j <= n; ++j) acc += c_[j] * r.c_[n - j];
      r.c_[n] = -acc / c_[0];
    }
    return r;
  }
  Jet operator/(const Jet& o) const { return *this * o.reciprocal(); }

 private:
  void check(const Jet& o) const {
    if (o.degree() != degree()) throw PreconditionError("Jet: degree mismatch");
  }
  std::vector<C> c_;
};

}  // namespace oscsum
