#pragma once

// Small dense least-squares helpers for the growth and remainder fits.

#include <cmath>
#include <vector>

#include "oscsum/errors.hpp"

namespace oscsum {

struct LsqFit {
  std::vector<double> params;
  double sse = 0.0;
  int n = 0;
  // Akaike information criterion for Gaussian residuals.
  double aic() const {
    double s = std::max(sse, 1e-300);
    return n * std::log(s / n) + 2.0 * (static_cast<double>(params.size()) + 1);
  }
};

// Ordinary least squares through normal equations; fine for <= 4 parameters.
inline LsqFit least_squares(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& y) {
  if (rows.empty() || rows.size() != y.size())
    throw PreconditionError("least_squares: empty or mismatched data");
  const int p = static_cast<int>(rows[0].size());
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) a[i][j] += rows[r][i] * rows[r][j];
      a[i][p] += rows[r][i] * y[r];
    }
  }
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (std::fabs(a[col][col]) < 1e-300)
      throw DomainError("least_squares: singular normal equations");
    for (int r = 0; r < p; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int j = col; j <= p; ++j) a[r][j] -= f * a[col][j];
    }
  }
  LsqFit fit;
  fit.n = static_cast<int>(rows.size());
  fit.params.resize(p);
  for (int i = 0; i < p; ++i) fit.params[i] = a[i][p] / a[i][i];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double pred = 0.0;
    for (int i = 0; i < p; ++i) pred += fit.params[i] * rows[r][i];
    fit.sse += (y[r] - pred) * (y[r] - pred);
  }
  return fit;
}

}  // namespace oscsum
