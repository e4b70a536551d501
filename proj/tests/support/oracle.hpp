#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// design path; everything is accumulated and solved in long double.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Real = long double;
using Matrix = std::vector<std::vector<Real>>;

inline Real branch(bool relu, Real u) { return relu ? (u > 0 ? u : 0) : std::fabs(u); }

/// Regressor row for the proposed linearizer: [f(v+b_1) .. f(v+b_N), v, 1].
inline std::vector<Real> proposed_row(double v, const std::vector<double>& biases, bool relu) {
  std::vector<Real> row;
  for (double b : biases) row.push_back(branch(relu, static_cast<Real>(v) + static_cast<Real>(b)));
  row.push_back(v);
  row.push_back(1);
  return row;
}

/// Regressor row for the Hammerstein linearizer: [v^2 .. v^K, v, 1].
inline std::vector<Real> power_row(double v, int order) {
  std::vector<Real> row;
  for (int k = 2; k <= order; ++k) row.push_back(std::pow(static_cast<Real>(v), k));
  row.push_back(v);
  row.push_back(1);
  return row;
}

struct System {
  Matrix gram;
  std::vector<Real> rhs;
};

/// gram = lambda I + sum rows^T rows; rhs = sum rows^T (x - v).
template <typename RowFn>
System normal_equations(const std::vector<std::vector<double>>& refs, const std::vector<std::vector<double>>& dist,
                        double lambda, std::size_t cols, RowFn&& row_of) {
  System s{Matrix(cols, std::vector<Real>(cols, 0)), std::vector<Real>(cols, 0)};
  for (std::size_t c = 0; c < cols; ++c) s.gram[c][c] = lambda;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    for (std::size_t n = 0; n < refs[r].size(); ++n) {
      const auto row = row_of(dist[r][n]);
      const Real target = static_cast<Real>(refs[r][n]) - static_cast<Real>(dist[r][n]);
      for (std::size_t i = 0; i < cols; ++i) {
        s.rhs[i] += row[i] * target;
        for (std::size_t j = 0; j < cols; ++j) s.gram[i][j] += row[i] * row[j];
      }
    }
  }
  return s;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<Real> solve(Matrix a, std::vector<Real> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
    if (a[piv][k] == 0) throw std::runtime_error("oracle: singular system");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Real acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a[k][j] * x[j];
    x[k] = acc / a[k][k];
  }
  return x;
}

/// Least-squares cost sum (v + row.w - x)^2.
template <typename RowFn>
Real cost(const std::vector<std::vector<double>>& refs, const std::vector<std::vector<double>>& dist,
          const std::vector<Real>& w, RowFn&& row_of) {
  Real e = 0;
  for (std::size_t r = 0; r < refs.size(); ++r)
    for (std::size_t n = 0; n < refs[r].size(); ++n) {
      const auto row = row_of(dist[r][n]);
      Real y = dist[r][n];
      for (std::size_t i = 0; i < w.size(); ++i) y += row[i] * w[i];
      e += (y - refs[r][n]) * (y - refs[r][n]);
    }
  return e;
}

}  // namespace oracle
