#pragma once

// Reference implementations used by the tests. Nothing here calls into the
// library's numerics: dense storage, plain loops, textbook elimination.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

struct Dense {
  int n = 0;
  std::vector<double> a;  // row-major

  explicit Dense(int n_ = 0) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline std::vector<double> matvec(const Dense& m, const std::vector<double>& x) {
  std::vector<double> y(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) y[i] += m(i, j) * x[j];
  return y;
}

inline std::vector<double> matvec_transposed(const Dense& m, const std::vector<double>& x) {
  std::vector<double> y(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) y[j] += m(i, j) * x[i];
  return y;
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Dense m, std::vector<double> b) {
  const int n = m.n;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) throw std::runtime_error("singular dense system");
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      std::swap(b[c], b[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      if (f == 0.0) continue;
      for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= m(r, j) * x[j];
    x[r] = s / m(r, r);
  }
  return x;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0, d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return scale > 0.0 ? d / scale : d;
}

/// Random symmetric graph on n vertices; neighbour lists without the diagonal.
inline std::vector<std::vector<std::int32_t>> random_graph(int n, double density, std::mt19937_64& rng) {
  std::vector<std::set<std::int32_t>> s(n);
  std::bernoulli_distribution edge(density);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) {
        s[i].insert(j);
        s[j].insert(i);
      }
  std::vector<std::vector<std::int32_t>> out(n);
  for (int i = 0; i < n; ++i) out[i].assign(s[i].begin(), s[i].end());
  return out;
}

/// Dense matrix with random values on the diagonal plus the given graph.
inline Dense random_values(const std::vector<std::vector<std::int32_t>>& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dense m(static_cast<int>(g.size()));
  for (int i = 0; i < m.n; ++i) {
    m(i, i) = u(rng);
    for (int j : g[i]) m(i, j) = u(rng);
  }
  return m;
}

/// Random SPD matrix on a graph: symmetric off-diagonals, strictly dominant diagonal.
inline Dense random_spd(const std::vector<std::vector<std::int32_t>>& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dense m(static_cast<int>(g.size()));
  for (int i = 0; i < m.n; ++i)
    for (int j : g[i])
      if (j > i) m(i, j) = m(j, i) = u(rng);
  for (int i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.n; ++j)
      if (j != i) s += std::abs(m(i, j));
    m(i, i) = s + 0.5 + std::abs(u(rng));
  }
  return m;
}

inline std::vector<double> random_vector(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace oracle
