#include "sitl/geometry.hpp"

#include <stdexcept>

namespace sitl {

RatVec mat_apply(const RatMat& m, const RatVec& x) {
  if (x.size() != m.cols) throw std::invalid_argument("mat_apply: size mismatch");
  RatVec y(m.rows, Rat(0));
  for (size_t r = 0; r < m.rows; ++r)
    for (size_t c = 0; c < m.cols; ++c)
      if (m.at(r, c) != 0) y[r] += m.at(r, c) * x[c];
  return y;
}

RatVec vec_sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec vec_scale(const RatVec& a, const Rat& k) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat norm_sq(const RatVec& v) { return dot(v, v); }

std::optional<RatVec> solve_linear(RatMat A, RatVec b) {
  const size_t m = A.rows, n = A.cols;
  std::vector<size_t> pivot_col;
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t p = row;
    while (p < m && A.at(p, col) == 0) ++p;
    if (p == m) continue;
    if (p != row) {
      for (size_t c = 0; c < n; ++c) std::swap(A.at(p, c), A.at(row, c));
      std::swap(b[p], b[row]);
    }
    Rat inv = A.at(row, col);
    for (size_t c = 0; c < n; ++c) A.at(row, c) /= inv;
    b[row] /= inv;
    for (size_t r = 0; r < m; ++r) {
      if (r == row || A.at(r, col) == 0) continue;
      Rat f = A.at(r, col);
      for (size_t c = 0; c < n; ++c) A.at(r, c) -= f * A.at(row, c);
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (size_t r = row; r < m; ++r)
    if (b[r] != 0) return std::nullopt; // 0 = nonzero: inconsistent
  RatVec x(n, Rat(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
  return x;
}

RatVec least_squares(const RatMat& A, const RatVec& b) {
  // Normal equations A^T A x = A^T b; consistent by construction.
  RatMat G(A.cols, A.cols);
  RatVec rhs(A.cols, Rat(0));
  for (size_t i = 0; i < A.cols; ++i) {
    for (size_t j = 0; j < A.cols; ++j) {
      Rat s = 0;
      for (size_t r = 0; r < A.rows; ++r) s += A.at(r, i) * A.at(r, j);
      G.at(i, j) = s;
    }
    Rat s = 0;
    for (size_t r = 0; r < A.rows; ++r) s += A.at(r, i) * b[r];
    rhs[i] = s;
  }
  auto x = solve_linear(G, rhs);
  if (!x) throw std::logic_error("normal equations inconsistent");
  return *x;
}

} // namespace sitl
