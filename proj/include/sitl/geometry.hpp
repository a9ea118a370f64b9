#pragma once

// Small dense exact-rational linear algebra for the predicate oracle.

#include "sitl/rational.hpp"

#include <optional>
#include <vector>

namespace sitl {

using RatVec = std::vector<Rat>;

struct RatMat {
  size_t rows = 0, cols = 0;
  std::vector<Rat> a; // row-major

  RatMat() = default;
  RatMat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  Rat& at(size_t r, size_t c) { return a[r * cols + c]; }
  const Rat& at(size_t r, size_t c) const { return a[r * cols + c]; }
  bool is_zero() const {
    for (auto& x : a)
      if (x != 0) return false;
    return true;
  }
};

RatVec mat_apply(const RatMat& m, const RatVec& x);
RatVec vec_sub(const RatVec& a, const RatVec& b);
RatVec vec_add(const RatVec& a, const RatVec& b);
RatVec vec_scale(const RatVec& a, const Rat& k);
Rat dot(const RatVec& a, const RatVec& b);
Rat norm_sq(const RatVec& v);

// Solve A x = b exactly; empty optional when inconsistent.  When the system
// is underdetermined, free variables are set to 0.
std::optional<RatVec> solve_linear(RatMat A, RatVec b);

// Least squares: argmin ||A x - b||^2 via normal equations (always
// consistent); returns x.
RatVec least_squares(const RatMat& A, const RatVec& b);

} // namespace sitl
