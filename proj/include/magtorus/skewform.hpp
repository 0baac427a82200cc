#pragma once

// Exact integer linear algebra for antisymmetric matrices: Frobenius normal
// form under unimodular congruence S^t * canonical * S = input, elementary
// divisor chains, and exact Pfaffians of selected minors. All arithmetic is
// arbitrary precision (intermediate swell in the reduction is unbounded for
// fixed-width integers).

#include <gmpxx.h>

#include <string>
#include <vector>

namespace magtorus {

using Int = mpz_class;
using IntMat = std::vector<std::vector<Int>>;

struct SkewIntMatrix {
  int n = 0;
  IntMat a;

  SkewIntMatrix() = default;
  // validates exact antisymmetry, throws std::invalid_argument otherwise
  explicit SkewIntMatrix(IntMat entries);
  static SkewIntMatrix zero(int n);
  static SkewIntMatrix from_int(const std::vector<std::vector<long long>>& m);

  const Int& operator()(int i, int j) const { return a[i][j]; }
  SkewIntMatrix scaled(const Int& c) const;
  std::vector<std::vector<long long>> to_i64() const;  // throws on overflow
};

struct FrobeniusForm {
  SkewIntMatrix canonical;    // block form: canonical(j, r+j) = -nu_j, canonical(r+j, j) = +nu_j
  IntMat s;                   // unimodular witness, s^t * canonical * s == input
  int half_rank = 0;          // r
  std::vector<Int> divisors;  // (nu_1, ..., nu_r), positive, nu_j | nu_{j+1}
};

FrobeniusForm frobenius_normal_form(const SkewIntMatrix& m);

bool validate_divisor_chain(const std::vector<Int>& divisors);

// Exact Pfaffian of the submatrix picked by `axes` (0-based, distinct, even
// count, taken in the given order). Convention for four axes (a,b,c,d):
// Pf = m_ab m_cd - m_ac m_bd + m_ad m_bc.
Int pfaffian_minor(const SkewIntMatrix& m, const std::vector<int>& axes);

// ---- exact matrix helpers (shared with tests and gauge/weyl plumbing) -----
IntMat identity_mat(int n);
IntMat mat_mul(const IntMat& a, const IntMat& b);
IntMat mat_transpose(const IntMat& a);
Int mat_det(IntMat a);  // fraction-free Bareiss elimination
IntMat mat_inverse_unimodular(const IntMat& a);  // requires |det| = 1

std::string mat_to_string(const IntMat& a);

}  // namespace magtorus
