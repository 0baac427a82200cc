#include "magtorus/skewform.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace magtorus {

SkewIntMatrix::SkewIntMatrix(IntMat entries) : n(int(entries.size())), a(std::move(entries)) {
  for (const auto& row : a)
    if (int(row.size()) != n) throw std::invalid_argument("SkewIntMatrix: not square");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a[i][j] != -a[j][i])
        throw std::invalid_argument("SkewIntMatrix: not antisymmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
}

SkewIntMatrix SkewIntMatrix::zero(int n) {
  return SkewIntMatrix(IntMat(n, std::vector<Int>(n, 0)));
}

SkewIntMatrix SkewIntMatrix::from_int(const std::vector<std::vector<long long>>& m) {
  IntMat a(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (long long v : m[i]) a[i].emplace_back(static_cast<long>(v));
  return SkewIntMatrix(std::move(a));
}

SkewIntMatrix SkewIntMatrix::scaled(const Int& c) const {
  IntMat b = a;
  for (auto& row : b)
    for (auto& v : row) v *= c;
  return SkewIntMatrix(std::move(b));
}

std::vector<std::vector<long long>> SkewIntMatrix::to_i64() const {
  std::vector<std::vector<long long>> out(n, std::vector<long long>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!a[i][j].fits_slong_p()) throw std::overflow_error("SkewIntMatrix entry exceeds int64");
      out[i][j] = a[i][j].get_si();
    }
  return out;
}

IntMat identity_mat(int n) {
  IntMat e(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) e[i][i] = 1;
  return e;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  const int n = int(a.size()), m = int(b[0].size()), k = int(b.size());
  IntMat c(n, std::vector<Int>(m, 0));
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < k; ++p) {
      if (a[i][p] == 0) continue;
      for (int j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
    }
  return c;
}

IntMat mat_transpose(const IntMat& a) {
  const int n = int(a.size()), m = int(a[0].size());
  IntMat t(m, std::vector<Int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) t[j][i] = a[i][j];
  return t;
}

Int mat_det(IntMat a) {
  const int n = int(a.size());
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) { piv = i; break; }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : Int(-a[n - 1][n - 1]);
}

IntMat mat_inverse_unimodular(const IntMat& a) {
  const int n = int(a.size());
  Int det = mat_det(a);
  if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular");
  // adjugate via cofactors; n is small here (<= 16 in practice)
  IntMat inv(n, std::vector<Int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntMat minor(n - 1, std::vector<Int>(n - 1));
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor[rr][cc++] = a[r][c];
        }
        ++rr;
      }
      Int cof = mat_det(minor);
      if ((i + j) & 1) cof = -cof;
      inv[i][j] = det == 1 ? cof : Int(-cof);
    }
  return inv;
}

std::string mat_to_string(const IntMat& a) {
  std::ostringstream os;
  for (const auto& row : a) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j].get_str();
    os << "\n";
  }
  return os.str();
}

namespace {

// Congruence reduction state: A <- E^t A E keeps `orig = W^t A W` by W <- E^-1 W.
struct Reduction {
  IntMat a;  // working antisymmetric matrix
  IntMat w;  // witness accumulator
  int n;

  void swap_axes(int i, int j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    for (auto& row : a) std::swap(row[i], row[j]);
    std::swap(w[i], w[j]);  // E^-1 = same permutation acting on rows
  }

  void negate_axis(int i) {
    for (auto& v : a[i]) v = -v;
    for (auto& row : a) row[i] = -row[i];
    for (auto& v : w[i]) v = -v;  // E^-1 = E
  }

  // col_j += t*col_i and row_j += t*row_i on A; row_i -= t*row_j on W
  void addmul(int i, int j, const Int& t) {
    if (t == 0) return;
    for (int k = 0; k < n; ++k) a[k][j] += t * a[k][i];
    for (int k = 0; k < n; ++k) a[j][k] += t * a[i][k];
    for (int k = 0; k < n; ++k) w[i][k] -= t * w[j][k];
  }
};

// quotient with remainder minimized in absolute value
Int div_nearest(const Int& num, const Int& den) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Int r2 = r - den;  // remainder for q + 1
  if (abs(r2) < abs(r)) q += 1;
  return q;
}

}  // namespace

FrobeniusForm frobenius_normal_form(const SkewIntMatrix& m) {
  const int n = m.n;
  Reduction red{m.a, identity_mat(n), n};

  int t = 0;  // current 2x2 block start
  while (t + 1 < n) {
    // pivot: smallest-magnitude nonzero entry above the diagonal in the
    // remaining submatrix; ties broken by lowest row, then column, index
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (red.a[i][j] == 0) continue;
        Int mag = abs(red.a[i][j]);
        if (pi < 0 || mag < best) { best = mag; pi = i; pj = j; }
      }
    if (pi < 0) break;  // remaining submatrix is zero

    red.swap_axes(pi, t);   // pj > pi >= t, so the pivot column is untouched
    red.swap_axes(pj, t + 1);

    // clear rows t, t+1 beyond column t+1; re-pivot on any nonzero remainder
    bool clean = true;
    for (int c = t + 2; c < n; ++c) {
      if (red.a[t][c] != 0) {
        Int q = div_nearest(red.a[t][c], red.a[t][t + 1]);
        red.addmul(t + 1, c, -q);
        if (red.a[t][c] != 0) clean = false;
      }
      if (red.a[t + 1][c] != 0) {
        Int q = div_nearest(red.a[t + 1][c], red.a[t + 1][t]);
        red.addmul(t, c, -q);
        if (red.a[t + 1][c] != 0) clean = false;
      }
    }
    if (!clean) continue;  // smaller entries appeared; repeat pivot selection

    // divisibility: the pivot must divide every remaining entry
    const Int d = red.a[t][t + 1];
    int bi = -1, bj = -1;
    for (int i = t + 2; i < n && bi < 0; ++i)
      for (int j = i + 1; j < n; ++j)
        if (red.a[i][j] % d != 0) { bi = i; bj = j; break; }
    if (bi >= 0) {
      // pull the offending row into row t and re-run the block
      red.addmul(bi, t, 1);
      continue;
    }

    // normalize block sign to canonical(t, t+1) = -nu < 0
    if (red.a[t][t + 1] > 0) red.negate_axis(t);
    t += 2;
  }

  const int r = t / 2;

  // reorder pair layout (0,1)(2,3)... into block layout (j, r+j)
  {
    std::vector<int> target(n);
    for (int j = 0; j < r; ++j) { target[j] = 2 * j; target[r + j] = 2 * j + 1; }
    for (int a = 2 * r; a < n; ++a) target[a] = a;
    // realize the permutation new_axis a <- old axis target[a] with swaps
    std::vector<int> cur(n);
    for (int i = 0; i < n; ++i) cur[i] = i;  // cur[pos] = original axis id
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = i;
    for (int aidx = 0; aidx < n; ++aidx) {
      int want = target[aidx];
      int where = pos[want];
      if (where != aidx) {
        red.swap_axes(aidx, where);
        std::swap(pos[cur[aidx]], pos[cur[where]]);
        std::swap(cur[aidx], cur[where]);
      }
    }
  }

  FrobeniusForm out;
  out.canonical = SkewIntMatrix(red.a);
  out.s = std::move(red.w);
  out.half_rank = r;
  out.divisors.reserve(r);
  for (int j = 0; j < r; ++j) out.divisors.push_back(abs(red.a[j][r + j]));
  return out;
}

bool validate_divisor_chain(const std::vector<Int>& divisors) {
  for (const Int& d : divisors)
    if (d <= 0) return false;
  for (std::size_t j = 0; j + 1 < divisors.size(); ++j)
    if (divisors[j + 1] % divisors[j] != 0) return false;
  return true;
}

Int pfaffian_minor(const SkewIntMatrix& m, const std::vector<int>& axes) {
  if (axes.size() % 2 != 0) throw std::invalid_argument("pfaffian_minor: odd axis count");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] < 0 || axes[i] >= m.n) throw std::invalid_argument("pfaffian_minor: axis out of range");
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      if (axes[i] == axes[j]) throw std::invalid_argument("pfaffian_minor: repeated axis");
  }
  // recursive expansion along the first remaining axis
  struct Rec {
    const SkewIntMatrix& m;
    Int run(std::vector<int> ax) {
      if (ax.empty()) return 1;
      Int sum = 0;
      const int a0 = ax[0];
      for (std::size_t k = 1; k < ax.size(); ++k) {
        const Int& v = m.a[a0][ax[k]];
        if (v == 0) continue;
        std::vector<int> rest;
        rest.reserve(ax.size() - 2);
        for (std::size_t i = 1; i < ax.size(); ++i)
          if (i != k) rest.push_back(ax[i]);
        Int sub = run(std::move(rest));
        if (k % 2 == 1) sum += v * sub;  // k=1 is the (1,2) pairing, sign +
        else sum -= v * sub;
      }
      return sum;
    }
  };
  return Rec{m}.run(axes);
}

}  // namespace magtorus
