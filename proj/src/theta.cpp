#include "magtorus/theta.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace magtorus {

// ---- scalar theta functions -------------------------------------------------

cplx jacobi_theta(cplx z, cplx tau) {
  if (tau.imag() <= 0) throw std::domain_error("jacobi_theta: Im tau must be positive");
  cplx sum = 1.0;  // k = 0 term
  int quiet = 0;
  for (int k = 1; k < 1000000; ++k) {
    cplx tp = std::exp(cplx(0, pi) * double(k) * (2.0 * z + double(k) * tau));
    cplx tm = std::exp(cplx(0, pi) * double(-k) * (2.0 * z + double(-k) * tau));
    sum += tp + tm;
    double mag = std::abs(tp) + std::abs(tm);
    if (mag < 1e-16 * std::max(1.0, std::abs(sum))) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return sum;
}

cplx riemann_theta(const VecC& z, const std::vector<VecC>& tau) {
  const int r = int(z.size());
  require(int(tau.size()) == r, "riemann_theta: dimension mismatch");
  Eigen::MatrixXd im(r, r);
  for (int i = 0; i < r; ++i) {
    require(int(tau[i].size()) == r, "riemann_theta: tau not square");
    for (int j = 0; j < r; ++j) {
      require(std::abs(tau[i][j] - tau[j][i]) <= 1e-12, "riemann_theta: tau not symmetric");
      im(i, j) = tau[i][j].imag();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im);
  double lambda_min = es.eigenvalues().minCoeff();
  require(lambda_min > 0, "riemann_theta: Im tau not positive definite");
  require(r <= 3, "riemann_theta: r > 3 not supported");

  double zim = 0;
  for (int j = 0; j < r; ++j) zim = std::max(zim, std::abs(z[j].imag()));
  // |term| <= exp(-pi lambda_min |k|^2 + 2 pi |k|_1 max|Im z|)
  long long box = 2;
  while (box < 4000) {
    double kk = double(box);
    if (pi * lambda_min * kk * kk - two_pi * kk * double(r) * zim > 40.0) break;
    ++box;
  }
  require(std::pow(2.0 * double(box) + 1.0, r) <= 2.0e7,
          "riemann_theta: truncation box too large (Im tau too small)");
  cplx sum = 0;
  std::vector<long long> k(r, -box);
  while (true) {
    cplx e = 0;
    for (int i = 0; i < r; ++i) {
      e += 2.0 * double(k[i]) * z[i];
      for (int j = 0; j < r; ++j) e += double(k[i]) * tau[i][j] * double(k[j]);
    }
    sum += std::exp(cplx(0, pi) * e);
    int axis = 0;
    while (axis < r && k[axis] == box) {
      k[axis] = -box;
      ++axis;
    }
    if (axis == r) break;
    ++k[axis];
  }
  return sum;
}

// ---- PolyR -------------------------------------------------------------------

PolyR::PolyR(int r, std::vector<int> deg) : r_(r), deg_(std::move(deg)) {
  std::size_t sz = 1;
  for (int d : deg_) sz *= std::size_t(d + 1);
  c_.assign(sz, 0.0);
}

PolyR PolyR::one(int r) {
  PolyR p(r, std::vector<int>(r, 0));
  p.c_[0] = 1.0;
  return p;
}

PolyR PolyR::zero(int r) { return PolyR(r, std::vector<int>(r, 0)); }

std::size_t PolyR::index_of(const std::vector<int>& e) const {
  std::size_t idx = 0, stride = 1;
  for (int j = 0; j < r_; ++j) {
    idx += stride * std::size_t(e[j]);
    stride *= std::size_t(deg_[j] + 1);
  }
  return idx;
}

cplx PolyR::coeff(const std::vector<int>& e) const {
  for (int j = 0; j < r_; ++j)
    if (e[j] < 0 || e[j] > deg_[j]) return 0.0;
  return c_[index_of(e)];
}

bool PolyR::is_zero(double tol) const {
  for (const cplx& v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

cplx PolyR::eval(const VecC& y) const {
  // iterate multi-indices, axis 0 fastest, with running powers
  cplx sum = 0;
  std::vector<int> e(r_, 0);
  std::vector<std::vector<cplx>> pow(r_);
  for (int j = 0; j < r_; ++j) {
    pow[j].resize(deg_[j] + 1);
    pow[j][0] = 1.0;
    for (int d = 1; d <= deg_[j]; ++d) pow[j][d] = pow[j][d - 1] * y[j];
  }
  for (std::size_t idx = 0; idx < c_.size(); ++idx) {
    if (c_[idx] != 0.0) {
      cplx mono = c_[idx];
      for (int j = 0; j < r_; ++j) mono *= pow[j][e[j]];
      sum += mono;
    }
    int axis = 0;
    while (axis < r_ && e[axis] == deg_[axis]) e[axis++] = 0;
    if (axis == r_) break;
    ++e[axis];
  }
  return sum;
}

PolyR PolyR::scaled(cplx c) const {
  PolyR out = *this;
  for (auto& v : out.c_) v *= c;
  return out;
}

PolyR PolyR::mul_linear(int j, cplx a, cplx b) const {
  std::vector<int> nd = deg_;
  nd[j] += 1;
  PolyR out(r_, nd);
  std::vector<int> e(r_, 0);
  for (std::size_t idx = 0; idx < c_.size(); ++idx) {
    if (c_[idx] != 0.0) {
      std::vector<int> eb = e;
      out.c_[out.index_of(eb)] += b * c_[idx];
      eb[j] += 1;
      out.c_[out.index_of(eb)] += a * c_[idx];
    }
    int axis = 0;
    while (axis < r_ && e[axis] == deg_[axis]) e[axis++] = 0;
    if (axis == r_) break;
    ++e[axis];
  }
  return out;
}

PolyR PolyR::diff(int j) const {
  std::vector<int> nd = deg_;
  nd[j] = std::max(0, nd[j] - 1);
  PolyR out(r_, nd);
  std::vector<int> e(r_, 0);
  for (std::size_t idx = 0; idx < c_.size(); ++idx) {
    if (c_[idx] != 0.0 && e[j] >= 1) {
      std::vector<int> eb = e;
      eb[j] -= 1;
      out.c_[out.index_of(eb)] += double(e[j]) * c_[idx];
    }
    int axis = 0;
    while (axis < r_ && e[axis] == deg_[axis]) e[axis++] = 0;
    if (axis == r_) break;
    ++e[axis];
  }
  return out;
}

PolyR PolyR::shifted(int j, cplx delta) const {
  if (delta == 0.0) return *this;
  PolyR out(r_, deg_);
  // binomial table up to deg_[j]
  const int dmax = deg_[j];
  std::vector<std::vector<double>> binom(dmax + 1, std::vector<double>(dmax + 1, 0.0));
  for (int k = 0; k <= dmax; ++k) {
    binom[k][0] = 1.0;
    for (int m = 1; m <= k; ++m)
      binom[k][m] = binom[k - 1][m - 1] + (m <= k - 1 ? binom[k - 1][m] : 0.0);
  }
  std::vector<cplx> dpow(dmax + 1);
  dpow[0] = 1.0;
  for (int d = 1; d <= dmax; ++d) dpow[d] = dpow[d - 1] * (-delta);
  std::vector<int> e(r_, 0);
  for (std::size_t idx = 0; idx < c_.size(); ++idx) {
    if (c_[idx] != 0.0) {
      const int k = e[j];
      std::vector<int> eb = e;
      for (int m = 0; m <= k; ++m) {
        eb[j] = m;
        out.c_[out.index_of(eb)] += binom[k][m] * dpow[k - m] * c_[idx];
      }
    }
    int axis = 0;
    while (axis < r_ && e[axis] == deg_[axis]) e[axis++] = 0;
    if (axis == r_) break;
    ++e[axis];
  }
  return out;
}

PolyR PolyR::plus(const PolyR& other) const {
  std::vector<int> nd(r_);
  for (int j = 0; j < r_; ++j) nd[j] = std::max(deg_[j], other.deg_[j]);
  PolyR out(r_, nd);
  auto accumulate = [&](const PolyR& p) {
    std::vector<int> e(p.r_, 0);
    for (std::size_t idx = 0; idx < p.c_.size(); ++idx) {
      if (p.c_[idx] != 0.0) out.c_[out.index_of(e)] += p.c_[idx];
      int axis = 0;
      while (axis < p.r_ && e[axis] == p.deg_[axis]) e[axis++] = 0;
      if (axis == p.r_) break;
      ++e[axis];
    }
  };
  accumulate(*this);
  accumulate(other);
  return out;
}

// ---- state construction -------------------------------------------------------

double norm_const(const GroupContext& ctx, const VecD& alpha_tilde) {
  double n = std::pow(two_pi, -0.5 * ctx.n);
  for (int j = 0; j < ctx.r; ++j) {
    double nt = double(ctx.nu_tilde[j]);
    n *= std::pow(nt, -0.25);
    n *= std::exp(-pi * alpha_tilde[ctx.r + j] * alpha_tilde[ctx.r + j] / (2.0 * nt));
  }
  return n;
}

namespace {

void check_state_ops(const ThetaState& s, const char* what) {
  require(s.ctx != nullptr, std::string(what) + ": state without context");
  require(s.gaussian, std::string(what) + ": requires a Gaussian-damped state");
}

void validate_index(const GroupContext& ctx, const BasisIndex& idx) {
  require(int(idx.n_occ.size()) == ctx.r, "BasisIndex: n_occ size mismatch");
  require(int(idx.h.size()) == ctx.r, "BasisIndex: h size mismatch");
  require(int(idx.l_free.size()) == ctx.n - 2 * ctx.r, "BasisIndex: l_free size mismatch");
  for (int j = 0; j < ctx.r; ++j) {
    require(idx.n_occ[j] >= 0, "BasisIndex: negative Landau index");
    require(idx.h[j] >= 0 && idx.h[j] < 2 * ctx.nu_tilde[j], "BasisIndex: h outside the H range");
  }
}

}  // namespace

ThetaState build_basis_state(const ContextPtr& ctx, const VecD& alpha_tilde,
                             const BasisIndex& idx, const BuildOptions& opts) {
  require(int(alpha_tilde.size()) == ctx->n, "build_basis_state: alpha size mismatch");
  validate_index(*ctx, idx);
  const int n = ctx->n, r = ctx->r;
  VecD alpha = rep_label_from_casimirs(alpha_tilde);

  ThetaState s;
  s.ctx = ctx;
  s.alpha = alpha;
  s.trunc_eps = opts.trunc_eps;
  s.domain_margin = opts.domain_margin;

  // ground-state lattice sum: per-axis k ranges covering the evaluation domain
  std::vector<std::pair<long long, long long>> ranges(r);
  for (int j = 0; j < r; ++j) {
    double nt = double(ctx->nu_tilde[j]);
    double cut = std::sqrt(4.0 * ctx->b_tilde[j] * std::log(1.0 / opts.trunc_eps));
    double lo = -2.0 * nt * (opts.domain_margin + 1) - cut - alpha[j];
    double hi = 2.0 * nt * opts.domain_margin + cut - alpha[j];
    ranges[j] = {std::llround(std::ceil(lo)), std::llround(std::floor(hi))};
  }
  double nrm = norm_const(*ctx, alpha);
  std::vector<long long> k(r);
  for (int j = 0; j < r; ++j) k[j] = ranges[j].first;
  while (true) {
    ThetaTerm t{cplx(nrm, 0.0), VecC(n, 0.0), VecC(r, 0.0), PolyR::one(r)};
    for (int j = 0; j < r; ++j) {
      t.freq[j] = double(k[j]);
      t.off[j] = cplx(double(k[j]) + alpha[j], alpha[r + j]);
    }
    s.terms.push_back(std::move(t));
    if (r == 0) break;
    int axis = 0;
    while (axis < r && k[axis] == ranges[axis].second) {
      k[axis] = ranges[axis].first;
      ++axis;
    }
    if (axis == r) break;
    ++k[axis];
  }

  // clock shifts, ladder raises, free plane waves
  auto gens = magnetic_generators(ctx);
  for (int j = 0; j < r; ++j)
    if (idx.h[j] != 0) s = apply_weyl(s, power(gens[j], idx.h[j]));
  for (int j = 0; j < r; ++j)
    for (int step = 0; step < idx.n_occ[j]; ++step) {
      s = apply_raising(s, j);
      for (auto& t : s.terms) t.coef /= std::sqrt(double(step + 1));
    }
  if (n > 2 * r) {
    VecI lfree(n, 0);
    for (int a = 0; a < n - 2 * r; ++a) lfree[2 * r + a] = idx.l_free[a];
    s = apply_weyl(s, plane_wave(ctx, lfree));
  }
  s.alpha = alpha;
  s.index = idx;
  return s;
}

// ---- term-wise operators -------------------------------------------------------

ThetaState apply_raising(const ThetaState& s, int j) {
  check_state_ops(s, "apply_raising");
  require(j >= 0 && j < s.ctx->r, "apply_raising: axis out of range");
  const double bt = s.ctx->b_tilde[j];
  ThetaState out = s;
  out.index.reset();
  for (auto& t : out.terms) {
    cplx c = t.freq[j] - cplx(0, 1) * t.freq[s.ctx->r + j] - t.off[j] + s.alpha[j] -
             cplx(0, 1) * s.alpha[s.ctx->r + j];
    PolyR p = t.poly.mul_linear(j, 2.0, c).plus(t.poly.diff(j).scaled(-2.0 * bt));
    t.poly = p.scaled(1.0 / std::sqrt(4.0 * bt));
  }
  return out;
}

ThetaState apply_lowering(const ThetaState& s, int j) {
  check_state_ops(s, "apply_lowering");
  require(j >= 0 && j < s.ctx->r, "apply_lowering: axis out of range");
  const double bt = s.ctx->b_tilde[j];
  ThetaState out = s;
  out.index.reset();
  for (auto& t : out.terms) {
    cplx c = t.freq[j] + cplx(0, 1) * t.freq[s.ctx->r + j] - t.off[j] + s.alpha[j] +
             cplx(0, 1) * s.alpha[s.ctx->r + j];
    PolyR p = t.poly.scaled(c).plus(t.poly.diff(j).scaled(2.0 * bt));
    t.poly = p.scaled(1.0 / std::sqrt(4.0 * bt));
  }
  return out;
}

ThetaState raise_state(const ThetaState& s, int j) {
  require(s.index.has_value(), "raise_state: state has no basis index");
  ThetaState out = apply_raising(s, j);
  BasisIndex idx = *s.index;
  double norm = std::sqrt(double(idx.n_occ[j] + 1));
  for (auto& t : out.terms) t.coef /= norm;
  idx.n_occ[j] += 1;
  out.index = idx;
  return out;
}

ThetaState lower_state(const ThetaState& s, int j) {
  require(s.index.has_value(), "lower_state: state has no basis index");
  require(s.index->n_occ[j] > 0, "lower_state: already in the ground level");
  ThetaState out = apply_lowering(s, j);
  BasisIndex idx = *s.index;
  double norm = std::sqrt(double(idx.n_occ[j]));
  for (auto& t : out.terms) t.coef /= norm;
  idx.n_occ[j] -= 1;
  out.index = idx;
  return out;
}

ThetaState apply_momentum(const ThetaState& s, int a) {
  check_state_ops(s, "apply_momentum");
  const int r = s.ctx->r;
  require(a >= 0 && a < s.ctx->n, "apply_momentum: axis out of range");
  ThetaState out = s;
  out.index.reset();
  if (a < r) {
    for (auto& t : out.terms)
      t.poly = t.poly.mul_linear(a, 1.0, t.freq[a] - t.off[a] + s.alpha[a]);
  } else if (a < 2 * r) {
    const int j = a - r;
    const double bt = s.ctx->b_tilde[j];
    for (auto& t : out.terms) {
      PolyR p = t.poly.mul_linear(j, cplx(0, 1), t.freq[a] + s.alpha[a]);
      t.poly = p.plus(t.poly.diff(j).scaled(cplx(0, -2.0 * bt)));
    }
  } else {
    for (auto& t : out.terms) t.coef *= t.freq[a] + s.alpha[a];
  }
  return out;
}

namespace {

// A real plane-wave frequency rho along a Gaussian axis r+j is an equivalent
// representation of a complex offset shift: e^{i rho x} e^{-y^2/4b} =
// e^{-rho^2/4b - i rho off/2b} e^{-(y - i rho)^2 / 4b}. Folding it keeps basis
// states in the canonical lattice-sum form (zero frequency on Gaussian axes).
void canonicalize_term(const ContextPtr& ctx, ThetaTerm& t) {
  for (int j = 0; j < ctx->r; ++j) {
    double rho = std::real(t.freq[ctx->r + j]);
    if (rho == 0.0) continue;
    const double bt = ctx->b_tilde[j];
    t.coef *= std::exp(-rho * rho / (4.0 * bt) - cplx(0, 1) * rho * t.off[j] / (2.0 * bt));
    t.off[j] -= cplx(0, rho);
    t.poly = t.poly.shifted(j, cplx(0, -rho));
    t.freq[ctx->r + j] -= rho;
  }
}

}  // namespace

ThetaState apply_weyl(const ThetaState& s, const WeylElement& g) {
  require(s.ctx != nullptr && g.ctx != nullptr, "apply_weyl: missing context");
  bool same = s.ctx == g.ctx ||
              (s.ctx->n == g.ctx->n && s.ctx->q == g.ctx->q && s.ctx->nu.a == g.ctx->nu.a);
  require(same, "apply_weyl: context mismatch");
  const int n = s.ctx->n, r = s.ctx->r;

  // global scalar e^{i[phase + l.w/2 + w^t qBeta w/2 + alpha.w]}
  double quad = 0;
  for (int j = 0; j < r; ++j) quad += s.ctx->b_tilde[j] * g.z[j] * g.z[r + j];
  double scalar = g.phase + 0.5 * dot(g.l, g.z) + quad + dot(s.alpha, g.z);
  cplx pref = std::exp(cplx(0, scalar));

  ThetaState out = s;
  out.index.reset();
  for (auto& t : out.terms) {
    // psi(x + w): per-term phase and Gaussian-argument shifts. The polynomial
    // coefficients stay fixed: its argument is the term's own y, which tracks
    // the shifted offset.
    cplx fw = 0;
    for (int a = 0; a < n; ++a) fw += t.freq[a] * g.z[a];
    t.coef *= pref * std::exp(cplx(0, 1) * fw);
    for (int j = 0; j < r; ++j) t.off[j] += 2.0 * s.ctx->b_tilde[j] * g.z[r + j];
    // plane-wave factors: e^{i l.x} and the x^t qBeta w cross term
    for (int a = 0; a < n; ++a) t.freq[a] += double(g.l[a]);
    for (int j = 0; j < r; ++j) t.freq[r + j] += 2.0 * s.ctx->b_tilde[j] * g.z[j];
    if (s.gaussian) canonicalize_term(s.ctx, t);
  }
  return out;
}

ThetaState scale_state(const ThetaState& s, cplx c) {
  ThetaState out = s;
  for (auto& t : out.terms) t.coef *= c;
  out.index.reset();
  return out;
}

ThetaState add_states(const ThetaState& a, const ThetaState& b) {
  require(a.ctx == b.ctx || (a.ctx && b.ctx && a.ctx->nu.a == b.ctx->nu.a),
          "add_states: context mismatch");
  require(a.gaussian == b.gaussian, "add_states: mixed term families");
  ThetaState out = a;
  out.index.reset();
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

ThetaState multiply_plane_wave(const ThetaState& s, const std::vector<int>& mode, cplx c) {
  require(int(mode.size()) == s.ctx->n, "multiply_plane_wave: mode size mismatch");
  ThetaState out = s;
  out.index.reset();
  for (auto& t : out.terms) {
    t.coef *= c;
    for (int a = 0; a < s.ctx->n; ++a) t.freq[a] += double(mode[a]);
    if (s.gaussian) canonicalize_term(s.ctx, t);
  }
  return out;
}

// ---- evaluation ------------------------------------------------------------------

cplx eval_state(const ThetaState& s, const VecD& x) {
  const int n = s.ctx->n, r = s.ctx->r;
  cplx total = 0;
  VecC y(r);
  for (const auto& t : s.terms) {
    cplx expo = 0;
    for (int a = 0; a < n; ++a) expo += cplx(0, 1) * t.freq[a] * x[a];
    for (int j = 0; j < r; ++j) {
      y[j] = 2.0 * s.ctx->b_tilde[j] * x[r + j] + t.off[j];
      if (s.gaussian) expo -= y[j] * y[j] / (4.0 * s.ctx->b_tilde[j]);
    }
    total += t.coef * t.poly.eval(y) * std::exp(expo);
  }
  return total;
}

VecC eval_state_grid(const ThetaState& s, const GridSpec& grid) {
  const int n = s.ctx->n;
  const int N = grid.points;
  require(N >= 2, "eval_state_grid: grid too small");
  double total_d = std::pow(double(N), n);
  require(total_d <= 5.0e8, "eval_state_grid: grid too large");
  VecD base = grid.base.empty() ? VecD(n, 0.0) : grid.base;
  require(int(base.size()) == n, "eval_state_grid: base size mismatch");
  const double h = two_pi / N;
  const std::size_t total = std::size_t(total_d + 0.5);
  VecC out(total);
  parallel_for(
      total,
      [&](std::size_t idx) {
        VecD x = base;
        std::size_t t = idx;
        for (int a = 0; a < n; ++a) {
          x[a] += h * double(t % N);
          t /= N;
        }
        out[idx] = eval_state(s, x);
      },
      grid.exec);
  return out;
}

cplx grid_inner(const VecC& a, const VecC& b, double cell_weight, Exec exec) {
  require(a.size() == b.size(), "grid_inner: size mismatch");
  cplx s = chunked_sum<cplx>(
      a.size(), [&](std::size_t i) { return std::conj(a[i]) * b[i]; }, cplx(0, 0), exec);
  return s * cell_weight;
}

namespace {

void check_compatible(const ThetaState& s1, const ThetaState& s2, const char* what) {
  bool ctx_ok = s1.ctx == s2.ctx ||
                (s1.ctx && s2.ctx && s1.ctx->n == s2.ctx->n && s1.ctx->q == s2.ctx->q &&
                 s1.ctx->nu.a == s2.ctx->nu.a);
  require(ctx_ok, std::string(what) + ": context mismatch");
  for (std::size_t i = 0; i < s1.alpha.size(); ++i)
    require(std::abs(s1.alpha[i] - s2.alpha[i]) <= 1e-12,
            std::string(what) + ": representation labels differ (states from different irreps)");
}

}  // namespace

cplx inner_product(const ThetaState& s1, const ThetaState& s2, const GridSpec& grid) {
  check_compatible(s1, s2, "inner_product");
  require(s1.gaussian && s2.gaussian, "inner_product: requires Gaussian-damped states");
  VecC v1 = eval_state_grid(s1, grid);
  VecC v2 = eval_state_grid(s2, grid);
  double w = std::pow(two_pi / grid.points, s1.ctx->n);
  return grid_inner(v1, v2, w, grid.exec);
}

// ---- Fourier-slice inner product ----------------------------------------------

namespace {

struct SliceTerm {
  cplx coef;
  VecC off;       // size r
  VecC free_freq; // size n - 2r
  PolyR poly;
};

// Slice family of a proper lattice-sum state: the Fourier coefficient c_h for
// h in K = prod [0, 2 nu_tilde_j), as a function on R^r x T^{n-2r}. Terms with
// kappa outside K are lattice-coherent copies of the K representatives
// (c_{h + 2 nu l}(x) = c_h(x + 2 pi l)); the line integral over R already
// accounts for them, so they are skipped here.
std::map<std::vector<long long>, std::vector<SliceTerm>> fold_slices(const ThetaState& s) {
  const int n = s.ctx->n, r = s.ctx->r;
  std::map<std::vector<long long>, std::vector<SliceTerm>> slices;
  for (const auto& t : s.terms) {
    std::vector<long long> h(r);
    bool representative = true;
    for (int j = 0; j < r; ++j) {
      double kr = std::real(t.freq[j]);
      long long kappa = std::llround(kr);
      require(std::abs(t.freq[j] - cplx(double(kappa), 0.0)) <= 1e-9,
              "fourier slice: term frequency is not an integer lattice frequency");
      require(std::abs(t.freq[r + j]) <= 1e-9,
              "fourier slice: state carries momentum in a Gaussian direction");
      h[j] = kappa;
      if (kappa < 0 || kappa >= 2 * s.ctx->nu_tilde[j]) representative = false;
    }
    if (!representative) continue;
    SliceTerm st{t.coef, t.off, VecC(n - 2 * r), t.poly};
    for (int a = 2 * r; a < n; ++a) st.free_freq[a - 2 * r] = t.freq[a];
    slices[h].push_back(std::move(st));
  }
  return slices;
}

}  // namespace

cplx inner_product_fourier_slice(const ThetaState& s1, const ThetaState& s2,
                                 const SliceOptions& opts) {
  check_compatible(s1, s2, "inner_product_fourier_slice");
  require(s1.gaussian && s2.gaussian, "inner_product_fourier_slice: requires Gaussian states");
  const int n = s1.ctx->n, r = s1.ctx->r;
  auto f1 = fold_slices(s1);
  auto f2 = fold_slices(s2);

  // integration ranges per Gaussian axis from all offsets in both states
  VecD xlo(r, 0.0), xhi(r, 0.0);
  for (int j = 0; j < r; ++j) {
    double lo = 1e300, hi = -1e300;
    auto scan = [&](const auto& fam) {
      for (const auto& [h, terms] : fam)
        for (const auto& t : terms) {
          lo = std::min(lo, -std::real(t.off[j]));
          hi = std::max(hi, -std::real(t.off[j]));
        }
    };
    scan(f1);
    scan(f2);
    if (lo > hi) { lo = 0; hi = 0; }
    double margin = std::sqrt(opts.tail * 4.0 * s1.ctx->b_tilde[j]);
    xlo[j] = (lo - margin) / (2.0 * s1.ctx->b_tilde[j]);
    xhi[j] = (hi + margin) / (2.0 * s1.ctx->b_tilde[j]);
  }

  const int nt = n - 2 * r;
  const int lp = opts.line_points, tp = opts.torus_points;
  double total_d = std::pow(double(lp), r) * std::pow(double(tp), nt);
  require(total_d <= 5.0e7, "inner_product_fourier_slice: sample count too large");
  const std::size_t total = std::size_t(total_d + 0.5);

  double weight = std::pow(two_pi, r) * std::pow(two_pi / tp, nt);
  for (int j = 0; j < r; ++j) weight *= (xhi[j] - xlo[j]) / double(lp);

  cplx result = 0;
  for (const auto& [h, terms1] : f1) {
    auto it = f2.find(h);
    if (it == f2.end()) continue;
    const auto& terms2 = it->second;
    auto slice_value = [&](const std::vector<SliceTerm>& terms, const VecD& xr,
                           const VecD& xt) {
      cplx v = 0;
      VecC y(r);
      for (const auto& t : terms) {
        cplx expo = 0;
        for (int j = 0; j < r; ++j) {
          y[j] = 2.0 * s1.ctx->b_tilde[j] * xr[j] + t.off[j];
          expo -= y[j] * y[j] / (4.0 * s1.ctx->b_tilde[j]);
        }
        for (int a = 0; a < nt; ++a) expo += cplx(0, 1) * t.free_freq[a] * xt[a];
        v += t.coef * t.poly.eval(y) * std::exp(expo);
      }
      return v;
    };
    result += chunked_sum<cplx>(
        total,
        [&](std::size_t idx) {
          VecD xr(r), xt(nt);
          std::size_t rest = idx;
          for (int j = 0; j < r; ++j) {
            xr[j] = xlo[j] + (xhi[j] - xlo[j]) * double(rest % lp) / double(lp);
            rest /= lp;
          }
          for (int a = 0; a < nt; ++a) {
            xt[a] = two_pi * double(rest % tp) / double(tp);
            rest /= tp;
          }
          return std::conj(slice_value(terms1, xr, xt)) * slice_value(terms2, xr, xt);
        },
        cplx(0, 0));
  }
  return result * weight;
}

// ---- quasiperiodicity ---------------------------------------------------------

cplx v_triangular(const GroupContext& ctx, const VecI& l, const VecD& x) {
  double e = 0;
  for (int j = 0; j < ctx.r; ++j) e -= 2.0 * double(ctx.nu_tilde[j]) * double(l[ctx.r + j]) * x[j];
  return std::exp(cplx(0, e));
}

double quasiperiodicity_residual(const ThetaState& s, const VecI& l, const GridSpec& grid) {
  const int n = s.ctx->n;
  require(int(l.size()) == n, "quasiperiodicity_residual: l size mismatch");
  const int N = grid.points;
  VecD base = grid.base.empty() ? VecD(n, 0.0) : grid.base;
  const double h = two_pi / N;
  const std::size_t total = std::size_t(std::pow(double(N), n) + 0.5);
  return chunked_max(
      total,
      [&](std::size_t idx) {
        VecD x = base;
        std::size_t t = idx;
        for (int a = 0; a < n; ++a) {
          x[a] += h * double(t % N);
          t /= N;
        }
        VecD xs = x;
        for (int a = 0; a < n; ++a) xs[a] += two_pi * double(l[a]);
        cplx lhs = eval_state(s, xs);
        cplx rhs = v_triangular(*s.ctx, l, x) * eval_state(s, x);
        return std::abs(lhs - rhs);
      },
      grid.exec);
}

// ---- holomorphic picture --------------------------------------------------------

ThetaState holomorphic_transform(const ThetaState& s) {
  check_state_ops(s, "holomorphic_transform");
  const int r = s.ctx->r;
  double nrm = norm_const(*s.ctx, s.alpha);
  ThetaState out = s;
  out.index.reset();
  out.gaussian = false;
  for (auto& t : out.terms) {
    t.coef /= nrm;
    for (int j = 0; j < r; ++j) {
      const double bt = s.ctx->b_tilde[j];
      cplx mu0 = cplx(s.alpha[j], s.alpha[r + j]);
      cplx delta = t.off[j] - mu0;
      t.coef *= std::exp(-delta * (2.0 * t.off[j] - delta) / (4.0 * bt));
      t.freq[r + j] += cplx(0, 1) * delta;
    }
  }
  return out;
}

ThetaState holomorphic_inverse(const ThetaState& s) {
  require(!s.gaussian, "holomorphic_inverse: state already carries the Gaussian factor");
  const int r = s.ctx->r;
  double nrm = norm_const(*s.ctx, s.alpha);
  ThetaState out = s;
  out.index.reset();
  out.gaussian = true;
  for (auto& t : out.terms) {
    t.coef *= nrm;
    for (int j = 0; j < r; ++j) {
      const double bt = s.ctx->b_tilde[j];
      cplx mu0 = cplx(s.alpha[j], s.alpha[r + j]);
      cplx delta = t.off[j] - mu0;
      t.coef *= std::exp(delta * (2.0 * t.off[j] - delta) / (4.0 * bt));
      t.freq[r + j] -= cplx(0, 1) * delta;
    }
  }
  return out;
}

double cauchy_riemann_residual(const ThetaState& s, int grid_points, double fd_step) {
  const int n = s.ctx->n, r = s.ctx->r;
  require(r >= 1, "cauchy_riemann_residual: no holomorphic directions (r = 0)");
  const int N = grid_points;
  const double h = two_pi / N;
  const std::size_t total = std::size_t(std::pow(double(N), 2 * r) + 0.5);
  // fourth-order central differences
  auto deriv = [&](VecD x, int axis) {
    cplx f[4];
    const double steps[4] = {2 * fd_step, fd_step, -fd_step, -2 * fd_step};
    const double save = x[axis];
    for (int i = 0; i < 4; ++i) {
      x[axis] = save + steps[i];
      f[i] = eval_state(s, x);
    }
    return (-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * fd_step);
  };
  return chunked_max(total, [&](std::size_t idx) {
    VecD x(n, 0.37);
    std::size_t t = idx;
    for (int a = 0; a < 2 * r; ++a) {
      x[a] = h * double(t % N);
      t /= N;
    }
    double worst = 0;
    cplx centre = eval_state(s, x);
    for (int j = 0; j < r; ++j) {
      cplx d1 = deriv(x, j);
      cplx d2 = deriv(x, r + j);
      double res = std::abs(pi * (d1 + cplx(0, 1) * d2)) / std::max(1.0, std::abs(centre));
      worst = std::max(worst, res);
    }
    return worst;
  });
}

}  // namespace magtorus
