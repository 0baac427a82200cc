#include "magtorus/weyl.hpp"

#include <cmath>
#include <stdexcept>

namespace magtorus {

namespace {

MatI to_i64(const IntMat& m) {
  MatI out(m.size(), std::vector<long long>(m.empty() ? 0 : m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (!m[i][j].fits_slong_p()) throw std::overflow_error("GroupContext: witness exceeds int64");
      out[i][j] = m[i][j].get_si();
    }
  return out;
}

void check_ctx(const WeylElement& g, const WeylElement& h) {
  require(g.ctx && h.ctx, "WeylElement: missing context");
  if (g.ctx == h.ctx) return;
  bool same = g.ctx->n == h.ctx->n && g.ctx->q == h.ctx->q && g.ctx->nu.a == h.ctx->nu.a;
  require(same, "WeylElement: context mismatch");
}

}  // namespace

std::shared_ptr<const GroupContext> GroupContext::make(int n, int q, const SkewIntMatrix& nu) {
  require(n > 0, "GroupContext: n must be positive");
  require(nu.n == n, "GroupContext: nu dimension mismatch");
  auto ctx = std::make_shared<GroupContext>();
  ctx->n = n;
  ctx->q = q;
  ctx->nu = nu;
  ctx->frob = frobenius_normal_form(nu.scaled(Int(q)));
  ctx->r = ctx->frob.half_rank;
  for (const Int& d : ctx->frob.divisors) {
    if (!d.fits_slong_p()) throw std::overflow_error("GroupContext: divisor exceeds int64");
    ctx->nu_tilde.push_back(d.get_si());
    ctx->b_tilde.push_back(d.get_d() / two_pi);
  }
  ctx->nu_tilde_mat = to_i64(ctx->frob.canonical.a);
  ctx->s = to_i64(ctx->frob.s);
  ctx->s_inv = to_i64(mat_inverse_unimodular(ctx->frob.s));
  return ctx;
}

WeylElement identity_element(const ContextPtr& ctx) {
  return WeylElement{ctx, VecI(ctx->n, 0), VecD(ctx->n, 0.0), 0.0};
}

WeylElement weyl_element(const ContextPtr& ctx, VecI l, VecD z, double phase) {
  require(int(l.size()) == ctx->n && int(z.size()) == ctx->n, "WeylElement: size mismatch");
  return WeylElement{ctx, std::move(l), std::move(z), mod_two_pi(phase)};
}

WeylElement weyl_element_raw(const ContextPtr& ctx, const VecI& l, const VecD& z, double phase) {
  require(int(l.size()) == ctx->n && int(z.size()) == ctx->n, "WeylElement: size mismatch");
  const int n = ctx->n;
  VecI la(n, 0);
  VecD za(n, 0.0);
  // l -> S^-t l, z -> S z
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      la[a] += ctx->s_inv[b][a] * l[b];
      za[a] += double(ctx->s[a][b]) * z[b];
    }
  return weyl_element(ctx, std::move(la), std::move(za), phase);
}

WeylElement plane_wave(const ContextPtr& ctx, const VecI& l) {
  return weyl_element(ctx, l, VecD(ctx->n, 0.0), 0.0);
}

WeylElement translation(const ContextPtr& ctx, const VecD& z) {
  return weyl_element(ctx, VecI(ctx->n, 0), z, 0.0);
}

WeylElement multiply(const WeylElement& g, const WeylElement& h) {
  check_ctx(g, h);
  const int n = g.ctx->n;
  VecI l(n);
  VecD z(n);
  for (int a = 0; a < n; ++a) {
    l[a] = g.l[a] + h.l[a];
    z[a] = g.z[a] + h.z[a];
  }
  // central increment +1/2 [k·y - h·z + 2 q y^t Abar z] for g=(h,y), h=(k,z)
  double kdoty = dot(h.l, g.z);
  double hdotz = dot(g.l, h.z);
  double quad = 0;
  for (int a = 0; a < n; ++a) {
    if (g.z[a] == 0.0) continue;
    for (int b = 0; b < n; ++b)
      if (g.ctx->nu_tilde_mat[a][b] != 0)
        quad += g.z[a] * g.ctx->q_abar(a, b) * h.z[b];
  }
  double delta = 0.5 * (kdoty - hdotz + 2.0 * quad);
  return WeylElement{g.ctx, std::move(l), std::move(z), mod_two_pi(g.phase + h.phase + delta)};
}

WeylElement inverse(const WeylElement& g) {
  VecI l(g.l.size());
  VecD z(g.z.size());
  for (std::size_t i = 0; i < g.l.size(); ++i) {
    l[i] = -g.l[i];
    z[i] = -g.z[i];
  }
  return WeylElement{g.ctx, std::move(l), std::move(z), mod_two_pi(-g.phase)};
}

WeylElement power(const WeylElement& g, long long k) {
  // single-exponential power: phases on (l,z) scale linearly, the quadratic
  // increments cancel pairwise (z^t Abar z = 0)
  VecI l(g.l.size());
  VecD z(g.z.size());
  for (std::size_t i = 0; i < g.l.size(); ++i) {
    l[i] = g.l[i] * k;
    z[i] = g.z[i] * double(k);
  }
  return WeylElement{g.ctx, std::move(l), std::move(z), mod_two_pi(g.phase * double(k))};
}

WeylElement commutator(const WeylElement& g, const WeylElement& h) {
  return multiply(multiply(g, h), multiply(inverse(g), inverse(h)));
}

bool same_element(const WeylElement& a, const WeylElement& b, double phase_tol, double z_tol) {
  if (a.l != b.l) return false;
  for (std::size_t i = 0; i < a.z.size(); ++i)
    if (std::abs(a.z[i] - b.z[i]) > z_tol) return false;
  return phase_dist(a.phase, b.phase) <= phase_tol;
}

std::vector<WeylElement> magnetic_generators(const ContextPtr& ctx) {
  std::vector<WeylElement> out;
  const int n = ctx->n, r = ctx->r;
  for (int j = 0; j < r; ++j) {
    // m_j = (u^{r+j})^{-1} e^{(i pi / nu_j) p_j}
    VecI l(n, 0);
    VecD z(n, 0.0);
    l[r + j] = -1;
    z[j] = pi / double(ctx->nu_tilde[j]);
    out.push_back(weyl_element(ctx, l, z, 0.0));
  }
  for (int j = 0; j < r; ++j) {
    // m_{r+j} = u^j e^{(i pi / nu_j) p_{r+j}}
    VecI l(n, 0);
    VecD z(n, 0.0);
    l[j] = 1;
    z[r + j] = pi / double(ctx->nu_tilde[j]);
    out.push_back(weyl_element(ctx, l, z, 0.0));
  }
  return out;
}

std::vector<WeylElement> casimirs(const ContextPtr& ctx) {
  std::vector<WeylElement> out;
  const int n = ctx->n;
  for (int a = 0; a < n; ++a) {
    // zeta_a = e^{i 2pi (p_a + 2 (qAbar)_{ab} x^b)}
    VecI l(n, 0);
    VecD z(n, 0.0);
    for (int b = 0; b < n; ++b) l[b] = 2 * ctx->nu_tilde_mat[a][b];
    z[a] = two_pi;
    out.push_back(weyl_element(ctx, l, z, 0.0));
  }
  return out;
}

bool is_central(const WeylElement& g, double tol) {
  const int n = g.ctx->n;
  std::vector<long long> m(n);
  for (int a = 0; a < n; ++a) {
    double w = g.z[a] / two_pi;
    m[a] = std::llround(w);
    if (std::abs(w - double(m[a])) > tol / two_pi) return false;
  }
  for (int a = 0; a < n; ++a) {
    long long need = 0;
    for (int b = 0; b < n; ++b) need += 2 * m[b] * g.ctx->nu_tilde_mat[b][a];
    if (g.l[a] != need) return false;
  }
  return true;
}

WeylDecomposition decompose(const WeylElement& g) {
  const auto& ctx = g.ctx;
  const int n = ctx->n, r = ctx->r;
  auto gens = magnetic_generators(ctx);
  WeylDecomposition d;
  d.central_phase = g.phase;
  for (int j = 0; j < r; ++j) {
    long long ej = -g.l[r + j];
    long long erj = g.l[j];
    WeylElement part = multiply(power(gens[j], ej), power(gens[r + j], erj));
    part.phase = mod_two_pi(part.phase + pi * double(g.l[j]) * double(g.l[r + j]) /
                                             (2.0 * double(ctx->nu_tilde[j])));
    d.m_parts.push_back(part);
    d.m_exponents.emplace_back(ej, erj);

    VecI zl(n, 0);
    VecD zz(n, 0.0);
    zz[j] = g.z[j] + double(g.l[r + j]) / (2.0 * ctx->b_tilde[j]);
    zz[r + j] = g.z[r + j] - double(g.l[j]) / (2.0 * ctx->b_tilde[j]);
    d.h3_parts.push_back(weyl_element(ctx, zl, zz, 0.0));
  }
  for (int a = 2 * r; a < n; ++a) {
    VecI yl(n, 0);
    VecD yz(n, 0.0);
    yl[a] = g.l[a];
    yz[a] = g.z[a];
    d.y_parts.push_back(weyl_element(ctx, yl, yz, 0.0));
  }
  return d;
}

WeylElement recompose(const WeylDecomposition& d, const ContextPtr& ctx) {
  WeylElement acc = identity_element(ctx);
  acc.phase = mod_two_pi(d.central_phase);
  for (const auto& p : d.m_parts) acc = multiply(acc, p);
  for (const auto& p : d.h3_parts) acc = multiply(acc, p);
  for (const auto& p : d.y_parts) acc = multiply(acc, p);
  return acc;
}

VecD rep_label_from_casimirs(const VecD& alpha_tilde) {
  VecD out(alpha_tilde.size());
  for (std::size_t i = 0; i < alpha_tilde.size(); ++i) out[i] = mod_one(alpha_tilde[i]);
  return out;
}

}  // namespace magtorus
