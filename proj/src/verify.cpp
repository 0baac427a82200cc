#include "magtorus/verify.hpp"

#include <cmath>
#include <random>

#include "magtorus/bundle.hpp"
#include "magtorus/spectra.hpp"
#include "magtorus/theta.hpp"
#include "magtorus/weyl.hpp"

namespace magtorus {

namespace {

constexpr unsigned long long kSeed = 0x2545f4914f6cdd1dull;

VecD rand_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, two_pi);
  VecD x(n);
  for (auto& c : x) c = u(rng);
  return x;
}

VecI rand_lvec(int n, std::mt19937_64& rng, int bound = 3) {
  std::uniform_int_distribution<int> d(-bound, bound);
  VecI l(n);
  for (auto& c : l) c = d(rng);
  return l;
}

WeylElement rand_element(const ContextPtr& ctx, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> zr(-3.0, 3.0);
  VecI l = rand_lvec(ctx->n, rng);
  VecD z(ctx->n);
  for (auto& c : z) c = zr(rng);
  return weyl_element(ctx, l, z, zr(rng));
}

// the canonical flux matrix of the adapted basis, nu_tilde_mat / q
SkewIntMatrix adapted_nu(const GroupContext& ctx) {
  IntMat a(ctx.n, std::vector<Int>(ctx.n, 0));
  for (int i = 0; i < ctx.n; ++i)
    for (int j = 0; j < ctx.n; ++j)
      if (ctx.q != 0) a[i][j] = Int(static_cast<long>(ctx.nu_tilde_mat[i][j] / ctx.q));
  return SkewIntMatrix(std::move(a));
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const GaugeConfig& cfg, const VerifyOptions& opts) {
  require(cfg.n <= 4, "verify: quadrature-backed checks are limited to n <= 4");
  std::vector<CheckResult> out;
  auto push = [&](const std::string& name, double measured, double tol) {
    out.push_back({name, measured, tol, measured <= tol});
  };

  const int n = cfg.n;
  int grid = opts.grid;
  if (grid <= 0) grid = n <= 2 ? 48 : (n == 3 ? 20 : 10);

  // ---- quasifactor: cocycle, flux recovery -------------------------------
  {
    std::mt19937_64 rng(kSeed);
    auto v = make_quasifactor(cfg);
    double worst = 0;
    for (int k = 0; k < opts.samples; ++k) {
      auto l = rand_lvec(n, rng);
      auto lp = rand_lvec(n, rng);
      auto x = rand_point(n, rng);
      worst = std::max(worst, std::abs(cocycle_defect(v, l, lp, x) - cplx(1, 0)));
    }
    push("cocycle_defect", worst, 1e-12);

    double nu_err = 0;
    for (int k = 0; k < 25; ++k) {
      auto l = rand_lvec(n, rng);
      auto lp = rand_lvec(n, rng);
      auto x = rand_point(n, rng);
      long long expect = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) expect += cfg.q * l[a] * cfg.nu.a[a][b].get_si() * lp[b];
      nu_err = std::max(nu_err, std::abs(double(recover_nu(v, l, lp, x) - expect)));
    }
    push("recover_nu", nu_err, 1e-9);

    QuadOptions qo;
    qo.grid = std::max(16, grid / 2);
    qo.exec = opts.exec;
    double flux_err = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        flux_err = std::max(
            flux_err, std::abs(flux_quadrature(cfg, a, b, qo) - two_pi * cfg.nu.a[a][b].get_d()));
    push("flux_two_route", flux_err, 1e-9);
  }

  // ---- group laws ---------------------------------------------------------
  auto ctx = GroupContext::make(n, cfg.q, cfg.nu);
  {
    std::mt19937_64 rng(kSeed + 1);
    double assoc = 0;
    for (int k = 0; k < 200; ++k) {
      auto g = rand_element(ctx, rng);
      auto h = rand_element(ctx, rng);
      auto w = rand_element(ctx, rng);
      auto lhs = multiply(multiply(g, h), w);
      auto rhs = multiply(g, multiply(h, w));
      double d = phase_dist(lhs.phase, rhs.phase);
      for (int a = 0; a < n; ++a) d = std::max(d, std::abs(lhs.z[a] - rhs.z[a]));
      assoc = std::max(assoc, d);
    }
    push("weyl_associativity", assoc, 1e-12);

    double invdef = 0;
    for (int k = 0; k < 50; ++k) {
      auto g = rand_element(ctx, rng);
      auto p = multiply(g, inverse(g));
      double d = phase_dist(p.phase, 0.0);
      for (int a = 0; a < n; ++a) d = std::max(d, std::abs(p.z[a]));
      invdef = std::max(invdef, d);
    }
    push("weyl_identity_inverse", invdef, 1e-13);

    auto gens = magnetic_generators(ctx);
    double clock = 0;
    for (int j = 0; j < ctx->r; ++j) {
      auto c = commutator(gens[j], gens[ctx->r + j]);
      clock = std::max(clock, phase_dist(c.phase, pi / double(ctx->nu_tilde[j])));
    }
    push("clock_shift_phase", clock, 1e-14);

    auto zetas = casimirs(ctx);
    double central = 0;
    for (const auto& zeta : zetas)
      for (int k = 0; k < 50; ++k) {
        auto g = rand_element(ctx, rng);
        auto c = commutator(zeta, g);
        double d = phase_dist(c.phase, 0.0);
        for (int a = 0; a < n; ++a) d = std::max(d, std::abs(c.z[a]) + std::abs(double(c.l[a])));
        central = std::max(central, d);
      }
    push("casimir_centrality", central, 1e-12);

    double deco = 0;
    for (int k = 0; k < 50; ++k) {
      auto g = rand_element(ctx, rng);
      auto back = recompose(decompose(g), ctx);
      double d = phase_dist(back.phase, g.phase);
      for (int a = 0; a < n; ++a) {
        d = std::max(d, std::abs(back.z[a] - g.z[a]));
        d = std::max(d, std::abs(double(back.l[a] - g.l[a])));
      }
      deco = std::max(deco, d);
    }
    push("decompose_round_trip", deco, 1e-11);
  }

  // ---- states: orthonormality, quasiperiodicity, slice oracle -------------
  {
    VecD alpha(n);
    for (int a = 0; a < n; ++a) alpha[a] = mod_one(0.17 + 0.23 * a);
    TruncationSpec trunc{opts.basis_n_max, 1, grid};
    auto basis = enumerate_basis(*ctx, trunc);
    // orthonormality of a subfamily is still a sharp check; large divisor
    // chains would otherwise blow the basis up (the h count is prod 2 nu_j)
    if (basis.size() > 24) basis.resize(24);
    GridSpec gs{grid, {}, opts.exec};
    std::vector<VecC> grids;
    std::vector<ThetaState> states;
    BuildOptions bo;
    bo.domain_margin = 1;
    for (const auto& idx : basis) {
      states.push_back(build_basis_state(ctx, alpha, idx, bo));
      grids.push_back(eval_state_grid(states.back(), gs));
    }
    double w = std::pow(two_pi / grid, n);
    double gram = 0;
    for (std::size_t i = 0; i < grids.size(); ++i)
      for (std::size_t j = 0; j < grids.size(); ++j) {
        cplx expect = i == j ? cplx(1, 0) : cplx(0, 0);
        gram = std::max(gram, std::abs(grid_inner(grids[i], grids[j], w, opts.exec) - expect));
      }
    push("orthonormality", gram, 1e-8);

    double qp = 0;
    GridSpec qp_grid{std::min(grid, 12), {}, opts.exec};
    for (int a = 0; a < n; ++a) {
      VecI l(n, 0);
      l[a] = 1;
      qp = std::max(qp, quasiperiodicity_residual(states.front(), l, qp_grid));
      l[a] = -1;
      qp = std::max(qp, quasiperiodicity_residual(states.back(), l, qp_grid));
    }
    push("quasiperiodicity", qp, 1e-10);

    if (ctx->r >= 1 && n <= 3) {
      double slice = 0;
      std::size_t count = std::min<std::size_t>(states.size(), 3);
      for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) {
          cplx cell = grid_inner(grids[i], grids[j], w, opts.exec);
          cplx fs = inner_product_fourier_slice(states[i], states[j]);
          slice = std::max(slice, std::abs(cell - fs));
        }
      push("fourier_slice_agreement", slice, 1e-8);
    }
  }

  // ---- bundle -------------------------------------------------------------
  {
    auto nu_ad = adapted_nu(*ctx);
    GaugeConfig cfg_tri(n, cfg.q, nu_ad, VecD(n, 0.0),
                        triangular_shift(frobenius_normal_form(nu_ad)));
    TransitionData td{standard_cover(n, 1.0), make_quasifactor(cfg_tri)};
    push("bundle_cocycle", cocycle_check(td, std::min(opts.samples * 10, 1000)), 1e-12);

    auto ctx_ad = GroupContext::make(n, cfg.q, nu_ad);
    BasisIndex idx{std::vector<int>(ctx_ad->r, 0), std::vector<int>(ctx_ad->r, 0),
                   std::vector<int>(n - 2 * ctx_ad->r, 0)};
    auto s = build_basis_state(ctx_ad, VecD(n, 0.0), idx);
    auto sec = section_from_state(td, s);
    push("section_consistency", section_consistency(sec, std::min(opts.samples * 5, 500)), 1e-10);

    std::mt19937_64 rng(kSeed + 2);
    std::uniform_real_distribution<double> zr(-1.5, 1.5);
    VecD z(n);
    for (auto& c : z) c = zr(rng);
    auto g = weyl_element(ctx_ad, VecI(n, 0), z, 0.4);
    auto moved = translate_section(td, sec, cfg_tri, g);
    auto direct = section_from_state(td, apply_weyl(s, g));
    double tdef = 0;
    for (int k = 0; k < 100; ++k) {
      VecD pt = rand_point(n, rng);
      for (int i : td.cover.pieces_containing(pt))
        tdef = std::max(tdef, std::abs(moved.component(i, pt) - direct.component(i, pt)));
    }
    push("translate_vs_apply_weyl", tdef, 1e-10);
  }

  return out;
}

}  // namespace magtorus
