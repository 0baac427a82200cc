// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code; several also pin a
// wall-clock budget.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "magtorus/bundle.hpp"
#include "magtorus/spectra.hpp"
#include "magtorus/verify.hpp"

using namespace magtorus;

namespace {

int g_failures = 0;

struct Criterion {
  const char* label;
  std::chrono::steady_clock::time_point start;
  bool ok = true;
  std::string detail;

  explicit Criterion(const char* l) : label(l), start(std::chrono::steady_clock::now()) {}
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void finish(double budget_seconds = 0.0) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", label, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

SkewIntMatrix random_skew(int n, int bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMat a(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int v = dist(rng);
      a[i][j] = v;
      a[j][i] = -v;
    }
  return SkewIntMatrix(std::move(a));
}

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

ContextPtr ctx_n2(int nu_val, int q = 1) {
  return GroupContext::make(2, q, SkewIntMatrix::from_int({{0, -nu_val}, {nu_val, 0}}));
}

double state_sup_diff(const ThetaState& a, const ThetaState& b, int N = 24) {
  double worst = 0;
  const int n = a.ctx->n;
  std::vector<int> e(n, 0);
  while (true) {
    VecD x(n);
    for (int d = 0; d < n; ++d) x[d] = two_pi * e[d] / N;
    worst = std::max(worst, std::abs(eval_state(a, x) - eval_state(b, x)));
    int axis = 0;
    while (axis < n && e[axis] == N - 1) e[axis++] = 0;
    if (axis == n) break;
    ++e[axis];
  }
  return worst;
}

// ---- criterion 1: Frobenius round trip -------------------------------------

void criterion_frobenius() {
  Criterion c("criterion 1: Frobenius round trip, 200 random matrices n<=8");
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    int n = 1 + int(rng() % 8);
    auto m = random_skew(n, 9, rng);
    auto f = frobenius_normal_form(m);
    IntMat prod = mat_mul(mat_mul(mat_transpose(f.s), f.canonical.a), f.s);
    c.expect(prod == m.a, "round trip failed");
    Int det = mat_det(f.s);
    c.expect(det == 1 || det == -1, "witness not unimodular");
    c.expect(validate_divisor_chain(f.divisors), "divisor chain invalid");
  }
  c.finish(10.0);
}

// ---- criterion 2: cocycle suite ----------------------------------------------

void criterion_cocycle() {
  Criterion c("criterion 2: cocycle defect = 1 (1e-12) and exact flux recovery");
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> sdist(-0.4, 0.4);
  for (int gauge_idx = 0; gauge_idx < 10; ++gauge_idx) {
    int n = 2 + int(rng() % 3);
    int q = 1 + int(rng() % 3);
    auto nu = random_skew(n, 4, rng);
    MatD sbar;
    if (gauge_idx % 2) {
      sbar.assign(n, VecD(n, 0.0));
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) sbar[i][j] = sbar[j][i] = sdist(rng);
    }
    GaugeConfig cfg(n, q, nu, {}, sbar);
    auto v = make_quasifactor(cfg);
    for (int k = 0; k < 100; ++k) {
      auto l = rand_lvec(n, rng);
      auto lp = rand_lvec(n, rng);
      auto x = rand_point(n, rng);
      double defect = std::abs(cocycle_defect(v, l, lp, x) - cplx(1, 0));
      c.expect(defect < 1e-12, "cocycle defect " + std::to_string(defect));
      if (k < 20) {
        long long expect = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) expect += q * l[a] * nu.a[a][b].get_si() * lp[b];
        c.expect(recover_nu(v, l, lp, x) == expect, "recover_nu mismatch");
      }
      if (!c.ok) break;
    }
    if (!c.ok) break;
  }
  c.finish(5.0);
}

// ---- criterion 3: group laws ---------------------------------------------------

void criterion_group_laws() {
  Criterion c("criterion 3: group laws (associativity, clock phase, centrality, factor decomposition)");
  std::mt19937_64 rng(33);
  auto nu = random_skew(4, 3, rng);
  auto ctx = GroupContext::make(4, 2, nu);
  std::uniform_real_distribution<double> zr(-3.0, 3.0);
  auto rnd_el = [&] {
    VecI l = rand_lvec(4, rng);
    VecD z(4);
    for (auto& v : z) v = zr(rng);
    return weyl_element(ctx, l, z, zr(rng));
  };
  double assoc = 0;
  for (int k = 0; k < 200; ++k) {
    auto g = rnd_el(), h = rnd_el(), w = rnd_el();
    auto lhs = multiply(multiply(g, h), w);
    auto rhs = multiply(g, multiply(h, w));
    assoc = std::max(assoc, phase_dist(lhs.phase, rhs.phase));
  }
  c.expect(assoc < 1e-12, "associativity defect " + std::to_string(assoc));

  for (int nu_val : {1, 2, 3}) {
    auto c2 = ctx_n2(nu_val);
    auto m = magnetic_generators(c2);
    auto comm = commutator(m[0], m[1]);
    double d = phase_dist(comm.phase, pi / double(c2->nu_tilde[0]));
    c.expect(d < 1e-14, "clock-shift phase defect " + std::to_string(d));
  }

  auto zetas = casimirs(ctx);
  auto id = identity_element(ctx);
  for (const auto& zeta : zetas)
    for (int k = 0; k < 50; ++k) {
      auto g = rnd_el();
      c.expect(same_element(commutator(zeta, g), id, 1e-12, 1e-12), "casimir not central");
      if (!c.ok) break;
    }

  double deco = 0;
  for (int k = 0; k < 100; ++k) {
    auto g = rnd_el();
    auto back = recompose(decompose(g), ctx);
    double d = phase_dist(back.phase, g.phase);
    for (int a = 0; a < 4; ++a) d = std::max(d, std::abs(back.z[a] - g.z[a]));
    deco = std::max(deco, d);
  }
  c.expect(deco < 1e-11, "decomposition round trip defect " + std::to_string(deco));
  c.finish(5.0);
}

// ---- criterion 4: orthonormality -----------------------------------------------

void criterion_orthonormality() {
  Criterion c("criterion 4: Gram identity (1e-8) and Fourier-slice oracle agreement");
  GridSpec gs{64, {}, Exec::parallel};
  double w = std::pow(two_pi / gs.points, 2);
  for (int nu_val : {1, 2, 3}) {
    auto ctx = ctx_n2(nu_val);
    VecD alpha{0.21, 0.43};
    std::vector<ThetaState> states;
    std::vector<VecC> grids;
    for (int nocc = 0; nocc <= 3; ++nocc)
      for (int h = 0; h < 2 * nu_val; ++h) {
        states.push_back(build_basis_state(ctx, alpha, BasisIndex{{nocc}, {h}, {}}));
        grids.push_back(eval_state_grid(states.back(), gs));
      }
    double worst = 0;
    for (std::size_t i = 0; i < grids.size(); ++i)
      for (std::size_t j = 0; j < grids.size(); ++j) {
        cplx expect = i == j ? cplx(1, 0) : cplx(0, 0);
        worst = std::max(worst, std::abs(grid_inner(grids[i], grids[j], w) - expect));
      }
    c.expect(worst < 1e-8,
             "Gram deviation " + std::to_string(worst) + " at nu=" + std::to_string(nu_val));

    // Fourier-slice oracle vs cell quadrature
    std::size_t limit = nu_val == 1 ? states.size() : 6;
    double slice_worst = 0;
    for (std::size_t i = 0; i < limit; ++i)
      for (std::size_t j = 0; j < limit; ++j) {
        cplx cell = grid_inner(grids[i], grids[j], w);
        cplx fs = inner_product_fourier_slice(states[i], states[j]);
        slice_worst = std::max(slice_worst, std::abs(cell - fs));
      }
    c.expect(slice_worst < 1e-8, "slice oracle deviation " + std::to_string(slice_worst));
  }
  c.finish(60.0);
}

// ---- criterion 5: eigenrelations ------------------------------------------------

void criterion_eigenrelations() {
  Criterion c("criterion 5: clock/casimir/momentum eigenrelations and quasiperiodicity");
  {
    auto ctx = ctx_n2(2);
    VecD alpha{0.27, 0.62};
    auto gens = magnetic_generators(ctx);
    auto zetas = casimirs(ctx);
    for (int h = 0; h < 4; ++h) {
      auto s = build_basis_state(ctx, alpha, BasisIndex{{1}, {h}, {}});
      auto ms = apply_weyl(s, gens[1]);
      cplx ev = std::exp(cplx(0, pi * (alpha[1] - h) / 2.0));
      ThetaState expect = scale_state(s, ev);
      c.expect(state_sup_diff(ms, expect) < 1e-9, "clock eigenrelation");
      for (int a = 0; a < 2; ++a) {
        auto zs = apply_weyl(s, zetas[a]);
        ThetaState zexpect = scale_state(s, std::exp(cplx(0, two_pi * alpha[a])));
        c.expect(state_sup_diff(zs, zexpect) < 1e-9, "casimir eigenrelation");
      }
      auto ann = apply_lowering(build_basis_state(ctx, alpha, BasisIndex{{0}, {h}, {}}), 0);
      double worst = 0;
      for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
          worst = std::max(worst, std::abs(eval_state(ann, {two_pi * i / 32, two_pi * j / 32})));
      c.expect(worst < 1e-10, "annihilation residual " + std::to_string(worst));
    }
  }
  {
    // free momentum direction, n = 3 with r = 1
    auto nu = SkewIntMatrix::from_int({{0, -2, 0}, {2, 0, 0}, {0, 0, 0}});
    auto ctx = GroupContext::make(3, 1, nu);
    VecD alpha{0.22, 0.48, 0.77};
    BasisIndex idx{{0}, {1}, {-1}};
    auto s = build_basis_state(ctx, alpha, idx);
    auto ps = apply_momentum(s, 2);
    ThetaState expect = scale_state(s, -1.0 + alpha[2]);
    c.expect(state_sup_diff(ps, expect, 10) < 1e-9, "free momentum eigenrelation");
  }
  {
    auto ctx = ctx_n2(2);
    auto s = build_basis_state(ctx, {0.4, 0.25}, BasisIndex{{2}, {1}, {}});
    GridSpec qgrid{12, {}, Exec::parallel};
    for (int l1 = -2; l1 <= 2; ++l1)
      for (int l2 = -2; l2 <= 2; ++l2) {
        double res = quasiperiodicity_residual(s, {l1, l2}, qgrid);
        c.expect(res < 1e-10, "quasiperiodicity residual " + std::to_string(res));
        if (!c.ok) break;
      }
  }
  c.finish(60.0);
}

// ---- criterion 6: spectrum -------------------------------------------------------

void criterion_spectrum() {
  Criterion c("criterion 6: Landau spectrum, degeneracy, perturbed cluster, band sweep");
  for (int nu_val : {1, 2, 3}) {
    auto ctx = ctx_n2(nu_val);
    GaugeConfig plain(2, 1, ctx->nu);
    HamiltonianSpec spec{plain, 0.5, {0.2, 0.4}, {4, 0, 64}, false};
    auto asm_res = assemble_hamiltonian(ctx, spec);
    double diag_dev = 0;
    for (int i = 0; i < asm_res.matrix.rows(); ++i)
      for (int j = 0; j < asm_res.matrix.cols(); ++j) {
        double expect = i == j ? landau_energy(*ctx, spec.alpha_tilde, asm_res.basis[i]) : 0.0;
        diag_dev = std::max(diag_dev, std::abs(asm_res.matrix(i, j) - cplx(expect, 0)));
      }
    c.expect(diag_dev < 1e-8, "diagonal/closed-form deviation " + std::to_string(diag_dev));

    auto diag = diagonalize(asm_res.matrix, asm_res.basis, spec.alpha_tilde, spec.trunc);
    for (int d : diag.spectral.degeneracies)
      c.expect(d == 2 * nu_val, "degeneracy " + std::to_string(d));

    // perturbed: V' = 2 cos x^1 with amplitude 0.05
    FourierScalarMap vp;
    add_real_mode(vp, {1, 0}, cplx(0.05, 0.0));
    GaugeConfig pert(2, 1, ctx->nu, {}, {}, {}, vp);
    HamiltonianSpec pspec{pert, 0.5, {0.2, 0.4}, {4, 0, 64}, false};
    auto pasm = assemble_hamiltonian(ctx, pspec);
    auto pdiag = diagonalize(pasm.matrix, pasm.basis, pspec.alpha_tilde, pspec.trunc);
    const int cluster = 2 * nu_val;
    double gap0 = 2.0 * double(nu_val) / pi;
    double width = pdiag.spectral.eigenvalues[cluster - 1] - pdiag.spectral.eigenvalues[0];
    double sep = pdiag.spectral.eigenvalues[cluster] - pdiag.spectral.eigenvalues[cluster - 1];
    c.expect(width < 0.5 * gap0, "cluster width " + std::to_string(width));
    c.expect(sep > 0.5 * gap0, "cluster separation " + std::to_string(sep));
  }
  {
    auto ctx = ctx_n2(2);
    FourierScalarMap vp;
    add_real_mode(vp, {1, 0}, cplx(0.05, 0.0));
    GaugeConfig pert(2, 1, ctx->nu, {}, {}, {}, vp);
    HamiltonianSpec spec{pert, 0.5, {0.0, 0.0}, {3, 0, 48}, false};
    std::vector<VecD> grid{{0.3, 0.7}, {1.3, 0.7}, {0.3, 1.7}};
    auto sweep = band_sweep(ctx, spec, grid);
    double drift = 0;
    for (std::size_t i = 0; i < sweep[0].eigenvalues.size(); ++i) {
      drift = std::max(drift, std::abs(sweep[0].eigenvalues[i] - sweep[1].eigenvalues[i]));
      drift = std::max(drift, std::abs(sweep[0].eigenvalues[i] - sweep[2].eigenvalues[i]));
    }
    c.expect(drift < 1e-8, "band sweep label-shift drift " + std::to_string(drift));
  }
  c.finish(120.0);
}

// ---- criterion 7: bundle ----------------------------------------------------------

void criterion_bundle() {
  Criterion c("criterion 7: Cech cocycle, sections, lift changes, lifted translations");
  auto nu = SkewIntMatrix::from_int({{0, -2}, {2, 0}});
  GaugeConfig cfg(2, 1, nu, {0.0, 0.0}, triangular_shift(frobenius_normal_form(nu)));
  TransitionData td{standard_cover(2, 1.2), make_quasifactor(cfg)};
  double defect = cocycle_check(td, 1000);
  c.expect(defect < 1e-12, "cocycle defect " + std::to_string(defect));

  auto ctx = GroupContext::make(2, 1, nu);
  VecD alpha{0.0, 0.0};
  auto s = build_basis_state(ctx, alpha, BasisIndex{{1}, {1}, {}});
  auto sec = section_from_state(td, s);
  double cons = section_consistency(sec, 1000);
  c.expect(cons < 1e-10, "section consistency " + std::to_string(cons));

  std::vector<VecI> offsets{{1, 0}, {0, -1}, {2, 1}, {-1, 0}};
  TransitionData td2{td.cover.with_lift_offsets(offsets), td.v};
  c.expect(cocycle_check(td2, 500) < 1e-12, "lift-change cocycle");
  auto sec2 = section_from_state(td2, s);
  c.expect(section_consistency(sec2, 500) < 1e-10, "lift-change section consistency");

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> zr(-2.0, 2.0), u(0.0, two_pi);
  double tdef = 0;
  for (int trial = 0; trial < 3; ++trial) {
    VecD z{zr(rng), zr(rng)};
    auto g = weyl_element(ctx, {0, 0}, z, zr(rng));
    auto moved = translate_section(td, sec, cfg, g);
    auto direct = section_from_state(td, apply_weyl(s, g));
    for (int k = 0; k < 100; ++k) {
      VecD pt{u(rng), u(rng)};
      for (int i : td.cover.pieces_containing(pt))
        tdef = std::max(tdef, std::abs(moved.component(i, pt) - direct.component(i, pt)));
    }
  }
  c.expect(tdef < 1e-10, "translate vs apply_weyl " + std::to_string(tdef));
  c.finish(60.0);
}

// ---- criterion 8: theta identities ---------------------------------------------------

void criterion_theta() {
  Criterion c("criterion 8: theta identities and Cauchy-Riemann residual");
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double qp = 0;
  for (int k = 0; k < 100; ++k) {
    cplx z(u(rng), u(rng));
    cplx tau(0.5 * u(rng), 0.4 + 0.8 * std::abs(u(rng)));
    cplx lhs = jacobi_theta(z + tau, tau) * std::exp(cplx(0, pi) * (2.0 * z + tau));
    cplx rhs = jacobi_theta(z, tau);
    qp = std::max(qp, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  c.expect(qp < 1e-12, "Jacobi quasi-periodicity " + std::to_string(qp));

  double fact = 0;
  for (int k = 0; k < 25; ++k) {
    VecC z{cplx(u(rng), 0.5 * u(rng)), cplx(u(rng), 0.5 * u(rng))};
    double t1 = 0.3 + std::abs(u(rng)), t2 = 0.3 + std::abs(u(rng));
    std::vector<VecC> tau{{cplx(0, t1), cplx(0, 0)}, {cplx(0, 0), cplx(0, t2)}};
    cplx lhs = riemann_theta(z, tau);
    cplx rhs = jacobi_theta(z[0], tau[0][0]) * jacobi_theta(z[1], tau[1][1]);
    fact = std::max(fact, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  c.expect(fact < 1e-12, "diagonal factorization " + std::to_string(fact));

  // Cauchy-Riemann residual over the theta-spanned (lowest Landau) tower
  for (int nu_val : {1, 2}) {
    auto ctx = ctx_n2(nu_val);
    for (int h = 0; h < 2 * nu_val; ++h) {
      auto s = build_basis_state(ctx, {0.31, 0.64}, BasisIndex{{0}, {h}, {}});
      double res = cauchy_riemann_residual(holomorphic_transform(s));
      c.expect(res < 1e-8, "CR residual " + std::to_string(res));
    }
  }
  c.finish(60.0);
}

// ---- criterion 9: determinism ----------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  Criterion c("criterion 9: verify report byte-identical across runs");
#ifdef MAGTORUS_CLI_PATH
  const std::string cli = MAGTORUS_CLI_PATH;
  const std::string cfg_path = "acceptance_verify_config.json";
  {
    std::ofstream cfg(cfg_path, std::ios::binary);
    cfg << R"({
  "problem": {"n": 2, "q": 1, "nu": [[0, -2], [2, 0]], "alpha": [0.1, 0.3]},
  "numerics": {"grid": 32},
  "verify": {"samples": 40, "grid": 32}
})";
  }
  int rc1 = std::system((cli + " verify --config " + cfg_path + " --out acc_run1.json").c_str());
  int rc2 = std::system((cli + " verify --config " + cfg_path + " --out acc_run2.json").c_str());
  c.expect(rc1 == 0, "first verify run exited " + std::to_string(rc1));
  c.expect(rc2 == 0, "second verify run exited " + std::to_string(rc2));
  std::string a = read_file("acc_run1.json");
  std::string b = read_file("acc_run2.json");
  c.expect(!a.empty() && a == b, "reports differ");
#else
  c.expect(false, "CLI path not configured");
#endif
  c.finish(120.0);
}

}  // namespace

int main() {
  criterion_frobenius();
  criterion_cocycle();
  criterion_group_laws();
  criterion_orthonormality();
  criterion_eigenrelations();
  criterion_spectrum();
  criterion_bundle();
  criterion_theta();
  criterion_determinism();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
