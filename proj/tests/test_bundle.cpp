#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "magtorus/bundle.hpp"
#include "magtorus/spectra.hpp"

using namespace magtorus;

namespace {

GaugeConfig triangular_config(int nu_val, int q = 1, VecD alpha = {}) {
  auto nu = SkewIntMatrix::from_int({{0, -nu_val}, {nu_val, 0}});
  GaugeConfig cfg(2, q, nu, std::move(alpha));
  PhaseDescriptor tri;
  tri.s_prime = triangular_shift(frobenius_normal_form(nu));
  return gauge_transform(cfg, tri);
}

}  // namespace

TEST_CASE("standard cover: piece counts and coverage") {
  auto c1 = standard_cover(1, 0.5);
  CHECK(c1.pieces.size() == 2);
  CHECK(check_coverage(c1, 10000));
  auto c2 = standard_cover(2, 0.8);
  CHECK(c2.pieces.size() == 4);
  CHECK(check_coverage(c2, 10000));
  CHECK_THROWS_AS(standard_cover(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(standard_cover(2, 4.0), std::invalid_argument);
}

TEST_CASE("transition functions: unit modulus, t_ii = 1, conjugate symmetry") {
  auto cfg = triangular_config(2);
  TransitionData td{standard_cover(2, 0.9), make_quasifactor(cfg)};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  int seen = 0;
  while (seen < 50) {
    VecD pt{u(rng), u(rng)};
    auto in = td.cover.pieces_containing(pt);
    if (in.size() < 2) continue;
    ++seen;
    CHECK(std::abs(transition(td, in[0], in[0], pt) - cplx(1, 0)) < 1e-14);
    cplx tij = transition(td, in[0], in[1], pt);
    cplx tji = transition(td, in[1], in[0], pt);
    CHECK(std::abs(std::abs(tij) - 1.0) < 1e-13);
    CHECK(std::abs(tij - std::conj(tji)) < 1e-12);
  }
  // trivial factor -> trivial bundle
  GaugeConfig trivial(2, 0, SkewIntMatrix::zero(2));
  TransitionData td0{standard_cover(2, 0.9), make_quasifactor(trivial)};
  VecD pt{0.1, 3.3};
  auto in = td0.cover.pieces_containing(pt);
  REQUIRE(in.size() >= 2);
  CHECK(std::abs(transition(td0, in[0], in[1], pt) - cplx(1, 0)) < 1e-14);
}

TEST_CASE("Cech cocycle holds for integer flux and breaks for a corrupted factor") {
  for (int nu_val : {1, 2}) {
    auto cfg = triangular_config(nu_val);
    TransitionData td{standard_cover(2, 1.2), make_quasifactor(cfg)};
    CHECK(cocycle_check(td, 1000) < 1e-12);
  }
  // sign-flip injection: half-integer field
  MatD abar{{0.0, 1.0 / (4 * pi)}, {-1.0 / (4 * pi), 0.0}};
  TransitionData bad{standard_cover(2, 1.2), QuasiFactor::unchecked(1, abar, {})};
  CHECK(cocycle_check(bad, 300) > 1.0);
}

TEST_CASE("transition functions recover the flux matrix (Chern data)") {
  auto cfg = triangular_config(3, 2);
  auto v = make_quasifactor(cfg);
  CHECK(recover_nu(v, {1, 0}, {0, 1}, {0.3, 0.4}) == 2 * -3);
  CHECK(recover_nu(v, {0, 1}, {1, 0}, {0.3, 0.4}) == 2 * 3);
}

TEST_CASE("sections from states: consistency, pairing equals the inner product") {
  auto cfg = triangular_config(2, 1, {0.12, 0.37});
  auto ctx = GroupContext::make(2, 1, cfg.nu);
  VecD alpha{0.12, 0.37};
  auto s1 = build_basis_state(ctx, alpha, BasisIndex{{0}, {1}, {}});
  auto s2 = build_basis_state(ctx, alpha, BasisIndex{{1}, {1}, {}});
  TransitionData td{standard_cover(2, 1.0), make_quasifactor(cfg)};

  auto sec1 = section_from_state(td, s1);
  auto sec2 = section_from_state(td, s2);
  CHECK(section_consistency(sec1, 1000) < 1e-10);
  CHECK(section_consistency(sec2, 1000) < 1e-10);

  cplx pair11 = section_pairing(sec1, sec1, 64);
  cplx pair12 = section_pairing(sec1, sec2, 64);
  GridSpec gs{64, {}, Exec::parallel};
  CHECK(std::abs(pair11 - inner_product(s1, s1, gs)) < 1e-8);
  CHECK(std::abs(pair12 - inner_product(s1, s2, gs)) < 1e-8);

  // trivial factor: patch components agree without transitions
  GaugeConfig trivial(2, 0, SkewIntMatrix::zero(2));
  auto ctx0 = GroupContext::make(2, 0, trivial.nu);
  auto flat = build_basis_state(ctx0, {0.0, 0.0}, BasisIndex{{}, {}, {1, -1}});
  TransitionData td0{standard_cover(2, 1.0), make_quasifactor(trivial)};
  auto sec0 = section_from_state(td0, flat);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int k = 0; k < 200; ++k) {
    VecD pt{u(rng), u(rng)};
    auto in = td0.cover.pieces_containing(pt);
    for (std::size_t a = 1; a < in.size(); ++a)
      CHECK(std::abs(sec0.component(in[0], pt) - sec0.component(in[a], pt)) < 1e-12);
  }
}

TEST_CASE("changing lifts is a gauge transformation: checks are unchanged") {
  auto cfg = triangular_config(1, 1, {0.2, 0.6});
  auto ctx = GroupContext::make(2, 1, cfg.nu);
  auto s = build_basis_state(ctx, {0.2, 0.6}, BasisIndex{{1}, {0}, {}});

  TransitionData td{standard_cover(2, 1.0), make_quasifactor(cfg)};
  std::vector<VecI> offsets{{1, 0}, {0, -2}, {-1, 1}, {3, 0}};
  TransitionData td_shift{td.cover.with_lift_offsets(offsets), td.v};

  CHECK(cocycle_check(td_shift, 500) < 1e-12);
  auto sec = section_from_state(td_shift, s);
  CHECK(section_consistency(sec, 500) < 1e-10);

  // t'_ij = U_i t_ij U_j^{-1} with U_i(u) = V(l_i, P_i^{-1}(u))
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  int seen = 0;
  while (seen < 40) {
    VecD pt{u(rng), u(rng)};
    auto in = td.cover.pieces_containing(pt);
    if (in.size() < 2) continue;
    ++seen;
    int i = in[0], j = in[1];
    cplx t_old = transition(td, i, j, pt);
    cplx t_new = transition(td_shift, i, j, pt);
    cplx ui = td.v.value(offsets[i], td.cover.lift(i, pt));
    cplx uj = td.v.value(offsets[j], td.cover.lift(j, pt));
    CHECK(std::abs(t_new - ui * t_old / uj) < 1e-12);
  }
}

TEST_CASE("translate_section matches apply_weyl-then-trivialize") {
  auto cfg = triangular_config(2, 1, {0.31, 0.18});
  auto ctx = GroupContext::make(2, 1, cfg.nu);
  VecD alpha{0.31, 0.18};
  auto s = build_basis_state(ctx, alpha, BasisIndex{{1}, {2}, {}});
  TransitionData td{standard_cover(2, 1.0), make_quasifactor(cfg)};
  auto sec = section_from_state(td, s);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> zdist(-2.0, 2.0), u(0.0, two_pi);
  for (int trial = 0; trial < 5; ++trial) {
    VecD z{zdist(rng), zdist(rng)};
    auto g = weyl_element(ctx, {0, 0}, z, zdist(rng));
    auto moved = translate_section(td, sec, cfg, g);
    auto direct = section_from_state(td, apply_weyl(s, g));
    for (int k = 0; k < 60; ++k) {
      VecD pt{u(rng), u(rng)};
      auto in = td.cover.pieces_containing(pt);
      for (int i : in) CHECK(std::abs(moved.component(i, pt) - direct.component(i, pt)) < 1e-10);
    }
  }

  // z = 0 is the identity on sections
  auto idm = translate_section(td, sec, cfg, identity_element(ctx));
  VecD pt{1.0, 2.0};
  auto in = td.cover.pieces_containing(pt);
  for (int i : in) CHECK(std::abs(idm.component(i, pt) - sec.component(i, pt)) < 1e-13);

  // z = 2 pi l reduces to the quasiperiodicity relation
  auto g_lattice = weyl_element(ctx, {0, 0}, {two_pi, 0.0}, 0.0);
  auto moved_lat = translate_section(td, sec, cfg, g_lattice);
  auto direct_lat = section_from_state(td, apply_weyl(s, g_lattice));
  for (int k = 0; k < 40; ++k) {
    std::uniform_real_distribution<double> uu(0.0, two_pi);
    VecD p2{uu(rng), uu(rng)};
    auto inp = td.cover.pieces_containing(p2);
    for (int i : inp)
      CHECK(std::abs(moved_lat.component(i, p2) - direct_lat.component(i, p2)) < 1e-10);
  }

  // plane-wave parts are rejected
  auto bad = weyl_element(ctx, {1, 0}, {0.0, 0.0}, 0.0);
  CHECK_THROWS_AS(translate_section(td, sec, cfg, bad), std::invalid_argument);

  // two-path composition: g1 then g2 equals g2*g1 in one step
  VecD z1{0.7, -0.4}, z2{-1.1, 0.6};
  auto g1 = weyl_element(ctx, {0, 0}, z1, 0.3);
  auto g2 = weyl_element(ctx, {0, 0}, z2, -0.9);
  auto path_a = translate_section(td, translate_section(td, sec, cfg, g1), cfg, g2);
  auto path_b = translate_section(td, sec, cfg, multiply(g2, g1));
  for (int k = 0; k < 40; ++k) {
    VecD p3{u(rng), u(rng)};
    auto inp = td.cover.pieces_containing(p3);
    for (int i : inp) CHECK(std::abs(path_a.component(i, p3) - path_b.component(i, p3)) < 1e-10);
  }
}
