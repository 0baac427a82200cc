// Benchmark of the OpenMP kernels against the serial reference path. Both
// paths share the fixed chunking and pairwise reduction, so their outputs are
// bit-identical; the comparison below asserts that while timing the kernels.

#include <chrono>
#include <cstdio>
#include <vector>

#include "magtorus/gauge.hpp"
#include "magtorus/spectra.hpp"
#include "magtorus/theta.hpp"

using namespace magtorus;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double timed(F&& fn, int reps = 3) {
  double best = 1e300;
  for (int k = 0; k < reps; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, seconds(t0, t1));
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s %10.4f s %10.4f s %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "openmp", "speedup");

#ifdef _OPENMP
  std::printf("(OpenMP enabled)\n");
#else
  std::printf("(OpenMP not compiled in: both columns run the serial path)\n");
#endif

  // --- state grid evaluation + Gram matrix ---------------------------------
  {
    auto ctx = GroupContext::make(2, 1, SkewIntMatrix::from_int({{0, -3}, {3, 0}}));
    VecD alpha{0.21, 0.43};
    std::vector<ThetaState> basis;
    for (int nocc = 0; nocc <= 3; ++nocc)
      for (int h = 0; h < 6; ++h)
        basis.push_back(build_basis_state(ctx, alpha, BasisIndex{{nocc}, {h}, {}}));

    std::vector<VecC> gs, gp;
    cplx sum_s = 0, sum_p = 0;
    double w = std::pow(two_pi / 64, 2);
    double ts = timed([&] {
      gs.clear();
      sum_s = 0;
      for (const auto& s : basis) gs.push_back(eval_state_grid(s, {64, {}, Exec::serial}));
      for (std::size_t i = 0; i < gs.size(); ++i)
        for (std::size_t j = 0; j < gs.size(); ++j)
          sum_s += grid_inner(gs[i], gs[j], w, Exec::serial);
    });
    double tp = timed([&] {
      gp.clear();
      sum_p = 0;
      for (const auto& s : basis) gp.push_back(eval_state_grid(s, {64, {}, Exec::parallel}));
      for (std::size_t i = 0; i < gp.size(); ++i)
        for (std::size_t j = 0; j < gp.size(); ++j)
          sum_p += grid_inner(gp[i], gp[j], w, Exec::parallel);
    });
    bool same = gs == gp && sum_s == sum_p;
    report("gram_matrix_64x64", ts, tp, same);
  }

  // --- 4-form flux quadrature ------------------------------------------------
  {
    auto nu4 = SkewIntMatrix::from_int({{0, 0, -1, 0}, {0, 0, 0, -2}, {1, 0, 0, 0}, {0, 2, 0, 0}});
    FourierVecMap ap;
    add_real_mode(ap, {1, 0, 0, 0}, {cplx(0, 0), cplx(0.1, 0.05), cplx(0, 0), cplx(-0.02, 0.01)});
    GaugeConfig cfg(4, 1, nu4, {}, {}, ap);
    double vs = 0, vp = 0;
    QuadOptions qs{24, {}, Exec::serial}, qp{24, {}, Exec::parallel};
    double ts = timed([&] { vs = higher_flux_quadrature(cfg, {0, 1, 2, 3}, qs); });
    double tp = timed([&] { vp = higher_flux_quadrature(cfg, {0, 1, 2, 3}, qp); });
    report("four_form_quadrature_24^4", ts, tp, vs == vp);
  }

  // --- band sweep ---------------------------------------------------------------
  {
    auto ctx = GroupContext::make(2, 1, SkewIntMatrix::from_int({{0, -1}, {1, 0}}));
    FourierScalarMap vp_modes;
    add_real_mode(vp_modes, {1, 0}, cplx(0.05, 0.0));
    GaugeConfig cfg(2, 1, ctx->nu, {}, {}, {}, vp_modes);
    HamiltonianSpec spec{cfg, 0.5, {0.0, 0.0}, {4, 0, 48}, false};
    std::vector<VecD> grid;
    for (int k = 0; k < 4; ++k) grid.push_back({0.25 * k, 0.1});

    std::vector<SpectralResult> rs, rp;
    double ts = timed([&] { rs = band_sweep(ctx, spec, grid, Exec::serial); }, 1);
    double tp = timed([&] { rp = band_sweep(ctx, spec, grid, Exec::parallel); }, 1);
    bool same = rs.size() == rp.size();
    for (std::size_t i = 0; same && i < rs.size(); ++i)
      same = rs[i].eigenvalues == rp[i].eigenvalues;
    report("band_sweep_4_points", ts, tp, same);
  }

  return 0;
}
