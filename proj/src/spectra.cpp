#include "magtorus/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magtorus {

// Eigenvalue of sum_a p_a^2. With [p_j, p_{r+j}] = 2i b_tilde_j the ladder
// spacing is 4 b_tilde_j = 2 nu_tilde_j / pi: E = sum_j (2 nu_j/pi)(n_j + 1/2)
// + sum_{a>2r} (l_a + alpha_a)^2.
double landau_energy(const GroupContext& ctx, const VecD& alpha_tilde, const BasisIndex& idx) {
  VecD alpha = rep_label_from_casimirs(alpha_tilde);
  double e = 0;
  for (int j = 0; j < ctx.r; ++j)
    e += 2.0 * double(ctx.nu_tilde[j]) / pi * (double(idx.n_occ[j]) + 0.5);
  for (int a = 2 * ctx.r; a < ctx.n; ++a) {
    double la = double(idx.l_free[a - 2 * ctx.r]) + alpha[a];
    e += la * la;
  }
  return e;
}

namespace {

SpectralResult group_levels(std::vector<std::pair<double, SectorLabel>> entries,
                            const TruncationSpec& trunc) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SpectralResult out;
  out.truncation = trunc;
  for (const auto& [e, lbl] : entries) {
    out.eigenvalues.push_back(e);
    out.sectors.push_back(lbl);
    if (out.degeneracies.empty() ||
        e - out.eigenvalues[out.eigenvalues.size() - 2] > degeneracy_tol)
      out.degeneracies.push_back(1);
    else
      out.degeneracies.back() += 1;
  }
  return out;
}

}  // namespace

SpectralResult enumerate_levels(const ContextPtr& ctx, const VecD& alpha_tilde,
                                double energy_cutoff) {
  VecD alpha = rep_label_from_casimirs(alpha_tilde);
  const int r = ctx->r, nfree = ctx->n - 2 * r;
  std::vector<std::pair<double, SectorLabel>> entries;

  std::vector<int> nmax(r);
  for (int j = 0; j < r; ++j)
    nmax[j] = int(std::floor(energy_cutoff * pi / (2.0 * double(ctx->nu_tilde[j])) - 0.5));
  int lbound = int(std::ceil(std::sqrt(std::max(0.0, energy_cutoff)))) + 1;

  BasisIndex idx{std::vector<int>(r, 0), std::vector<int>(r, 0), std::vector<int>(nfree, 0)};
  auto walk_l = [&](auto&& self, int pos) -> void {
    if (pos == nfree) {
      double e = landau_energy(*ctx, alpha, idx);
      if (e <= energy_cutoff) entries.push_back({e, SectorLabel{alpha, idx.h}});
      return;
    }
    for (int v = -lbound; v <= lbound; ++v) {
      idx.l_free[pos] = v;
      self(self, pos + 1);
    }
  };
  auto walk_h = [&](auto&& self, int pos) -> void {
    if (pos == r) {
      walk_l(walk_l, 0);
      return;
    }
    for (int v = 0; v < 2 * ctx->nu_tilde[pos]; ++v) {
      idx.h[pos] = v;
      self(self, pos + 1);
    }
  };
  auto walk_n = [&](auto&& self, int pos) -> void {
    if (pos == r) {
      walk_h(walk_h, 0);
      return;
    }
    for (int v = 0; v <= nmax[pos]; ++v) {
      idx.n_occ[pos] = v;
      self(self, pos + 1);
    }
  };
  bool feasible = true;
  for (int j = 0; j < r; ++j) feasible = feasible && nmax[j] >= 0;
  if (feasible) walk_n(walk_n, 0);

  TruncationSpec t;
  t.n_max = 0;
  for (int j = 0; j < r; ++j) t.n_max = std::max(t.n_max, nmax[j]);
  t.l_max = lbound;
  return group_levels(std::move(entries), t);
}

std::vector<BasisIndex> enumerate_basis(const GroupContext& ctx, const TruncationSpec& t) {
  const int r = ctx.r, nfree = ctx.n - 2 * r;
  std::vector<BasisIndex> out;
  BasisIndex idx{std::vector<int>(r, 0), std::vector<int>(r, 0), std::vector<int>(nfree, 0)};
  auto walk = [&](auto&& self, int stage, int pos) -> void {
    if (stage == 0) {
      if (pos == r) {
        self(self, 1, 0);
        return;
      }
      for (int v = 0; v <= t.n_max; ++v) {
        idx.n_occ[pos] = v;
        self(self, 0, pos + 1);
      }
      return;
    }
    if (stage == 1) {
      if (pos == r) {
        self(self, 2, 0);
        return;
      }
      for (int v = 0; v < 2 * ctx.nu_tilde[pos]; ++v) {
        idx.h[pos] = v;
        self(self, 1, pos + 1);
      }
      return;
    }
    if (pos == nfree) {
      out.push_back(idx);
      return;
    }
    for (int v = -t.l_max; v <= t.l_max; ++v) {
      idx.l_free[pos] = v;
      self(self, 2, pos + 1);
    }
  };
  walk(walk, 0, 0);
  return out;
}

namespace {

// gauge Fourier data moved to the Frobenius-adapted coordinates:
// modes l -> S^-t l, covector coefficients v -> S^-t v
struct AdaptedPerturbation {
  std::vector<std::pair<std::vector<int>, VecC>> a_modes;
  std::vector<std::pair<std::vector<int>, cplx>> v_modes;
};

AdaptedPerturbation adapt_perturbation(const GroupContext& ctx, const GaugeConfig& g) {
  AdaptedPerturbation out;
  const int n = ctx.n;
  auto adapt_mode = [&](const ModeKey& l) {
    std::vector<int> m(n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m[a] += int(ctx.s_inv[b][a]) * l[b];
    return m;
  };
  for (const auto& [l, v] : g.a_prime) {
    VecC va(n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) va[a] += double(ctx.s_inv[b][a]) * v[b];
    out.a_modes.push_back({adapt_mode(l), va});
  }
  for (const auto& [l, c] : g.v_prime) out.v_modes.push_back({adapt_mode(l), c});
  return out;
}

ThetaState covariant_derivative(const ThetaState& s, int axis, const AdaptedPerturbation& p,
                                int q) {
  ThetaState out = apply_momentum(s, axis);
  for (const auto& [mode, v] : p.a_modes) {
    if (v[axis] == 0.0) continue;
    out = add_states(out, multiply_plane_wave(s, mode, double(q) * v[axis]));
  }
  return out;
}

ThetaState apply_hamiltonian(const ThetaState& s, const AdaptedPerturbation& p, int q,
                             double mass) {
  const int n = s.ctx->n;
  ThetaState acc = s;
  bool first = true;
  for (int a = 0; a < n; ++a) {
    ThetaState term = covariant_derivative(covariant_derivative(s, a, p, q), a, p, q);
    term = scale_state(term, 1.0 / (2.0 * mass));
    acc = first ? term : add_states(acc, term);
    first = false;
  }
  for (const auto& [mode, c] : p.v_modes) acc = add_states(acc, multiply_plane_wave(s, mode, c));
  return acc;
}

Eigen::MatrixXcd assemble_at_grid(const ContextPtr& ctx, const HamiltonianSpec& spec,
                                  const std::vector<BasisIndex>& basis,
                                  const AdaptedPerturbation& pert, int grid, Exec exec) {
  const int dim = int(basis.size());
  GridSpec gs{grid, {}, exec};
  BuildOptions build_opts;
  build_opts.domain_margin = 0;  // quadrature stays in the base cell

  std::vector<VecC> psi_grids(dim), hpsi_grids(dim);
  for (int i = 0; i < dim; ++i) {
    ThetaState s = build_basis_state(ctx, spec.alpha_tilde, basis[i], build_opts);
    psi_grids[i] = eval_state_grid(s, gs);
    hpsi_grids[i] = eval_state_grid(apply_hamiltonian(s, pert, ctx->q, spec.mass), gs);
  }
  const double w = std::pow(two_pi / grid, ctx->n);
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = grid_inner(psi_grids[i], hpsi_grids[j], w, exec);
  return m;
}

}  // namespace

AssembledHamiltonian assemble_hamiltonian(const ContextPtr& ctx, const HamiltonianSpec& spec,
                                          Exec exec) {
  require(spec.mass > 0, "assemble_hamiltonian: mass must be positive");
  require(int(spec.alpha_tilde.size()) == ctx->n, "assemble_hamiltonian: alpha size mismatch");
  require(ctx->n <= 4, "assemble_hamiltonian: quadrature limited to n <= 4");
  auto pert = adapt_perturbation(*ctx, spec.gauge);
  auto basis = enumerate_basis(*ctx, spec.trunc);

  AssembledHamiltonian out;
  out.basis = basis;
  out.matrix = assemble_at_grid(ctx, spec, basis, pert, spec.trunc.grid, exec);
  out.hermiticity_defect = (out.matrix - out.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (spec.check_refinement) {
    Eigen::MatrixXcd coarse =
        assemble_at_grid(ctx, spec, basis, pert, std::max(8, spec.trunc.grid / 2), exec);
    out.refinement_delta = (out.matrix - coarse).cwiseAbs().maxCoeff();
  }
  return out;
}

DiagonalizeResult diagonalize(const Eigen::MatrixXcd& m, const std::vector<BasisIndex>& basis,
                              const VecD& alpha_tilde, const TruncationSpec& trunc) {
  require(m.rows() == m.cols(), "diagonalize: matrix not square");
  require(m.rows() == long(basis.size()), "diagonalize: basis size mismatch");
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  require(defect <= 1e-8 * scale, "diagonalize: matrix is not Hermitian");

  Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  require(es.info() == Eigen::Success, "diagonalize: eigensolver failed");

  VecD alpha = rep_label_from_casimirs(alpha_tilde);
  std::vector<std::pair<double, SectorLabel>> entries;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    // label each eigenvector by the h of its dominant basis component
    int best = 0;
    double best_mag = -1;
    for (int j = 0; j < int(basis.size()); ++j) {
      double mag = std::abs(es.eigenvectors()(j, i));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    entries.push_back({es.eigenvalues()(i), SectorLabel{alpha, basis[best].h}});
  }
  DiagonalizeResult out;
  out.spectral = group_levels(std::move(entries), trunc);
  out.eigenvectors = es.eigenvectors();
  return out;
}

std::vector<SpectralResult> band_sweep(const ContextPtr& ctx, const HamiltonianSpec& spec_template,
                                       const std::vector<VecD>& alpha_grid, Exec exec) {
  std::vector<SpectralResult> out(alpha_grid.size());
  parallel_for(
      alpha_grid.size(),
      [&](std::size_t i) {
        HamiltonianSpec spec = spec_template;
        spec.alpha_tilde = alpha_grid[i];
        auto asm_res = assemble_hamiltonian(ctx, spec, Exec::serial);
        out[i] = diagonalize(asm_res.matrix, asm_res.basis, spec.alpha_tilde, spec.trunc).spectral;
      },
      exec);
  return out;
}

}  // namespace magtorus
