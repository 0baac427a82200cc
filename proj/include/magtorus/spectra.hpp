#pragma once

// Landau spectra: the closed-form Bochner-Laplacian levels, truncated-basis
// Hamiltonian assembly with periodic scalar/vector perturbations, Hermitian
// diagonalization and band sweeps over the Jacobi torus. The Hamiltonian is
// H = (1/2m) sum_a (p_a + q A'_a)^2 + V', with mass defaulting to 1/2 so that
// the kinetic part is sum_a p_a^2 and the closed-form level formula
// E_{n,l} = sum_j (nu_j/pi)(n_j + 1/2) + sum_{a>2r} (l_a + alpha_a)^2 holds
// verbatim.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "magtorus/gauge.hpp"
#include "magtorus/theta.hpp"
#include "magtorus/weyl.hpp"

namespace magtorus {

struct TruncationSpec {
  int n_max = 8;
  int l_max = 6;
  int grid = 64;
};

struct HamiltonianSpec {
  GaugeConfig gauge;   // carries q, nu, and the perturbation Fourier data
  double mass = 0.5;
  VecD alpha_tilde;    // representation label
  TruncationSpec trunc;
  bool check_refinement = false;  // re-assemble at grid/2 and record the drift
};

struct SectorLabel {
  VecD alpha_tilde;
  std::vector<int> h;
};

struct SpectralResult {
  VecD eigenvalues;                 // ascending
  std::vector<int> degeneracies;    // grouped at degeneracy_tol
  std::vector<SectorLabel> sectors; // one per eigenvector
  TruncationSpec truncation;
};

inline constexpr double degeneracy_tol = 1e-8;

double landau_energy(const GroupContext& ctx, const VecD& alpha_tilde, const BasisIndex& idx);

// all (n, h, l) with E <= cutoff, grouped into levels with degeneracies
SpectralResult enumerate_levels(const ContextPtr& ctx, const VecD& alpha_tilde,
                                double energy_cutoff);

std::vector<BasisIndex> enumerate_basis(const GroupContext& ctx, const TruncationSpec& t);

struct AssembledHamiltonian {
  Eigen::MatrixXcd matrix;
  std::vector<BasisIndex> basis;
  double hermiticity_defect = 0.0;
  std::optional<double> refinement_delta;  // set when check_refinement
};

AssembledHamiltonian assemble_hamiltonian(const ContextPtr& ctx, const HamiltonianSpec& spec,
                                          Exec exec = Exec::parallel);

struct DiagonalizeResult {
  SpectralResult spectral;
  Eigen::MatrixXcd eigenvectors;  // columns, same order as eigenvalues
};

DiagonalizeResult diagonalize(const Eigen::MatrixXcd& m, const std::vector<BasisIndex>& basis,
                              const VecD& alpha_tilde, const TruncationSpec& trunc);

// independent diagonalizations per alpha sample
std::vector<SpectralResult> band_sweep(const ContextPtr& ctx, const HamiltonianSpec& spec_template,
                                       const std::vector<VecD>& alpha_grid,
                                       Exec exec = Exec::parallel);

}  // namespace magtorus
