#pragma once

// Theta functions and the explicit eigenbasis psi_{n,h,l} in the
// lower-triangular gauge of the Frobenius-adapted basis. States are finite
// sums of (plane wave) x (polynomial in y_j) x (Gaussian in y_j) terms with
// y_j = 2 b_tilde_j x^{r+j} + offset_j; every operator acts term-wise and
// analytically. The normalization constant is fixed with arg N' = 0.

#include <optional>
#include <vector>

#include "magtorus/common.hpp"
#include "magtorus/parallel.hpp"
#include "magtorus/weyl.hpp"

namespace magtorus {

// ---- scalar theta functions ------------------------------------------------

// Jacobi theta: sum_k e^{i pi k (2z + k tau)}, Im tau > 0
cplx jacobi_theta(cplx z, cplx tau);

// Riemann theta over Z^r with box truncation; tau symmetric, Im tau > 0
cplx riemann_theta(const VecC& z, const std::vector<VecC>& tau);

// ---- polynomial in r complex variables -------------------------------------

class PolyR {
 public:
  static PolyR one(int r);
  static PolyR zero(int r);
  int vars() const { return r_; }
  const std::vector<int>& degrees() const { return deg_; }
  cplx coeff(const std::vector<int>& e) const;
  bool is_zero(double tol = 0.0) const;

  cplx eval(const VecC& y) const;
  PolyR scaled(cplx c) const;
  PolyR mul_linear(int j, cplx a, cplx b) const;  // (a y_j + b) * P
  PolyR diff(int j) const;
  PolyR shifted(int j, cplx delta) const;  // Q(y) = P(y - delta e_j)
  PolyR plus(const PolyR& other) const;

 private:
  PolyR(int r, std::vector<int> deg);
  std::size_t index_of(const std::vector<int>& e) const;
  int r_ = 0;
  std::vector<int> deg_;  // max exponent per axis
  VecC c_;                // dense, axis 0 fastest
};

// ---- states -----------------------------------------------------------------

struct BasisIndex {
  std::vector<int> n_occ;   // size r
  std::vector<int> h;       // size r, h_j in [0, 2 nu_tilde_j)
  std::vector<int> l_free;  // size n - 2r
};

struct ThetaTerm {
  cplx coef;
  VecC freq;  // size n, factor e^{i freq.x}
  VecC off;   // size r, y_j = 2 b_tilde_j x^{r+j} + off_j
  PolyR poly;
};

struct ThetaState {
  ContextPtr ctx;
  VecD alpha;  // representation label, n real numbers in [0,1)
  std::optional<BasisIndex> index;
  bool gaussian = true;
  double trunc_eps = 1e-18;
  int domain_margin = 2;  // lattice cells covered on each side of [0,2pi)^n
  std::vector<ThetaTerm> terms;
};

struct BuildOptions {
  double trunc_eps = 1e-18;
  int domain_margin = 2;
};

ThetaState build_basis_state(const ContextPtr& ctx, const VecD& alpha_tilde,
                             const BasisIndex& idx, const BuildOptions& opts = {});
double norm_const(const GroupContext& ctx, const VecD& alpha_tilde);

// term-wise operators
ThetaState apply_raising(const ThetaState& s, int j);   // a_j^*
ThetaState apply_lowering(const ThetaState& s, int j);  // a_j
ThetaState raise_state(const ThetaState& s, int j);     // a_j^*/sqrt(n_j+1), tracks index
ThetaState lower_state(const ThetaState& s, int j);     // a_j/sqrt(n_j), tracks index
ThetaState apply_momentum(const ThetaState& s, int a);  // p_a
ThetaState apply_weyl(const ThetaState& s, const WeylElement& g);
ThetaState scale_state(const ThetaState& s, cplx c);
ThetaState add_states(const ThetaState& a, const ThetaState& b);
ThetaState multiply_plane_wave(const ThetaState& s, const std::vector<int>& mode, cplx c);

// evaluation
cplx eval_state(const ThetaState& s, const VecD& x);

struct GridSpec {
  int points = 64;  // per axis
  VecD base;        // cell corner, defaults to 0
  Exec exec = Exec::parallel;
};

// tensor grid over [base, base + 2pi)^n, axis 0 fastest in the linear index
VecC eval_state_grid(const ThetaState& s, const GridSpec& grid);
cplx grid_inner(const VecC& a, const VecC& b, double cell_weight, Exec exec = Exec::parallel);

// hermitean structure: cell quadrature of conj(s1) s2
cplx inner_product(const ThetaState& s1, const ThetaState& s2, const GridSpec& grid = {});

// independent route: Fourier-slice formula, real-line quadrature per slice
struct SliceOptions {
  int line_points = 2048;   // per R axis
  int torus_points = 64;    // per free axis
  double tail = 60.0;       // Gaussian exponent cut for the line range
};
cplx inner_product_fourier_slice(const ThetaState& s1, const ThetaState& s2,
                                 const SliceOptions& opts = {});

// quasiperiodicity factor of the lower-triangular gauge
cplx v_triangular(const GroupContext& ctx, const VecI& l, const VecD& x);
// max over the grid of |psi(x + 2pi l) - V(l,x) psi(x)|
double quasiperiodicity_residual(const ThetaState& s, const VecI& l, const GridSpec& grid = {});

// divide out / restore the Gaussian factor G(x)
ThetaState holomorphic_transform(const ThetaState& s);
ThetaState holomorphic_inverse(const ThetaState& s);
// max over grid of |pi (d_j + i d_{r+j}) psi'| / max(1, |psi'|), central differences
double cauchy_riemann_residual(const ThetaState& s, int grid_points = 16, double fd_step = 1e-3);

}  // namespace magtorus
