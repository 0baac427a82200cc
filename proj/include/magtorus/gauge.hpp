#pragma once

// Quasiperiodicity factors V(l,x), cocycle checks, flux integrals and gauge
// transformations for a charge-q particle in a constant field nu/(2pi) plus
// periodic perturbations given as finite Fourier data.

#include <map>
#include <optional>
#include <vector>

#include "magtorus/common.hpp"
#include "magtorus/parallel.hpp"
#include "magtorus/skewform.hpp"

namespace magtorus {

using ModeKey = std::vector<int>;                 // integer wave vector l
using FourierVecMap = std::map<ModeKey, VecC>;    // l -> complex n-vector (A' modes)
using FourierScalarMap = std::map<ModeKey, cplx>; // l -> complex scalar (V', phases)

struct GaugeConfig {
  int n = 0;
  int q = 0;
  SkewIntMatrix nu;        // integer flux matrix, nu = 2*pi*Abar
  VecD alpha;              // constant potential shift
  MatD shift;              // symmetric gauge matrix Sbar; beta = Abar + Sbar
  FourierVecMap a_prime;   // periodic vector potential modes (l != 0)
  FourierScalarMap v_prime;// periodic scalar potential modes

  GaugeConfig() = default;
  GaugeConfig(int n, int q, SkewIntMatrix nu, VecD alpha = {}, MatD shift = {},
              FourierVecMap a_prime = {}, FourierScalarMap v_prime = {});

  double abar(int a, int b) const { return nu.a[a][b].get_d() / two_pi; }
  double beta(int a, int b) const { return abar(a, b) + shift[a][b]; }

  // real A'_a(x) from the mode sum
  double a_prime_at(int a, const VecD& x) const;
  // real B_ab(x) = Abar_ab + (d A')_ab / 2
  double b_field(int a, int b, const VecD& x) const;
  // real V'(x)
  double v_prime_at(const VecD& x) const;
};

// conjugate-symmetry helpers: insert a mode together with its mirror so the
// field stays real
void add_real_mode(FourierVecMap& m, const ModeKey& l, const VecC& coeff);
void add_real_mode(FourierScalarMap& m, const ModeKey& l, cplx coeff);

struct QuasiFactor {
  int n = 0;
  int q = 0;
  MatD beta_bar;  // Abar + Sbar

  static QuasiFactor from_config(const GaugeConfig& c);
  // test hook: raw field matrix, bypassing the integrality invariant
  static QuasiFactor unchecked(int q, const MatD& abar, const MatD& sbar);

  // continuous exponent: V(l,x) = exp(i * exponent(l,x))
  double exponent(const VecI& l, const VecD& x) const;
  cplx value(const VecI& l, const VecD& x) const;
};

QuasiFactor make_quasifactor(const GaugeConfig& c);

// V(l+l',x)^-1 V(l,x+2pi l') V(l',x); equals 1 iff the cocycle condition holds
cplx cocycle_defect(const QuasiFactor& v, const VecI& l, const VecI& lp, const VecD& x);

// (i/4pi) log[V(l,x+2pi l')V(l',x) / (V(l',x+2pi l)V(l,x))] with the branch
// resolved by the continuous exponent; rounds to the integer q l^t nu l'.
// Throws std::runtime_error if the value drifts with x beyond 1e-9.
long long recover_nu(const QuasiFactor& v, const VecI& l, const VecI& lp, const VecD& x);

struct QuadOptions {
  int grid = 64;        // points per axis (trapezoidal rule on the periodic cell)
  VecD base;            // cell corner y, defaults to 0
  Exec exec = Exec::parallel;
};

// flux through the (a,b) plaquette: verified 2*pi*nu_ab
double flux(const GaugeConfig& c, int a, int b, const QuadOptions& opts = {});
double flux_quadrature(const GaugeConfig& c, int a, int b, const QuadOptions& opts = {});

// integral of B^m over the 2m-cell spanned by `axes`; closed form
// (2pi)^m * (2^m m!/(2m)!) * Pf(nu|axes), cross-checked against the
// tensor-grid quadrature of the antisymmetrized component
double higher_flux(const GaugeConfig& c, const std::vector<int>& axes,
                   const QuadOptions& opts = {});
double higher_flux_quadrature(const GaugeConfig& c, const std::vector<int>& axes,
                              const QuadOptions& opts = {});
double higher_flux_closed_form(const GaugeConfig& c, const std::vector<int>& axes);

// gauge transformation by U(x) = exp(-iq(x^t S' x / 2 + phi'(x))): adds S' to
// the shift and the gradient of the periodic part to aPrime
struct PhaseDescriptor {
  MatD s_prime;               // symmetric
  FourierScalarMap periodic;  // conjugate-symmetric modes of phi'
};

GaugeConfig gauge_transform(const GaugeConfig& c, const PhaseDescriptor& phi);
cplx gauge_unitary(const PhaseDescriptor& phi, int q, const VecD& x);

// the symmetric shift that takes the canonical block field to the
// lower-triangular gauge beta_bar = [[0,0],[2b,0]]
MatD triangular_shift(const FrobeniusForm& f);

}  // namespace magtorus
