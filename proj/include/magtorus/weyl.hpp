#pragma once

// The observables' group Y: elements e^{i(l·x + p·z + phase)} with the Weyl
// multiplication law twisted by the constant field, magnetic translation
// generators, Casimirs, centrality, and the commuting-subgroup decomposition.
// All elements live in the Frobenius-adapted basis of q*nu; the basis change
// is applied once at context construction and raw-basis data is converted
// through the unimodular witness.

#include <memory>
#include <vector>

#include "magtorus/common.hpp"
#include "magtorus/skewform.hpp"

namespace magtorus {

struct GroupContext {
  int n = 0;
  int q = 0;
  SkewIntMatrix nu;                  // raw-basis integer flux matrix
  FrobeniusForm frob;                // Frobenius form of q*nu
  int r = 0;                         // half rank of q*nu
  std::vector<long long> nu_tilde;   // positive divisors of q*nu
  VecD b_tilde;                      // nu_tilde / (2 pi)
  MatI nu_tilde_mat;                 // canonical integer matrix of q*nu (adapted basis)
  MatI s;                            // witness: s^t * canonical * s = q*nu
  MatI s_inv;

  static std::shared_ptr<const GroupContext> make(int n, int q, const SkewIntMatrix& nu);

  // adapted-basis entry of q*Abar
  double q_abar(int a, int b) const { return double(nu_tilde_mat[a][b]) / two_pi; }
};

using ContextPtr = std::shared_ptr<const GroupContext>;

struct WeylElement {
  ContextPtr ctx;
  VecI l;        // integer coefficient of x (adapted basis)
  VecD z;        // real coefficient of p (adapted basis)
  double phase;  // in [0, 2pi)
};

WeylElement identity_element(const ContextPtr& ctx);
// e^{i(l·x + p·z + phase)} with adapted-basis data
WeylElement weyl_element(const ContextPtr& ctx, VecI l, VecD z, double phase = 0.0);
// raw-basis data converted through the witness: l -> S^-t l, z -> S z
WeylElement weyl_element_raw(const ContextPtr& ctx, const VecI& l, const VecD& z,
                             double phase = 0.0);
WeylElement plane_wave(const ContextPtr& ctx, const VecI& l);   // u^l
WeylElement translation(const ContextPtr& ctx, const VecD& z);  // e^{ip·z}

WeylElement multiply(const WeylElement& g, const WeylElement& h);
WeylElement inverse(const WeylElement& g);
WeylElement power(const WeylElement& g, long long k);
// commutator g h g^-1 h^-1
WeylElement commutator(const WeylElement& g, const WeylElement& h);
bool same_element(const WeylElement& a, const WeylElement& b, double phase_tol = 1e-12,
                  double z_tol = 1e-12);

// m_1..m_r, m_{r+1}..m_{2r}; empty when r = 0
std::vector<WeylElement> magnetic_generators(const ContextPtr& ctx);
// zeta_1..zeta_n
std::vector<WeylElement> casimirs(const ContextPtr& ctx);

// exact centrality test via the group law: z in 2pi Z^n and l = 2 (q Abar)^t z
bool is_central(const WeylElement& g, double tol = 1e-9);

struct WeylDecomposition {
  double central_phase = 0.0;              // e^{i h0} factor
  std::vector<WeylElement> m_parts;        // one per j <= r
  std::vector<std::pair<long long, long long>> m_exponents;  // (on m_j, on m_{r+j})
  std::vector<WeylElement> h3_parts;       // one per j <= r
  std::vector<WeylElement> y_parts;        // one per axis a > 2r
};

// decomposition into the commuting subgroups M^j, H3^j, Y_a; the ordered
// product e^{i central_phase} * prod(m) * prod(h3) * prod(y) re-multiplies to g
WeylDecomposition decompose(const WeylElement& g);
WeylElement recompose(const WeylDecomposition& d, const ContextPtr& ctx);

// alpha-tilde reduced mod 1 into [0,1)^n (the Jacobi torus)
VecD rep_label_from_casimirs(const VecD& alpha_tilde);

}  // namespace magtorus
