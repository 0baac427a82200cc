#pragma once

// The quotient hermitean line bundle E = (R^n x C)/~_V over the torus:
// axis-aligned box covers with chosen lifts, transition functions built from
// the quasiperiodicity factor, Cech cocycle verification, local trivializations
// of states and the lifted projective-translation action.

#include <functional>
#include <vector>

#include "magtorus/gauge.hpp"
#include "magtorus/theta.hpp"

namespace magtorus {

struct CoverPiece {
  VecD lo, hi;  // open box in R^n, per-axis width < 2pi
};

struct Cover {
  int n = 0;
  std::vector<CoverPiece> pieces;

  bool contains(int i, const VecD& u) const;     // u in [0,2pi)^n
  VecD lift(int i, const VecD& u) const;         // P_i^{-1}(u), throws if outside
  std::vector<int> pieces_containing(const VecD& u) const;
  Cover with_lift_offsets(const std::vector<VecI>& offsets) const;  // W_i + 2pi l_i
};

// 2^n shifted boxes with pairwise overlaps of the given width
Cover standard_cover(int n, double overlap);

// samples coverage on a deterministic random set; true if every point is in
// at least one piece
bool check_coverage(const Cover& cover, int samples);

struct TransitionData {
  Cover cover;
  QuasiFactor v;
};

// t_ij(u) = V((P_i^{-1}(u) - P_j^{-1}(u))/2pi, P_j^{-1}(u))
cplx transition(const TransitionData& td, int i, int j, const VecD& u);

// max over sampled triple overlaps of |t_ik - t_ij t_jk|
double cocycle_check(const TransitionData& td, int samples);

// local trivialization: a rule u -> psi_bar_i(u) per piece
struct SectionData {
  const TransitionData* td = nullptr;
  std::function<cplx(int, const VecD&)> component;
};

SectionData section_from_state(const TransitionData& td, const ThetaState& s);
// max over overlap samples of |psi_i - t_ij psi_j|
double section_consistency(const SectionData& sec, int samples);
// global pairing via a partition subordinate to the cover
cplx section_pairing(const SectionData& a, const SectionData& b, int grid);

// lifted action of a projective translation g = e^{i(p.z + phase)} (g.l = 0):
// [g psi]_i(u) = e^{i[phase + q P_i^{-1}(u)^t beta z + q z^t beta z/2 + q alpha.z]}
//                 psi_j(T_[z] u)
SectionData translate_section(const TransitionData& td, const SectionData& sec,
                              const GaugeConfig& cfg, const WeylElement& g);

}  // namespace magtorus
