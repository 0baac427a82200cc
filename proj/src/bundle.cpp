#include "magtorus/bundle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace magtorus {

namespace {

// integer k with lo < u + 2pi k < hi, if any (box width < 2pi makes it unique)
bool find_lift_shift(double lo, double hi, double u, long long& k_out) {
  long long k0 = std::llround((0.5 * (lo + hi) - u) / two_pi);
  for (long long k = k0 - 1; k <= k0 + 1; ++k) {
    double x = u + two_pi * double(k);
    if (x > lo && x < hi) {
      k_out = k;
      return true;
    }
  }
  return false;
}

std::mt19937_64 sample_rng() { return std::mt19937_64(0xb5297a4d2f4c7c15ull); }

}  // namespace

bool Cover::contains(int i, const VecD& u) const {
  const auto& p = pieces[i];
  for (int a = 0; a < n; ++a) {
    long long k;
    if (!find_lift_shift(p.lo[a], p.hi[a], u[a], k)) return false;
  }
  return true;
}

VecD Cover::lift(int i, const VecD& u) const {
  const auto& p = pieces[i];
  VecD x(n);
  for (int a = 0; a < n; ++a) {
    long long k;
    require(find_lift_shift(p.lo[a], p.hi[a], u[a], k), "Cover::lift: point outside the piece");
    x[a] = u[a] + two_pi * double(k);
  }
  return x;
}

std::vector<int> Cover::pieces_containing(const VecD& u) const {
  std::vector<int> out;
  for (int i = 0; i < int(pieces.size()); ++i)
    if (contains(i, u)) out.push_back(i);
  return out;
}

Cover Cover::with_lift_offsets(const std::vector<VecI>& offsets) const {
  require(offsets.size() == pieces.size(), "with_lift_offsets: one offset per piece");
  Cover out = *this;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (int a = 0; a < n; ++a) {
      out.pieces[i].lo[a] += two_pi * double(offsets[i][a]);
      out.pieces[i].hi[a] += two_pi * double(offsets[i][a]);
    }
  return out;
}

Cover standard_cover(int n, double overlap) {
  require(overlap > 0 && overlap < pi, "standard_cover: overlap must lie in (0, pi)");
  Cover cover;
  cover.n = n;
  const int count = 1 << n;
  for (int mask = 0; mask < count; ++mask) {
    CoverPiece p;
    p.lo.resize(n);
    p.hi.resize(n);
    for (int a = 0; a < n; ++a) {
      double s = (mask >> a) & 1 ? pi : 0.0;
      p.lo[a] = s - overlap / 2;
      p.hi[a] = s + pi + overlap / 2;
    }
    cover.pieces.push_back(std::move(p));
  }
  return cover;
}

bool check_coverage(const Cover& cover, int samples) {
  auto rng = sample_rng();
  std::uniform_real_distribution<double> u(0.0, two_pi);
  for (int k = 0; k < samples; ++k) {
    VecD pt(cover.n);
    for (auto& c : pt) c = u(rng);
    if (cover.pieces_containing(pt).empty()) return false;
  }
  return true;
}

cplx transition(const TransitionData& td, int i, int j, const VecD& u) {
  VecD xi = td.cover.lift(i, u);
  VecD xj = td.cover.lift(j, u);
  VecI l(td.cover.n);
  for (int a = 0; a < td.cover.n; ++a) {
    double diff = (xi[a] - xj[a]) / two_pi;
    l[a] = std::llround(diff);
    require(std::abs(diff - double(l[a])) < 1e-9, "transition: lifts differ by a non-integer");
  }
  return td.v.value(l, xj);
}

double cocycle_check(const TransitionData& td, int samples) {
  auto rng = sample_rng();
  std::uniform_real_distribution<double> u(0.0, two_pi);
  double worst = 0;
  int found = 0;
  while (found < samples) {
    VecD pt(td.cover.n);
    for (auto& c : pt) c = u(rng);
    auto in = td.cover.pieces_containing(pt);
    if (in.size() < 3) continue;
    ++found;
    for (std::size_t a = 0; a < in.size(); ++a)
      for (std::size_t b = 0; b < in.size(); ++b)
        for (std::size_t c = 0; c < in.size(); ++c) {
          if (a == b || b == c || a == c) continue;
          cplx lhs = transition(td, in[a], in[c], pt);
          cplx rhs = transition(td, in[a], in[b], pt) * transition(td, in[b], in[c], pt);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  }
  return worst;
}

SectionData section_from_state(const TransitionData& td, const ThetaState& s) {
  SectionData out;
  out.td = &td;
  ThetaState state = s;
  const Cover* cover = &td.cover;
  out.component = [state, cover](int i, const VecD& u) {
    return eval_state(state, cover->lift(i, u));
  };
  return out;
}

double section_consistency(const SectionData& sec, int samples) {
  const TransitionData& td = *sec.td;
  auto rng = sample_rng();
  std::uniform_real_distribution<double> u(0.0, two_pi);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    VecD pt(td.cover.n);
    for (auto& c : pt) c = u(rng);
    auto in = td.cover.pieces_containing(pt);
    for (std::size_t a = 0; a < in.size(); ++a)
      for (std::size_t b = 0; b < in.size(); ++b) {
        if (a == b) continue;
        cplx lhs = sec.component(in[a], pt);
        cplx rhs = transition(td, in[a], in[b], pt) * sec.component(in[b], pt);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  return worst;
}

cplx section_pairing(const SectionData& a, const SectionData& b, int grid) {
  const TransitionData& td = *a.td;
  const int n = td.cover.n;
  const double h = two_pi / grid;
  const std::size_t total = std::size_t(std::pow(double(grid), n) + 0.5);
  cplx sum = chunked_sum<cplx>(
      total,
      [&](std::size_t idx) {
        VecD u(n);
        std::size_t t = idx;
        for (int d = 0; d < n; ++d) {
          u[d] = h * double(t % grid);
          t /= grid;
        }
        auto in = td.cover.pieces_containing(u);
        int piece = in.empty() ? 0 : in.front();
        return std::conj(a.component(piece, u)) * b.component(piece, u);
      },
      cplx(0, 0));
  return sum * std::pow(h, n);
}

SectionData translate_section(const TransitionData& td, const SectionData& sec,
                              const GaugeConfig& cfg, const WeylElement& g) {
  for (auto v : g.l)
    require(v == 0, "translate_section: only projective translations (l = 0) lift this way");
  const int n = td.cover.n;
  VecD z = g.z;
  double phase0 = g.phase;
  // q z^t beta z / 2 + q alpha . z
  double zz = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) zz += z[a] * cfg.beta(a, b) * z[b];
  double constant = phase0 + 0.5 * cfg.q * zz + cfg.q * dot(cfg.alpha, z);

  SectionData out;
  out.td = &td;
  const TransitionData* tdp = &td;
  GaugeConfig cfg_copy = cfg;
  auto base = sec.component;
  out.component = [tdp, cfg_copy, base, z, constant](int i, const VecD& u) {
    const Cover& cover = tdp->cover;
    VecD x = cover.lift(i, u);
    VecD tu(cover.n);
    for (int a = 0; a < cover.n; ++a) tu[a] = mod_two_pi(u[a] + z[a]);
    auto in = cover.pieces_containing(tu);
    require(!in.empty(), "translate_section: translated point not covered");
    int j = in.front();
    VecD xj = cover.lift(j, tu);
    // x + z and the chosen lift differ by a lattice vector; V folds it back
    VecI l(cover.n);
    for (int a = 0; a < cover.n; ++a) {
      double diff = (x[a] + z[a] - xj[a]) / two_pi;
      l[a] = std::llround(diff);
      require(std::abs(diff - double(l[a])) < 1e-9, "translate_section: non-integer lift gap");
    }
    double xbz = 0;
    for (int a = 0; a < cover.n; ++a)
      for (int b = 0; b < cover.n; ++b) xbz += x[a] * cfg_copy.beta(a, b) * z[b];
    cplx phase = std::exp(cplx(0, constant + cfg_copy.q * xbz));
    return phase * tdp->v.value(l, xj) * base(j, tu);
  };
  return out;
}

}  // namespace magtorus
