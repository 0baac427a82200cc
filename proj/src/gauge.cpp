#include "magtorus/gauge.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace magtorus {

namespace {

double mode_dot(const ModeKey& l, const VecD& x) {
  double s = 0;
  for (std::size_t i = 0; i < l.size(); ++i) s += l[i] * x[i];
  return s;
}

ModeKey negated(const ModeKey& l) {
  ModeKey m = l;
  for (int& v : m) v = -v;
  return m;
}

bool is_zero_mode(const ModeKey& l) {
  for (int v : l) if (v) return false;
  return true;
}

void check_symmetric(const MatD& s, const char* what) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(s[i].size() == s.size(), std::string(what) + ": not square");
    for (std::size_t j = 0; j < s.size(); ++j)
      require(std::abs(s[i][j] - s[j][i]) <= 1e-12, std::string(what) + ": not symmetric");
  }
}

// pointwise Pfaffian of a small real antisymmetric matrix
double pfaffian_pointwise(const std::vector<std::vector<double>>& b) {
  const int k = int(b.size());
  if (k == 0) return 1.0;
  std::vector<int> ax(k);
  for (int i = 0; i < k; ++i) ax[i] = i;
  struct Rec {
    const std::vector<std::vector<double>>& b;
    double run(std::vector<int> a) {
      if (a.empty()) return 1.0;
      double sum = 0;
      for (std::size_t j = 1; j < a.size(); ++j) {
        std::vector<int> rest;
        rest.reserve(a.size() - 2);
        for (std::size_t i = 1; i < a.size(); ++i)
          if (i != j) rest.push_back(a[i]);
        double term = b[a[0]][a[j]] * run(std::move(rest));
        sum += (j % 2 == 1) ? term : -term;
      }
      return sum;
    }
  };
  return Rec{b}.run(ax);
}

}  // namespace

GaugeConfig::GaugeConfig(int n_, int q_, SkewIntMatrix nu_, VecD alpha_, MatD shift_,
                         FourierVecMap ap, FourierScalarMap vp)
    : n(n_), q(q_), nu(std::move(nu_)), alpha(std::move(alpha_)), shift(std::move(shift_)),
      a_prime(std::move(ap)), v_prime(std::move(vp)) {
  require(n > 0, "GaugeConfig: n must be positive");
  require(nu.n == n, "GaugeConfig: nu dimension mismatch");
  if (alpha.empty()) alpha.assign(n, 0.0);
  require(int(alpha.size()) == n, "GaugeConfig: alpha size mismatch");
  if (shift.empty()) shift.assign(n, VecD(n, 0.0));
  require(int(shift.size()) == n, "GaugeConfig: shift size mismatch");
  check_symmetric(shift, "GaugeConfig shift");
  for (const auto& [l, v] : a_prime) {
    require(int(l.size()) == n && int(v.size()) == n, "GaugeConfig aPrime: size mismatch");
    require(!is_zero_mode(l), "GaugeConfig aPrime: zero mode belongs in alpha");
    auto it = a_prime.find(negated(l));
    require(it != a_prime.end(), "GaugeConfig aPrime: missing mirror mode");
    for (int a = 0; a < n; ++a)
      require(std::abs(it->second[a] - std::conj(v[a])) <= 1e-12,
              "GaugeConfig aPrime: conjugate symmetry violated");
  }
  for (const auto& [l, c] : v_prime) {
    require(int(l.size()) == n, "GaugeConfig vPrime: size mismatch");
    auto it = v_prime.find(negated(l));
    require(it != v_prime.end() && std::abs(it->second - std::conj(c)) <= 1e-12,
            "GaugeConfig vPrime: conjugate symmetry violated");
  }
}

double GaugeConfig::a_prime_at(int a, const VecD& x) const {
  cplx s = 0;
  for (const auto& [l, v] : a_prime) s += v[a] * std::exp(cplx(0, mode_dot(l, x)));
  return s.real();
}

double GaugeConfig::b_field(int a, int b, const VecD& x) const {
  cplx s = 0;
  for (const auto& [l, v] : a_prime)
    s += cplx(0, 0.5) * (double(l[a]) * v[b] - double(l[b]) * v[a]) * std::exp(cplx(0, mode_dot(l, x)));
  return abar(a, b) + s.real();
}

double GaugeConfig::v_prime_at(const VecD& x) const {
  cplx s = 0;
  for (const auto& [l, c] : v_prime) s += c * std::exp(cplx(0, mode_dot(l, x)));
  return s.real();
}

void add_real_mode(FourierVecMap& m, const ModeKey& l, const VecC& coeff) {
  m[l] = coeff;
  VecC cc(coeff.size());
  for (std::size_t i = 0; i < coeff.size(); ++i) cc[i] = std::conj(coeff[i]);
  m[negated(l)] = cc;
}

void add_real_mode(FourierScalarMap& m, const ModeKey& l, cplx coeff) {
  m[l] = coeff;
  m[negated(l)] = std::conj(coeff);
}

QuasiFactor QuasiFactor::from_config(const GaugeConfig& c) {
  QuasiFactor v;
  v.n = c.n;
  v.q = c.q;
  v.beta_bar.assign(c.n, VecD(c.n));
  for (int a = 0; a < c.n; ++a)
    for (int b = 0; b < c.n; ++b) v.beta_bar[a][b] = c.beta(a, b);
  return v;
}

QuasiFactor QuasiFactor::unchecked(int q, const MatD& abar, const MatD& sbar) {
  QuasiFactor v;
  v.n = int(abar.size());
  v.q = q;
  v.beta_bar = abar;
  if (!sbar.empty())
    for (int a = 0; a < v.n; ++a)
      for (int b = 0; b < v.n; ++b) v.beta_bar[a][b] += sbar[a][b];
  return v;
}

QuasiFactor make_quasifactor(const GaugeConfig& c) { return QuasiFactor::from_config(c); }

double QuasiFactor::exponent(const VecI& l, const VecD& x) const {
  // V(l,x) = exp(-i q 2pi l^t beta (x + pi l))
  double s = 0;
  for (int a = 0; a < n; ++a) {
    if (l[a] == 0) continue;
    double row = 0;
    for (int b = 0; b < n; ++b) row += beta_bar[a][b] * (x[b] + pi * double(l[b]));
    s += double(l[a]) * row;
  }
  return -double(q) * two_pi * s;
}

cplx QuasiFactor::value(const VecI& l, const VecD& x) const {
  return std::exp(cplx(0, exponent(l, x)));
}

cplx cocycle_defect(const QuasiFactor& v, const VecI& l, const VecI& lp, const VecD& x) {
  VecI sum(l.size());
  VecD xs = x;
  for (std::size_t i = 0; i < l.size(); ++i) {
    sum[i] = l[i] + lp[i];
    xs[i] = x[i] + two_pi * double(lp[i]);
  }
  double e = v.exponent(l, xs) + v.exponent(lp, x) - v.exponent(sum, x);
  return std::exp(cplx(0, e));
}

long long recover_nu(const QuasiFactor& v, const VecI& l, const VecI& lp, const VecD& x) {
  auto eval = [&](const VecD& pt) {
    VecD x_lp = pt, x_l = pt;
    for (std::size_t i = 0; i < pt.size(); ++i) {
      x_lp[i] += two_pi * double(lp[i]);
      x_l[i] += two_pi * double(l[i]);
    }
    double omega =
        v.exponent(l, x_lp) + v.exponent(lp, pt) - v.exponent(lp, x_l) - v.exponent(l, pt);
    return -omega / (4.0 * pi);
  };
  std::mt19937_64 rng(0x517cc1b727220a95ull);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  double lo = eval(x), hi = lo, sum = lo;
  for (int k = 0; k < 2; ++k) {
    VecD pt(x.size());
    for (auto& c : pt) c = u(rng);
    double val = eval(pt);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
    sum += val;
  }
  if (hi - lo > 1e-9)
    throw std::runtime_error("recover_nu: value drifts with x; quasifactor is not a valid cocycle");
  return std::llround(sum / 3.0);
}

namespace {

// trapezoidal tensor-grid sum of f over the k-cell spanned by `axes` at `base`
template <class F>
double cell_quadrature(int n, const std::vector<int>& axes, const QuadOptions& opts, F&& f) {
  const int k = int(axes.size());
  const int N = opts.grid;
  require(N >= 2, "quadrature: grid too small");
  double total_pts = std::pow(double(N), k);
  require(total_pts <= 4.0e8, "quadrature: grid too large for this cell dimension");
  VecD base = opts.base.empty() ? VecD(n, 0.0) : opts.base;
  require(int(base.size()) == n, "quadrature: base point size mismatch");
  const double h = two_pi / N;
  const std::size_t total = std::size_t(total_pts + 0.5);
  double s = chunked_sum<double>(
      total,
      [&](std::size_t idx) {
        VecD x = base;
        std::size_t t = idx;
        for (int d = 0; d < k; ++d) {
          x[axes[d]] += h * double(t % N);
          t /= N;
        }
        return f(x);
      },
      0.0, opts.exec);
  return s * std::pow(h, k);
}

double factorial(int m) {
  double r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

void check_axes(const GaugeConfig& c, const std::vector<int>& axes) {
  require(!axes.empty() && axes.size() % 2 == 0, "higher_flux: need an even number of axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    require(axes[i] >= 0 && axes[i] < c.n, "higher_flux: axis out of range");
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      require(axes[i] != axes[j], "higher_flux: repeated axis");
  }
}

}  // namespace

double flux_quadrature(const GaugeConfig& c, int a, int b, const QuadOptions& opts) {
  require(a != b, "flux: axes must differ");
  require(a >= 0 && a < c.n && b >= 0 && b < c.n, "flux: axis out of range");
  return cell_quadrature(c.n, {a, b}, opts, [&](const VecD& x) { return c.b_field(a, b, x); });
}

double flux(const GaugeConfig& c, int a, int b, const QuadOptions& opts) {
  require(a != b, "flux: axes must differ");
  double closed = two_pi * c.nu.a[a][b].get_d();
  double quad = flux_quadrature(c, a, b, opts);
  if (std::abs(quad - closed) > 1e-9 * std::max(1.0, std::abs(closed)))
    throw std::runtime_error("flux: quadrature disagrees with closed form");
  return closed;
}

double higher_flux_closed_form(const GaugeConfig& c, const std::vector<int>& axes) {
  check_axes(c, axes);
  const int m = int(axes.size()) / 2;
  Int pf = pfaffian_minor(c.nu, axes);
  double weight = std::pow(2.0, m) * factorial(m) / factorial(2 * m);
  return std::pow(two_pi, m) * weight * pf.get_d();
}

double higher_flux_quadrature(const GaugeConfig& c, const std::vector<int>& axes,
                              const QuadOptions& opts) {
  check_axes(c, axes);
  const int m = int(axes.size()) / 2;
  const int k = 2 * m;
  double weight = std::pow(2.0, m) * factorial(m) / factorial(2 * m);
  return cell_quadrature(c.n, axes, opts, [&](const VecD& x) {
    std::vector<std::vector<double>> bsub(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        double v = c.b_field(axes[i], axes[j], x);
        bsub[i][j] = v;
        bsub[j][i] = -v;
      }
    return weight * pfaffian_pointwise(bsub);
  });
}

double higher_flux(const GaugeConfig& c, const std::vector<int>& axes, const QuadOptions& opts) {
  double closed = higher_flux_closed_form(c, axes);
  double quad = higher_flux_quadrature(c, axes, opts);
  if (std::abs(quad - closed) > 1e-9 * std::max(1.0, std::abs(closed)))
    throw std::runtime_error("higher_flux: quadrature disagrees with closed form");
  return closed;
}

GaugeConfig gauge_transform(const GaugeConfig& c, const PhaseDescriptor& phi) {
  if (!phi.s_prime.empty()) {
    require(int(phi.s_prime.size()) == c.n, "gauge_transform: S' dimension mismatch");
    check_symmetric(phi.s_prime, "gauge_transform S'");
  }
  for (const auto& [l, coeff] : phi.periodic) {
    require(int(l.size()) == c.n, "gauge_transform: mode size mismatch");
    auto it = phi.periodic.find(negated(l));
    require(it != phi.periodic.end() && std::abs(it->second - std::conj(coeff)) <= 1e-12,
            "gauge_transform: periodic part is not real");
  }
  GaugeConfig out = c;
  if (!phi.s_prime.empty())
    for (int a = 0; a < c.n; ++a)
      for (int b = 0; b < c.n; ++b) out.shift[a][b] += phi.s_prime[a][b];
  for (const auto& [l, coeff] : phi.periodic) {
    if (is_zero_mode(l)) continue;  // constant phase has no field effect
    auto it = out.a_prime.find(l);
    if (it == out.a_prime.end()) it = out.a_prime.emplace(l, VecC(c.n, 0.0)).first;
    for (int a = 0; a < c.n; ++a) it->second[a] += cplx(0, double(l[a])) * coeff;
  }
  return out;
}

cplx gauge_unitary(const PhaseDescriptor& phi, int q, const VecD& x) {
  double quad = 0;
  if (!phi.s_prime.empty())
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = 0; b < x.size(); ++b) quad += x[a] * phi.s_prime[a][b] * x[b];
  cplx per = 0;
  for (const auto& [l, coeff] : phi.periodic) per += coeff * std::exp(cplx(0, mode_dot(l, x)));
  return std::exp(cplx(0, -double(q) * (0.5 * quad + per.real())));
}

MatD triangular_shift(const FrobeniusForm& f) {
  const int n = f.canonical.n, r = f.half_rank;
  MatD s(n, VecD(n, 0.0));
  for (int j = 0; j < r; ++j) {
    double b = f.divisors[j].get_d() / two_pi;
    s[j][r + j] = b;
    s[r + j][j] = b;
  }
  return s;
}

}  // namespace magtorus
