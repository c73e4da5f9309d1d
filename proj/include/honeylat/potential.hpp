#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeylat/geometry.hpp"

namespace honeylat {

/// Real periodic potential stored by its dual-lattice Fourier coefficients:
/// P(x) = sum_m P_m exp(i (m1 k1 + m2 k2) . x).
struct FourierPotential {
  TriangularLattice lattice;
  std::map<IndexPair, Complex> coeffs;

  Complex coeff(const IndexPair& m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? Complex(0, 0) : it->second;
  }
  void set(const IndexPair& m, Complex v) {
    if (std::abs(v) == 0.0) coeffs.erase(m);
    else coeffs[m] = v;
  }
  int cutoff() const {
    int c = 0;
    for (auto& [m, v] : coeffs) c = std::max({c, std::abs(m[0]), std::abs(m[1])});
    return c;
  }
  bool is_real(double tol = 1e-13) const;

  FourierPotential scaled(double s) const {
    FourierPotential p = *this;
    for (auto& [m, v] : p.coeffs) v *= s;
    return p;
  }
};

struct PropertyCheck {
  bool pass = true;
  double worst = 0.0;      // worst violation magnitude
  IndexPair worst_index{0, 0};
};

/// Per-property report for the honeycomb conditions: realness, evenness,
/// rotation invariance of the coefficient map.
struct HoneycombReport {
  PropertyCheck real;      // V_{-m} = conj(V_m)
  PropertyCheck even;      // V_{-m} = V_m
  PropertyCheck rot;       // V_{Rm} = V_m
  bool pass() const { return real.pass && even.pass && rot.pass; }
};

HoneycombReport validate_honeycomb(const FourierPotential& V, double tol = 1e-12);

/// Report for the edge potential: oddness W_{-m} = -W_m (with realness) and
/// the nondegeneracy proxy W_{0,1} + W_{1,0} - W_{1,1}.
struct WReport {
  PropertyCheck real;      // W_{-m} = conj(W_m)
  PropertyCheck odd;       // W_{-m} = -W_m
  Complex proxy{0, 0};     // W_{0,1} + W_{1,0} - W_{1,1}
  bool nondegenerate = false;
  bool pass() const { return real.pass && odd.pass && nondegenerate; }
};

WReport validate_W(const FourierPotential& W, double tol = 1e-12);

/// V = sum_j cos(R^j k1 . x) and W = sum_j (-1)^{delta_{j2}} sin(R^j k1 . x)
/// on the unit-scale lattice.
std::pair<FourierPotential, FourierPotential> builtin_potentials();

/// Synthesize P on an n x n grid over the period cell {t1 v1 + t2 v2}.
/// Requires a real-valued potential; returns row-major samples.
std::vector<double> eval_on_grid(const FourierPotential& P, int n);

/// Point evaluation (complex synthesis, no realness requirement).
Complex eval_at(const FourierPotential& P, const Vec2& x);

/// Domain-wall profile interpolating between -kappa_inf and +kappa_inf.
struct DomainWall {
  std::function<double(double)> profile;
  std::function<double(double)> integral;  // zeta -> int_0^zeta profile
  double kappa_inf = 1.0;
  double width = 1.0;
  std::string label;

  double operator()(double z) const { return profile(z); }
};

DomainWall make_wall_tanh(double kappa_inf = 1.0, double width = 1.0);

/// tanh wall plus a localized deformation A * d/dz exp(-z^2/2); same
/// asymptotics as tanh for every A.
DomainWall make_wall_deformed(double amplitude, double kappa_inf = 1.0, double width = 1.0);

/// Convex blend (1-theta) a + theta b; asymptotics are preserved when the
/// endpoints share them.
DomainWall blend_walls(const DomainWall& a, const DomainWall& b, double theta);

DomainWall make_wall_custom(std::function<double(double)> profile, double kappa_inf,
                            double width, std::string label);

/// Truncated-domain moment integrals of Definition-style wall hypotheses:
/// int (1+|z|)^a |kappa^2 - kappa_inf^2| and int (1+|z|)^a |kappa'|.
struct WallMoments {
  double m1 = 0.0, m2 = 0.0;
  bool converged = false;  // last domain doubling changed both by < 1e-8 rel
};

WallMoments wall_moments(const DomainWall& w, double a_exponent = 2.6);

/// Radial bump with analytic transform, used by the lattice-sum scans.
/// ghat uses the convention ghat(xi) = (2 pi)^{-2} int exp(-i x.xi) g(|x|) dx.
struct BumpSpec {
  std::function<double(double)> g0;       // radial profile g0(r)
  std::function<double(double)> g0_hat;   // radial transform ghat(|xi|)
  enum class Structure { triangular, honeycomb } structure = Structure::triangular;
  std::string label;
};

BumpSpec make_gaussian_bump(double s, BumpSpec::Structure st);

/// Difference of two Gaussians, g0(r) = exp(-r^2/2s1^2) - c exp(-r^2/2s2^2);
/// its transform changes sign when c s2^2 > s1^2.
BumpSpec make_dog_bump(double s1, double s2, double c, BumpSpec::Structure st);

struct V11Sample {
  double a = 0.0;
  double v11_poisson = 0.0;
  double v11_quadrature = 0.0;
};

/// Lattice-scale scan of the (1,1) Fourier coefficient of the bump sum:
/// closed form (2 pi)^2 / |cell(a)| * ghat(4 pi / (sqrt(3) a)), with sign
/// -1 for the honeycomb structure, against direct cell quadrature.
std::vector<V11Sample> v11_scan(const BumpSpec& spec, const std::vector<double>& a_values);

/// JSON loader/saver: { "lattice_scale": a, "coeffs": [[m1,m2,re,im],...] }.
/// The loader enforces conjugate closure (missing mirrors are added; a
/// mismatched mirror is an error).
FourierPotential load_potential_json(const std::string& path);
void save_potential_json(const FourierPotential& P, const std::string& path);

}  // namespace honeylat
