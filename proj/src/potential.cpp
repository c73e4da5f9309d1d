#include "honeylat/potential.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace honeylat {

namespace {

IndexPair neg(const IndexPair& m) { return {-m[0], -m[1]}; }

void record_violation(PropertyCheck& pc, double err, const IndexPair& m, double tol) {
  if (err > pc.worst) {
    pc.worst = err;
    pc.worst_index = m;
  }
  if (err > tol) pc.pass = false;
}

}  // namespace

bool FourierPotential::is_real(double tol) const {
  for (auto& [m, v] : coeffs)
    if (std::abs(coeff({-m[0], -m[1]}) - std::conj(v)) > tol) return false;
  return true;
}

HoneycombReport validate_honeycomb(const FourierPotential& V, double tol) {
  HoneycombReport rep;
  for (auto& [m, v] : V.coeffs) {
    record_violation(rep.real, std::abs(V.coeff(neg(m)) - std::conj(v)), m, tol);
    record_violation(rep.even, std::abs(V.coeff(neg(m)) - v), m, tol);
    record_violation(rep.rot, std::abs(V.coeff(rotate_index(m)) - v), m, tol);
  }
  return rep;
}

WReport validate_W(const FourierPotential& W, double tol) {
  WReport rep;
  for (auto& [m, v] : W.coeffs) {
    record_violation(rep.real, std::abs(W.coeff(neg(m)) - std::conj(v)), m, tol);
    record_violation(rep.odd, std::abs(W.coeff(neg(m)) + v), m, tol);
  }
  rep.proxy = W.coeff({0, 1}) + W.coeff({1, 0}) - W.coeff({1, 1});
  rep.nondegenerate = std::abs(rep.proxy) > tol;
  return rep;
}

std::pair<FourierPotential, FourierPotential> builtin_potentials() {
  TriangularLattice lat = make_lattice(1.0);
  FourierPotential V{lat, {}}, W{lat, {}};
  // cos(m.k . x) = (e^{i m.k x} + e^{-i m.k x}) / 2 over the R-orbit of (1,0):
  // {(1,0), (0,1), (-1,-1)}.
  for (IndexPair m : {IndexPair{1, 0}, IndexPair{0, 1}, IndexPair{-1, -1}}) {
    V.set(m, 0.5);
    V.set(neg(m), 0.5);
  }
  // W = sin(k1.x) + sin(k2.x) + sin((k1+k2).x); R k1 = k2, R^2 k1 = -(k1+k2)
  // and the sign flip on j=2 folds the last term back to +(k1+k2).
  for (IndexPair m : {IndexPair{1, 0}, IndexPair{0, 1}, IndexPair{1, 1}}) {
    W.set(m, Complex(0, -0.5));
    W.set(neg(m), Complex(0, 0.5));
  }
  return {V, W};
}

Complex eval_at(const FourierPotential& P, const Vec2& x) {
  Complex acc(0, 0);
  for (auto& [m, v] : P.coeffs) acc += v * std::exp(Complex(0, P.lattice.dual(m).dot(x)));
  return acc;
}

std::vector<double> eval_on_grid(const FourierPotential& P, int n) {
  if (!P.is_real()) throw std::invalid_argument("eval_on_grid: potential is not real-valued");
  std::vector<double> out(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec2 x = (double(i) / n) * P.lattice.v1 + (double(j) / n) * P.lattice.v2;
      Complex s = eval_at(P, x);
      if (std::abs(s.imag()) > 1e-12)
        throw NumericError("eval_on_grid: synthesized imaginary part exceeds 1e-12");
      out[static_cast<size_t>(i) * n + j] = s.real();
    }
  }
  return out;
}

DomainWall make_wall_tanh(double kappa_inf, double width) {
  DomainWall w;
  w.kappa_inf = kappa_inf;
  w.width = width;
  w.label = "tanh";
  w.profile = [kappa_inf, width](double z) { return kappa_inf * std::tanh(z / width); };
  w.integral = [kappa_inf, width](double z) {
    return kappa_inf * width * std::log(std::cosh(z / width));
  };
  return w;
}

DomainWall make_wall_custom(std::function<double(double)> profile, double kappa_inf,
                            double width, std::string label) {
  DomainWall w;
  w.kappa_inf = kappa_inf;
  w.width = width;
  w.label = std::move(label);
  w.profile = profile;

  // Cached trapezoid cumulative with linear +-kappa_inf tails.
  const double zmax = 400.0;
  const int n = 1 << 18;
  auto grid = std::make_shared<std::vector<double>>(2 * n + 1);
  const double h = zmax / n;
  (*grid)[n] = 0.0;
  for (int i = 1; i <= n; ++i) {
    (*grid)[n + i] = (*grid)[n + i - 1] + 0.5 * h * (profile((i - 1) * h) + profile(i * h));
    (*grid)[n - i] = (*grid)[n - i + 1] - 0.5 * h * (profile(-(i - 1) * h) + profile(-i * h));
  }
  w.integral = [grid, h, n, zmax, kappa_inf](double z) {
    if (z >= zmax) return (*grid)[2 * n] + (z - zmax) * kappa_inf;
    if (z <= -zmax) return (*grid)[0] - (z + zmax) * kappa_inf;
    double t = (z + zmax) / h;
    int i = static_cast<int>(std::floor(t));
    double frac = t - i;
    return (*grid)[i] * (1.0 - frac) + (*grid)[i + 1] * frac;
  };
  return w;
}

DomainWall make_wall_deformed(double amplitude, double kappa_inf, double width) {
  auto profile = [amplitude, kappa_inf, width](double z) {
    return kappa_inf * std::tanh(z / width) - amplitude * z * std::exp(-0.5 * z * z);
  };
  DomainWall w = make_wall_custom(profile, kappa_inf, width, "tanh+bump");
  return w;
}

DomainWall blend_walls(const DomainWall& a, const DomainWall& b, double theta) {
  auto pa = a.profile, pb = b.profile;
  auto profile = [pa, pb, theta](double z) { return (1.0 - theta) * pa(z) + theta * pb(z); };
  DomainWall w = make_wall_custom(profile, (1.0 - theta) * a.kappa_inf + theta * b.kappa_inf,
                                  std::max(a.width, b.width), "blend");
  return w;
}

WallMoments wall_moments(const DomainWall& w, double a_exponent) {
  auto integrate = [&](double L) {
    const int n = static_cast<int>(4000.0 * L);  // fixed step across domains
    const double h = 2.0 * L / n;
    double m1 = 0.0, m2 = 0.0;
    double kinf2 = w.kappa_inf * w.kappa_inf;
    for (int i = 0; i <= n; ++i) {
      double z = -L + i * h;
      double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
      double pw = std::pow(1.0 + std::abs(z), a_exponent);
      double k = w(z);
      double kp = (w(z + 1e-5) - w(z - 1e-5)) / 2e-5;
      m1 += wgt * h * pw * std::abs(k * k - kinf2);
      m2 += wgt * h * pw * std::abs(kp);
    }
    return std::pair<double, double>{m1, m2};
  };
  auto [a1, a2] = integrate(60.0);
  auto [b1, b2] = integrate(120.0);
  WallMoments m;
  m.m1 = b1;
  m.m2 = b2;
  m.converged = std::abs(b1 - a1) < 1e-8 * (1.0 + std::abs(b1)) &&
                std::abs(b2 - a2) < 1e-8 * (1.0 + std::abs(b2));
  return m;
}

BumpSpec make_gaussian_bump(double s, BumpSpec::Structure st) {
  BumpSpec b;
  b.structure = st;
  b.label = "gaussian";
  b.g0 = [s](double r) { return std::exp(-0.5 * r * r / (s * s)); };
  // 2D transform of a radial Gaussian with the (2 pi)^{-2} forward convention.
  b.g0_hat = [s](double xi) { return s * s / (2.0 * kPi) * std::exp(-0.5 * s * s * xi * xi); };
  return b;
}

BumpSpec make_dog_bump(double s1, double s2, double c, BumpSpec::Structure st) {
  BumpSpec b;
  b.structure = st;
  b.label = "difference-of-gaussians";
  b.g0 = [s1, s2, c](double r) {
    return std::exp(-0.5 * r * r / (s1 * s1)) - c * std::exp(-0.5 * r * r / (s2 * s2));
  };
  b.g0_hat = [s1, s2, c](double xi) {
    return s1 * s1 / (2.0 * kPi) * std::exp(-0.5 * s1 * s1 * xi * xi) -
           c * s2 * s2 / (2.0 * kPi) * std::exp(-0.5 * s2 * s2 * xi * xi);
  };
  return b;
}

namespace {

/// Direct (1,1) Fourier coefficient of the bump lattice sum over the scaled
/// cell: (1/|cell|) int_cell exp(-i (k1+k2).y) V(y; a) dy, with the translate
/// sum truncated once the bump tail is below 1e-12.
double v11_direct_quadrature(const BumpSpec& spec, double a) {
  TriangularLattice lat = make_lattice(a);
  Vec2 k11 = lat.k1 + lat.k2;

  // Truncation radius for the translate sum.
  double rmax = 1.0;
  while (std::abs(spec.g0(rmax)) > 1e-12 && rmax < 200.0) rmax += 0.5;
  int nt = static_cast<int>(std::ceil(rmax / (0.5 * a))) + 2;

  std::vector<Vec2> centers;
  if (spec.structure == BumpSpec::Structure::triangular) {
    centers.push_back(Vec2(0, 0));
  } else {
    // Two sublattice sites shifted so the hexagon center is the origin.
    Vec2 A(0, 0), B(a / std::sqrt(3.0), 0);
    Vec2 tau0 = 0.5 * a * Vec2(1.0 / std::sqrt(3.0), 1.0);
    centers.push_back(tau0 - A);
    centers.push_back(tau0 - B);
  }

  auto V = [&](const Vec2& y) {
    double s = 0.0;
    for (int n1 = -nt; n1 <= nt; ++n1)
      for (int n2 = -nt; n2 <= nt; ++n2) {
        Vec2 t = lat.direct(n1, n2);
        for (const Vec2& c : centers) s += spec.g0((y + t + c).norm());
      }
    return s;
  };

  const int n = 96;  // trapezoid on the periodic cell is spectrally accurate
  Complex acc(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec2 y = (double(i) / n) * lat.v1 + (double(j) / n) * lat.v2;
      acc += std::exp(Complex(0, -k11.dot(y))) * V(y);
    }
  acc /= double(n) * double(n);
  return acc.real();
}

}  // namespace

std::vector<V11Sample> v11_scan(const BumpSpec& spec, const std::vector<double>& a_values) {
  std::vector<V11Sample> out(a_values.size());
  parallel_for(static_cast<int>(a_values.size()), [&](int i) {
    double a = a_values[i];
    TriangularLattice lat = make_lattice(a);
    double sign = spec.structure == BumpSpec::Structure::honeycomb ? -1.0 : 1.0;
    double xi = 4.0 * kPi / (std::sqrt(3.0) * a);
    V11Sample s;
    s.a = a;
    s.v11_poisson = sign * (2.0 * kPi) * (2.0 * kPi) / lat.cell_area * spec.g0_hat(xi);
    s.v11_quadrature = v11_direct_quadrature(spec, a);
    out[i] = s;
  });
  return out;
}

FourierPotential load_potential_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential file: " + path);
  nlohmann::json j;
  in >> j;
  double a = j.value("lattice_scale", 1.0);
  FourierPotential P{make_lattice(a), {}};
  for (auto& row : j.at("coeffs")) {
    IndexPair m{row.at(0).get<int>(), row.at(1).get<int>()};
    Complex v(row.at(2).get<double>(), row.at(3).get<double>());
    P.set(m, v);
  }
  // Conjugate closure: fill missing mirrors, reject inconsistent ones.
  auto snapshot = P.coeffs;
  for (auto& [m, v] : snapshot) {
    IndexPair mm{-m[0], -m[1]};
    auto it = P.coeffs.find(mm);
    if (it == P.coeffs.end()) P.set(mm, std::conj(v));
    else if (std::abs(it->second - std::conj(v)) > 1e-12)
      throw ConfigError("potential file violates conjugate symmetry at inverted index");
  }
  return P;
}

void save_potential_json(const FourierPotential& P, const std::string& path) {
  nlohmann::json j;
  j["lattice_scale"] = P.lattice.a;
  auto rows = nlohmann::json::array();
  for (auto& [m, v] : P.coeffs) rows.push_back({m[0], m[1], v.real(), v.imag()});
  j["coeffs"] = rows;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace honeylat
