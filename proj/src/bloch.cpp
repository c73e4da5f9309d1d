#include "honeylat/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace honeylat {

IndexWindow IndexWindow::square(int M) {
  IndexWindow w;
  w.indices.reserve((2 * M + 1) * (2 * M + 1));
  for (int m1 = -M; m1 <= M; ++m1)
    for (int m2 = -M; m2 <= M; ++m2) w.indices.push_back({m1, m2});
  w.build_lookup();
  return w;
}

IndexWindow IndexWindow::ball(const TriangularLattice& lat, const Vec2& center, double radius) {
  IndexWindow w;
  int reach = static_cast<int>(std::ceil(radius / lat.q)) + 2;
  for (int m1 = -3 * reach; m1 <= 3 * reach; ++m1)
    for (int m2 = -3 * reach; m2 <= 3 * reach; ++m2)
      if ((center + lat.dual({m1, m2})).norm() <= radius) w.indices.push_back({m1, m2});
  w.build_lookup();
  return w;
}

IndexWindow IndexWindow::custom(std::vector<IndexPair> idx) {
  IndexWindow w;
  w.indices = std::move(idx);
  w.build_lookup();
  return w;
}

void IndexWindow::build_lookup() {
  lookup_.clear();
  for (int i = 0; i < size(); ++i) lookup_[indices[i]] = i;
}

std::optional<int> IndexWindow::find(const IndexPair& m) const {
  auto it = lookup_.find(m);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

BlochFiber assemble_fiber_window(const FourierPotential& V, const Vec2& k, IndexWindow win) {
  BlochFiber f;
  f.k = k;
  f.window = std::move(win);
  f.lattice = &V.lattice;
  const int n = f.window.size();
  f.H = MatXc::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vec2 kk = k + V.lattice.dual(f.window.indices[i]);
    f.H(i, i) = kk.squaredNorm();
  }
  // V couples m -> m + w for every stored coefficient V_w.
  for (int j = 0; j < n; ++j) {
    const IndexPair& mj = f.window.indices[j];
    for (auto& [w, v] : V.coeffs) {
      if (auto i = f.window.find({mj[0] + w[0], mj[1] + w[1]})) f.H(*i, j) += v;
    }
  }
  return f;
}

BlochFiber assemble_fiber(const FourierPotential& V, const Vec2& k, int M) {
  if (M < 1) throw std::invalid_argument("assemble_fiber: M must be >= 1");
  BlochFiber f = assemble_fiber_window(V, k, IndexWindow::square(M));
  f.M = M;
  return f;
}

BandSolution solve_fiber(const BlochFiber& fiber, int n_bands) {
  const int n = fiber.window.size();
  if (n_bands > n) throw std::invalid_argument("solve_fiber: n_bands exceeds basis size");
  auto [vals, vecs] = eig_hermitian(fiber.H);
  BandSolution s;
  s.k = fiber.k;
  s.M = fiber.M;
  s.window = fiber.window;
  s.energies = vals.head(n_bands);
  s.vectors = vecs.leftCols(n_bands);
  // Residual guard: an eigensolver failure surfaces here, not downstream.
  for (int b = 0; b < n_bands; ++b) {
    double resid = (fiber.H * s.vectors.col(b) - s.energies(b) * s.vectors.col(b)).norm();
    if (resid > 1e-9 * (1.0 + std::abs(s.energies(b))))
      throw NumericError("solve_fiber: eigenpair residual out of tolerance");
  }
  return s;
}

SectorBasis sector_basis(const TriangularLattice& lat, const Vec2& K_vertex, int M) {
  // Rotation-closed momentum ball sized to hold the square-M window.
  double radius = (M + 0.5) * lat.q * std::sqrt(3.0);
  IndexWindow win = IndexWindow::ball(lat, K_vertex, radius);

  SectorBasis sb;
  std::set<int> used;
  for (int i = 0; i < win.size(); ++i) {
    if (used.count(i)) continue;
    IndexPair m = win.indices[i];
    IndexPair m2 = rotate_index_at_K(m);
    IndexPair m3 = rotate_index_at_K(m2);
    auto i2 = win.find(m2), i3 = win.find(m3);
    if (!i2 || !i3)
      throw NumericError("sector_basis: window not rotation-closed");
    sb.orbits.push_back({i, *i2, *i3});
    used.insert(i);
    used.insert(*i2);
    used.insert(*i3);
  }
  const int n = win.size();
  const int no = static_cast<int>(sb.orbits.size());
  const Complex tau = std::exp(Complex(0, 2.0 * kPi / 3.0));
  const std::array<Complex, 3> sigmas{Complex(1, 0), tau, std::conj(tau)};
  for (int s = 0; s < 3; ++s) {
    sb.basis[s] = MatXc::Zero(n, no);
    for (int o = 0; o < no; ++o) {
      sb.basis[s](sb.orbits[o][0], o) = 1.0 / std::sqrt(3.0);
      sb.basis[s](sb.orbits[o][1], o) = std::conj(sigmas[s]) / std::sqrt(3.0);
      sb.basis[s](sb.orbits[o][2], o) = sigmas[s] / std::sqrt(3.0);
    }
  }
  sb.window = std::move(win);
  return sb;
}

SectorSolution sector_decompose(const FourierPotential& V, const Vec2& K_vertex, int M) {
  SectorSolution out;
  out.sectors = sector_basis(V.lattice, K_vertex, M);
  BlochFiber fiber = assemble_fiber_window(V, K_vertex, out.sectors.window);
  for (int s = 0; s < 3; ++s) {
    MatXc Hs = out.sectors.basis[s].adjoint() * fiber.H * out.sectors.basis[s];
    Hs = 0.5 * (Hs + Hs.adjoint()).eval();
    auto [vals, vecs] = eig_hermitian(Hs);
    out.energies[s] = vals;
    out.vectors[s] = vecs;
  }
  for (int s = 0; s < 3; ++s)
    for (int t = s + 1; t < 3; ++t) {
      double c = (out.sectors.basis[s].adjoint() * (fiber.H * out.sectors.basis[t]))
                     .cwiseAbs()
                     .maxCoeff();
      out.max_cross_coupling = std::max(out.max_cross_coupling, c);
    }
  return out;
}

namespace {

/// Pair slope of the touching bands at K along unit direction u, by centered
/// averaging over +-h (kills the odd cone-error term) and Richardson
/// extrapolation over the step list.
double directional_slope(const FourierPotential& V, const Vec2& K, double E_star, int band_lo,
                         int M, const Vec2& u, const std::vector<double>& steps) {
  std::vector<double> s(steps.size());
  for (size_t i = 0; i < steps.size(); ++i) {
    double h = steps[i];
    VecX ep = eigvals_hermitian(assemble_fiber(V, K + h * u, M).H);
    VecX em = eigvals_hermitian(assemble_fiber(V, K - h * u, M).H);
    // Upper sheet: band_lo+1 (0-based band_lo is the lower touching band).
    double up = 0.5 * (ep(band_lo + 1) + em(band_lo + 1)) - E_star;
    double dn = E_star - 0.5 * (ep(band_lo) + em(band_lo));
    s[i] = 0.5 * (up + dn) / h;
  }
  // One Richardson step in h^2 assuming steps halve.
  double best = s.back();
  if (s.size() >= 2) {
    double h1 = steps[s.size() - 2], h2 = steps[s.size() - 1];
    double r = (h1 / h2) * (h1 / h2);
    best = (r * s[s.size() - 1] - s[s.size() - 2]) / (r - 1.0);
  }
  return best;
}

}  // namespace

DiracPointData find_dirac_point(const FourierPotential& V, const DiracOptions& opt) {
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  SectorSolution sec = sector_decompose(V, hs.K, opt.M);

  const VecX& e1 = sec.energies[0];   // trivial sector
  const VecX& et = sec.energies[1];   // tau
  const VecX& etb = sec.energies[2];  // taubar

  // Scan tau eigenvalues for a taubar partner; take the lowest such pair.
  int it_match = -1, itb_match = -1;
  for (int i = 0; i < et.size() && it_match < 0; ++i) {
    double tol = opt.degeneracy_tol_rel * std::max(1.0, std::abs(et(i)));
    for (int j = 0; j < etb.size(); ++j)
      if (std::abs(et(i) - etb(j)) < tol) {
        it_match = i;
        itb_match = j;
        break;
      }
  }
  if (it_match < 0)
    throw NumericError("find_dirac_point: no tau/taubar degeneracy at the vertex");

  double E_star = 0.5 * (et(it_match) + etb(itb_match));
  double tol = opt.degeneracy_tol_rel * std::max(1.0, std::abs(E_star));

  double gap1 = 1e300;
  for (int i = 0; i < e1.size(); ++i) gap1 = std::min(gap1, std::abs(e1(i) - E_star));
  if (gap1 < tol)
    throw NumericError("find_dirac_point: trivial-sector collision (ambiguous multiplicity)");

  DiracPointData dp;
  dp.K = hs.K;
  dp.E_star = E_star;
  dp.window = sec.sectors.window;

  // b_star = 1 + number of fiber eigenvalues strictly below E_star.
  int below = 0;
  double gap_next = gap1;
  for (const VecX* ev : {&e1, &et, &etb})
    for (int i = 0; i < ev->size(); ++i) {
      double d = (*ev)(i)-E_star;
      if (d < -tol) ++below;
      if (std::abs(d) > tol) gap_next = std::min(gap_next, std::abs(d));
    }
  dp.b_star = below + 1;
  dp.gap_to_next = gap_next;

  // tau-sector mode in plane-wave coordinates, gauge-fixed so the orbit
  // representative closest to K has a real positive coefficient.
  VecXc phi1 = sec.sectors.basis[1] * sec.vectors[1].col(it_match);
  int i00 = -1;
  if (auto i = sec.sectors.window.find({0, 0})) i00 = *i;
  Complex pivot = (i00 >= 0) ? phi1(i00) : Complex(0, 0);
  if (std::abs(pivot) < 1e-8) {
    int imax = 0;
    phi1.cwiseAbs().maxCoeff(&imax);
    pivot = phi1(imax);
  }
  phi1 *= std::conj(pivot) / std::abs(pivot);
  phi1.normalize();
  dp.phi1 = phi1;
  dp.phi2 = phi1.conjugate();  // (C o I) image at the same K + m.k indices

  for (int i = 0; i < dp.window.size(); ++i) {
    Vec2 mom = dp.K + V.lattice.dual(dp.window.indices[i]);
    dp.lambda_sharp_sum += phi1(i) * phi1(i) * as_complex(mom);
  }

  std::vector<double> steps = opt.fd_steps;
  if (steps.empty()) {
    // Base steps capped so the probe stays inside the cone's validity range
    // (the energy excursion must remain well below the gap to other bands).
    double scale = std::min(
        1.0, 0.1 * dp.gap_to_next / (std::abs(dp.lambda_sharp_sum) * 1e-2 * V.lattice.q));
    for (double h : {1e-2, 5e-3, 2.5e-3}) steps.push_back(h * V.lattice.q * scale);
  }
  std::vector<Vec2> dirs;
  for (int d = 0; d < opt.fd_directions; ++d) {
    double ang = 2.0 * kPi * d / opt.fd_directions + 0.3;
    dirs.push_back(Vec2(std::cos(ang), std::sin(ang)));
  }
  double smin = 1e300, smax = 0.0, ssum = 0.0;
  for (const Vec2& u : dirs) {
    double s = directional_slope(V, dp.K, E_star, dp.b_star - 1, opt.M, u, steps);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
    ssum += s;
  }
  dp.lambda_sharp_abs = ssum / dirs.size();
  dp.slope_anisotropy = (smax - smin) / std::max(1e-300, dp.lambda_sharp_abs);
  return dp;
}

ConeSlope lambda_sharp(const DiracPointData& dp, const FourierPotential& V, int M) {
  double scale = std::min(
      1.0, 0.1 * dp.gap_to_next / (std::abs(dp.lambda_sharp_sum) * 1e-2 * V.lattice.q));
  std::vector<double> steps;
  for (double h : {1e-2, 5e-3, 2.5e-3}) steps.push_back(h * V.lattice.q * scale);
  std::vector<Vec2> dirs;
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  dirs.push_back(V.lattice.k2.normalized());
  dirs.push_back(hs.K.normalized());
  dirs.push_back(Vec2(std::cos(1.1), std::sin(1.1)));
  dirs.push_back(Vec2(std::cos(2.9), std::sin(2.9)));

  ConeSlope cs;
  double smin = 1e300, smax = 0.0, ssum = 0.0;
  for (const Vec2& u : dirs) {
    double s = directional_slope(V, dp.K, dp.E_star, dp.b_star - 1, M, u, steps);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
    ssum += s;
  }
  cs.slope = ssum / dirs.size();
  cs.anisotropy = (smax - smin) / std::max(1e-300, cs.slope);
  cs.fourier_sum = std::abs(dp.lambda_sharp_sum);
  if (cs.anisotropy > 0.02)
    throw NumericError("lambda_sharp: slope anisotropy exceeds 2% (not conical)");
  return cs;
}

Complex w_matrix_element(const DiracPointData& dp, const FourierPotential& W, int a, int b) {
  const VecXc& pa = (a == 1) ? dp.phi1 : dp.phi2;
  const VecXc& pb = (b == 1) ? dp.phi1 : dp.phi2;
  Complex acc(0, 0);
  const int n = dp.window.size();
  for (int j = 0; j < n; ++j) {
    const IndexPair& mj = dp.window.indices[j];
    if (std::abs(pb(j)) == 0.0) continue;
    for (auto& [w, v] : W.coeffs) {
      if (auto i = dp.window.find({mj[0] + w[0], mj[1] + w[1]}))
        acc += std::conj(pa(*i)) * v * pb(j);
    }
  }
  return acc;
}

double theta_sharp(const DiracPointData& dp, const FourierPotential& W) {
  Complex th = w_matrix_element(dp, W, 1, 1);
  if (std::abs(th.imag()) > 1e-10)
    throw NumericError("theta_sharp: imaginary part exceeds 1e-10 (W symmetry violated)");
  return th.real();
}

std::pair<VecXc, VecXc> phi_pm(const DiracPointData& dp, const Vec2& frak_K2) {
  Complex lam = dp.lambda_sharp_sum;
  Complex z2 = as_complex(frak_K2);
  Complex phase = std::conj(lam) * z2 / (std::abs(lam) * std::abs(z2));
  VecXc plus = (phase * dp.phi1 + dp.phi2) / std::sqrt(2.0);
  VecXc minus = (phase * dp.phi1 - dp.phi2) / std::sqrt(2.0);
  return {plus, minus};
}

PerturbativeCheck perturbative_check(const FourierPotential& V,
                                     const std::vector<double>& eps_list, int M) {
  PerturbativeCheck out;
  out.rows.resize(eps_list.size());
  parallel_for(static_cast<int>(eps_list.size()), [&](int i) {
    double eps = eps_list[i];
    FourierPotential Ve = V.scaled(eps);
    DiracOptions opt;
    opt.M = M;
    DiracPointData dp = find_dirac_point(Ve, opt);
    SectorSolution sec = sector_decompose(Ve, dp.K, M);
    PerturbativeRow row;
    row.eps = eps;
    row.E_star = dp.E_star;
    row.E_tilde = sec.energies[0](0);  // trivial-sector level split off the triple
    row.slope = dp.lambda_sharp_abs;
    out.rows[i] = row;
  });

  // Linear fit y = c0 + c1 eps of (E - |K|^2)/eps; c0 is the first-order
  // coefficient, the eps -> 0 limit.
  HighSymmetryPoints hs = high_symmetry_points(V.lattice);
  double E0 = hs.K.squaredNorm();
  auto fit0 = [&](auto getter) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(out.rows.size());
    for (auto& r : out.rows) {
      double x = r.eps, y = getter(r);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    double c1 = (n * sxy - sx * sy) / denom;
    double c0 = (sy - c1 * sx) / n;
    return c0;
  };
  out.fit_E_star_slope = fit0([&](const PerturbativeRow& r) { return (r.E_star - E0) / r.eps; });
  out.fit_E_tilde_slope = fit0([&](const PerturbativeRow& r) { return (r.E_tilde - E0) / r.eps; });
  out.slope_limit = fit0([&](const PerturbativeRow& r) { return r.slope; });
  return out;
}

std::vector<BandSurfaceSample> band_surface(const FourierPotential& V, int n_grid, int n_bands,
                                            int M) {
  std::vector<std::vector<BandSurfaceSample>> rows(n_grid * n_grid);
  parallel_for(n_grid * n_grid, [&](int t) {
    int i = t / n_grid, j = t % n_grid;
    double f1 = -0.5 + double(i) / n_grid;
    double f2 = -0.5 + double(j) / n_grid;
    Vec2 k = f1 * V.lattice.k1 + f2 * V.lattice.k2;
    VecX ev = eigvals_hermitian(assemble_fiber(V, k, M).H);
    for (int b = 0; b < n_bands; ++b) rows[t].push_back({f1, f2, b + 1, ev(b)});
  });
  std::vector<BandSurfaceSample> out;
  out.reserve(static_cast<size_t>(n_grid) * n_grid * n_bands);
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace honeylat
