#include "honeylat/edge.hpp"

#include <algorithm>
#include <cmath>

namespace honeylat {

std::vector<std::pair<int, Complex>> wall_harmonics(const DomainWall& wall, int N, double delta,
                                                    double tail) {
  const double S = N * delta;
  // Grid sized for the sharpest feature: the periodized wall has width
  // ~ wall.width / delta in phi at the wall crossing.
  int ng = 4096;
  while (ng < 64.0 * S / wall.width && ng < (1 << 20)) ng *= 2;
  std::vector<double> f(ng);
  for (int g = 0; g < ng; ++g) f[g] = wall.profile(S * std::sin(2.0 * kPi * g / ng));

  const double floor_abs = tail * std::max(1e-300, wall.kappa_inf);
  std::vector<std::pair<int, Complex>> out;
  int pmax = ng / 2 - 1;
  int consecutive_small = 0;
  for (int p = 0; p <= pmax; ++p) {
    Complex acc(0, 0);
    for (int g = 0; g < ng; ++g)
      acc += f[g] * std::exp(Complex(0, -2.0 * kPi * p * g / ng));
    acc /= double(ng);
    bool keep = std::abs(acc) > floor_abs;
    if (keep) {
      out.push_back({p, acc});
      if (p > 0) out.push_back({-p, std::conj(acc)});
      consecutive_small = 0;
    } else if (p > 8 * static_cast<int>(S / wall.width + 2)) {
      if (++consecutive_small > 16) break;
    }
  }
  return out;
}

MatXc assemble_edge(const FourierPotential& V, const FourierPotential& W,
                    const SupercellConfig& cfg) {
  if (cfg.delta != 0.0 && !cfg.walls_separated())
    throw ConfigError("assemble_edge: walls not separated (increase N or delta)");
  const int n = cfg.dim();
  const int J = cfg.J();
  MatXc H = MatXc::Zero(n, n);
  for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1)
    for (int j = -J; j <= J; ++j)
      H(cfg.index_of(m1, j), cfg.index_of(m1, j)) = cfg.momentum(m1, j).squaredNorm();

  auto add_coupling = [&](int c1, int c2j, Complex val) {
    // H(a, b) += val for a - b = (c1, c2j) in (m1, j) indices.
    for (int bm = std::max(-cfg.M1, -cfg.M1 - c1); bm <= std::min(cfg.M1, cfg.M1 - c1); ++bm) {
      int lo = std::max(-J, -J - c2j), hi = std::min(J, J - c2j);
      for (int bj = lo; bj <= hi; ++bj)
        H(cfg.index_of(bm + c1, bj + c2j), cfg.index_of(bm, bj)) += val;
    }
  };

  for (auto& [w, v] : V.coeffs) {
    IndexPair c = cfg.edge.dual_index(w);
    add_coupling(c[0], cfg.N * c[1], cfg.eps * v);
  }
  if (cfg.delta != 0.0) {
    auto harm = wall_harmonics(cfg.wall, cfg.N, cfg.delta);
    for (auto& [w, v] : W.coeffs) {
      IndexPair c = cfg.edge.dual_index(w);
      for (auto& [p, cp] : harm) add_coupling(c[0], cfg.N * c[1] + p, cfg.delta * v * cp);
    }
  }
  return H;
}

namespace {

/// Physical transverse advance per cell along v2_frak: |cell area| / |v1_frak|.
double cell_height(const SupercellConfig& cfg) {
  double area = std::abs(cfg.edge.frak_v1.x() * cfg.edge.frak_v2.y() -
                         cfg.edge.frak_v1.y() * cfg.edge.frak_v2.x());
  return area / cfg.edge.frak_v1.norm();
}

}  // namespace

EdgeState classify_state(const SupercellConfig& cfg, double E, const VecXc& coeffs) {
  EdgeState st;
  st.E = E;
  st.coeffs = coeffs;
  const int N = cfg.N, J = cfg.J();

  // Transverse marginal: integrate |Psi|^2 over t1 exactly (cross terms in
  // m1 vanish), sample t2 within each cell.
  const int per_cell = 8;
  std::vector<double> mass(N, 0.0);
  for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1) {
    for (int c = 0; c < N; ++c)
      for (int s = 0; s < per_cell; ++s) {
        double t2 = c + (s + 0.5) / per_cell;
        Complex f(0, 0);
        for (int j = -J; j <= J; ++j)
          f += coeffs(cfg.index_of(m1, j)) * std::exp(Complex(0, 2.0 * kPi * j * t2 / N));
        mass[c] += std::norm(f) / per_cell;
      }
  }
  double tot = 0.0;
  for (double m : mass) tot += m;
  st.cell_mass = mass;
  for (double m : mass) st.ipr += (m / tot) * (m / tot);

  // Circular center of mass in cell units.
  Complex z(0, 0);
  for (int c = 0; c < N; ++c) z += mass[c] / tot * std::exp(Complex(0, 2.0 * kPi * (c + 0.5) / N));
  st.transverse_center = std::fmod(std::arg(z) / (2.0 * kPi) * N + N, double(N));

  // Log-linear decay fit. Walls sit at cells 0 and N/2; a state may live on
  // one wall or on both, so anchor the fit at the heavier wall and use only
  // the first quarter-cell flanks (beyond that the other wall takes over).
  const double cell_h = cell_height(cfg);
  double near0 = 0.0, nearH = 0.0;
  for (int c = 0; c < N; ++c) {
    int d0 = std::min(c, N - c);
    int dH = std::abs(c - N / 2);
    if (d0 <= N / 8) near0 += mass[c];
    if (dH <= N / 8) nearH += mass[c];
  }
  const int home = near0 >= nearH ? 0 : N / 2;
  // The K-point Bloch phase advances by 2 pi/3 per cell, so the marginal
  // density carries an exactly 3-periodic factor on top of the exponential;
  // a 3-cell geometric mean removes it.
  std::vector<double> xs, ys;
  // The wall sits on the boundary between cells home-1 and home, so cell
  // home + d and cell home - 1 - d are mirror images.
  auto mass_at = [&](int side, int dist) {
    int c = side > 0 ? home + dist : home - 1 - dist;
    return mass[(c % N + N) % N];
  };
  for (int side : {+1, -1})
    for (int d = 2; d + 2 <= N / 4; ++d) {
      double m0 = mass_at(side, d), m1 = mass_at(side, d + 1), m2 = mass_at(side, d + 2);
      if (m0 <= 0 || m1 <= 0 || m2 <= 0) continue;
      xs.push_back((d + 1) * cell_h);
      ys.push_back((std::log(m0) + std::log(m1) + std::log(m2)) / 3.0);
    }
  if (xs.size() >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = static_cast<int>(xs.size());
    for (int i = 0; i < n; ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
      syy += ys[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    st.decay_rate = -0.5 * slope;  // amplitude rate from the density fit
    double r_num = n * sxy - sx * sy;
    double r_den = std::sqrt(std::max(1e-300, (n * sxx - sx * sx) * (n * syy - sy * sy)));
    double r = r_num / r_den;
    st.decay_r2 = r * r;
  }
  st.is_localized = st.ipr >= 4.0 / N && st.decay_r2 > 0.95;
  return st;
}

std::vector<EdgeState> solve_near(const MatXc& Hedge, const SupercellConfig& cfg,
                                  double E_target, int n_eigs) {
  auto pairs = eig_near_dense(Hedge, E_target, n_eigs);
  std::vector<EdgeState> out;
  out.reserve(pairs.size());
  for (auto& p : pairs) out.push_back(classify_state(cfg, p.value, p.vector));
  return out;
}

SpectrumSweep sweep_delta(const FourierPotential& V, const FourierPotential& W,
                          const std::vector<double>& delta_grid, SupercellConfig cfg,
                          double E_target, int n_eigs) {
  SpectrumSweep sw;
  sw.axis = SpectrumSweep::Axis::delta;
  sw.points.resize(delta_grid.size());
  parallel_for(static_cast<int>(delta_grid.size()), [&](int i) {
    SupercellConfig c = cfg;
    c.delta = delta_grid[i];
    MatXc H = assemble_edge(V, W, c);
    sw.points[i].axis_value = delta_grid[i];
    sw.points[i].states = solve_near(H, c, E_target, n_eigs);
  });
  return sw;
}

SpectrumSweep sweep_kpar(const FourierPotential& V, const FourierPotential& W,
                         const std::vector<double>& kpar_grid, SupercellConfig cfg,
                         double E_target, int n_eigs) {
  SpectrumSweep sw;
  sw.axis = SpectrumSweep::Axis::k_par;
  sw.points.resize(kpar_grid.size());
  parallel_for(static_cast<int>(kpar_grid.size()), [&](int i) {
    SupercellConfig c = cfg;
    c.k_par = kpar_grid[i];
    MatXc H = assemble_edge(V, W, c);
    sw.points[i].axis_value = kpar_grid[i];
    sw.points[i].states = solve_near(H, c, E_target, n_eigs);
  });
  return sw;
}

namespace {

/// Synthesize a supercell coefficient vector on a (n1 x n2) grid over
/// t1 in [0,1), t2 in [t2lo, t2hi).
MatXc synth_grid(const SupercellConfig& cfg, const VecXc& coeffs, int n1, int n2, double t2lo,
                 double t2hi) {
  MatXc out(n1, n2);
  const int J = cfg.J();
  const double kfrac = cfg.k_par / (2.0 * kPi);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      double t1 = double(a) / n1;
      double t2 = t2lo + (t2hi - t2lo) * (b + 0.5) / n2;
      Complex acc(0, 0);
      for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1) {
        Complex row(0, 0);
        for (int j = -J; j <= J; ++j)
          row += coeffs(cfg.index_of(m1, j)) * std::exp(Complex(0, 2.0 * kPi * j * t2 / cfg.N));
        acc += row * std::exp(Complex(0, 2.0 * kPi * (kfrac + m1) * t1));
      }
      out(a, b) = acc;
    }
  return out;
}

}  // namespace

MultiscaleReport compare_multiscale(const std::vector<EdgeState>& doublet,
                                    const DiracPointData& dp, const SupercellConfig& cfg,
                                    const FourierPotential& V) {
  if (doublet.empty()) throw std::invalid_argument("compare_multiscale: empty doublet");
  bool any_confined = false;
  for (auto& st : doublet) any_confined = any_confined || st.ipr > 2.0 / cfg.N;
  if (!any_confined)
    throw std::invalid_argument("compare_multiscale: states are extended, nothing to compare");
  MultiscaleReport rep;

  auto [phip, phim] = phi_pm(dp, cfg.edge.frak_K2);
  const double vF = std::abs(dp.lambda_sharp_sum) * cfg.edge.frak_K2.norm();
  const double theta = dp.theta_sharp;
  const double rate = std::abs(theta) / vF;
  const Complex lower = (theta > 0) ? Complex(0, -1) : Complex(0, 1);
  rep.decay_rate_predicted = std::abs(theta) * cfg.wall.kappa_inf * cfg.delta /
                             std::abs(dp.lambda_sharp_sum);

  // Half-cylinder grid around the wall at t2 = 0.
  const int n1 = 64, n2 = 16 * (cfg.N / 2);
  const double t2lo = -cfg.N / 4.0, t2hi = cfg.N / 4.0;

  // Two-scale ansatz Psi0 = alpha_+(delta K2.x) Phi_+ + alpha_-(...) Phi_-.
  MatXc psi0(n1, n2);
  psi0.setZero();
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      double t1 = double(a) / n1;
      double t2 = t2lo + (t2hi - t2lo) * (b + 0.5) / n2;
      Vec2 x = t1 * cfg.edge.frak_v1 + (t2)*cfg.edge.frak_v2;
      double zeta = cfg.delta * cfg.edge.frak_K2.dot(x);
      double B0 = std::min(rate * cfg.wall.integral(zeta), 700.0);
      Complex ap = std::exp(-B0), am = lower * std::exp(-B0);
      Complex pp(0, 0), pm(0, 0);
      for (int i = 0; i < dp.window.size(); ++i) {
        Vec2 mom = dp.K + V.lattice.dual(dp.window.indices[i]);
        Complex pw = std::exp(Complex(0, mom.dot(x)));
        pp += phip(i) * pw;
        pm += phim(i) * pw;
      }
      psi0(a, b) = ap * pp + am * pm;
    }

  // Project onto the orthonormalized doublet span on the same half-domain.
  std::vector<MatXc> states;
  for (auto& st : doublet) states.push_back(synth_grid(cfg, st.coeffs, n1, n2, t2lo, t2hi));
  auto ip = [&](const MatXc& f, const MatXc& g) { return (f.conjugate().cwiseProduct(g)).sum(); };
  // Gram-Schmidt.
  for (size_t i = 0; i < states.size(); ++i) {
    for (size_t j = 0; j < i; ++j) states[i] -= ip(states[j], states[i]) * states[j];
    states[i] /= std::sqrt(std::abs(ip(states[i], states[i])));
  }
  Complex n0 = ip(psi0, psi0);
  double proj = 0.0;
  for (auto& s : states) proj += std::norm(ip(s, psi0));
  rep.overlap_defect = 1.0 - proj / std::abs(n0);

  rep.decay_rate_measured = doublet.front().decay_rate;
  return rep;
}

// ---- Cylinder Bloch frame --------------------------------------------------

namespace {

/// Bulk fiber matrix in edge-frame indices (m1, m2), |m1| <= M1, |m2| <= M2c,
/// at momentum base = (k_par/2pi) K1 + (l/N) K2, potential eps*V.
MatXc frame_fiber_matrix(const FourierPotential& V, const SupercellConfig& cfg, int M2c, int l) {
  const int n1 = 2 * cfg.M1 + 1, n2 = 2 * M2c + 1;
  const int n = n1 * n2;
  auto idx = [&](int m1, int m2) { return (m1 + cfg.M1) * n2 + (m2 + M2c); };
  MatXc H = MatXc::Zero(n, n);
  const double kfrac = cfg.k_par / (2.0 * kPi);
  for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1)
    for (int m2 = -M2c; m2 <= M2c; ++m2) {
      Vec2 kk = (kfrac + m1) * cfg.edge.frak_K1 + (double(l) / cfg.N + m2) * cfg.edge.frak_K2;
      H(idx(m1, m2), idx(m1, m2)) = kk.squaredNorm();
    }
  for (auto& [w, v] : V.coeffs) {
    IndexPair c = cfg.edge.dual_index(w);
    for (int m1 = std::max(-cfg.M1, -cfg.M1 - c[0]); m1 <= std::min(cfg.M1, cfg.M1 - c[0]); ++m1)
      for (int m2 = std::max(-M2c, -M2c - c[1]); m2 <= std::min(M2c, M2c - c[1]); ++m2)
        H(idx(m1 + c[0], m2 + c[1]), idx(m1, m2)) += cfg.eps * v;
  }
  return H;
}

}  // namespace

CylinderFrame build_cylinder_frame(const FourierPotential& V, const SupercellConfig& cfg,
                                   int M2c, int B, double lam_cut) {
  CylinderFrame fr;
  fr.cfg = cfg;
  fr.M2c = M2c;
  fr.B = B;
  for (int l = -cfg.N / 2; l < cfg.N - cfg.N / 2; ++l)
    if (std::abs(double(l) / cfg.N) <= lam_cut + 1e-12) fr.fiber_l.push_back(l);
  fr.fibers.resize(fr.fiber_l.size());
  parallel_for(static_cast<int>(fr.fiber_l.size()), [&](int i) {
    int l = fr.fiber_l[i];
    MatXc H = frame_fiber_matrix(V, cfg, M2c, l);
    auto [vals, vecs] = eig_hermitian(H);
    FrameFiber f;
    f.l = l;
    f.energies = vals.head(B);
    f.vectors = vecs.leftCols(B);
    fr.fibers[i] = std::move(f);
  });
  return fr;
}

MatXc cylinder_bloch_analyze(const CylinderFrame& fr, const VecXc& f) {
  const SupercellConfig& cfg = fr.cfg;
  const int J = cfg.J();
  const int n2 = 2 * fr.M2c + 1;
  MatXc amp(fr.B, fr.fibers.size());
  for (size_t i = 0; i < fr.fibers.size(); ++i) {
    int l = fr.fibers[i].l;
    // Gather the fiber's plane-wave components from the supercell vector.
    VecXc sub = VecXc::Zero(fr.frame_dim());
    for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1)
      for (int m2 = -fr.M2c; m2 <= fr.M2c; ++m2) {
        int j = l + cfg.N * m2;
        if (std::abs(j) > J) continue;
        sub((m1 + cfg.M1) * n2 + (m2 + fr.M2c)) = f(cfg.index_of(m1, j));
      }
    amp.col(i) = fr.fibers[i].vectors.adjoint() * sub;
  }
  return amp;
}

VecXc cylinder_bloch_synthesize(const CylinderFrame& fr, const MatXc& amplitudes) {
  const SupercellConfig& cfg = fr.cfg;
  const int J = cfg.J();
  const int n2 = 2 * fr.M2c + 1;
  VecXc f = VecXc::Zero(cfg.dim());
  for (size_t i = 0; i < fr.fibers.size(); ++i) {
    int l = fr.fibers[i].l;
    VecXc sub = fr.fibers[i].vectors * amplitudes.col(i);
    for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1)
      for (int m2 = -fr.M2c; m2 <= fr.M2c; ++m2) {
        int j = l + cfg.N * m2;
        if (std::abs(j) > J) continue;
        f(cfg.index_of(m1, j)) += sub((m1 + cfg.M1) * n2 + (m2 + fr.M2c));
      }
  }
  return f;
}

MatXc assemble_edge_bloch_frame(const CylinderFrame& fr, const FourierPotential& W) {
  const SupercellConfig& cfg = fr.cfg;
  const int B = fr.B;
  const int nfib = static_cast<int>(fr.fibers.size());
  const int n = nfib * B;
  const int n2 = 2 * fr.M2c + 1;

  auto harm = wall_harmonics(cfg.wall, cfg.N, cfg.delta);
  int pmax = 0;
  for (auto& [p, v] : harm) pmax = std::max(pmax, std::abs(p));
  std::vector<Complex> cp(2 * pmax + 1, Complex(0, 0));
  for (auto& [p, v] : harm) cp[p + pmax] = v;
  auto wallc = [&](long p) {
    return std::abs(p) > pmax ? Complex(0, 0) : cp[p + pmax];
  };

  MatXc H = MatXc::Zero(n, n);
  for (int i = 0; i < nfib; ++i)
    for (int b = 0; b < B; ++b) H(i * B + b, i * B + b) = fr.fibers[i].energies(b);

  // Wall coupling: writing the transverse shift as c2 + p/N with
  // p = (l - l') + N (s - c2), fiber l' couples to l with row frame shift
  // (m1 + c1, m2 + s).
  parallel_for(nfib, [&](int i) {
    int l = fr.fibers[i].l;
    for (int ip = 0; ip < nfib; ++ip) {
      int lp = fr.fibers[ip].l;
      MatXc blk = MatXc::Zero(fr.frame_dim(), B);
      bool any = false;
      for (auto& [w, wv] : W.coeffs) {
        IndexPair c = cfg.edge.dual_index(w);
        for (int s = -2 * fr.M2c; s <= 2 * fr.M2c; ++s) {
          Complex coef = wv * wallc(long(l - lp) + long(cfg.N) * (s - c[1]));
          if (std::abs(coef) == 0.0) continue;
          any = true;
          for (int m1 = std::max(-cfg.M1, -cfg.M1 - c[0]);
               m1 <= std::min(cfg.M1, cfg.M1 - c[0]); ++m1)
            for (int m2 = std::max(-fr.M2c, -fr.M2c - s);
                 m2 <= std::min(fr.M2c, fr.M2c - s); ++m2) {
              int row = (m1 + c[0] + cfg.M1) * n2 + (m2 + s + fr.M2c);
              int col = (m1 + cfg.M1) * n2 + (m2 + fr.M2c);
              for (int b = 0; b < B; ++b)
                blk(row, b) += cfg.delta * coef * fr.fibers[ip].vectors(col, b);
            }
        }
      }
      if (!any) continue;
      H.block(i * B, ip * B, B, B) += fr.fibers[i].vectors.adjoint() * blk;
    }
  });
  H = 0.5 * (H + H.adjoint()).eval();
  return H;
}

std::vector<EdgeState> solve_near_bloch_frame(const CylinderFrame& fr, const FourierPotential& W,
                                              double E_target, int n_eigs) {
  MatXc H = assemble_edge_bloch_frame(fr, W);
  auto pairs = eig_near_dense(H, E_target, n_eigs);
  std::vector<EdgeState> out;
  out.reserve(pairs.size());
  for (auto& p : pairs) {
    MatXc amp(fr.B, fr.fibers.size());
    for (size_t i = 0; i < fr.fibers.size(); ++i) amp.col(i) = p.vector.segment(i * fr.B, fr.B);
    VecXc coeffs = cylinder_bloch_synthesize(fr, amp);
    out.push_back(classify_state(fr.cfg, p.value, coeffs));
  }
  return out;
}

}  // namespace honeylat
