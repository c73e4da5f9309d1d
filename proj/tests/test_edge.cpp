#include <doctest.h>

#include <random>
#include <set>

#include "honeylat/edge.hpp"

using namespace honeylat;

namespace {

SupercellConfig small_cfg(const TriangularLattice& lat, int N = 12, double eps = 10.0,
                          double delta = 2.0) {
  SupercellConfig cfg;
  cfg.edge = edge_frame(lat, 1, 0);
  cfg.N = N;
  cfg.M1 = 3;
  cfg.M2 = 2.0;
  cfg.k_par = 2.0 * kPi / 3.0;
  cfg.eps = eps;
  cfg.delta = delta;
  cfg.wall = make_wall_tanh(1.0, 1.0);
  return cfg;
}

}  // namespace

TEST_CASE("wall harmonics: realness and synthesis accuracy") {
  DomainWall w = make_wall_tanh(1.0, 1.0);
  int N = 16;
  double delta = 0.5;
  auto harm = wall_harmonics(w, N, delta);
  // synthesize back at a few angles
  for (double phi : {0.3, 1.2, 2.8, 4.4}) {
    Complex acc(0, 0);
    for (auto& [p, c] : harm) acc += c * std::exp(Complex(0, p * phi));
    double want = w.profile(N * delta * std::sin(phi));
    CHECK(std::abs(acc.imag()) < 1e-9);
    CHECK(acc.real() == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("supercell assembly: V = W = 0 diagonal, Hermiticity") {
  auto [V, W] = builtin_potentials();
  FourierPotential zero{V.lattice, {}};
  SupercellConfig cfg = small_cfg(V.lattice, 8, 0.0, 0.5);
  MatXc H = assemble_edge(zero, zero, cfg);
  for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1)
    for (int j = -cfg.J(); j <= cfg.J(); ++j) {
      int i = cfg.index_of(m1, j);
      CHECK(std::abs(H(i, i) - cfg.momentum(m1, j).squaredNorm()) < 1e-13);
    }
  CHECK((H - MatXc(H.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-13);

  SupercellConfig full = small_cfg(V.lattice, 8, 10.0, 1.0);
  MatXc Hf = assemble_edge(V, W, full);
  CHECK((Hf - Hf.adjoint()).cwiseAbs().maxCoeff() < 1e-13);

  SupercellConfig cramped = small_cfg(V.lattice, 4, 10.0, 0.05);
  CHECK_THROWS_AS(assemble_edge(V, W, cramped), ConfigError);
}

TEST_CASE("delta = 0 block-decoupling against bulk fibers") {
  auto [V, W] = builtin_potentials();
  SupercellConfig cfg = small_cfg(V.lattice, 6, 3.0, 0.0);
  MatXc H = assemble_edge(V, W, cfg);
  VecX super = eigvals_hermitian(H);

  // union over fibers l of the bulk spectra at k(l), with the induced
  // plane-wave windows (exact index bookkeeping)
  std::vector<double> merged;
  const int J = cfg.J();
  for (int l = -cfg.N / 2; l < cfg.N - cfg.N / 2; ++l) {
    std::vector<IndexPair> idx;
    for (int m1 = -cfg.M1; m1 <= cfg.M1; ++m1)
      for (int m2 = -64; m2 <= 64; ++m2)
        if (std::abs(l + cfg.N * m2) <= J) idx.push_back({m1, m2});
    // frame-index fiber: momenta (kfrac + m1) K1 + (l/N + m2) K2 with eps V
    const double kfrac = cfg.k_par / (2.0 * kPi);
    MatXc Hf = MatXc::Zero(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a) {
      Vec2 kk = (kfrac + idx[a][0]) * cfg.edge.frak_K1 +
                (double(l) / cfg.N + idx[a][1]) * cfg.edge.frak_K2;
      Hf(a, a) = kk.squaredNorm();
      for (size_t b = 0; b < idx.size(); ++b) {
        for (auto& [w, v] : V.coeffs) {
          IndexPair cc = cfg.edge.dual_index(w);
          if (idx[a][0] - idx[b][0] == cc[0] && idx[a][1] - idx[b][1] == cc[1])
            Hf(a, b) += cfg.eps * v;
        }
      }
    }
    VecX ev = eigvals_hermitian(Hf);
    for (int i = 0; i < ev.size(); ++i) merged.push_back(ev(i));
  }
  std::sort(merged.begin(), merged.end());
  REQUIRE(static_cast<int>(merged.size()) == super.size());
  for (int i = 0; i < super.size(); ++i)
    CHECK(super(i) == doctest::Approx(merged[i]).epsilon(1e-11));
}

TEST_CASE("localized doublet at paper-scale delta; extended at delta = 0") {
  auto [V, W] = builtin_potentials();
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(V.scaled(10.0), opt);

  SupercellConfig cfg = small_cfg(V.lattice, 24, 10.0, 6.0);
  cfg.M1 = 4;
  cfg.M2 = 8.0;  // the delta = 6 wall is sharp; resolve its harmonics
  MatXc H = assemble_edge(V, W, cfg);
  auto states = solve_near(H, cfg, dp.E_star, 10);
  int nloc = 0;
  for (auto& s : states) nloc += s.is_localized;
  CHECK(nloc >= 2);

  SupercellConfig c0 = cfg;
  c0.delta = 0.0;
  MatXc H0 = assemble_edge(V, W, c0);
  auto states0 = solve_near(H0, c0, dp.E_star, 8);
  for (auto& s : states0) {
    CHECK_FALSE(s.is_localized);
    CHECK(s.ipr < 3.0 / c0.N);
  }
}

TEST_CASE("doublet mean follows delta^2; splitting shrinks with N") {
  auto [V, W] = builtin_potentials();
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(V.scaled(10.0), opt);
  dp.theta_sharp = theta_sharp(dp, W);

  SupercellConfig cfg = small_cfg(V.lattice, 24, 10.0, 1.0);
  cfg.M1 = 4;
  cfg.M2 = 3.0;

  std::vector<double> deltas{0.7, 1.0, 1.4, 2.0};
  std::vector<double> shifts;
  for (double d : deltas) {
    SupercellConfig c = cfg;
    c.delta = d;
    auto states = solve_near(assemble_edge(V, W, c), c, dp.E_star, 8);
    std::sort(states.begin(), states.end(),
              [](const EdgeState& a, const EdgeState& b) { return a.ipr > b.ipr; });
    REQUIRE(states.size() >= 2);
    shifts.push_back(0.5 * (states[0].E + states[1].E) - dp.E_star);
  }
  // log-log slope of |mean shift| vs delta close to 2
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(deltas.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(deltas[i]), ly = std::log(std::abs(shifts[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double expo = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(expo == doctest::Approx(2.0).epsilon(0.2));

  // splitting decreases with N at fixed delta
  double split12 = 0, split24 = 0;
  for (int N : {12, 24}) {
    SupercellConfig c = cfg;
    c.N = N;
    c.delta = 1.5;
    auto states = solve_near(assemble_edge(V, W, c), c, dp.E_star, 8);
    std::sort(states.begin(), states.end(),
              [](const EdgeState& a, const EdgeState& b) { return a.ipr > b.ipr; });
    REQUIRE(states.size() >= 2);
    (N == 12 ? split12 : split24) = std::abs(states[0].E - states[1].E);
  }
  CHECK(split24 < 0.5 * split12);
}

TEST_CASE("multiscale comparison: overlap improves as delta shrinks at fixed N delta") {
  auto [V, W] = builtin_potentials();
  FourierPotential Ve = V.scaled(0.5);
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(Ve, opt);
  dp.theta_sharp = theta_sharp(dp, W);

  auto defect_at = [&](int N, double delta) {
    SupercellConfig cfg;
    cfg.edge = edge_frame(V.lattice, 1, 0);
    cfg.N = N;
    cfg.M1 = 3;
    cfg.M2 = 2.6;
    cfg.k_par = 2.0 * kPi / 3.0;
    cfg.eps = 0.5;
    cfg.delta = delta;
    cfg.wall = make_wall_tanh(1.0, 1.0);
    CylinderFrame fr = build_cylinder_frame(V, cfg, 2, 6, 0.45);
    auto states = solve_near_bloch_frame(fr, W, dp.E_star, 6);
    std::sort(states.begin(), states.end(),
              [](const EdgeState& a, const EdgeState& b) { return a.ipr > b.ipr; });
    REQUIRE(states.size() >= 2);
    std::vector<EdgeState> doublet{states[0], states[1]};
    MultiscaleReport rep = compare_multiscale(doublet, dp, cfg, Ve);
    return rep;
  };

  MultiscaleReport big = defect_at(192, 0.4);
  MultiscaleReport small = defect_at(384, 0.2);
  CHECK(small.overlap_defect < big.overlap_defect);
  CHECK(big.overlap_defect < 0.5);
  // two-point scaling exponent at least ~1/2
  double p = std::log(big.overlap_defect / small.overlap_defect) / std::log(0.4 / 0.2);
  CHECK(p >= 0.5);
  // measured decay within 25% of the prediction at the smaller delta
  CHECK(std::abs(small.decay_rate_measured - small.decay_rate_predicted) <
        0.25 * small.decay_rate_predicted);
}

TEST_CASE("bloch-frame solver agrees with the plane-wave supercell") {
  auto [V, W] = builtin_potentials();
  FourierPotential Ve = V.scaled(0.5);
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(Ve, opt);

  SupercellConfig cfg;
  cfg.edge = edge_frame(V.lattice, 1, 0);
  cfg.N = 12;
  cfg.M1 = 3;
  cfg.M2 = 2.6;
  cfg.k_par = 2.0 * kPi / 3.0;
  cfg.eps = 0.5;
  cfg.delta = 0.35;
  cfg.wall = make_wall_tanh(1.0, 1.0);

  MatXc H = assemble_edge(V, W, cfg);  // cfg.eps scales V inside
  auto exact = solve_near(H, cfg, dp.E_star, 6);

  CylinderFrame fr = build_cylinder_frame(V, cfg, 2, 10, 0.5);
  auto reduced = solve_near_bloch_frame(fr, W, dp.E_star, 6);

  REQUIRE(exact.size() >= 4);
  REQUIRE(reduced.size() >= 4);
  for (int i = 0; i < 4; ++i)
    CHECK(reduced[i].E == doctest::Approx(exact[i].E).epsilon(5e-4));
}

TEST_CASE("k_par sweep symmetry about pi") {
  auto [V, W] = builtin_potentials();
  DiracOptions opt;
  opt.M = 8;
  DiracPointData dp = find_dirac_point(V.scaled(10.0), opt);
  SupercellConfig cfg = small_cfg(V.lattice, 12, 10.0, 1.5);
  cfg.M1 = 4;  // the mirror k_par -> 2pi - k_par shifts the m1 window by one;
               // the spectral symmetry holds up to truncation, which dies fast in M1

  std::vector<double> ks{2.0 * kPi / 3.0 - 0.15, 2.0 * kPi / 3.0 + 0.15};
  std::vector<double> mirror{2.0 * kPi - ks[0], 2.0 * kPi - ks[1]};
  SpectrumSweep a = sweep_kpar(V, W, ks, cfg, dp.E_star, 6);
  SpectrumSweep b = sweep_kpar(V, W, mirror, cfg, dp.E_star, 6);
  for (size_t i = 0; i < ks.size(); ++i) {
    std::vector<double> ea, eb;
    for (auto& s : a.points[i].states) ea.push_back(s.E);
    for (auto& s : b.points[i].states) eb.push_back(s.E);
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    for (size_t j = 0; j < std::min(ea.size(), eb.size()); ++j)
      CHECK(ea[j] == doctest::Approx(eb[j]).epsilon(1e-8));
  }
}

TEST_CASE("cylinder transform: mode concentration") {
  auto [V, W] = builtin_potentials();
  FourierPotential Ve = V.scaled(1.0);
  SupercellConfig cfg;
  cfg.edge = edge_frame(V.lattice, 1, 0);
  cfg.N = 12;
  cfg.M1 = 3;
  cfg.M2 = 2.6;
  cfg.k_par = 0.41 * 2.0 * kPi;
  cfg.eps = 1.0;
  cfg.delta = 0.0;
  cfg.wall = make_wall_tanh(1.0, 1.0);

  CylinderFrame fr = build_cylinder_frame(V, cfg, 2, 5, 0.5);
  // f = Phi_b(.; k(l0)) must analyze to a single unit amplitude
  int pick = 3;
  MatXc amp = MatXc::Zero(fr.B, fr.fibers.size());
  amp(2, pick) = 1.0;
  VecXc f = cylinder_bloch_synthesize(fr, amp);
  MatXc back = cylinder_bloch_analyze(fr, f);
  CHECK(std::abs(back(2, pick) - 1.0) < 1e-10);
  back(2, pick) = 0.0;
  CHECK(back.cwiseAbs().maxCoeff() < 1e-10);

  // random 5-mode superpositions are recovered exactly
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 3; ++t) {
    MatXc a2 = MatXc::Zero(fr.B, fr.fibers.size());
    for (int r = 0; r < 5; ++r)
      a2(rng() % fr.B, rng() % fr.fibers.size()) += Complex(gauss(rng), gauss(rng));
    VecXc f2 = cylinder_bloch_synthesize(fr, a2);
    CHECK((cylinder_bloch_analyze(fr, f2) - a2).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("directional gap: Case 1 clears a window about E*, Case 2 does not") {
  auto [V, W] = builtin_potentials();
  DiracOptions opt;
  opt.M = 8;

  auto extended_gap = [&](double eps) {
    DiracPointData dp = find_dirac_point(V.scaled(eps), opt);
    SupercellConfig cfg = small_cfg(V.lattice, 24, eps, 2.0);
    cfg.M1 = 4;
    cfg.M2 = 4.0;
    MatXc H = assemble_edge(V, W, cfg);
    auto states = solve_near(H, cfg, dp.E_star, 14);
    // distance from E* to the nearest extended (bulk-like) state
    double g = 1e300;
    for (auto& s : states)
      if (s.ipr < 2.0 / cfg.N) g = std::min(g, std::abs(s.E - dp.E_star));
    return g;
  };

  // Case 1 (eps V11 > 0): a directional gap opens about E*.
  CHECK(extended_gap(10.0) > 0.05);
  // Case 2 (eps V11 < 0): extended spectrum persists at E*.
  CHECK(extended_gap(-10.0) < 0.02);
}
