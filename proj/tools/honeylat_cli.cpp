// Command-line front end: band structures, Dirac-point reports, edge-dual
// slices, no-fold certification, supercell edge-state sweeps, 1D effective
// models and the lattice-scale scans, all emitted as plot-ready CSV/JSON.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "honeylat/acceptance.hpp"
#include "honeylat/edge.hpp"
#include "honeylat/io.hpp"

using namespace honeylat;
namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAcceptance = 4;

struct CommonOpts {
  std::string potential = "builtin";
  double eps = 10.0;
  double delta = 0.3;
  std::string edge = "1,0";
  double kpar = 2.0 * kPi / 3.0;
  int M = 10;
  int N = 24;
  std::string out = ".";
  int threads = 0;
};

std::pair<FourierPotential, FourierPotential> load_vw(const CommonOpts& o) {
  if (o.potential == "builtin") return builtin_potentials();
  FourierPotential V = load_potential_json(o.potential);
  auto [Vb, W] = builtin_potentials();
  return {V, W};
}

EdgeFrame parse_edge(const TriangularLattice& lat, const std::string& s) {
  int a1 = 1, b1 = 0;
  if (s == "zigzag") {
    a1 = 1;
    b1 = 0;
  } else if (s == "armchair") {
    a1 = 1;
    b1 = 1;
  } else if (std::sscanf(s.c_str(), "%d,%d", &a1, &b1) != 2) {
    throw ConfigError("edge must be 'a1,b1', 'zigzag' or 'armchair'");
  }
  return edge_frame(lat, a1, b1);
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--potential", o.potential, "'builtin' or a potential JSON file");
  cmd->add_option("--eps", o.eps, "bulk potential strength");
  cmd->add_option("--delta", o.delta, "domain-wall strength/scale");
  cmd->add_option("--edge", o.edge, "edge direction a1,b1 (or zigzag/armchair)");
  cmd->add_option("--kpar", o.kpar, "parallel quasimomentum");
  cmd->add_option("--M", o.M, "plane-wave cutoff");
  cmd->add_option("--N", o.N, "supercell size");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads (HONEYLAT_THREADS overrides)");
}

void apply_threads(const CommonOpts& o) {
  if (o.threads > 0) {
#ifdef _WIN32
#else
    setenv("HONEYLAT_THREADS", std::to_string(o.threads).c_str(), 1);
#endif
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"honeycomb-lattice spectral toolkit"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* bands = app.add_subcommand("bands", "dispersion surfaces over the Brillouin zone");
  int grid_n = 48, n_bands = 3;
  bands->add_option("--grid", grid_n, "BZ grid resolution");
  bands->add_option("--bands", n_bands, "number of bands");
  add_common(bands, o);

  auto* dirac = app.add_subcommand("dirac", "Dirac point report at the vertex K");
  add_common(dirac, o);

  auto* slice = app.add_subcommand("slice", "edge-dual dispersion slice");
  int slice_pts = 257;
  slice->add_option("--points", slice_pts, "lambda grid points");
  slice->add_option("--bands", n_bands, "number of bands");
  add_common(slice, o);

  auto* nofold = app.add_subcommand("nofold", "spectral no-fold certification");
  double a_param = 0.01, nu = 1.0;
  nofold->add_option("--a", a_param, "window parameter");
  nofold->add_option("--nu", nu, "window exponent");
  add_common(nofold, o);

  auto* esweep = app.add_subcommand("edge-sweep", "supercell spectra vs delta");
  std::vector<double> deltas{0.5, 1.0, 1.5, 2.0};
  esweep->add_option("--deltas", deltas, "delta values");
  add_common(esweep, o);

  auto* ksweep = app.add_subcommand("kpar-sweep", "supercell spectra vs k_par");
  int kpts = 13;
  double khalf = 0.3;
  ksweep->add_option("--points", kpts, "k_par grid points");
  ksweep->add_option("--halfwidth", khalf, "half-width around 2pi/3");
  add_common(ksweep, o);

  auto* eff = app.add_subcommand("effective-1d", "1D Dirac/Schroedinger effective models");
  add_common(eff, o);

  auto* vscan = app.add_subcommand("v11-scan", "lattice-scale scan of V11");
  std::string structure = "honeycomb";
  std::vector<double> avals{0.45, 0.55, 0.65, 0.8, 1.0, 1.3};
  vscan->add_option("--structure", structure, "triangular or honeycomb");
  vscan->add_option("--a-values", avals, "lattice scales");
  add_common(vscan, o);

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  std::vector<int> criteria;
  verify->add_option("--criteria", criteria, "criterion ids (default: all)");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_threads(o);
    fs::create_directories(o.out);

    if (*verify) {
      bool ok = run_acceptance(criteria, std::cout);
      return ok ? 0 : kExitAcceptance;
    }

    auto [V, W] = load_vw(o);
    EdgeFrame ef = parse_edge(V.lattice, o.edge);

    if (*bands) {
      Manifest man("bands");
      man.input("eps", o.eps);
      man.input("M", o.M);
      auto samples = band_surface(V.scaled(o.eps), grid_n, n_bands, o.M);
      CsvWriter csv(o.out + "/bands.csv", {"k1_frac", "k2_frac", "b", "E"});
      for (auto& s : samples) csv.row({s.k1_frac, s.k2_frac, double(s.b), s.E});
      man.output(o.out + "/bands.csv");
      man.write(o.out + "/bands.manifest.json");
    } else if (*dirac) {
      DiracOptions opt;
      opt.M = o.M;
      DiracPointData dp = find_dirac_point(V.scaled(o.eps), opt);
      dp.theta_sharp = theta_sharp(dp, W);
      nlohmann::json j;
      j["K"] = {dp.K.x(), dp.K.y()};
      j["E_star"] = dp.E_star;
      j["b_star"] = dp.b_star;
      j["lambda_sharp_abs"] = dp.lambda_sharp_abs;
      j["lambda_sharp_fourier_sum"] = std::abs(dp.lambda_sharp_sum);
      j["slope_anisotropy"] = dp.slope_anisotropy;
      j["theta_sharp"] = dp.theta_sharp;
      j["gap_to_next"] = dp.gap_to_next;
      std::ofstream(o.out + "/dirac.json") << j.dump(2) << "\n";
      std::cout << j.dump(2) << "\n";
    } else if (*slice) {
      Manifest man("slice");
      man.input("eps", o.eps);
      man.input("edge", o.edge);
      man.input("M", o.M);
      auto curves = dispersion_slice(V.scaled(o.eps), ef, uniform_lambda_grid(slice_pts),
                                     n_bands, o.M);
      CsvWriter csv(o.out + "/slice.csv", {"lambda", "b", "E"});
      for (auto& c : curves)
        for (size_t i = 0; i < c.lambdas.size(); ++i)
          csv.row({c.lambdas[i], double(c.b), c.energies[i]});
      man.output(o.out + "/slice.csv");
      man.write(o.out + "/slice.manifest.json");
    } else if (*nofold) {
      DiracOptions opt;
      opt.M = o.M;
      FourierPotential Ve = V.scaled(o.eps);
      DiracPointData dp = find_dirac_point(Ve, opt);
      NoFoldReport rep = no_fold_check(Ve, ef, dp, a_param, nu, o.M);
      nlohmann::json j;
      j["pass"] = rep.pass;
      j["a_param"] = rep.a_param;
      j["nu"] = rep.nu;
      j["c1"] = rep.c1;
      j["c2"] = rep.c2;
      j["min_pm"] = rep.min_pm;
      if (rep.witness_lambda) j["witness_lambda"] = *rep.witness_lambda;
      std::ofstream(o.out + "/nofold.json") << j.dump(2) << "\n";
      std::cout << j.dump(2) << "\n";
      if (!rep.pass) return 0;  // a failing certificate is a valid result
    } else if (*esweep) {
      DiracOptions opt;
      opt.M = o.M;
      DiracPointData dp = find_dirac_point(V.scaled(o.eps), opt);
      SupercellConfig cfg;
      cfg.edge = ef;
      cfg.N = o.N;
      cfg.M1 = 4;
      cfg.M2 = 3.0;
      cfg.k_par = o.kpar;
      cfg.eps = o.eps;
      cfg.wall = make_wall_tanh(1.0, 1.0);
      Manifest man("edge-sweep");
      man.input("eps", o.eps);
      man.input("N", o.N);
      man.input("kpar", o.kpar);
      SpectrumSweep sw = sweep_delta(V, W, deltas, cfg, dp.E_star, 10);
      CsvWriter csv(o.out + "/edge_sweep.csv",
                    {"axis_value", "E", "is_localized", "ipr", "decay_rate"});
      for (auto& pt : sw.points)
        for (auto& st : pt.states)
          csv.row({pt.axis_value, st.E, double(st.is_localized), st.ipr, st.decay_rate});
      man.output(o.out + "/edge_sweep.csv");
      // per-point dump of the most-confined state, (m1, j, re, im) rows
      for (auto& pt : sw.points) {
        const EdgeState* best = nullptr;
        for (auto& st : pt.states)
          if (!best || st.ipr > best->ipr) best = &st;
        if (!best) continue;
        char name[64];
        std::snprintf(name, sizeof(name), "/state_delta_%g.csv", pt.axis_value);
        CsvWriter dump(o.out + name, {"m1", "j", "re", "im"});
        SupercellConfig c = cfg;
        c.delta = pt.axis_value;
        for (int m1 = -c.M1; m1 <= c.M1; ++m1)
          for (int j = -c.J(); j <= c.J(); ++j) {
            Complex v = best->coeffs(c.index_of(m1, j));
            dump.row({double(m1), double(j), v.real(), v.imag()});
          }
        man.output(o.out + name);
      }
      man.write(o.out + "/edge_sweep.manifest.json");
    } else if (*ksweep) {
      DiracOptions opt;
      opt.M = o.M;
      DiracPointData dp = find_dirac_point(V.scaled(o.eps), opt);
      SupercellConfig cfg;
      cfg.edge = ef;
      cfg.N = o.N;
      cfg.M1 = 4;
      cfg.M2 = 3.0;
      cfg.eps = o.eps;
      cfg.delta = o.delta;
      cfg.wall = make_wall_tanh(1.0, 1.0);
      std::vector<double> ks;
      for (int i = 0; i < kpts; ++i)
        ks.push_back(2.0 * kPi / 3.0 - khalf + 2.0 * khalf * i / (kpts - 1));
      Manifest man("kpar-sweep");
      man.input("eps", o.eps);
      man.input("delta", o.delta);
      man.input("N", o.N);
      SpectrumSweep sw = sweep_kpar(V, W, ks, cfg, dp.E_star, 10);
      CsvWriter csv(o.out + "/kpar_sweep.csv",
                    {"axis_value", "E", "is_localized", "ipr", "decay_rate"});
      for (auto& pt : sw.points)
        for (auto& st : pt.states)
          csv.row({pt.axis_value, st.E, double(st.is_localized), st.ipr, st.decay_rate});
      man.output(o.out + "/kpar_sweep.csv");
      man.write(o.out + "/kpar_sweep.manifest.json");
    } else if (*eff) {
      DiracOptions opt;
      opt.M = o.M;
      FourierPotential Ve = V.scaled(o.eps);
      DiracPointData dp = find_dirac_point(Ve, opt);
      dp.theta_sharp = theta_sharp(dp, W);
      DiracOperator1D D;
      D.vF = std::abs(dp.lambda_sharp_sum) * ef.frak_K2.norm();
      D.theta = dp.theta_sharp;
      D.wall = make_wall_tanh(1.0, 1.0);
      D.L = 40.0 * D.vF / std::abs(D.theta);
      D.n = 1025;
      Manifest man("effective-1d");
      man.input("eps", o.eps);
      man.input("vF", D.vF);
      man.input("theta_sharp", D.theta);
      DiracSpectrum sp = dirac_spectrum(D, 6);
      CsvWriter csv(o.out + "/effective_dirac.csv", {"theta_or_param", "eig_index", "E"});
      for (int i = 0; i < sp.energies.size(); ++i) csv.row({0.0, double(i), sp.energies(i)});
      ZeroMode zm = zero_mode_exact(D);
      CsvWriter prof(o.out + "/zero_mode.csv",
                     {"zeta", "re_plus", "im_plus", "re_minus", "im_minus"});
      for (size_t i = 0; i < zm.zeta.size(); ++i)
        prof.row({zm.zeta[i], zm.alpha_plus(i).real(), zm.alpha_plus(i).imag(),
                  zm.alpha_minus(i).real(), zm.alpha_minus(i).imag()});
      // wall homotopy traces of the unit-coefficient models
      DiracOperator1D Dh;
      Dh.vF = 1.0;
      Dh.theta = 1.0;
      Dh.L = 40.0;
      Dh.n = 513;
      EffectiveSchrodinger S;
      S.m_eff = effective_mass(V.scaled(-std::abs(o.eps)), ef, std::min(o.M, 8));
      S.wall = make_wall_tanh(1.0, 1.0);
      double A = 0.0;
      for (double trial : {2.0, 3.0, 4.0, 5.0, 6.0}) {
        EffectiveSchrodinger St = S;
        St.wall = make_wall_deformed(trial);
        if (bound_states(St).empty()) {
          A = trial;
          break;
        }
      }
      if (A > 0) {
        std::vector<double> thetas;
        for (int i = 0; i <= 10; ++i) thetas.push_back(i / 10.0);
        HomotopyTrace tr =
            protection_homotopy(S.wall, make_wall_deformed(A), thetas, Dh, S);
        CsvWriter hom(o.out + "/homotopy.csv",
                      {"theta_or_param", "dirac_E0", "schrodinger_count"});
        for (size_t i = 0; i < thetas.size(); ++i)
          hom.row({thetas[i], tr.dirac_E0[i], double(tr.schrodinger_count[i])});
        man.output(o.out + "/homotopy.csv");
      }
      man.output(o.out + "/effective_dirac.csv");
      man.output(o.out + "/zero_mode.csv");
      man.write(o.out + "/effective_1d.manifest.json");
    } else if (*vscan) {
      auto st = structure == "triangular" ? BumpSpec::Structure::triangular
                                          : BumpSpec::Structure::honeycomb;
      BumpSpec spec = make_dog_bump(0.12, 0.2, 0.7, st);
      Manifest man("v11-scan");
      man.input("structure", structure);
      auto scan = v11_scan(spec, avals);
      CsvWriter csv(o.out + "/v11_scan.csv", {"a", "v11_poisson", "v11_quadrature", "sign"});
      for (auto& s : scan)
        csv.row({s.a, s.v11_poisson, s.v11_quadrature, s.v11_poisson >= 0 ? 1.0 : -1.0});
      man.output(o.out + "/v11_scan.csv");
      man.write(o.out + "/v11_scan.manifest.json");
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
