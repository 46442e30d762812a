// spinenc: experiment driver. Writes CSV/JSON (and SVG with --plot) into --out.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "spinenc/spinenc.hpp"

namespace fs = std::filesystem;
using namespace spinenc;

namespace {

std::string noise_tag(double eps) {
  if (eps <= 0.0) return "";
  std::ostringstream o;
  o << "_eps" << eps;
  return o.str();
}

void write_json(const fs::path& path, const ExperimentSpec& spec, nlohmann::json j) {
  j["header"] = spec.header();
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void emit(const fs::path& csv, const ExperimentSpec& spec, const CsvTable& table, bool plot) {
  write_csv(csv.string(), spec.header(), table);
  std::cout << "wrote " << csv.string() << '\n';
  if (plot) {
    const auto [ps, series] = plot_for(table);
    fs::path svg = csv;
    svg.replace_extension(".svg");
    write_svg(svg.string(), ps, series);
    std::cout << "wrote " << svg.string() << '\n';
  }
}

int run(const ExperimentSpec& spec, bool plot, const std::string& csvIn, const std::string& plotOut,
        const std::vector<int>& grid) {
  const fs::path out = spec.out;
  if (spec.experiment != "hamiltonian" && spec.experiment != "layout") fs::create_directories(out);

  if (spec.experiment == "terms") {
    emit(out / "fig2_terms.csv", spec, terms_table(spec.smax), plot);
    std::vector<int> all;
    for (int twoS = 1; twoS <= 63; ++twoS) all.push_back(twoS);
    const CompactScalingStudy study = compact_scaling_study(all);
    emit(out / "appendixA.csv", spec, scaling_table(study), plot);
    write_json(out / "appendixA_fits.json", spec, scaling_fits_json(study));
    std::cout << "b1=" << fmt_num(study.fitPower.b) << " a1=" << fmt_num(study.fitPower.a)
              << " b2=" << fmt_num(study.fitAveraged.b) << " a2=" << fmt_num(study.fitAveraged.a) << '\n';
    return 0;
  }
  if (spec.experiment == "evolve") {
    const EvolveResult r = run_evolve(spec);
    emit(out / ("populations_" + to_string(spec.mapping) + "_2S" + std::to_string(spec.twoS) + noise_tag(spec.noise) + ".csv"),
         spec, r.table, plot);
    if (r.epsBar) std::cout << "eps_bar=" << fmt_num(*r.epsBar) << " eps_bar_shots=" << fmt_num(*r.epsBarShots) << '\n';
    return 0;
  }
  if (spec.experiment == "chain4") {
    const Chain4Result r = run_chain4(spec);
    emit(out / ("fig6_correlator_2S" + std::to_string(spec.twoS) + noise_tag(spec.noise) + ".csv"), spec, r.table, plot);
    std::cout << "pMtot(t_max)=" << fmt_num(r.rows.back().amplitudes.pMtot) << '\n';
    return 0;
  }
  if (spec.experiment == "scaling") {
    std::vector<int> twoS;
    for (int k = 1; k <= spec.smax; ++k) twoS.push_back(k);
    const ScalingResult r = run_scaling(twoS, grid.empty() ? default_step_grid() : grid, NoiseConfig(spec.noise));
    const std::string fig = spec.noise > 0.0 ? "fig8" : "fig7";
    emit(out / (fig + "_discrepancy" + noise_tag(spec.noise) + ".csv"), spec, r.table, plot);
    write_json(out / (fig + "_fits" + noise_tag(spec.noise) + ".json"), spec, r.fits);
    if (r.fits.contains("C")) std::cout << "C=" << fmt_num(r.fits["C"]) << " C_norm=" << fmt_num(r.fits["CNorm"]) << '\n';
    return 0;
  }
  if (spec.experiment == "plot") {
    require(!csvIn.empty(), "plot: --csv is required");
    const CsvTable t = read_csv(csvIn);
    fs::path svg = plotOut.empty() ? fs::path(csvIn).replace_extension(".svg") : fs::path(plotOut);
    const auto [ps, series] = plot_for(t);
    write_svg(svg.string(), ps, series);
    std::cout << "wrote " << svg.string() << '\n';
    return 0;
  }
  if (spec.experiment == "hamiltonian") {
    const Lattice lat = spec.lattice();
    nlohmann::json j;
    switch (spec.mapping) {
      case EncodingKind::Compact: j = hamiltonian_json(build_compact(lat), spec.mapping, lat); break;
      case EncodingKind::Direct: j = hamiltonian_json(build_direct(lat), spec.mapping, lat); break;
      case EncodingKind::Dicke: j = hamiltonian_json(build_dicke(lat), spec.mapping, lat); break;
      case EncodingKind::Qudit: j = hamiltonian_json(build_qudit(lat), lat); break;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  if (spec.experiment == "layout") {
    std::cout << EncodingLayout(spec.mapping, Spin{spec.twoS}, spec.nSites).summary().dump(2) << '\n';
    return 0;
  }
  throw ValidationError("unknown experiment '" + spec.experiment + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg spin-S chains on qubits and qudits"};
  ExperimentSpec spec;
  std::string mapping = "dicke", csvIn, plotOut;
  bool plot = false;
  int steps = -1;
  double dtau = -1.0;
  std::vector<int> grid;
  app.add_option("--experiment", spec.experiment, "terms | evolve | chain4 | scaling | plot | hamiltonian | layout")
      ->check(CLI::IsMember({"terms", "evolve", "chain4", "scaling", "plot", "hamiltonian", "layout"}));
  app.add_option("--mapping", mapping, "compact | direct | dicke | qudit");
  app.add_option("--spin", spec.twoS, "spin as the integer 2S");
  app.add_option("--sites", spec.nSites, "number of sites (open chain)");
  app.add_option("--dtau", dtau, "Trotter step (default 0.2, chain4: pi/10, scaling: 1/N)");
  app.add_option("--steps", steps, "largest step count (default 31, chain4: 11, or 12 for S=1)");
  app.add_option("--grid", grid, "step counts for scaling (default 2 8 32 128 512 2048)");
  app.add_option("--shots", spec.nShots, "shots per time point");
  app.add_option("--seed", spec.seed, "sampling seed");
  app.add_option("--noise", spec.noise, "two-unit depolarizing probability");
  app.add_option("--smax", spec.smax, "largest 2S for terms and scaling");
  app.add_option("--out", spec.out, "output directory");
  app.add_option("--csv", csvIn, "input CSV for --experiment plot");
  app.add_flag("--plot", plot, "also write an SVG next to each CSV");
  app.add_option("--svg", plotOut, "output path for --experiment plot");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    spec.mapping = parse_encoding(mapping);
    if (spec.experiment == "chain4") {
      if (app.count("--sites") == 0) spec.nSites = 4;
      spec.dtau = dtau > 0.0 ? dtau : std::numbers::pi / 10.0;
      spec.nSteps = steps >= 0 ? steps : (spec.twoS == 2 ? 12 : 11);
    } else {
      spec.dtau = dtau > 0.0 ? dtau : 0.2;
      spec.nSteps = steps >= 0 ? steps : 31;
    }
    if (spec.experiment == "scaling" && app.count("--smax") == 0) spec.smax = 7;
    if (app.count("--dtau") && dtau <= 0.0) throw ValidationError("--dtau must be > 0");
    spec.validate();
    return run(spec, plot, csvIn, plotOut, grid);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
