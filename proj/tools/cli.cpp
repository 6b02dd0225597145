#include "cli.hpp"

#include "sg/asymptotics.hpp"
#include "sg/io.hpp"
#include "sg/parallel.hpp"
#include "sg/spectral.hpp"
#include "sg/validation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sg::cli {

namespace {

bool quiet() {
  const char* q = std::getenv("SG_QUIET");
  return q && std::string(q) == "1";
}

void progress(std::ostream& err, const std::string& msg) {
  if (!quiet()) err << "sg: " << msg << "\n";
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw UsageError(what + ": '" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> v;
  for (const auto& p : split(s, ',')) v.push_back(parse_number(p, what));
  if (v.empty()) throw UsageError(what + " is empty");
  return v;
}

std::pair<GridSpec, GridSpec> parse_grid_pair(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("--grid expects xmin:xmax:nx,tmin:tmax:nt");
  return {parse_grid(parts[0]), parse_grid(parts[1])};
}

double parse_ray(const std::string& s) {
  const std::string prefix = "zeta=";
  const std::string v = s.rfind(prefix, 0) == 0 ? s.substr(prefix.size()) : s;
  return parse_number(v, "--ray");
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw UsageError("failed writing " + path);
}

std::string csv_line(double x, double t, double u) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, t, u);
  return buf;
}

int report_exit(const ValidationReport& rep, const std::string& path, std::ostream& out) {
  write_text(path, to_json(rep).dump(2) + "\n", out);
  return rep.pass() ? 0 : 1;
}

PoleSet load_poles(const std::string& path) {
  return path.empty() ? PoleSet() : poles_from_json(load_json_file(path));
}

RadiationProfile load_radiation(const std::string& path) {
  return path.empty() ? RadiationProfile() : radiation_from_json(load_json_file(path));
}

}  // namespace

GridSpec parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError("grid '" + spec + "' must read min:max:count");
  GridSpec g;
  g.min = parse_number(parts[0], "grid min");
  g.max = parse_number(parts[1], "grid max");
  const double n = parse_number(parts[2], "grid count");
  if (n != std::floor(n) || n < 2) throw UsageError("grid count must be an integer >= 2");
  if (!(g.max > g.min)) throw UsageError("grid max must exceed min");
  g.count = std::size_t(n);
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sine-Gordon quarter-plane solitons: scattering, dressing, asymptotics"};
  app.name("sg");
  app.require_subcommand(1);
  int jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string poles_path, radiation_path, data_path, out_path, grid, t_spec, rays, ts_list;
  std::vector<std::string> ray_args, upper_args;
  SectorThresholds thr;
  TableSpec table;
  ScatterOptions sopt;
  RoundtripOptions ropt;
  CompareOptions copt;
  double L = 20, h = 0.05;
  double X_max = 0, T_max = 0;

  auto add_thresholds = [&](CLI::App* c) {
    c->add_option("--zeta-II", thr.zeta_II, "Sector II threshold");
    c->add_option("--zeta-IV", thr.zeta_IV, "Sector IV threshold");
    c->add_option("--eps-sol", thr.eps_sol, "half-width of the soliton sectors in zeta");
  };

  auto* scatter = app.add_subcommand("scatter", "spectral table of initial/boundary data");
  scatter->add_option("--data", data_path, "BoundaryData JSON")->required();
  scatter->add_option("--out", out_path, "SpectralTable JSON (default stdout)");
  scatter->add_option("--n-real", table.n_real, "real-axis points (even)");
  scatter->add_option("--k-min", table.k_min);
  scatter->add_option("--k-max", table.k_max);
  scatter->add_option("--n-circle", table.n_circle);
  scatter->add_option("--k-small", table.k_small);
  scatter->add_option("--upper", upper_args, "extra points re,im in the upper half-plane");
  scatter->add_option("--phase-step", sopt.phase_step);

  auto* dress_cmd = app.add_subcommand("dress", "u(x, t) of a pole set on a grid");
  dress_cmd->add_option("--poles", poles_path, "PoleSet JSON")->required();
  dress_cmd->add_option("--grid", grid, "xmin:xmax:nx,tmin:tmax:nt")->required();
  dress_cmd->add_option("--out", out_path, "CSV output (x,t,u)")->required();

  auto* asympt = app.add_subcommand("asympt", "asymptotic prediction, one JSON line per point");
  asympt->add_option("--poles", poles_path, "PoleSet JSON (default: none)");
  asympt->add_option("--radiation", radiation_path, "RadiationProfile JSON (default: r = 0)");
  asympt->add_option("--ray", ray_args, "ray zeta=value (repeatable)");
  asympt->add_option("--t", t_spec, "tmin:tmax:count along each ray, or a single time");
  asympt->add_option("--grid", grid, "xmin:xmax:nx,tmin:tmax:nt instead of rays");
  asympt->add_option("--out", out_path, "output file (default stdout)");
  add_thresholds(asympt);

  auto* validate = app.add_subcommand("validate", "cross-validation reports");
  validate->require_subcommand(1);
  auto* v_round = validate->add_subcommand("roundtrip", "dress, sample, scatter, compare");
  v_round->add_option("--poles", poles_path)->required();
  v_round->add_option("--out", out_path);
  v_round->add_option("--dx", ropt.dx);
  v_round->add_option("--X-max", X_max);
  v_round->add_option("--T-max", T_max);
  auto* v_asym = validate->add_subcommand("asymptotic", "asymptotics against exact dressing");
  v_asym->add_option("--poles", poles_path)->required();
  v_asym->add_option("--radiation", radiation_path);
  v_asym->add_option("--rays", rays, "comma-separated zeta values")->required();
  v_asym->add_option("--t", ts_list, "comma-separated times")->required();
  v_asym->add_option("--final-tol", copt.final_tol);
  v_asym->add_option("--out", out_path);
  add_thresholds(v_asym);
  auto* v_pde = validate->add_subcommand("pde", "PDE residual convergence");
  v_pde->add_option("--poles", poles_path)->required();
  v_pde->add_option("--length", L, "side of the square [0, L]^2");
  v_pde->add_option("--step", h, "coarse spacing");
  v_pde->add_option("--out", out_path);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "sg: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*scatter) {
      const BoundaryData data = boundary_from_json(load_json_file(data_path));
      for (const auto& u : upper_args) {
        const auto v = parse_list(u, "--upper");
        if (v.size() != 2) throw UsageError("--upper expects re,im");
        table.upper.push_back({v[0], v[1]});
      }
      sopt.jobs = jobs;
      progress(err, "scattering " + std::to_string(table.n_real) + " real + " +
                        std::to_string(table.n_circle) + " circle points");
      SpectralTable tab = build_spectral_table(data, table, sopt);
      derive_cd_and_reflection(tab);
      write_text(out_path, to_json(tab).dump(2) + "\n", out);
      return 0;
    }
    if (*dress_cmd) {
      const PoleSet poles = load_poles(poles_path);
      const auto [gx, gt] = parse_grid_pair(grid);
      const auto xs = gx.values(), ts = gt.values();
      if (xs.front() < 0 || ts.front() < 0) throw UsageError("grid must lie in x, t >= 0");
      progress(err, "dressing " + std::to_string(xs.size() * ts.size()) + " points");
      const Eigen::MatrixXd u = dress_grid(poles, xs, ts, jobs);
      std::string csv = "x,t,u\n";
      csv.reserve(csv.size() + xs.size() * ts.size() * 64);
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
          csv += csv_line(xs[j], ts[i], u(Eigen::Index(i), Eigen::Index(j)));
      write_text(out_path, csv, out);
      const int L = poles.Lambda();
      const int charge = partial_charge(poles, L);
      json summary = {{"rows", xs.size() * ts.size()},
                      {"poles", poles.size()},
                      {"Lambda", L},
                      {"charge", charge},
                      {"u_sector_IV", -2 * pi * charge}};
      out << summary.dump() << "\n";
      return 0;
    }
    if (*asympt) {
      const PoleSet poles = load_poles(poles_path);
      const RadiationProfile r = load_radiation(radiation_path);
      std::vector<std::pair<double, double>> points;
      if (!grid.empty()) {
        if (!ray_args.empty()) throw UsageError("use either --grid or --ray, not both");
        const auto [gx, gt] = parse_grid_pair(grid);
        for (double t : gt.values())
          for (double x : gx.values()) points.emplace_back(x, t);
      } else {
        if (ray_args.empty() || t_spec.empty()) throw UsageError("asympt needs --ray and --t, or --grid");
        const auto ts = t_spec.find(':') == std::string::npos
                            ? std::vector<double>{parse_number(t_spec, "--t")}
                            : parse_grid(t_spec).values();
        for (const auto& ra : ray_args) {
          const double zeta = parse_ray(ra);
          if (zeta < 0) throw UsageError("--ray needs zeta >= 0");
          for (double t : ts) points.emplace_back(zeta * t, t);
        }
      }
      progress(err, "evaluating " + std::to_string(points.size()) + " points");
      std::vector<std::string> lines(points.size());
      parallel_for(points.size(), jobs, [&](std::size_t i) {
        lines[i] = to_json(assemble(points[i].first, points[i].second, poles, r, thr)).dump();
      });
      std::string text;
      for (const auto& l : lines) text += l + "\n";
      write_text(out_path, text, out);
      return 0;
    }
    if (*v_round) {
      const PoleSet poles = load_poles(poles_path);
      if (X_max > 0) ropt.X_max = X_max;
      if (T_max > 0) ropt.T_max = T_max;
      ropt.jobs = jobs;
      progress(err, "roundtrip for " + std::to_string(poles.size()) + " poles");
      return report_exit(roundtrip(poles, ropt), out_path, out);
    }
    if (*v_asym) {
      const PoleSet poles = load_poles(poles_path);
      const RadiationProfile r = load_radiation(radiation_path);
      copt.thresholds = thr;
      copt.jobs = jobs;
      const auto rep = compare_asymptotic(poles, r, parse_list(rays, "--rays"),
                                          parse_list(ts_list, "--t"), copt);
      return report_exit(rep, out_path, out);
    }
    if (*v_pde) {
      const PoleSet poles = load_poles(poles_path);
      progress(err, "residual convergence on [0, " + std::to_string(L) + "]^2");
      return report_exit(residual_convergence(poles, L, h, jobs), out_path, out);
    }
  } catch (const SpectralZeroError& e) {
    err << "sg: " << e.what() << " at k = (" << e.k.real() << ", " << e.k.imag() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    err << "sg: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace sg::cli
