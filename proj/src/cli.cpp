#include "diffavg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "diffavg/averaging.hpp"
#include "diffavg/diffops.hpp"
#include "diffavg/io.hpp"
#include "diffavg/reconstruct.hpp"
#include "diffavg/synth.hpp"

namespace diffavg::cli {

namespace {

namespace fs = std::filesystem;

// Raised after outputs are written when the optimizer missed its target.
class TargetMissed : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(std::string(what) + ": cannot parse '" + s + "'");
}

std::vector<GridTransform> read_grids(const std::string& list) {
  std::vector<GridTransform> grids;
  for (const auto& path : split_commas(list)) grids.push_back(read_grid(fs::path(path)));
  if (grids.empty()) throw ValidationError("--grids: no grid files given");
  return grids;
}

WeightVector parse_weights(const std::string& spec, const std::vector<GridTransform>& grids) {
  if (spec == "uniform") return WeightVector::uniform(grids.size());
  if (spec == "distance") return distance_weights(grids);
  std::vector<double> raw;
  for (const auto& tok : split_commas(spec)) raw.push_back(parse_real(tok, "--weights"));
  if (raw.size() != grids.size()) {
    throw ValidationError("--weights: " + std::to_string(raw.size()) + " weights for " +
                          std::to_string(grids.size()) + " grids");
  }
  return WeightVector::normalized(std::move(raw));
}

void require_target(const ConvergenceReport& report, const char* what) {
  if (report.stopping_reason != StopReason::target_reached) {
    throw TargetMissed(std::string(what) + ": optimizer stopped (" +
                       std::string(to_string(report.stopping_reason)) + ") at energy decrease " +
                       fmt(report.energy_decrease()));
  }
}

void print_report_summary(std::ostream& out, const ConvergenceReport& r) {
  out << "energy_decrease=" << fmt(r.energy_decrease())
      << " accepted_steps=" << r.accepted_steps() << " min_jac=" << fmt(r.records.back().min_jac)
      << " stop=" << to_string(r.stopping_reason) << '\n';
}

struct SynthArgs {
  Index nx = 65, ny = 65;
  std::string kind = "phi0";
  double amplitude = Phi0Params{}.amplitude;
  int modes = Phi0Params{}.modes;
  double theta_deg = 75.0;
  std::vector<double> center{0.5, 0.5};
  double r_inner = RotationParams{}.r_inner;
  double r_outer = RotationParams{}.r_outer;
  std::uint64_t seed = 0;
  std::string out;
};

int do_synth(const SynthArgs& a, std::ostream& out) {
  const DomainSpec spec(a.nx, a.ny);
  const Phi0Params p0{a.amplitude, a.modes, a.seed};
  RotationParams rot;
  rot.theta = a.theta_deg * std::numbers::pi / 180.0;
  rot.center = Eigen::Vector2d(a.center.at(0), a.center.at(1));
  rot.r_inner = a.r_inner;
  rot.r_outer = a.r_outer;

  GridTransform g = identity_grid(spec);
  if (a.kind == "identity") {
  } else if (a.kind == "phi0") {
    g = synthetic_phi0(spec, p0);
  } else if (a.kind == "rotation") {
    g = windowed_rotation(spec, rot);
  } else if (a.kind == "rotated-phi0") {
    const GridTransform phi0 = synthetic_phi0(spec, p0);
    g = resample_compose(windowed_rotation(spec, rot), phi0).grid;
  } else {
    throw ValidationError("--kind must be identity, phi0, rotation or rotated-phi0");
  }
  write_grid(g, fs::path(a.out));
  const FoldReport folds = fold_check(g);
  out << "wrote " << a.out << " min_jac=" << fmt(folds.min_jac) << '\n';
  return kOk;
}

struct ReconstructArgs {
  std::string jac, curl, init, report, out;
  double target = 0.90;
  int max_iters = ReconstructOptions{}.max_iters;
};

int do_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  const ScalarField f0 = read_field(fs::path(a.jac));
  const ScalarField g0 = read_field(fs::path(a.curl));
  const GridTransform init = a.init.empty() ? identity_grid(f0.spec()) : read_grid(fs::path(a.init));
  ReconstructOptions opts;
  opts.energy_decrease_target = a.target;
  opts.max_iters = a.max_iters;
  const Reconstruction r = reconstruct(init, f0, g0, opts);
  write_grid(r.grid, fs::path(a.out));
  if (!a.report.empty()) write_report(r.report, fs::path(a.report));
  print_report_summary(out, r.report);
  require_target(r.report, "reconstruct");
  return kOk;
}

struct AverageArgs {
  std::string grids, weights = "uniform", out, report;
  double target = 0.99;
  int max_iters = ReconstructOptions{}.max_iters;
};

int do_average(const AverageArgs& a, std::ostream& out) {
  const auto grids = read_grids(a.grids);
  const WeightVector w = parse_weights(a.weights, grids);
  ReconstructOptions opts;
  opts.energy_decrease_target = a.target;
  opts.max_iters = a.max_iters;
  const Reconstruction r = average_diffeomorphisms(grids, w, opts);
  write_grid(r.grid, fs::path(a.out));
  if (!a.report.empty()) write_report(r.report, fs::path(a.report));
  print_report_summary(out, r.report);
  require_target(r.report, "average");
  return kOk;
}

int do_euclid(const AverageArgs& a, std::ostream& out) {
  const auto grids = read_grids(a.grids);
  const GridTransform g = euclidean_average(grids, parse_weights(a.weights, grids));
  write_grid(g, fs::path(a.out));
  const FoldReport folds = fold_check(g);
  out << "min_jac=" << fmt(folds.min_jac) << " nonpositive=" << folds.nonpositive_count << '\n';
  return kOk;
}

int do_check(const std::string& grid_path, const std::string& ref_path, std::ostream& out) {
  const GridTransform g = read_grid(fs::path(grid_path));
  const FoldReport folds = fold_check(g);
  out << "min_jac=" << fmt(folds.min_jac) << " nonpositive=" << folds.nonpositive_count;
  if (!ref_path.empty()) out << " rms=" << fmt(grid_rms_distance(g, read_grid(fs::path(ref_path))));
  out << '\n';
  return kOk;
}

struct ReproArgs {
  Index size = 65;
  std::string out_dir;
  int max_iters = ReconstructOptions{}.max_iters;
};

int do_repro(const ReproArgs& a, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const DomainSpec spec(a.size, a.size);

  // Every stage reads back what the previous one wrote.
  write_grid(synthetic_phi0(spec), dir / "phi0.grid");
  const GridTransform phi0 = read_grid(dir / "phi0.grid");
  write_field(jacobian_det(phi0), dir / "phi0_jac.field");
  write_field(curl2d(phi0), dir / "phi0_curl.field");
  const ScalarField f0 = read_field(dir / "phi0_jac.field");
  const ScalarField g0 = read_field(dir / "phi0_curl.field");

  struct Row {
    std::string name;
    const ConvergenceReport* report;
    GridTransform grid;
    double seconds;
  };
  std::vector<Row> rows;
  std::vector<Reconstruction> runs;
  runs.reserve(3);

  for (const double target : {0.90, 0.99}) {
    ReconstructOptions opts;
    opts.energy_decrease_target = target;
    opts.max_iters = a.max_iters;
    const auto t0 = clock::now();
    runs.push_back(reconstruct(identity_grid(spec), f0, g0, opts));
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const std::string name = target < 0.95 ? "reconstruct_90" : "reconstruct_99";
    write_grid(runs.back().grid, dir / (name + ".grid"));
    write_report(runs.back().report, dir / (name + ".csv"));
    rows.push_back({name, &runs.back().report, runs.back().grid, secs});
  }

  const auto [phi1, phi2] = rotation_pair(phi0);
  write_grid(phi1, dir / "phi1.grid");
  write_grid(phi2, dir / "phi2.grid");
  const std::vector<GridTransform> pair{read_grid(dir / "phi1.grid"), read_grid(dir / "phi2.grid")};
  const WeightVector w = WeightVector::uniform(2);
  {
    ReconstructOptions opts;
    opts.energy_decrease_target = 0.99;
    opts.max_iters = a.max_iters;
    const auto t0 = clock::now();
    runs.push_back(average_diffeomorphisms(pair, w, opts));
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    write_grid(runs.back().grid, dir / "average.grid");
    write_report(runs.back().report, dir / "average.csv");
    rows.push_back({"average", &runs.back().report, runs.back().grid, secs});
  }
  const GridTransform euclid = euclidean_average(pair, w);
  write_grid(euclid, dir / "euclid.grid");

  std::ostringstream table;
  table << "experiment energy_decrease min_jac rms_to_phi0 accepted_steps stop\n";
  for (const auto& row : rows) {
    table << row.name << ' ' << fmt(row.report->energy_decrease()) << ' '
          << fmt(fold_check(row.grid).min_jac) << ' ' << fmt(grid_rms_distance(row.grid, phi0))
          << ' ' << row.report->accepted_steps() << ' ' << to_string(row.report->stopping_reason)
          << '\n';
  }
  table << "euclidean - " << fmt(fold_check(euclid).min_jac) << ' '
        << fmt(grid_rms_distance(euclid, phi0)) << " - -\n";
  table << "phi0_rms_displacement " << fmt(rms_displacement(phi0)) << '\n';

  {
    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    summary << table.str();
  }
  out << table.str();
  for (const auto& row : rows) out << row.name << " seconds=" << fmt(row.seconds) << '\n';

  for (const auto& row : rows) require_target(*row.report, row.name.c_str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average 2D diffeomorphisms through their Jacobian and curl fields", "diffavg"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write an identity, phi0, or rotation fixture grid");
  s->add_option("--nx", synth.nx, "Node count in x")->capture_default_str();
  s->add_option("--ny", synth.ny, "Node count in y")->capture_default_str();
  s->add_option("--kind", synth.kind, "identity | phi0 | rotation | rotated-phi0")
      ->capture_default_str();
  s->add_option("--amplitude", synth.amplitude, "phi0 displacement amplitude")
      ->capture_default_str();
  s->add_option("--modes", synth.modes, "phi0 mode number")->capture_default_str();
  s->add_option("--theta-deg", synth.theta_deg, "Rotation angle in degrees (counter-clockwise)")
      ->capture_default_str();
  s->add_option("--center", synth.center, "Rotation center x,y")->delimiter(',')->expected(2);
  s->add_option("--r-inner", synth.r_inner, "Radius of the rigid region")->capture_default_str();
  s->add_option("--r-outer", synth.r_outer, "Radius where the rotation fades out")
      ->capture_default_str();
  s->add_option("--seed", synth.seed, "phi0 mode-mixture seed (0 = none)")->capture_default_str();
  s->add_option("--out", synth.out, "Output grid file")->required();

  std::string fields_grid, fields_jac, fields_curl;
  auto* f = app.add_subcommand("fields", "Write the Jacobian determinant and curl of a grid");
  f->add_option("--grid", fields_grid)->required();
  f->add_option("--out-jac", fields_jac)->required();
  f->add_option("--out-curl", fields_curl)->required();

  ReconstructArgs rec;
  auto* r = app.add_subcommand("reconstruct", "Build a grid with prescribed Jacobian and curl");
  r->add_option("--jac", rec.jac, "Target Jacobian field")->required();
  r->add_option("--curl", rec.curl, "Target curl field")->required();
  r->add_option("--init", rec.init, "Starting grid (default identity)");
  r->add_option("--target-decrease", rec.target, "Relative energy decrease to stop at")
      ->capture_default_str();
  r->add_option("--max-iters", rec.max_iters)->capture_default_str();
  r->add_option("--report", rec.report, "Convergence CSV");
  r->add_option("--out", rec.out, "Output grid file")->required();

  AverageArgs avg;
  auto* a = app.add_subcommand("average", "Average grids through their Jacobian and curl fields");
  a->add_option("--grids", avg.grids, "Comma-separated grid files")->required();
  a->add_option("--weights", avg.weights, "uniform | distance | w1,w2,...")
      ->capture_default_str();
  a->add_option("--target-decrease", avg.target)->capture_default_str();
  a->add_option("--max-iters", avg.max_iters)->capture_default_str();
  a->add_option("--report", avg.report, "Convergence CSV");
  a->add_option("--out", avg.out, "Output grid file")->required();

  AverageArgs euc;
  auto* e = app.add_subcommand("euclid", "Nodewise Euclidean average of grids");
  e->add_option("--grids", euc.grids, "Comma-separated grid files")->required();
  e->add_option("--weights", euc.weights, "uniform | distance | w1,w2,...")
      ->capture_default_str();
  e->add_option("--out", euc.out, "Output grid file")->required();

  std::string check_grid, check_ref;
  auto* c = app.add_subcommand("check", "Report folds and the RMS distance to a reference");
  c->add_option("--grid", check_grid)->required();
  c->add_option("--ref", check_ref);

  ReproArgs repro;
  auto* p = app.add_subcommand("repro", "Run the reconstruction and averaging experiments");
  p->add_option("--size", repro.size, "Grid node count per side")->capture_default_str();
  p->add_option("--out-dir", repro.out_dir)->required();
  p->add_option("--max-iters", repro.max_iters)->capture_default_str();

  std::vector<std::string> argv_store{"diffavg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& arg : argv_store) argv.push_back(arg.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help, out, err);
  } catch (const CLI::ParseError& pe) {
    err << "usage_error: " << one_line(pe.what()) << '\n';
    return kUsageError;
  }

  try {
    if (*s) return do_synth(synth, out);
    if (*f) {
      const GridTransform g = read_grid(fs::path(fields_grid));
      write_field(jacobian_det(g), fs::path(fields_jac));
      write_field(curl2d(g), fs::path(fields_curl));
      return kOk;
    }
    if (*r) return do_reconstruct(rec, out);
    if (*a) return do_average(avg, out);
    if (*e) return do_euclid(euc, out);
    if (*c) return do_check(check_grid, check_ref, out);
    if (*p) return do_repro(repro, out);
  } catch (const ValidationError& ex) {
    err << "validation_error: " << one_line(ex.what()) << '\n';
    return kValidationError;
  } catch (const fs::filesystem_error& ex) {
    err << "validation_error: " << one_line(ex.what()) << '\n';
    return kValidationError;
  } catch (const NumericalError& ex) {
    err << "numerical_error: " << one_line(ex.what()) << '\n';
    return kNumericalError;
  } catch (const std::exception& ex) {
    err << "numerical_error: " << one_line(ex.what()) << '\n';
    return kNumericalError;
  }
  return kUsageError;
}

}  // namespace diffavg::cli
