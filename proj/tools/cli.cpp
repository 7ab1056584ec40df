// Command-line front end: threshold tables, raster detection, distribution
// fitting, Monte Carlo simulation, evaluation and ROC sweeps. Every run that
// writes files also writes a run.json manifest capturing the full command
// (minus output placement and worker count), so reruns reproduce outputs
// byte-identically at any worker count.

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wilcfar/clutter.hpp"
#include "wilcfar/detectors.hpp"
#include "wilcfar/errors.hpp"
#include "wilcfar/io.hpp"
#include "wilcfar/metrics.hpp"
#include "wilcfar/rank.hpp"
#include "wilcfar/sim.hpp"
#include "wilcfar/window.hpp"

namespace wilcfar::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw usage_error("cannot parse " + what + " '" + s + "'");
  }
}

// family[:p1[:p2]] with per-family defaults
ClutterModel parse_model(const std::string& spec) {
  const auto parts = split(spec, ':');
  const auto fam = family_from_name(parts[0]);
  if (!fam) throw usage_error("unknown clutter family '" + parts[0] + "'");
  std::optional<double> p1, p2;
  if (parts.size() > 1) p1 = parse_number(parts[1], "clutter parameter");
  if (parts.size() > 2) p2 = parse_number(parts[2], "clutter parameter");
  if (parts.size() > 3) throw usage_error("too many parameters in '" + spec + "'");
  switch (*fam) {
    case Family::gaussian: return ClutterModel::gaussian(p1.value_or(0.0), p2.value_or(1.0));
    case Family::weibull: return ClutterModel::weibull(p1.value_or(1.2), p2.value_or(1.0));
    case Family::gamma: return ClutterModel::gamma(p1.value_or(3.33), p2.value_or(1.0));
    case Family::rayleigh: return ClutterModel::rayleigh(p1.value_or(1.0));
    case Family::k: return ClutterModel::k_distribution(p1.value_or(3.0), p2.value_or(2.0));
  }
  throw usage_error("unknown clutter family");
}

std::vector<ClutterModel> parse_family_list(const std::string& list) {
  std::vector<ClutterModel> models;
  for (const auto& item : split(list, ','))
    if (!item.empty()) models.push_back(parse_model(item));
  if (models.empty()) throw usage_error("empty family list");
  return models;
}

struct GeomOpts {
  int t = 1, g = 0, q = 1, s = 1;
  WindowGeometry geometry() const { return WindowGeometry{t, g, q, s}; }
};

void add_geometry(CLI::App* cmd, GeomOpts& o, bool with_stride) {
  cmd->add_option("--t", o.t, "test window side (pixels)")->capture_default_str();
  cmd->add_option("--g", o.g, "guard width (pixels)")->capture_default_str();
  cmd->add_option("--q", o.q, "reference ring depth (rows/columns)")->capture_default_str();
  if (with_stride)
    cmd->add_option("--stride", o.s, "anchor stride (pixels)")->capture_default_str();
}

struct DetOpts {
  std::string kind = "wilcoxon";
  double rt = 0.10;
  double lambda = 2.0;
  std::string shape_mode = "enl";
  double enl = 0.0;  // > 0 means fixed shape
};

void add_detector(CLI::App* cmd, DetOpts& o) {
  cmd->add_option("--detector", o.kind,
                  "wilcoxon | two_parameter | weibull | truncated_gamma | trimmed_rayleigh")
      ->capture_default_str();
  cmd->add_option("--rt", o.rt, "truncation ratio (truncated_gamma)")->capture_default_str();
  cmd->add_option("--lambda", o.lambda, "trim factor (trimmed_rayleigh)")->capture_default_str();
  cmd->add_option("--shape-mode", o.shape_mode,
                  "gamma shape source when not fixed: enl | ml (truncated_gamma)")
      ->capture_default_str();
  cmd->add_option("--enl", o.enl, "fixed gamma shape / ENL value (truncated_gamma)");
}

DetectorConfig to_config(const DetOpts& o) {
  const auto kind = detector_from_name(o.kind);
  if (!kind) throw usage_error("unknown detector '" + o.kind + "'");
  DetectorConfig cfg;
  cfg.kind = *kind;
  cfg.truncation_ratio = o.rt;
  cfg.trim_factor = o.lambda;
  if (o.shape_mode == "enl")
    cfg.shape_mode = DetectorConfig::ShapeMode::enl;
  else if (o.shape_mode == "ml")
    cfg.shape_mode = DetectorConfig::ShapeMode::ml;
  else
    throw usage_error("shape-mode must be enl or ml");
  if (o.enl > 0.0) cfg.shape = o.enl;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  return cfg;
}

// Output placement (--out, --workers) is execution detail, not configuration;
// manifests store the command without it so a rerun into another directory or
// with another worker count is byte-identical.
std::vector<std::string> strip_placement(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" || args[i] == "--workers") {
      ++i;  // skip the value
      continue;
    }
    kept.push_back(args[i]);
  }
  return kept;
}

void write_manifest(const fs::path& out_dir, const std::vector<std::string>& stored_command,
                    ordered_json extra = {}) {
  ordered_json doc;
  doc["tool"] = "wilcfar";
  doc["version"] = kVersion;
  doc["command"] = stored_command;
  if (!extra.is_null() && !extra.empty()) doc["info"] = extra;
  std::ofstream out(out_dir / "run.json");
  if (!out) throw std::runtime_error((out_dir / "run.json").string() + ": cannot write");
  out << doc.dump(2) << "\n";
}

fs::path need_out_dir(const std::string& out) {
  if (out.empty()) throw usage_error("--out is required");
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

ordered_json geometry_info(const WindowGeometry& g) {
  ordered_json j;
  j["t"] = g.test_side;
  j["g"] = g.guard;
  j["q"] = g.ring_depth;
  j["stride"] = g.stride;
  j["side"] = g.side();
  j["m"] = g.test_count();
  j["n"] = g.reference_count();
  return j;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_threshold(int m, int n, double pfa, std::uint64_t cap) {
  const auto dist = shared_distribution(m, n, cap);
  const RankThreshold th = threshold_for_pfa(*dist, pfa);
  std::cout << th.t_w << "," << th.t_mw << "," << io::format_double(th.achieved_pfa) << "\n";
  return 0;
}

struct DetectArgs {
  std::string image, truth, out;
  GeomOpts geom;
  DetOpts det;
  double pfa = 1e-4;
  int workers = 0;
};

int cmd_detect(const DetectArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  const Raster raster = io::read_raster(a.image);
  const WindowGeometry geom = a.geom.geometry();
  const DetectorConfig cfg = to_config(a.det);
  const auto detector = make_detector(cfg, geom, &raster);

  std::cerr << "detect: " << detector->name() << " pfa=" << a.pfa << " geometry side="
            << geom.side() << " m=" << geom.test_count() << " n=" << geom.reference_count()
            << "\n";

  RunOptions opts;
  opts.workers = a.workers;
  opts.skip_degenerate = true;
  const DetectionRun run = run_detector(raster, geom, *detector, a.pfa, opts);
  std::cerr << "detect: windows=" << run.windows << " fired=" << run.fired
            << " degenerate=" << run.degenerate << "\n";

  io::write_mask_pgm(out_dir / "mask.pgm", run.map);
  io::write_detections_csv(out_dir / "detections.csv", run.map);
  if (!a.truth.empty()) {
    const GroundTruth truth = io::read_ground_truth(a.truth, raster.width(), raster.height());
    const RocRow row{a.pfa, evaluate(run.map, truth)};
    io::write_eval_rows_csv(out_dir / "eval.csv", std::span<const RocRow>(&row, 1));
  }
  write_manifest(out_dir, stored, geometry_info(geom));
  return 0;
}

struct FitArgs {
  std::string image, mask_truth, families = "gaussian,weibull,gamma,gamma_enl,rayleigh,k";
  int bins = 512;
  std::string out;
};

int cmd_fit(const FitArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  const Raster raster = io::read_raster(a.image);

  std::vector<std::uint8_t> excluded(raster.size(), 0);
  if (!a.mask_truth.empty()) {
    const GroundTruth truth =
        io::read_ground_truth(a.mask_truth, raster.width(), raster.height());
    for (const auto& mask : ellipse_masks(truth))
      for (const auto idx : mask) excluded[static_cast<std::size_t>(idx)] = 1;
  }
  std::vector<double> samples;
  samples.reserve(raster.size());
  const auto px = raster.samples();
  for (std::size_t i = 0; i < px.size(); ++i)
    if (!excluded[i]) samples.push_back(px[i]);

  std::vector<FamilySpec> specs;
  for (const auto& name : split(a.families, ',')) {
    if (name.empty()) continue;
    if (name == "gamma_enl" || name == "gamma-enl") {
      FitOptions opt;
      opt.shape_mode = FitOptions::ShapeMode::fixed;
      opt.fixed_shape = estimate_enl(samples);
      specs.push_back({Family::gamma, opt, "gamma_enl"});
      continue;
    }
    const auto fam = family_from_name(name);
    if (!fam) throw usage_error("unknown family '" + name + "'");
    specs.push_back({*fam, {}, name});
  }

  const HistogramReport rep = histogram_report(samples, a.bins, specs);
  io::write_histogram_body_csv(out_dir / "histogram.csv", rep);
  io::write_histogram_tail_csv(out_dir / "tail.csv", rep);
  io::write_fit_params_csv(out_dir / "fit_params.csv", rep);
  for (const auto& fam : rep.families)
    if (!fam.ok) std::cerr << "fit: " << fam.label << " failed: " << fam.error << "\n";
  write_manifest(out_dir, stored);
  return 0;
}

struct SimPdArgs {
  std::string clutter = "weibull:2:1";
  DetOpts det;
  GeomOpts geom;
  double pfa = 1e-5;
  double scr_from = 0.0, scr_to = 20.0, scr_step = 2.0;
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
};

int cmd_simulate_pd(const SimPdArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  TrialSpec spec;
  spec.clutter = parse_model(a.clutter);
  const DetectorConfig cfg = to_config(a.det);
  const WindowGeometry geom = a.geom.geometry();
  const auto detector = make_detector(cfg, geom, nullptr);
  spec.detector = detector.get();
  spec.geometry = geom;
  spec.design_pfa = a.pfa;
  if (!(a.scr_step > 0.0)) throw usage_error("--scr-step must be positive");
  for (double s = a.scr_from; s <= a.scr_to + 1e-9; s += a.scr_step) spec.scr_db.push_back(s);
  spec.trials_per_point = a.trials;
  spec.master_seed = a.seed;

  const PdCurve curve = run_pd_curve(spec, a.workers);
  io::write_pd_csv(out_dir / "pd.csv", curve);
  write_manifest(out_dir, stored, geometry_info(geom));
  return 0;
}

struct SimPfaArgs {
  std::string families = "gaussian,weibull,gamma,rayleigh,k";
  DetOpts det;
  GeomOpts geom;
  double pfa = 1e-3;
  std::int64_t trials = 1000000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out;
};

int cmd_simulate_pfa(const SimPfaArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  const auto families = parse_family_list(a.families);
  const DetectorConfig cfg = to_config(a.det);
  const WindowGeometry geom = a.geom.geometry();
  const auto detector = make_detector(cfg, geom, nullptr);

  const auto rows =
      run_pfa_regulation(families, *detector, geom, a.pfa, a.trials, a.seed, a.workers);
  io::write_regulation_csv(out_dir / "regulation.csv", rows);
  write_manifest(out_dir, stored, geometry_info(geom));
  return 0;
}

struct SimSceneArgs {
  int width = 512, height = 512;
  std::string clutter = "weibull:1.2:1";
  std::vector<std::string> ships;  // cx:cy:a:b:theta:scr_db
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate_scene(const SimSceneArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  std::vector<SceneShip> ships;
  for (const auto& spec : a.ships) {
    const auto parts = split(spec, ':');
    if (parts.size() != 6)
      throw usage_error("ship spec must be cx:cy:a:b:theta:scr_db, got '" + spec + "'");
    SceneShip ship;
    ship.ellipse.cx = parse_number(parts[0], "ship cx");
    ship.ellipse.cy = parse_number(parts[1], "ship cy");
    ship.ellipse.a = parse_number(parts[2], "ship a");
    ship.ellipse.b = parse_number(parts[3], "ship b");
    ship.ellipse.theta_deg = parse_number(parts[4], "ship theta");
    ship.scr_db = parse_number(parts[5], "ship scr");
    ships.push_back(ship);
  }
  const auto [raster, truth] =
      build_scene(a.width, a.height, parse_model(a.clutter), ships, a.seed);
  io::write_raster_raw_f32(out_dir / "scene.f32", raster);
  io::write_ground_truth(out_dir / "truth.txt", truth);
  write_manifest(out_dir, stored);
  return 0;
}

struct EvaluateArgs {
  std::string mask, truth, out;
  double design_pfa = std::nan("");
};

int cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  const DetectionMap map = io::read_mask_pgm(a.mask);
  const GroundTruth truth = io::read_ground_truth(a.truth, map.width(), map.height());
  const RocRow row{a.design_pfa, evaluate(map, truth)};
  io::write_eval_rows_csv(out_dir / "eval.csv", std::span<const RocRow>(&row, 1));
  write_manifest(out_dir, stored);
  return 0;
}

struct RocArgs {
  std::string image, truth, out;
  DetOpts det;
  GeomOpts geom;
  std::string pfa_list;
  int workers = 0;
};

int cmd_roc(const RocArgs& a, const std::vector<std::string>& stored) {
  const fs::path out_dir = need_out_dir(a.out);
  const Raster raster = io::read_raster(a.image);
  const GroundTruth truth = io::read_ground_truth(a.truth, raster.width(), raster.height());
  const WindowGeometry geom = a.geom.geometry();
  const DetectorConfig cfg = to_config(a.det);
  const auto detector = make_detector(cfg, geom, &raster);

  std::vector<double> pfas;
  for (const auto& item : split(a.pfa_list, ','))
    if (!item.empty()) pfas.push_back(parse_number(item, "design pfa"));
  if (pfas.empty()) throw usage_error("--pfa-list is empty");

  RunOptions opts;
  opts.workers = a.workers;
  opts.skip_degenerate = true;
  const auto rows = roc_sweep(raster, geom, *detector, truth, pfas, opts);
  io::write_eval_rows_csv(out_dir / "roc.csv", rows);
  write_manifest(out_dir, stored, geometry_info(geom));
  return 0;
}

int cmd_rerun(const std::string& manifest_path, const std::string& out,
              std::optional<int> workers) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error(manifest_path + ": cannot open");
  ordered_json doc;
  in >> doc;
  if (!doc.contains("command") || !doc["command"].is_array())
    throw std::runtime_error(manifest_path + ": no command array");
  std::vector<std::string> args;
  for (const auto& a : doc["command"]) args.push_back(a.get<std::string>());
  if (!out.empty()) {
    args.push_back("--out");
    args.push_back(out);
  }
  if (workers) {
    args.push_back("--workers");
    args.push_back(std::to_string(*workers));
  }
  return run(std::move(args));
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"Rank-sum nonparametric CFAR detection toolkit"};
  app.require_subcommand(1);
  const std::vector<std::string> stored = strip_placement(args);

  // threshold
  int th_m = 1, th_n = 1;
  double th_pfa = 1e-3;
  std::uint64_t th_cap = ExactRankDistribution::kDefaultSupportCap;
  auto* threshold = app.add_subcommand(
      "threshold", "exact rank-sum decision threshold for a design false-alarm rate");
  threshold->add_option("--m", th_m, "test sample count")->required();
  threshold->add_option("--n", th_n, "reference sample count")->required();
  threshold->add_option("--pfa", th_pfa, "design false-alarm rate")->required();
  threshold->add_option("--cap", th_cap, "support cap (m*n)")->capture_default_str();

  // detect
  DetectArgs detect_args;
  auto* detect = app.add_subcommand("detect", "sliding-window detection on a raster");
  detect->add_option("--image", detect_args.image, "input raster (.pgm or raw f32)")->required();
  detect->add_option("--truth", detect_args.truth, "ground-truth ellipse file");
  detect->add_option("--out", detect_args.out, "output directory")->required();
  detect->add_option("--pfa", detect_args.pfa, "design false-alarm rate")->required();
  detect->add_option("--workers", detect_args.workers, "worker threads (0 = all cores)");
  add_geometry(detect, detect_args.geom, true);
  add_detector(detect, detect_args.det);

  // fit
  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "clutter distribution fits and histogram report");
  fit->add_option("--image", fit_args.image, "input raster")->required();
  fit->add_option("--mask-truth", fit_args.mask_truth, "exclude these ship ellipses");
  fit->add_option("--families", fit_args.families, "comma-separated family list")
      ->capture_default_str();
  fit->add_option("--bins", fit_args.bins, "histogram bins")->capture_default_str();
  fit->add_option("--out", fit_args.out, "output directory")->required();

  // simulate pd | pfa | scene
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
  simulate->require_subcommand(1);

  SimPdArgs pd_args;
  auto* sim_pd = simulate->add_subcommand("pd", "detection probability vs SCR");
  sim_pd->add_option("--clutter", pd_args.clutter, "clutter model family[:p1[:p2]]")
      ->capture_default_str();
  add_detector(sim_pd, pd_args.det);
  add_geometry(sim_pd, pd_args.geom, false);
  sim_pd->add_option("--pfa", pd_args.pfa, "design false-alarm rate")->capture_default_str();
  sim_pd->add_option("--scr-from", pd_args.scr_from, "SCR grid start (dB)")->capture_default_str();
  sim_pd->add_option("--scr-to", pd_args.scr_to, "SCR grid end (dB)")->capture_default_str();
  sim_pd->add_option("--scr-step", pd_args.scr_step, "SCR grid step (dB)")->capture_default_str();
  sim_pd->add_option("--trials", pd_args.trials, "trials per point")->capture_default_str();
  sim_pd->add_option("--seed", pd_args.seed, "master seed")->capture_default_str();
  sim_pd->add_option("--workers", pd_args.workers, "worker threads");
  sim_pd->add_option("--out", pd_args.out, "output directory")->required();

  SimPfaArgs pfa_args;
  auto* sim_pfa = simulate->add_subcommand("pfa", "false-alarm regulation across families");
  sim_pfa->add_option("--families", pfa_args.families, "family[:p1[:p2]],... list")
      ->capture_default_str();
  add_detector(sim_pfa, pfa_args.det);
  add_geometry(sim_pfa, pfa_args.geom, false);
  sim_pfa->add_option("--pfa", pfa_args.pfa, "design false-alarm rate")->capture_default_str();
  sim_pfa->add_option("--trials", pfa_args.trials, "Monte Carlo windows per family")
      ->capture_default_str();
  sim_pfa->add_option("--seed", pfa_args.seed, "master seed")->capture_default_str();
  sim_pfa->add_option("--workers", pfa_args.workers, "worker threads");
  sim_pfa->add_option("--out", pfa_args.out, "output directory")->required();

  SimSceneArgs scene_args;
  auto* sim_scene = simulate->add_subcommand("scene", "synthetic clutter scene with ships");
  sim_scene->add_option("--width", scene_args.width, "raster width")->capture_default_str();
  sim_scene->add_option("--height", scene_args.height, "raster height")->capture_default_str();
  sim_scene->add_option("--clutter", scene_args.clutter, "clutter model")->capture_default_str();
  sim_scene->add_option("--ship", scene_args.ships, "ship spec cx:cy:a:b:theta:scr_db")
      ->take_all();
  sim_scene->add_option("--seed", scene_args.seed, "master seed")->capture_default_str();
  sim_scene->add_option("--out", scene_args.out, "output directory")->required();

  // evaluate
  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a detection mask against ground truth");
  eval_cmd->add_option("--mask", eval_args.mask, "detection mask PGM")->required();
  eval_cmd->add_option("--truth", eval_args.truth, "ground-truth ellipse file")->required();
  eval_cmd->add_option("--design-pfa", eval_args.design_pfa, "design rate for the CSV row");
  eval_cmd->add_option("--out", eval_args.out, "output directory")->required();

  // roc
  RocArgs roc_args;
  auto* roc = app.add_subcommand("roc", "ROC sweep over design false-alarm rates");
  roc->add_option("--image", roc_args.image, "input raster")->required();
  roc->add_option("--truth", roc_args.truth, "ground-truth ellipse file")->required();
  roc->add_option("--pfa-list", roc_args.pfa_list, "comma-separated design rates")->required();
  roc->add_option("--workers", roc_args.workers, "worker threads");
  roc->add_option("--out", roc_args.out, "output directory")->required();
  add_geometry(roc, roc_args.geom, true);
  add_detector(roc, roc_args.det);

  // rerun
  std::string rerun_manifest, rerun_out;
  int rerun_workers = -1;
  auto* rerun = app.add_subcommand("rerun", "re-execute a run.json manifest");
  rerun->add_option("--manifest", rerun_manifest, "path to run.json")->required();
  rerun->add_option("--out", rerun_out, "output directory")->required();
  rerun->add_option("--workers", rerun_workers, "worker threads");

  std::vector<const char*> argv;
  argv.push_back("wilcfar");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*threshold) return cmd_threshold(th_m, th_n, th_pfa, th_cap);
    if (*detect) return cmd_detect(detect_args, stored);
    if (*fit) return cmd_fit(fit_args, stored);
    if (*sim_pd) return cmd_simulate_pd(pd_args, stored);
    if (*sim_pfa) return cmd_simulate_pfa(pfa_args, stored);
    if (*sim_scene) return cmd_simulate_scene(scene_args, stored);
    if (*eval_cmd) return cmd_evaluate(eval_args, stored);
    if (*roc) return cmd_roc(roc_args, stored);
    if (*rerun)
      return cmd_rerun(rerun_manifest, rerun_out,
                       rerun_workers >= 0 ? std::optional<int>(rerun_workers) : std::nullopt);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace wilcfar::cli
