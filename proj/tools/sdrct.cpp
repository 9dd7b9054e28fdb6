// Command-line pipeline driver: phantom / project / degrade / recon /
// metrics / tune / experiment, all reading and writing the toolkit's raw +
// JSON-header file format.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sdrct/degrade.hpp"
#include "sdrct/experiment.hpp"
#include "sdrct/io.hpp"
#include "sdrct/metrics.hpp"
#include "sdrct/parallel.hpp"
#include "sdrct/phantom.hpp"
#include "sdrct/recon_volume.hpp"
#include "sdrct/sdr.hpp"
#include "sdrct/simulate.hpp"
#include "sdrct/tuning.hpp"

namespace {

using namespace sdrct;
namespace fs = std::filesystem;

/// Removes every registered output unless the command commits, so failures
/// never leave partial files behind.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
  void track(const std::string& path) {
    paths_.push_back(path);
    paths_.push_back(header_path(path));
  }
  void track_plain(const std::string& path) { paths_.push_back(path); }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> paths_;
  bool committed_ = false;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' ||
        step <= 0.0) {
      throw std::invalid_argument("bad grid '" + text +
                                  "' (expected start:step:stop)");
    }
    for (double v = start; v <= stop + 1e-12 * std::max(1.0, std::abs(stop));
         v += step) {
      grid.push_back(v);
    }
    return grid;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(std::stod(item));
  }
  if (grid.empty()) {
    throw std::invalid_argument("bad grid '" + text + "': no values");
  }
  return grid;
}

RoiSpec load_roi(const std::string& spec, const GridGeometry& geometry) {
  if (spec == "phantom") return shepp_logan_roi(geometry);
  throw std::invalid_argument("unknown ROI spec '" + spec +
                              "' (supported: phantom)");
}

struct ReconCliOptions {
  std::string method = "sdr";
  std::string filter = "ram-lak";
  ReconConfig config;
  std::string fusion_signs = "consistent";
  std::string tv_grad_variant = "symmetric";
  bool no_fusion = false;
};

void add_recon_options(CLI::App* cmd, ReconCliOptions& opts) {
  cmd->add_option("--lambda1", opts.config.lambda1, "TV weight");
  cmd->add_option("--lambda2", opts.config.lambda2,
                  "between-slice L1 weight");
  cmd->add_option("--alpha", opts.config.alpha, "Kaczmarz relaxation");
  cmd->add_option("--max-iter", opts.config.max_outer_iterations,
                  "outer iteration cap");
  cmd->add_option("--tol", opts.config.convergence_threshold,
                  "relative-change stop threshold");
  cmd->add_option("--tv-epsilon", opts.config.tv_epsilon,
                  "TV smoothing epsilon");
  cmd->add_option("--lasso-tol", opts.config.lasso_tolerance,
                  "lasso sweep tolerance");
  cmd->add_option("--lasso-max-sweeps", opts.config.lasso_max_sweeps,
                  "lasso sweep cap");
  cmd->add_option("--subsets", opts.config.ossirt_subsets, "OSSIRT subsets");
  cmd->add_option("--fusion-signs", opts.fusion_signs,
                  "consistent|as_printed");
  cmd->add_option("--tv-grad-variant", opts.tv_grad_variant,
                  "symmetric|as_printed");
  cmd->add_flag("--no-fusion", opts.no_fusion,
                "disable the between-slice fusion update");
}

ReconConfig finalize_recon(const ReconCliOptions& opts) {
  ReconConfig config = opts.config;
  config.fusion_signs = fusion_signs_from_string(opts.fusion_signs);
  config.tv_grad_variant = tv_grad_variant_from_string(opts.tv_grad_variant);
  config.fusion_enabled = !opts.no_fusion;
  config.validate();
  return config;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"parallel-beam CT reconstruction toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (default: SDR_CT_THREADS or all cores)");

  // phantom
  auto* phantom_cmd = app.add_subcommand("phantom", "generate the 3D phantom");
  int size = 64;
  double pixel_size = 1.0;
  std::string contrast = "modified";
  std::string phantom_out;
  phantom_cmd->add_option("--size", size, "cube side length")
      ->check(CLI::Range(8, 4096));
  phantom_cmd->add_option("--pixel-size", pixel_size, "pixel size");
  phantom_cmd->add_option("--contrast", contrast, "modified|standard");
  phantom_cmd->add_option("--out", phantom_out, "output volume path")
      ->required();
  phantom_cmd->callback([&] {
    if (contrast != "standard" && contrast != "modified") {
      throw std::invalid_argument("contrast must be modified|standard");
    }
    OutputGuard guard;
    guard.track(phantom_out);
    GridGeometry g = GridGeometry::uniform(size, 1, size, pixel_size);
    Volume v = shepp_logan_3d(g, contrast == "standard"
                                     ? SheppLoganContrast::standard
                                     : SheppLoganContrast::modified);
    write_volume(v, phantom_out);
    double lo = v.slices[0].values.minCoeff();
    double hi = v.slices[0].values.maxCoeff();
    for (const auto& s : v.slices) {
      lo = std::min(lo, s.values.minCoeff());
      hi = std::max(hi, s.values.maxCoeff());
    }
    std::printf("phantom %dx%dx%d values [%g, %g] -> %s\n", size, size, size,
                lo, hi, phantom_out.c_str());
    guard.commit();
  });

  // project
  auto* project_cmd =
      app.add_subcommand("project", "simulate clean projections");
  std::string project_volume, project_out;
  int angles = 60;
  double step = 0.5;
  project_cmd->add_option("--volume", project_volume, "input volume")
      ->required();
  project_cmd->add_option("--angles", angles, "projection angle count")
      ->check(CLI::PositiveNumber);
  project_cmd->add_option("--step", step, "ray sampling step in pixels");
  project_cmd->add_option("--out", project_out, "output sinogram")->required();
  project_cmd->callback([&] {
    OutputGuard guard;
    guard.track(project_out);
    Volume v = read_volume(project_volume);
    SinogramStack sino = simulate_sinogram(v, angles, step, threads);
    write_sinogram(sino, project_out);
    std::printf("sinogram dims [%d, %d, %d] -> %s\n",
                sino.geometry.detector_count, sino.geometry.angle_count,
                sino.geometry.slice_count, project_out.c_str());
    guard.commit();
  });

  // degrade
  auto* degrade_cmd =
      app.add_subcommand("degrade", "add noise and blank edges");
  std::string degrade_in, degrade_out;
  double sigma = 0.0;
  int max_shift = 0;
  std::uint64_t seed = 0;
  degrade_cmd->add_option("--sino", degrade_in, "input sinogram")->required();
  degrade_cmd->add_option("--sigma", sigma, "Gaussian noise level");
  degrade_cmd->add_option("--max-shift", max_shift,
                          "blank-edge shift bound (detector bins)");
  degrade_cmd->add_option("--seed", seed, "random seed");
  degrade_cmd->add_option("--out", degrade_out, "output sinogram")->required();
  degrade_cmd->callback([&] {
    OutputGuard guard;
    guard.track(degrade_out);
    SinogramStack sino = read_sinogram(degrade_in);
    SinogramStack noisy = add_gaussian_noise(sino, sigma, seed);
    BlankEdgeModel model;
    model.max_shift = max_shift;
    SinogramStack degraded = apply_blank_edges(noisy, model, seed);
    write_sinogram(degraded, degrade_out);
    std::int64_t invalid = 0;
    for (const auto& plane : degraded.mask.valid) {
      invalid += plane.size() - plane.count();
    }
    const double fraction =
        double(invalid) / double(degraded.geometry.ray_count() *
                                 degraded.geometry.slice_count);
    std::printf("masked-bin fraction %.4f -> %s\n", fraction,
                degrade_out.c_str());
    guard.commit();
  });

  // recon
  auto* recon_cmd = app.add_subcommand("recon", "reconstruct a sinogram");
  std::string recon_in, recon_out, trace_out;
  ReconCliOptions recon_opts;
  recon_cmd->add_option("--sino", recon_in, "input sinogram")->required();
  recon_cmd->add_option("--method", recon_opts.method,
                        "fbp|ossirt|tvart|sdr");
  recon_cmd->add_option("--filter", recon_opts.filter,
                        "FBP filter: ram-lak|hamming");
  recon_cmd->add_option("--out", recon_out, "output volume")->required();
  recon_cmd->add_option("--trace", trace_out,
                        "relative-change trace CSV (iterative methods)");
  add_recon_options(recon_cmd, recon_opts);
  recon_cmd->callback([&] {
    OutputGuard guard;
    guard.track(recon_out);
    const ReconMethod method = recon_method_from_string(recon_opts.method);
    const ReconConfig config = finalize_recon(recon_opts);
    SinogramStack sino = read_sinogram(recon_in);
    SparseSystemMatrix matrix;
    if (method != ReconMethod::fbp) {
      matrix = build_system_matrix(sino.geometry, threads);
      std::printf("system matrix: %lld nonzeros, ~%.1f MB\n",
                  (long long)matrix.nnz(),
                  double(estimate_system_matrix_bytes(sino.geometry)) / 1e6);
    }
    VolumeReconResult result =
        reconstruct_volume(sino, matrix, method, config,
                           fbp_filter_from_string(recon_opts.filter), threads);
    write_volume(result.volume, recon_out);
    if (!trace_out.empty() && !result.relative_change.empty()) {
      guard.track_plain(trace_out);
      std::ofstream trace(trace_out);
      trace << "iteration,relative_change\n";
      for (std::size_t r = 0; r < result.relative_change.size(); ++r) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%zu,%.6g\n", r + 1,
                      result.relative_change[r]);
        trace << buf;
      }
    }
    std::printf("recon %s: %d iterations%s -> %s\n", recon_opts.method.c_str(),
                result.iterations,
                result.warnings ? " (with skipped subsets)" : "",
                recon_out.c_str());
    guard.commit();
  });

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "evaluate reconstructions");
  std::string metrics_recon, metrics_truth, metrics_roi, metrics_out;
  std::string metrics_method = "recon", metrics_scenario = "";
  std::vector<std::string> requested;
  metrics_cmd->add_option("--recon", metrics_recon, "reconstructed volume")
      ->required();
  metrics_cmd->add_option("--truth", metrics_truth, "ground-truth volume");
  metrics_cmd->add_option("--roi", metrics_roi, "ROI spec (phantom)");
  metrics_cmd->add_option("--metrics", requested,
                          "restrict to snr,ssim,cnr,nrss");
  metrics_cmd->add_option("--method", metrics_method, "method label");
  metrics_cmd->add_option("--scenario", metrics_scenario, "scenario label");
  metrics_cmd->add_option("--out", metrics_out, "output CSV")->required();
  metrics_cmd->callback([&] {
    OutputGuard guard;
    guard.track_plain(metrics_out);
    for (const auto& m : requested) {
      if ((m == "snr" || m == "ssim") && metrics_truth.empty()) {
        throw std::invalid_argument(m + " requires --truth");
      }
      if (m == "cnr" && metrics_roi.empty()) {
        throw std::invalid_argument("cnr requires --roi");
      }
      if (m != "snr" && m != "ssim" && m != "cnr" && m != "nrss") {
        throw std::invalid_argument("unknown metric '" + m + "'");
      }
    }
    Volume recon = read_volume(metrics_recon);
    Volume truth;
    const bool has_truth = !metrics_truth.empty();
    if (has_truth) truth = read_volume(metrics_truth);
    RoiSpec roi;
    const bool has_roi = !metrics_roi.empty();
    if (has_roi) roi = load_roi(metrics_roi, recon.geometry);
    MetricReport report = evaluate_volume(
        recon, has_truth ? &truth : nullptr, has_roi ? &roi : nullptr,
        metrics_method, metrics_scenario);
    std::ofstream out(metrics_out);
    out << report_table({report});
    std::printf("metrics -> %s\n", metrics_out.c_str());
    guard.commit();
  });

  // tune
  auto* tune_cmd = app.add_subcommand("tune", "select lambda1 or lambda2");
  std::string tune_in, tune_param = "lambda1", tune_grid, tune_out, tune_truth;
  ReconCliOptions tune_opts;
  tune_cmd->add_option("--sino", tune_in, "input sinogram")->required();
  tune_cmd->add_option("--param", tune_param, "lambda1|lambda2")->required();
  tune_cmd->add_option("--grid", tune_grid,
                       "start:step:stop or comma-separated values")
      ->required();
  tune_cmd->add_option("--truth", tune_truth,
                       "ground-truth volume (synthetic-mode scoring)");
  tune_cmd->add_option("--out", tune_out, "scanned-curve CSV")->required();
  add_recon_options(tune_cmd, tune_opts);
  tune_cmd->callback([&] {
    OutputGuard guard;
    guard.track_plain(tune_out);
    const ReconConfig base = finalize_recon(tune_opts);
    SinogramStack sino = read_sinogram(tune_in);
    SparseSystemMatrix matrix = build_system_matrix(sino.geometry, threads);
    const std::vector<double> grid = parse_grid(tune_grid);
    std::ofstream out(tune_out);
    double selected = 0.0;
    if (tune_param == "lambda1") {
      std::vector<LCurvePoint> curve;
      selected =
          l_curve_tune_lambda1(sino, matrix, grid, base, -1, &curve, threads);
      out << "lambda1,log_residual,log_penalty\n";
      for (const auto& p : curve) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g\n", p.lambda,
                      p.log_residual, p.log_penalty);
        out << buf;
      }
      out << "selected," << selected << "\n";
    } else if (tune_param == "lambda2") {
      Volume truth;
      const bool has_truth = !tune_truth.empty();
      if (has_truth) truth = read_volume(tune_truth);
      std::vector<GridSearchPoint> curve;
      selected = grid_search_lambda2(sino, matrix, grid, base,
                                     has_truth ? &truth : nullptr, {}, &curve,
                                     threads);
      out << "lambda2,score\n";
      for (const auto& p : curve) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n", p.lambda, p.score);
        out << buf;
      }
      out << "selected," << selected << "\n";
    } else {
      throw std::invalid_argument("--param must be lambda1 or lambda2");
    }
    std::printf("selected %s = %g -> %s\n", tune_param.c_str(), selected,
                tune_out.c_str());
    guard.commit();
  });

  // experiment
  auto* exp_cmd =
      app.add_subcommand("experiment", "run a declarative scenario");
  std::string config_path, out_dir_override;
  exp_cmd->add_option("--config", config_path, "scenario JSON file")
      ->required();
  exp_cmd->add_option("--output-dir", out_dir_override,
                      "override the scenario output_dir");
  exp_cmd->callback([&] {
    ScenarioConfig scenario = load_scenario(config_path);
    if (!out_dir_override.empty()) scenario.output_dir = out_dir_override;
    ExperimentResult result = run_experiment(scenario, threads, &std::cout);
    std::printf("%s", result.table_csv.c_str());
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
