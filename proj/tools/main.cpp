#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alphaiou/dataset.hpp"
#include "alphaiou/eval.hpp"
#include "alphaiou/grad_check.hpp"
#include "alphaiou/losses.hpp"
#include "alphaiou/noise.hpp"
#include "alphaiou/regression.hpp"

namespace {

using namespace alphaiou;

bool verbose() {
  const char* v = std::getenv("ALPHA_IOU_LOG");
  return v != nullptr && *v != '\0';
}

void log_line(const std::string& msg) {
  if (verbose()) std::cerr << "[alphaiou] " << msg << '\n';
}

void warn_clamps(const DatasetBundle& bundle) {
  if (bundle.clamp_warnings > 0) {
    std::cerr << "warning: " << bundle.clamp_warnings
              << " box(es) extended past image bounds and were clamped\n";
  }
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error(out_path + ": cannot open for writing");
  f << content;
  if (!f) throw std::runtime_error(out_path + ": write failed");
  log_line("wrote " + out_path);
}

Box parse_box_flag(const std::string& flag, const std::string& text) {
  std::array<double, 4> v{};
  std::istringstream in(text);
  std::string field;
  int n = 0;
  while (std::getline(in, field, ',')) {
    if (n >= 4) break;
    try {
      v[n] = std::stod(field);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected cx,cy,w,h with numeric fields");
    }
    ++n;
  }
  if (n != 4 || !in.eof()) throw CLI::ValidationError(flag, "expected cx,cy,w,h");
  try {
    return Box(v[0], v[1], v[2], v[3]);
  } catch (const std::exception& e) {
    throw CLI::ValidationError(flag, e.what());
  }
}

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ':')) parts.push_back(field);
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() == 3) {
      const double start = std::stod(parts[0]);
      const double stop = std::stod(parts[1]);
      const double step = std::stod(parts[2]);
      if (!(step > 0.0) || stop < start) {
        throw CLI::ValidationError("--thresholds", "need start <= stop and step > 0");
      }
      std::vector<double> out;
      const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
      for (int i = 0; i < count; ++i) {
        // snap accumulated drift back to the decimal the user wrote
        out.push_back(std::round((start + step * i) * 1e6) / 1e6);
      }
      return out;
    }
  } catch (const CLI::ValidationError&) {
    throw;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--thresholds", "expected a value or start:stop:step");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power IoU losses for bounding-box regression: curves, gradient checks,\n"
               "descent simulation, annotation noise, and detection evaluation"};
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);

  // loss-curve
  auto* curve_cmd = app.add_subcommand("loss-curve", "sample loss and gradient versus IoU");
  std::string curve_kind = "alpha-iou";
  std::vector<double> curve_alphas = {0.5, 1.0, 2.0, 3.0};
  int curve_points = 101;
  std::string curve_out;
  curve_cmd->add_option("--kind", curve_kind, "loss family")
      ->check(CLI::IsMember({"alpha-iou", "log-iou"}));
  curve_cmd->add_option("--alphas", curve_alphas, "comma-separated powers")
      ->delimiter(',')
      ->check(CLI::Range(0.1, 10.0));
  curve_cmd->add_option("--points", curve_points, "grid size over [0,1]")
      ->check(CLI::Range(2, 1000000));
  curve_cmd->add_option("--out", curve_out, "output CSV path (default stdout)");
  curve_cmd->callback([&] {
    const auto samples = curve_samples(loss_kind_from_string(curve_kind), curve_alphas,
                                       curve_points);
    std::ostringstream os;
    write_curve_csv(os, samples);
    write_output(curve_out, os.str());
  });

  // check-grad
  auto* grad_cmd = app.add_subcommand("check-grad", "compare analytic and finite-difference "
                                                    "gradients on random cases");
  int grad_samples = 1000;
  std::uint64_t grad_seed = 0;
  std::string grad_out;
  grad_cmd->add_option("--samples", grad_samples, "number of random cases")
      ->check(CLI::Range(1, 10000000));
  grad_cmd->add_option("--seed", grad_seed, "PRNG seed");
  grad_cmd->add_option("--out", grad_out, "output JSON path (default stdout)");
  grad_cmd->callback([&] {
    const GradReport report = sweep_check(grad_samples, grad_seed);
    log_line("checked " + std::to_string(report.n_checked) + " cases");
    write_output(grad_out, grad_report_json(report) + "\n");
  });

  // regress
  auto* regress_cmd = app.add_subcommand("regress", "gradient-descent a box onto a target "
                                                    "and record IoU trajectories");
  std::string regress_kind = "alpha-iou";
  std::vector<double> regress_alphas = {1.0, 2.0, 3.0};
  std::string regress_init = "0.3,0.3,0.25,0.25";
  std::string regress_gt = "0.5,0.5,0.4,0.4";
  double regress_lr = kDefaultLearningRate;
  int regress_steps = kDefaultSteps;
  std::string regress_out;
  regress_cmd->add_option("--kind", regress_kind, "loss family")
      ->check(CLI::IsMember({"alpha-iou", "alpha-giou", "alpha-diou", "alpha-ciou", "log-iou"}));
  regress_cmd->add_option("--alphas", regress_alphas, "one run per power")
      ->delimiter(',')
      ->check(CLI::Range(0.1, 10.0));
  regress_cmd->add_option("--init", regress_init, "initial box as cx,cy,w,h");
  regress_cmd->add_option("--gt", regress_gt, "target box as cx,cy,w,h");
  regress_cmd->add_option("--lr", regress_lr, "step size")->check(CLI::PositiveNumber);
  regress_cmd->add_option("--steps", regress_steps, "iteration budget")
      ->check(CLI::Range(0, 10000000));
  regress_cmd->add_option("--out", regress_out, "output CSV path (default stdout)");
  regress_cmd->callback([&] {
    const Box init = parse_box_flag("--init", regress_init);
    const Box gt = parse_box_flag("--gt", regress_gt);
    const auto runs = compare_alphas(loss_kind_from_string(regress_kind), regress_alphas, init,
                                     gt, regress_lr, regress_steps);
    for (const RegressionRun& run : runs) {
      std::ostringstream msg;
      msg << "alpha=" << run.spec.alpha1 << " final_iou=" << run.trajectory.back().iou;
      if (run.converged_at) msg << " converged_at=" << *run.converged_at;
      if (run.clamp_events > 0) msg << " clamp_events=" << run.clamp_events;
      log_line(msg.str());
    }
    std::ostringstream os;
    write_trajectories_csv(os, runs);
    write_output(regress_out, os.str());
  });

  // perturb
  auto* perturb_cmd = app.add_subcommand("perturb", "add uniform box noise to annotations");
  std::string perturb_in;
  std::string perturb_out;
  double perturb_eta = 0.1;
  std::uint64_t perturb_seed = 0;
  perturb_cmd->add_option("--in", perturb_in, "annotations JSON")->required();
  perturb_cmd->add_option("--out", perturb_out, "noisy annotations JSON")->required();
  perturb_cmd->add_option("--eta", perturb_eta, "noise rate in [0, 0.5]")
      ->check(CLI::Range(0.0, kMaxNoiseRate));
  perturb_cmd->add_option("--seed", perturb_seed, "PRNG seed");
  perturb_cmd->callback([&] {
    DatasetBundle bundle = load_annotations(perturb_in);
    log_line("loaded " + std::to_string(bundle.gts.size()) + " annotations");
    warn_clamps(bundle);
    const DegradeResult result = degrade_dataset(bundle.gts, NoiseConfig(perturb_eta, perturb_seed));
    DatasetBundle noisy = bundle;
    noisy.gts = result.noisy;
    for (std::size_t i = 0; i < noisy.gts.size(); ++i) {
      noisy.gt_bbox_px[i] =
          to_pixel_bbox(noisy.gts[i].box, noisy.images.at(noisy.gts[i].image_id));
    }
    save_annotations(perturb_out, noisy);
    std::cout << "mean_iou " << std::setprecision(6) << result.mean_iou << '\n';
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "detection evaluation: NMS, matching, AP");
  std::string eval_gt;
  std::string eval_dets;
  std::string eval_thresholds = "0.5:0.95:0.05";
  std::string eval_out;
  std::string eval_hist;
  eval_cmd->add_option("--gt", eval_gt, "annotations JSON")->required();
  eval_cmd->add_option("--dets", eval_dets, "detections JSON")->required();
  eval_cmd->add_option("--thresholds", eval_thresholds, "IoU threshold or start:stop:step");
  eval_cmd->add_option("--out", eval_out, "report JSON path (default stdout)");
  eval_cmd->add_option("--hist-csv", eval_hist, "matched-IoU histogram CSV path");
  eval_cmd->callback([&] {
    DatasetBundle bundle = load_annotations(eval_gt);
    bundle = load_detections(eval_dets, std::move(bundle));
    log_line("loaded " + std::to_string(bundle.gts.size()) + " gts, " +
             std::to_string(bundle.dets.size()) + " detections");
    warn_clamps(bundle);
    const EvalReport report =
        evaluate(bundle.dets, bundle.gts, parse_thresholds(eval_thresholds));
    write_output(eval_out, eval_report_json(report) + "\n");
    if (!eval_hist.empty()) {
      std::ostringstream os;
      write_histogram_csv(os, report);
      write_output(eval_hist, os.str());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
