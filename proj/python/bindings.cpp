#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "alphaiou/dataset.hpp"
#include "alphaiou/eval.hpp"
#include "alphaiou/grad_check.hpp"
#include "alphaiou/losses.hpp"
#include "alphaiou/noise.hpp"
#include "alphaiou/regression.hpp"

namespace py = pybind11;
using namespace alphaiou;

namespace {

std::string box_repr(const Box& b) {
  std::ostringstream os;
  os << "Box(cx=" << b.cx << ", cy=" << b.cy << ", w=" << b.w << ", h=" << b.h << ")";
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "power IoU losses for bounding-box regression";
  m.attr("__version__") = "0.1.0";
  m.attr("MIN_EXTENT") = kMinExtent;
  m.attr("LOG_IOU_FLOOR") = kLogIoUFloor;
  m.attr("NMS_IOU_THRESHOLD") = kNmsIoUThreshold;
  m.attr("MAX_NOISE_RATE") = kMaxNoiseRate;
  m.attr("CONVERGED_IOU") = kConvergedIoU;

  py::class_<Box>(m, "Box")
      .def(py::init<double, double, double, double>(), py::arg("cx"), py::arg("cy"),
           py::arg("w"), py::arg("h"))
      .def_static("from_corners", &Box::from_corners, py::arg("x1"), py::arg("y1"),
                  py::arg("x2"), py::arg("y2"))
      .def_readonly("cx", &Box::cx)
      .def_readonly("cy", &Box::cy)
      .def_readonly("w", &Box::w)
      .def_readonly("h", &Box::h)
      .def("x1", &Box::x1)
      .def("y1", &Box::y1)
      .def("x2", &Box::x2)
      .def("y2", &Box::y2)
      .def("area", &Box::area)
      .def(py::self == py::self)
      .def("__repr__", &box_repr);

  py::class_<GeometrySummary>(m, "GeometrySummary")
      .def_readonly("iou", &GeometrySummary::iou)
      .def_readonly("enclosure_excess", &GeometrySummary::enclosure_excess)
      .def_readonly("center_dist_sq", &GeometrySummary::center_dist_sq)
      .def_readonly("diag_sq", &GeometrySummary::diag_sq)
      .def_readonly("v", &GeometrySummary::v);

  m.def("iou", &iou, py::arg("a"), py::arg("b"));
  m.def("summarize", &summarize, py::arg("pred"), py::arg("gt"));
  m.def("clamp_to_bounds", &clamp_to_bounds, py::arg("box"));
  m.def("within_bounds", &within_bounds, py::arg("box"), py::arg("tol") = 0.0);

  py::enum_<LossKind>(m, "LossKind")
      .value("ALPHA_IOU", LossKind::AlphaIoU)
      .value("ALPHA_GIOU", LossKind::AlphaGIoU)
      .value("ALPHA_DIOU", LossKind::AlphaDIoU)
      .value("ALPHA_CIOU", LossKind::AlphaCIoU)
      .value("LOG_IOU", LossKind::LogIoU);

  m.def("loss_kind_from_string", &loss_kind_from_string, py::arg("name"));

  py::class_<LossSpec>(m, "LossSpec")
      .def(py::init<LossKind, double>(), py::arg("kind"), py::arg("alpha") = 1.0)
      .def(py::init<LossKind, double, double>(), py::arg("kind"), py::arg("alpha1"),
           py::arg("alpha2"))
      .def_readonly("kind", &LossSpec::kind)
      .def_readonly("alpha1", &LossSpec::alpha1)
      .def_readonly("alpha2", &LossSpec::alpha2);

  py::class_<LossEval>(m, "LossEval")
      .def_readonly("value", &LossEval::value)
      .def_readonly("d_iou", &LossEval::d_iou)
      .def_readonly("grad_pred", &LossEval::grad_pred);

  m.def("loss_value", &loss_value, py::arg("spec"), py::arg("pred"), py::arg("gt"));
  m.def("loss_eval", &loss_eval, py::arg("spec"), py::arg("pred"), py::arg("gt"));
  m.def("relative_loss_weight", &relative_loss_weight, py::arg("alpha"), py::arg("iou"));
  m.def("relative_grad_weight", &relative_grad_weight, py::arg("alpha"), py::arg("iou"));
  m.def("absolute_loss_weight", &absolute_loss_weight, py::arg("alpha"), py::arg("iou"));
  m.def("absolute_grad_weight", &absolute_grad_weight, py::arg("alpha"), py::arg("iou"));
  m.def("turning_point", &turning_point, py::arg("alpha"));

  py::class_<CurveSample>(m, "CurveSample")
      .def_readonly("iou", &CurveSample::iou)
      .def_readonly("alpha", &CurveSample::alpha)
      .def_readonly("loss", &CurveSample::loss)
      .def_readonly("grad_mag", &CurveSample::grad_mag);

  m.def("curve_samples", &curve_samples, py::arg("kind"), py::arg("alphas"),
        py::arg("n_points"));

  py::class_<GradCase>(m, "GradCase")
      .def_readonly("spec", &GradCase::spec)
      .def_readonly("pred", &GradCase::pred)
      .def_readonly("gt", &GradCase::gt);

  py::class_<GradReport>(m, "GradReport")
      .def_readonly("max_abs_err", &GradReport::max_abs_err)
      .def_readonly("max_rel_err", &GradReport::max_rel_err)
      .def_readonly("worst_case", &GradReport::worst_case)
      .def_readonly("n_checked", &GradReport::n_checked);

  m.def("fd_gradient", &fd_gradient, py::arg("spec"), py::arg("pred"), py::arg("gt"),
        py::arg("step") = 1e-6);
  m.def("sweep_check", &sweep_check, py::arg("n_random"), py::arg("seed") = 0);
  m.def("grad_report_json", &grad_report_json, py::arg("report"));

  py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
      .def_readonly("step", &TrajectoryPoint::step)
      .def_readonly("iou", &TrajectoryPoint::iou)
      .def_readonly("loss", &TrajectoryPoint::loss)
      .def_readonly("grad_norm", &TrajectoryPoint::grad_norm);

  py::class_<RegressionRun>(m, "RegressionRun")
      .def_readonly("spec", &RegressionRun::spec)
      .def_readonly("lr", &RegressionRun::lr)
      .def_readonly("steps", &RegressionRun::steps)
      .def_readonly("trajectory", &RegressionRun::trajectory)
      .def_readonly("boxes", &RegressionRun::boxes)
      .def_readonly("converged_at", &RegressionRun::converged_at)
      .def_readonly("clamp_events", &RegressionRun::clamp_events);

  m.def("regress", &regress, py::arg("spec"), py::arg("init"), py::arg("gt"),
        py::arg("lr") = kDefaultLearningRate, py::arg("steps") = kDefaultSteps);
  m.def("compare_alphas", &compare_alphas, py::arg("kind"), py::arg("alphas"), py::arg("init"),
        py::arg("gt"), py::arg("lr") = kDefaultLearningRate, py::arg("steps") = kDefaultSteps);
  m.def("steps_to_reach", &steps_to_reach, py::arg("run"), py::arg("iou_threshold"));

  py::class_<NoiseConfig>(m, "NoiseConfig")
      .def(py::init<double, std::uint64_t>(), py::arg("eta"), py::arg("seed") = 0)
      .def_readonly("eta", &NoiseConfig::eta)
      .def_readonly("seed", &NoiseConfig::seed);

  m.def("perturb", &perturb, py::arg("box"), py::arg("cfg"), py::arg("draws"));

  py::class_<DegradeResult>(m, "DegradeResult")
      .def_readonly("noisy", &DegradeResult::noisy)
      .def_readonly("mean_iou", &DegradeResult::mean_iou);

  m.def("degrade_dataset", &degrade_dataset, py::arg("gts"), py::arg("cfg"));

  py::class_<Detection>(m, "Detection")
      .def(py::init<std::int64_t, std::int64_t, Box, double>(), py::arg("image_id"),
           py::arg("category"), py::arg("box"), py::arg("score"))
      .def_readonly("image_id", &Detection::image_id)
      .def_readonly("category", &Detection::category)
      .def_readonly("box", &Detection::box)
      .def_readonly("score", &Detection::score);

  py::class_<GroundTruth>(m, "GroundTruth")
      .def(py::init<std::int64_t, std::int64_t, Box>(), py::arg("image_id"),
           py::arg("category"), py::arg("box"))
      .def_readonly("image_id", &GroundTruth::image_id)
      .def_readonly("category", &GroundTruth::category)
      .def_readonly("box", &GroundTruth::box);

  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("tp", &MatchResult::tp)
      .def_readonly("match_iou", &MatchResult::match_iou);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("ap_per_threshold", &EvalReport::ap_per_threshold)
      .def_readonly("map_50_95", &EvalReport::map_50_95)
      .def_readonly("map_75_95", &EvalReport::map_75_95)
      .def_readonly("iou_histogram", &EvalReport::iou_histogram);

  m.def("nms", &nms, py::arg("dets"), py::arg("iou_thresh"));
  m.def("match", &match, py::arg("dets"), py::arg("gts"), py::arg("iou_threshold"));
  m.def("average_precision", &average_precision, py::arg("flags"), py::arg("scores"),
        py::arg("n_gt"));
  m.def("evaluate", &evaluate, py::arg("dets"), py::arg("gts"), py::arg("thresholds"));
  m.def("eval_report_json", &eval_report_json, py::arg("report"));

  py::class_<ImageInfo>(m, "ImageInfo")
      .def(py::init<double, double>(), py::arg("width"), py::arg("height"))
      .def_readonly("width", &ImageInfo::width)
      .def_readonly("height", &ImageInfo::height);

  py::class_<DatasetBundle>(m, "DatasetBundle")
      .def_readonly("images", &DatasetBundle::images)
      .def_readonly("gts", &DatasetBundle::gts)
      .def_readonly("dets", &DatasetBundle::dets)
      .def_readonly("gt_bbox_px", &DatasetBundle::gt_bbox_px)
      .def_readonly("det_bbox_px", &DatasetBundle::det_bbox_px)
      .def_readonly("clamp_warnings", &DatasetBundle::clamp_warnings);

  m.def("load_annotations", &load_annotations, py::arg("path"));
  m.def("load_detections", &load_detections, py::arg("path"), py::arg("bundle"));
  m.def("save_annotations", &save_annotations, py::arg("path"), py::arg("bundle"));
  m.def("save_detections", &save_detections, py::arg("path"), py::arg("bundle"));
  m.def("to_pixel_bbox", &to_pixel_bbox, py::arg("box"), py::arg("image"));
}
