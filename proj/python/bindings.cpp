#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>

#include "subwordseg/components.hpp"
#include "subwordseg/error.hpp"
#include "subwordseg/evaluation.hpp"
#include "subwordseg/groundtruth.hpp"
#include "subwordseg/morphology.hpp"
#include "subwordseg/raster.hpp"
#include "subwordseg/segmenter.hpp"
#include "subwordseg/skeleton.hpp"
#include "subwordseg/synthesis.hpp"

namespace py = pybind11;
using namespace subwordseg;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

std::vector<std::uint8_t> copy_2d(const U8Array& a, int& width, int& height) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  height = static_cast<int>(a.shape(0));
  width = static_cast<int>(a.shape(1));
  return std::vector<std::uint8_t>(a.data(), a.data() + a.size());
}

GrayImage to_gray(const U8Array& a) {
  int w = 0, h = 0;
  auto data = copy_2d(a, w, h);
  return GrayImage(w, h, std::move(data));
}

BinaryImage to_bits(const U8Array& a) {
  int w = 0, h = 0;
  auto data = copy_2d(a, w, h);
  for (auto& v : data) v = v ? 1 : 0;
  return BinaryImage(w, h, std::move(data));
}

U8Array to_array(std::span<const std::uint8_t> data, int width, int height) {
  U8Array out({height, width});
  std::memcpy(out.mutable_data(), data.data(), data.size());
  return out;
}

U8Array to_array(const BinaryImage& img) { return to_array(img.bits(), img.width(), img.height()); }
U8Array to_array(const GrayImage& img) { return to_array(img.data(), img.width(), img.height()); }

BridgeRule parse_rule(const std::string& rule) {
  if (rule == "exact2") return BridgeRule::ExactlyTwo;
  if (rule == "matlab") return BridgeRule::MatlabBridge;
  throw std::invalid_argument("bridge_rule must be 'exact2' or 'matlab'");
}

CgsConfig make_cgs(int dilate_iters, int bridge_iters, int majority_iters, const std::string& rule) {
  return CgsConfig{dilate_iters, bridge_iters, majority_iters, parse_rule(rule)};
}

py::dict metrics_dict(const Metrics& m) {
  auto opt = [](const std::optional<double>& v) -> py::object {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
  };
  py::dict d;
  d["accuracy"] = opt(m.accuracy);
  d["precision"] = opt(m.precision);
  d["recall"] = opt(m.recall);
  d["specificity"] = opt(m.specificity);
  d["f_score"] = opt(m.f_score);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
    Sub-word segmentation of handwritten Arabic word images: gap-connecting
    morphology, connected components with diacritic filtering, synthetic
    corpora and box-level evaluation.
  )pbdoc";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);

  py::class_<Box>(m, "Box")
      .def(py::init<int, int, int, int>(), py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"))
      .def_readwrite("ax", &Box::ax)
      .def_readwrite("ay", &Box::ay)
      .def_readwrite("bx", &Box::bx)
      .def_readwrite("by", &Box::by)
      .def("area", &Box::area)
      .def("__eq__", [](const Box& a, const Box& b) { return a == b; })
      .def("__repr__", [](const Box& b) {
        return "Box(" + std::to_string(b.ax) + ", " + std::to_string(b.ay) + ", " +
               std::to_string(b.bx) + ", " + std::to_string(b.by) + ")";
      });

  py::class_<SegmentationResult>(m, "SegmentationResult")
      .def_readonly("image_id", &SegmentationResult::image_id)
      .def_readonly("boxes", &SegmentationResult::boxes)
      .def_readonly("removed_count", &SegmentationResult::removed_count)
      .def_readonly("removed_boxes", &SegmentationResult::removed_boxes)
      .def("to_json", [](const SegmentationResult& r) { return to_json(r); });

  m.def("otsu_threshold", [](const std::vector<std::uint64_t>& bins) {
    if (bins.size() != 256) throw std::invalid_argument("histogram needs 256 bins");
    std::array<std::uint64_t, 256> a{};
    std::copy(bins.begin(), bins.end(), a.begin());
    return otsu_threshold(Histogram::from_bins(a));
  }, py::arg("bins"), "Otsu threshold of a 256-bin histogram (smallest maximiser).");

  m.def("histogram", [](const U8Array& img) {
    const auto h = histogram(to_gray(img));
    return std::vector<std::uint64_t>(h.bins.begin(), h.bins.end());
  }, py::arg("image"));

  m.def("binarize", [](const U8Array& img, int t) { return to_array(binarize(to_gray(img), t)); },
        py::arg("image"), py::arg("threshold"), "1 where intensity <= threshold.");

  m.def("dilate8", [](const U8Array& bits) { return to_array(dilate8(to_bits(bits))); }, py::arg("bits"));
  m.def("bridge", [](const U8Array& bits, const std::string& rule) {
    return to_array(bridge(to_bits(bits), parse_rule(rule)));
  }, py::arg("bits"), py::arg("rule") = "exact2");
  m.def("majority_fill", [](const U8Array& bits) { return to_array(majority_fill(to_bits(bits))); },
        py::arg("bits"));
  m.def("connect_gaps", [](const U8Array& bits, int d, int b, int maj, const std::string& rule) {
    return to_array(connect_gaps(to_bits(bits), make_cgs(d, b, maj, rule)));
  }, py::arg("bits"), py::arg("dilate_iters") = 4, py::arg("bridge_iters") = 2,
     py::arg("majority_iters") = 2, py::arg("bridge_rule") = "exact2");
  m.def("thin_zhang_suen", [](const U8Array& bits) { return to_array(thin_zhang_suen(to_bits(bits))); },
        py::arg("bits"));

  m.def("label8", [](const U8Array& bits) {
    const Labeling lab = label8(to_bits(bits));
    py::array_t<std::uint32_t> labels({lab.map.height, lab.map.width});
    std::memcpy(labels.mutable_data(), lab.map.labels.data(), lab.map.labels.size() * sizeof(std::uint32_t));
    py::list comps;
    for (const auto& c : lab.components) {
      comps.append(py::dict(py::arg("label") = c.label, py::arg("area") = c.area, py::arg("box") = c.box));
    }
    return py::make_tuple(labels, comps);
  }, py::arg("bits"), "8-connected labelling; returns (label array, components).");

  m.def("segment_word", [](const U8Array& img, std::optional<int> threshold, bool cgs,
                           std::size_t min_area, bool skeleton, const std::string& rule,
                           std::string image_id) {
    PipelineConfig cfg;
    cfg.threshold = threshold;
    if (cgs) cfg.cgs = CgsConfig{4, 2, 2, parse_rule(rule)};
    else cfg.cgs.reset();
    cfg.min_area = min_area;
    cfg.apply_skeleton = skeleton;
    return segment_word(to_gray(img), cfg, std::move(image_id));
  }, py::arg("image"), py::arg("threshold") = py::none(), py::arg("cgs") = true,
     py::arg("min_area") = 30, py::arg("skeleton") = false, py::arg("bridge_rule") = "exact2",
     py::arg("image_id") = "");

  m.def("classify_count", [](std::size_t pred, std::size_t truth) {
    return std::string(to_string(classify_count(pred, truth)));
  }, py::arg("pred_count"), py::arg("truth_count"));

  m.def("synth_word", [](int subword_count, int thickness, std::vector<int> gaps, int dots,
                         int width, int height, std::uint64_t seed, std::string id) {
    SynthParams p;
    p.subword_count = subword_count;
    p.stroke_thickness = thickness;
    p.gap_widths = std::move(gaps);
    p.dot_count = dots;
    p.canvas_width = width;
    p.canvas_height = height;
    p.seed = seed;
    const SynthWord w = synth_word(p, std::move(id));
    return py::make_tuple(to_array(w.image), w.truth.subwords);
  }, py::arg("subword_count") = 3, py::arg("thickness") = 3, py::arg("gap_widths") = std::vector<int>{},
     py::arg("dot_count") = 0, py::arg("width") = 256, py::arg("height") = 96, py::arg("seed") = 0,
     py::arg("id") = "S0001", "Returns (greyscale image, truth boxes).");

  m.def("overlap_ratio", &overlap_ratio, py::arg("pred"), py::arg("truth"));
  m.def("iou", &iou, py::arg("a"), py::arg("b"));

  m.def("match_boxes", [](const std::vector<Box>& pred, const std::vector<Box>& truth, double threshold) {
    const MatchReport r = match_boxes(pred, truth, threshold);
    py::list pairs;
    for (const auto& p : r.pairs) {
      pairs.append(py::dict(py::arg("pred") = p.pred, py::arg("truth") = p.truth,
                            py::arg("overlap") = p.overlap, py::arg("iou") = p.iou,
                            py::arg("quality") = std::string(to_string(p.quality))));
    }
    return py::dict(py::arg("pairs") = pairs, py::arg("unmatched_pred") = r.unmatched_pred,
                    py::arg("unmatched_truth") = r.unmatched_truth,
                    py::arg("count_class") = std::string(to_string(r.count_class)));
  }, py::arg("pred"), py::arg("truth"), py::arg("threshold") = 0.5);

  m.def("metrics", [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
    return metrics_dict(metrics({tp, fp, fn, tn}));
  }, py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn") = 0,
     "Accuracy, precision, recall, specificity and F-score; None where undefined.");

  m.def("parse_truth", [](const std::string& text) {
    const WordTruth t = parse_truth(text);
    return py::make_tuple(t.id, t.subwords);
  }, py::arg("text"), "Returns (id, sub-word boxes).");

  m.def("write_truth", [](const std::string& id, const std::vector<Box>& boxes) {
    const Bytes b = write_truth(WordTruth{id, boxes, {}});
    return std::string(b.begin(), b.end());
  }, py::arg("id"), py::arg("boxes"));

  m.def("load_pgm", [](const py::bytes& data) {
    const std::string s = data;
    return to_array(load_pgm(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())));
  }, py::arg("data"));
  m.def("save_pgm", [](const U8Array& img) {
    const Bytes b = save_pgm(to_gray(img));
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
  }, py::arg("image"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
