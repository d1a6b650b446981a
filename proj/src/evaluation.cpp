#include "subwordseg/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "subwordseg/error.hpp"

namespace subwordseg {

using json = nlohmann::json;

namespace {

std::int64_t intersection_area(const Box& a, const Box& b) {
  const int w = std::min(a.bx, b.bx) - std::max(a.ax, b.ax) + 1;
  const int h = std::min(a.by, b.by) - std::max(a.ay, b.ay) + 1;
  if (w <= 0 || h <= 0) return 0;
  return std::int64_t{w} * h;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
  return out;
}

std::string mismatch_message(const std::vector<std::string>& missing_truth,
                             const std::vector<std::string>& missing_pred,
                             const std::vector<std::string>& duplicates) {
  std::string msg = "prediction/truth id mismatch";
  if (!missing_truth.empty()) msg += "; no truth for: " + join(missing_truth);
  if (!missing_pred.empty()) msg += "; no prediction for: " + join(missing_pred);
  if (!duplicates.empty()) msg += "; duplicate ids: " + join(duplicates);
  return msg;
}

json box_json(const Box& b) { return {{"ax", b.ax}, {"ay", b.ay}, {"bx", b.bx}, {"by", b.by}}; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

double overlap_ratio(const Box& pred, const Box& truth) {
  return static_cast<double>(intersection_area(pred, truth)) / static_cast<double>(truth.area());
}

double iou(const Box& a, const Box& b) {
  const auto inter = intersection_area(a, b);
  return static_cast<double>(inter) / static_cast<double>(a.area() + b.area() - inter);
}

std::string_view to_string(Quality q) {
  switch (q) {
    case Quality::Excellent: return "excellent";
    case Quality::Good: return "good";
    case Quality::Poor: return "poor";
  }
  return "poor";
}

Quality classify_quality(double overlap, const QualityBands& bands) {
  if (overlap >= bands.excellent) return Quality::Excellent;
  if (overlap >= bands.good) return Quality::Good;
  return Quality::Poor;
}

MatchReport match_boxes(std::span<const Box> pred, std::span<const Box> truth, double threshold,
                        const QualityBands& bands) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw ParamError("match threshold must be in (0, 1]");

  struct Candidate {
    double overlap;
    std::size_t t, p;
  };
  std::vector<Candidate> cands;
  for (std::size_t t = 0; t < truth.size(); ++t)
    for (std::size_t p = 0; p < pred.size(); ++p)
      if (const double o = overlap_ratio(pred[p], truth[t]); o >= threshold) cands.push_back({o, t, p});
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    return std::tie(a.t, a.p) < std::tie(b.t, b.p);
  });

  std::vector<bool> pred_used(pred.size(), false), truth_used(truth.size(), false);
  std::vector<std::pair<std::size_t, MatchPair>> taken;  // keyed by truth index
  for (const auto& c : cands) {
    if (pred_used[c.p] || truth_used[c.t]) continue;
    pred_used[c.p] = truth_used[c.t] = true;
    taken.push_back({c.t, {pred[c.p], truth[c.t], c.overlap, iou(pred[c.p], truth[c.t]),
                           classify_quality(c.overlap, bands)}});
  }
  std::sort(taken.begin(), taken.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  MatchReport r;
  for (auto& [t, pair] : taken) r.pairs.push_back(pair);
  for (std::size_t p = 0; p < pred.size(); ++p)
    if (!pred_used[p]) r.unmatched_pred.push_back(pred[p]);
  for (std::size_t t = 0; t < truth.size(); ++t)
    if (!truth_used[t]) r.unmatched_truth.push_back(truth[t]);
  r.count_class = classify_count(pred.size(), truth.size());
  return r;
}

ConfusionCounts counts_from_match(const MatchReport& r, std::size_t removed_small, TnPolicy policy) {
  return {r.pairs.size(), r.unmatched_pred.size(), r.unmatched_truth.size(),
          policy == TnPolicy::DiacriticsAsTN ? removed_small : 0};
}

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  m.accuracy = ratio(c.tp + c.tn, c.tp + c.fp + c.fn + c.tn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
    m.f_score = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

IdMismatchError::IdMismatchError(std::vector<std::string> missing_truth,
                                 std::vector<std::string> missing_pred,
                                 std::vector<std::string> duplicates)
    : std::runtime_error(mismatch_message(missing_truth, missing_pred, duplicates)),
      missing_truth_(std::move(missing_truth)),
      missing_pred_(std::move(missing_pred)),
      duplicates_(std::move(duplicates)) {}

EvalReport evaluate_corpus(std::span<const SegmentationResult> results,
                           std::span<const WordTruth> truths, const EvalOptions& opts) {
  std::map<std::string, const SegmentationResult*> by_pred;
  std::map<std::string, const WordTruth*> by_truth;
  std::vector<std::string> duplicates, missing_truth, missing_pred;
  for (const auto& r : results)
    if (!by_pred.emplace(r.image_id, &r).second) duplicates.push_back(r.image_id);
  for (const auto& t : truths)
    if (!by_truth.emplace(t.id, &t).second) duplicates.push_back(t.id);
  for (const auto& [id, _] : by_pred)
    if (!by_truth.contains(id)) missing_truth.push_back(id);
  for (const auto& [id, _] : by_truth)
    if (!by_pred.contains(id)) missing_pred.push_back(id);
  if (!duplicates.empty() || !missing_truth.empty() || !missing_pred.empty()) {
    std::sort(duplicates.begin(), duplicates.end());
    duplicates.erase(std::unique(duplicates.begin(), duplicates.end()), duplicates.end());
    throw IdMismatchError(std::move(missing_truth), std::move(missing_pred), std::move(duplicates));
  }

  EvalReport report;
  report.options = opts;
  for (const auto& [id, pred] : by_pred) {
    const WordTruth& truth = *by_truth.at(id);
    WordEvaluation w;
    w.id = id;
    w.match = match_boxes(pred->boxes, truth.subwords, opts.threshold, opts.bands);
    w.removed = pred->removed_count;
    w.counts = counts_from_match(w.match, w.removed, opts.tn_policy);
    report.counts += w.counts;
    switch (w.match.count_class) {
      case CountClass::Exact: ++report.seg_classes.exact; break;
      case CountClass::Over: ++report.seg_classes.over; break;
      case CountClass::Under: ++report.seg_classes.under; break;
    }
    report.words.push_back(std::move(w));
  }
  report.metrics = metrics(report.counts);
  report.miss_rate = ratio(report.counts.fn, report.counts.tp + report.counts.fn);
  return report;
}

std::string to_json(const EvalReport& r) {
  json words = json::array();
  for (const auto& w : r.words) {
    json pairs = json::array(), up = json::array(), ut = json::array();
    for (const auto& p : w.match.pairs) {
      pairs.push_back({{"pred", box_json(p.pred)},
                       {"truth", box_json(p.truth)},
                       {"overlap", p.overlap},
                       {"iou", p.iou},
                       {"quality", std::string(to_string(p.quality))}});
    }
    for (const auto& b : w.match.unmatched_pred) up.push_back(box_json(b));
    for (const auto& b : w.match.unmatched_truth) ut.push_back(box_json(b));
    words.push_back({{"id", w.id},
                     {"pairs", pairs},
                     {"unmatched_pred", up},
                     {"unmatched_truth", ut},
                     {"removed", w.removed},
                     {"count_class", std::string(to_string(w.match.count_class))}});
  }
  const json j = {
      {"threshold", r.options.threshold},
      {"quality_bands", {{"excellent", r.options.bands.excellent}, {"good", r.options.bands.good}}},
      {"tn_policy", r.options.tn_policy == TnPolicy::DiacriticsAsTN ? "diacritics" : "zero"},
      {"words", words},
      {"counts", {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"fn", r.counts.fn}, {"tn", r.counts.tn}}},
      {"metrics",
       {{"accuracy", opt_json(r.metrics.accuracy)},
        {"precision", opt_json(r.metrics.precision)},
        {"recall", opt_json(r.metrics.recall)},
        {"specificity", opt_json(r.metrics.specificity)},
        {"f_score", opt_json(r.metrics.f_score)}}},
      {"miss_rate", opt_json(r.miss_rate)},
      {"seg_classes",
       {{"exact", r.seg_classes.exact}, {"over", r.seg_classes.over}, {"under", r.seg_classes.under}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace subwordseg
