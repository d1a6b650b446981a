#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "subwordseg/components.hpp"
#include "subwordseg/groundtruth.hpp"
#include "subwordseg/segmenter.hpp"

namespace subwordseg {

/// Intersection area over the truth box area.
double overlap_ratio(const Box& pred, const Box& truth);

/// Intersection over union.
double iou(const Box& a, const Box& b);

enum class Quality { Excellent, Good, Poor };

std::string_view to_string(Quality q);

struct QualityBands {
  double excellent = 0.8;
  double good = 0.5;
};

Quality classify_quality(double overlap, const QualityBands& bands = {});

struct MatchPair {
  Box pred;
  Box truth;
  double overlap = 0.0;
  double iou = 0.0;
  Quality quality = Quality::Excellent;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<Box> unmatched_pred;
  std::vector<Box> unmatched_truth;
  CountClass count_class = CountClass::Exact;
};

/// Greedy one-to-one matching: candidate pairs with overlap >= threshold are
/// taken in order of descending overlap, ties by (truth index, pred index).
/// Unmatched boxes keep their input order.
MatchReport match_boxes(std::span<const Box> pred, std::span<const Box> truth,
                        double threshold = 0.5, const QualityBands& bands = {});

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

enum class TnPolicy {
  DiacriticsAsTN,  // removed small components count as true negatives
  Zero,
};

ConfusionCounts counts_from_match(const MatchReport& r, std::size_t removed_small,
                                  TnPolicy policy = TnPolicy::DiacriticsAsTN);

/// Ratios are std::nullopt where the denominator is zero.
struct Metrics {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> specificity;
  std::optional<double> f_score;

  bool all_undefined() const noexcept {
    return !accuracy && !precision && !recall && !specificity && !f_score;
  }
};

Metrics metrics(const ConfusionCounts& c);

struct WordEvaluation {
  std::string id;
  MatchReport match;
  std::size_t removed = 0;
  ConfusionCounts counts;
};

struct SegClassCounts {
  std::size_t exact = 0, over = 0, under = 0;
};

struct EvalOptions {
  double threshold = 0.5;
  QualityBands bands;
  TnPolicy tn_policy = TnPolicy::DiacriticsAsTN;
};

struct EvalReport {
  EvalOptions options;
  std::vector<WordEvaluation> words;  // sorted by id
  ConfusionCounts counts;
  Metrics metrics;
  std::optional<double> miss_rate;  // fn / (tp + fn): the undetected fraction
  SegClassCounts seg_classes;
};

/// Thrown when predictions and truths cannot be joined one-to-one by id.
class IdMismatchError : public std::runtime_error {
 public:
  IdMismatchError(std::vector<std::string> missing_truth, std::vector<std::string> missing_pred,
                  std::vector<std::string> duplicates);

  const std::vector<std::string>& missing_truth() const noexcept { return missing_truth_; }
  const std::vector<std::string>& missing_pred() const noexcept { return missing_pred_; }
  const std::vector<std::string>& duplicates() const noexcept { return duplicates_; }

 private:
  std::vector<std::string> missing_truth_;  // predicted ids without a truth record
  std::vector<std::string> missing_pred_;   // truth ids without a prediction
  std::vector<std::string> duplicates_;
};

EvalReport evaluate_corpus(std::span<const SegmentationResult> results,
                           std::span<const WordTruth> truths, const EvalOptions& opts = {});

/// {threshold, words:[{id, pairs, unmatched_pred, unmatched_truth, removed, count_class}],
///  counts, metrics, miss_rate, seg_classes}; undefined ratios are null.
std::string to_json(const EvalReport& r);

}  // namespace subwordseg
