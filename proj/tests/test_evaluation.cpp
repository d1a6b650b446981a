#include <doctest.h>

#include <algorithm>
#include <random>

#include <json.hpp>

#include "subwordseg/evaluation.hpp"

using namespace subwordseg;

namespace {

Box random_box(std::mt19937_64& rng) {
  const int ax = static_cast<int>(rng() % 60), ay = static_cast<int>(rng() % 30);
  return {ax, ay, ax + static_cast<int>(rng() % 25), ay + static_cast<int>(rng() % 20)};
}

// Pixel-counting intersection, independent of the closed-form area.
std::int64_t brute_intersection(const Box& a, const Box& b) {
  std::int64_t n = 0;
  for (int y = a.ay; y <= a.by; ++y)
    for (int x = a.ax; x <= a.bx; ++x) n += b.contains(x, y);
  return n;
}

}  // namespace

TEST_CASE("overlap_ratio and iou") {
  const Box b{3, 4, 10, 12};
  CHECK(overlap_ratio(b, b) == 1.0);
  CHECK(iou(b, b) == 1.0);
  CHECK(overlap_ratio({0, 0, 2, 2}, {5, 5, 7, 7}) == 0.0);
  CHECK(iou({0, 0, 2, 2}, {5, 5, 7, 7}) == 0.0);

  const Box pred{0, 0, 13, 13}, truth{2, 2, 11, 11};
  CHECK(overlap_ratio(pred, truth) == 1.0);
  CHECK(iou(pred, truth) == doctest::Approx(100.0 / 196.0));
  CHECK(iou(pred, truth) == doctest::Approx(0.5102).epsilon(1e-4));
}

TEST_CASE("overlap properties on random boxes") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const Box a = random_box(rng), b = random_box(rng);
    const double o = overlap_ratio(a, b), u = iou(a, b);
    CHECK((o >= 0.0 && o <= 1.0));
    CHECK((u >= 0.0 && u <= 1.0));
    CHECK(u == iou(b, a));
    const auto inter = brute_intersection(a, b);
    CHECK(o == doctest::Approx(static_cast<double>(inter) / b.area()));
    CHECK(u == doctest::Approx(static_cast<double>(inter) / (a.area() + b.area() - inter)));
    if (a.contains(b)) CHECK(o == 1.0);
  }
}

TEST_CASE("match_boxes examples") {
  const Box t{10, 10, 30, 30};
  auto r = match_boxes(std::vector<Box>{t}, std::vector<Box>{t});
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].quality == Quality::Excellent);
  CHECK(r.unmatched_pred.empty());
  CHECK(r.unmatched_truth.empty());
  CHECK(r.count_class == CountClass::Exact);

  r = match_boxes(std::vector<Box>{}, std::vector<Box>{t, {40, 10, 50, 30}});
  CHECK(r.unmatched_truth.size() == 2);
  CHECK(r.count_class == CountClass::Under);

  // Truth area 100; candidates cover 90 and 60 of it.
  const Box truth{0, 0, 9, 9};
  const Box p90{0, 0, 8, 9}, p60{0, 0, 5, 9};
  REQUIRE(overlap_ratio(p90, truth) == doctest::Approx(0.9));
  REQUIRE(overlap_ratio(p60, truth) == doctest::Approx(0.6));
  // Of the two possible assignments, pairing p90 gives the larger overlap.
  for (const auto& preds : {std::vector<Box>{p60, p90}, std::vector<Box>{p90, p60}}) {
    r = match_boxes(preds, std::vector<Box>{truth});
    REQUIRE(r.pairs.size() == 1);
    CHECK(r.pairs[0].pred == p90);
    REQUIRE(r.unmatched_pred.size() == 1);
    CHECK(r.unmatched_pred[0] == p60);
    CHECK(r.count_class == CountClass::Over);
  }
}

TEST_CASE("quality bands") {
  const Box truth{0, 0, 9, 9};
  auto r = match_boxes(std::vector<Box>{{0, 0, 5, 9}}, std::vector<Box>{truth});
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].quality == Quality::Good);

  r = match_boxes(std::vector<Box>{{0, 0, 3, 9}}, std::vector<Box>{truth});
  CHECK(r.pairs.empty());
  r = match_boxes(std::vector<Box>{{0, 0, 3, 9}}, std::vector<Box>{truth}, 0.3);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].quality == Quality::Poor);

  CHECK_THROWS(match_boxes(std::vector<Box>{}, std::vector<Box>{}, 0.0));
  CHECK_THROWS(match_boxes(std::vector<Box>{}, std::vector<Box>{}, 1.5));
}

TEST_CASE("greedy matching never pairs below threshold and partitions both sides") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Box> pred, truth;
    for (int i = 0; i < static_cast<int>(rng() % 6); ++i) pred.push_back(random_box(rng));
    for (int i = 0; i < static_cast<int>(rng() % 6); ++i) truth.push_back(random_box(rng));
    const double threshold = 0.1 + 0.1 * static_cast<double>(rng() % 9);
    const auto r = match_boxes(pred, truth, threshold);
    for (const auto& p : r.pairs) CHECK(p.overlap >= threshold);
    CHECK(r.pairs.size() + r.unmatched_pred.size() == pred.size());
    CHECK(r.pairs.size() + r.unmatched_truth.size() == truth.size());

    std::vector<Box> seen_pred, seen_truth;
    for (const auto& p : r.pairs) {
      seen_pred.push_back(p.pred);
      seen_truth.push_back(p.truth);
    }
    seen_pred.insert(seen_pred.end(), r.unmatched_pred.begin(), r.unmatched_pred.end());
    seen_truth.insert(seen_truth.end(), r.unmatched_truth.begin(), r.unmatched_truth.end());
    auto key = [](const Box& b) { return std::tie(b.ax, b.ay, b.bx, b.by); };
    auto by_key = [&](const Box& a, const Box& b) { return key(a) < key(b); };
    auto sorted = [&](std::vector<Box> v) {
      std::sort(v.begin(), v.end(), by_key);
      return v;
    };
    CHECK(sorted(seen_pred) == sorted(pred));
    CHECK(sorted(seen_truth) == sorted(truth));
    const auto counts = counts_from_match(r, 0);
    CHECK(counts.tp + counts.fn == truth.size());
    CHECK(counts.tp + counts.fp == pred.size());
  }
}

TEST_CASE("counts_from_match") {
  MatchReport r;
  r.pairs.resize(3);
  r.unmatched_pred.resize(1);
  CHECK(counts_from_match(r, 2) == ConfusionCounts{3, 1, 0, 2});
  CHECK(counts_from_match(r, 2, TnPolicy::Zero) == ConfusionCounts{3, 1, 0, 0});
  CHECK(counts_from_match(MatchReport{}, 0, TnPolicy::Zero) == ConfusionCounts{});

  MatchReport misses;
  misses.pairs.resize(1);
  misses.unmatched_truth.resize(2);
  CHECK(counts_from_match(misses, 0).fn == 2);
}

TEST_CASE("metrics examples") {
  // Precision 0.89, recall 0.99.
  const Metrics table = metrics({8811, 1089, 89, 0});
  CHECK(*table.precision == doctest::Approx(0.89).epsilon(1e-12));
  CHECK(*table.recall == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(*table.f_score == doctest::Approx(2 * 0.89 * 0.99 / (0.89 + 0.99)).epsilon(1e-12));
  CHECK(*table.f_score == doctest::Approx(0.93734).epsilon(1e-5));

  const Metrics perfect = metrics({1, 0, 0, 1});
  CHECK(*perfect.accuracy == 1.0);
  CHECK(*perfect.precision == 1.0);
  CHECK(*perfect.recall == 1.0);
  CHECK(*perfect.specificity == 1.0);
  CHECK(*perfect.f_score == 1.0);

  const Metrics m = metrics({8, 1, 0, 1});
  CHECK(*m.accuracy == doctest::Approx(0.9));
  CHECK(*m.precision == doctest::Approx(8.0 / 9.0));
  CHECK(*m.recall == 1.0);
  CHECK(*m.specificity == doctest::Approx(0.5));

  CHECK(metrics({}).all_undefined());
  const Metrics no_pred = metrics({0, 0, 3, 0});
  CHECK_FALSE(no_pred.precision.has_value());
  CHECK(*no_pred.recall == 0.0);
  CHECK_FALSE(no_pred.f_score.has_value());
  CHECK_FALSE(no_pred.specificity.has_value());
}

TEST_CASE("metrics agree with hand arithmetic on random counts") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const ConfusionCounts c{rng() % 50, rng() % 50, rng() % 50, rng() % 50};
    const Metrics m = metrics(c);
    const double tp = c.tp, fp = c.fp, fn = c.fn, tn = c.tn;
    if (tp + fp + fn + tn > 0) CHECK(*m.accuracy == doctest::Approx((tp + tn) / (tp + fp + fn + tn)));
    else CHECK_FALSE(m.accuracy);
    if (tp + fp > 0) CHECK(*m.precision == doctest::Approx(tp / (tp + fp)));
    else CHECK_FALSE(m.precision);
    if (tp + fn > 0) CHECK(*m.recall == doctest::Approx(tp / (tp + fn)));
    else CHECK_FALSE(m.recall);
    if (tn + fp > 0) CHECK(*m.specificity == doctest::Approx(tn / (tn + fp)));
    else CHECK_FALSE(m.specificity);
    if (tp > 0) CHECK(*m.f_score == doctest::Approx(2 * tp / (2 * tp + fp + fn)));
    for (const auto& v : {m.accuracy, m.precision, m.recall, m.specificity, m.f_score})
      if (v) CHECK((*v >= 0.0 && *v <= 1.0));
  }
}

TEST_CASE("evaluate_corpus") {
  std::vector<SegmentationResult> preds;
  std::vector<WordTruth> truths;
  for (int i = 0; i < 5; ++i) {
    const std::string id = "W" + std::to_string(i);
    std::vector<Box> boxes;
    for (int k = 0; k <= i; ++k) boxes.push_back({k * 30, 5, k * 30 + 20, 25});
    truths.push_back({id, boxes, {}});
    SegmentationResult r;
    r.image_id = id;
    r.boxes = boxes;
    std::reverse(r.boxes.begin(), r.boxes.end());
    r.removed_count = static_cast<std::size_t>(i % 2);
    preds.push_back(r);
  }
  auto report = evaluate_corpus(preds, truths);
  CHECK(*report.metrics.recall == 1.0);
  CHECK(report.seg_classes.exact == 5);
  CHECK(report.seg_classes.over == 0);
  CHECK(report.seg_classes.under == 0);
  CHECK(report.counts == ConfusionCounts{15, 0, 0, 2});
  CHECK(*report.miss_rate == 0.0);

  // Aggregation does not depend on input order.
  std::vector<SegmentationResult> shuffled = preds;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(to_json(evaluate_corpus(shuffled, truths)) == to_json(report));

  // A long gap splits W2's middle sub-word: over-segmentation.
  preds[2].boxes.push_back({100, 5, 110, 25});
  report = evaluate_corpus(preds, truths);
  CHECK(report.seg_classes.over == 1);
  CHECK(report.words[2].match.count_class == CountClass::Over);

  const auto j = nlohmann::json::parse(to_json(evaluate_corpus(std::vector<SegmentationResult>{},
                                                               std::vector<WordTruth>{})));
  CHECK(j["metrics"]["precision"].is_null());
  CHECK(j["miss_rate"].is_null());
  CHECK(j["seg_classes"]["exact"] == 0);
}

TEST_CASE("evaluate_corpus rejects id mismatches and duplicates") {
  std::vector<WordTruth> truths = {{"A", {{0, 0, 1, 1}}, {}}, {"B", {{0, 0, 1, 1}}, {}}};
  SegmentationResult a, c;
  a.image_id = "A";
  c.image_id = "C";
  try {
    evaluate_corpus(std::vector<SegmentationResult>{a, c}, truths);
    FAIL("expected mismatch");
  } catch (const IdMismatchError& e) {
    CHECK(e.missing_truth() == std::vector<std::string>{"C"});
    CHECK(e.missing_pred() == std::vector<std::string>{"B"});
  }
  SegmentationResult b;
  b.image_id = "B";
  CHECK_THROWS_AS(evaluate_corpus(std::vector<SegmentationResult>{a, b, b}, truths), IdMismatchError);
}
