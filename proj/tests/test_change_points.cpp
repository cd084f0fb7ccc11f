#include <cstdint>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "sedcurves/change_points.hpp"
#include "support/builders.hpp"

using namespace sedcurves;
using sedtest::make_event;
using sedtest::make_timeline;
using sedtest::second_grid;

namespace {

struct ExpectedDelta {
  double score = 0.0;
  std::int64_t d_tp = 0;
  std::int64_t d_fp = 0;
  std::int64_t d_ct = 0;  // single other class, ignored when none is tracked
};

void check_deltas(const std::vector<DeltaRecord>& got,
                  const std::vector<ExpectedDelta>& want, bool with_ct) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CAPTURE(i);
    CHECK(got[i].score == want[i].score);
    CHECK(got[i].d_tp == want[i].d_tp);
    CHECK(got[i].d_fp == want[i].d_fp);
    if (with_ct) {
      REQUIRE(got[i].d_ct.size() == 1);
      CHECK(got[i].d_ct[0] == want[i].d_ct);
    }
  }
}

CollarParams wide_collar() {
  CollarParams params;
  params.onset_collar = 1.0;
  params.offset_collar_rate = 0.2;
  params.offset_collar_min = 1.0;
  return params;
}

IntersectionParams half_ratios() {
  IntersectionParams params;
  params.rho_dtc = 0.5;
  params.rho_gtc = 0.5;
  params.rho_cttc = 0.5;
  return params;
}

}  // namespace

TEST_CASE("segment deltas sort scores and aggregate ties") {
  SUBCASE("distinct scores") {
    auto deltas = segment_deltas({{0.9, true}, {0.4, false}});
    check_deltas(deltas, {{0.9, 1, 0, 0}, {0.4, 0, 1, 0}}, false);
  }
  SUBCASE("tied scores flip together") {
    auto deltas = segment_deltas({{0.5, true}, {0.5, false}});
    check_deltas(deltas, {{0.5, 1, 1, 0}}, false);
  }
  SUBCASE("empty input") {
    CHECK(segment_deltas({}).empty());
  }
}

TEST_CASE("collar deltas follow a detection drifting off the collars") {
  auto timeline = make_timeline(
      second_grid(10), {"a"},
      {{0.3, 0.3, 0.5, 0.6, 0.7, 0.6, 0.4, 0.3, 0.3, 0.2}});
  auto deltas =
      collar_deltas(timeline, {make_event(2.0, 7.0, "a")}, "a", wide_collar());
  check_deltas(deltas,
               {{0.7, 0, 1, 0},
                {0.6, 1, -1, 0},
                {0.5, 0, 0, 0},
                {0.4, 0, 0, 0},
                {0.3, -1, 1, 0},
                {0.2, 0, 0, 0}},
               false);
}

TEST_CASE("collar deltas without ground truth count detections as FPs") {
  std::vector<double> scores{0.1, 0.8, 0.2, 0.8, 0.8, 0.1, 0.5};
  auto timeline = make_timeline(second_grid(7), {"a"}, {scores});
  auto deltas = collar_deltas(timeline, {}, "a", wide_collar());

  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (const auto& record : deltas) {
    tp += record.d_tp;
    fp += record.d_fp;
    CHECK(record.d_tp == 0);
    const double tau = record.score - 0.01;
    CHECK(fp == static_cast<std::int64_t>(
                    detect_events(timeline, "a", tau).size()));
  }
  CHECK(tp == 0);
}

TEST_CASE("all-equal scores produce a single change point") {
  auto timeline = make_timeline(second_grid(4), {"a"}, {{0.4, 0.4, 0.4, 0.4}});
  auto deltas =
      collar_deltas(timeline, {make_event(0.0, 4.0, "a")}, "a", wide_collar());
  check_deltas(deltas, {{0.4, 1, 0, 0}}, false);
}

TEST_CASE("collar deltas validate their parameters") {
  auto timeline = make_timeline(second_grid(2), {"a"}, {{0.1, 0.2}});
  CollarParams bad;
  bad.onset_collar = 0.0;
  CHECK_THROWS_AS(collar_deltas(timeline, {}, "a", bad), Error);
  CHECK_THROWS_AS(collar_deltas(timeline, {}, "missing", wide_collar()), Error);
}

TEST_CASE("intersection deltas track the detection growing past the ratios") {
  auto timeline =
      make_timeline({0, 2, 4, 6, 8, 10}, {"a"}, {{0.2, 0.55, 0.8, 0.4, 0.1}});
  EventList gt{make_event(4.0, 6.0, "a"), make_event(6.0, 8.0, "b")};
  auto deltas = intersection_deltas(timeline, gt, "a", half_ratios(), {"b"});
  check_deltas(deltas,
               {{0.8, 1, 0, 0},
                {0.55, 0, 0, 0},
                {0.4, -1, 1, 0},
                {0.2, 0, 0, 0},
                {0.1, 0, 0, 0}},
               true);
}

TEST_CASE("a cross-trigger appears and dissolves as the detection grows") {
  std::vector<double> scores{0, 0, 0, 0, 0, 0, 0.9, 0.9, 0, 0};
  auto timeline = make_timeline(second_grid(10), {"a"}, {scores});
  EventList gt{make_event(0.0, 1.0, "a"), make_event(6.0, 8.0, "b")};
  auto deltas = intersection_deltas(timeline, gt, "a", half_ratios(), {"b"});
  check_deltas(deltas, {{0.9, 0, 1, 1}, {0.0, 0, 0, -1}}, true);
}

TEST_CASE("a growing detection walks through CT, FP, and TP states") {
  std::vector<double> scores{0.5, 0.5, 0.5, 0.5, 0.6, 0.7, 0.9, 0.2, 0.2, 0.2};
  auto timeline = make_timeline(second_grid(10), {"a"}, {scores});
  EventList gt{make_event(0.0, 4.0, "a"), make_event(6.0, 8.0, "b")};
  auto deltas = intersection_deltas(timeline, gt, "a", half_ratios(), {"b"});
  check_deltas(deltas,
               {{0.9, 0, 1, 1},
                {0.7, 0, 0, 0},
                {0.6, 0, 0, -1},
                {0.5, 1, -1, 0},
                {0.2, -1, 1, 0}},
               true);
}

TEST_CASE("intersection deltas validate their parameters") {
  auto timeline = make_timeline(second_grid(2), {"a"}, {{0.1, 0.2}});
  IntersectionParams bad;
  bad.rho_dtc = 0.0;
  CHECK_THROWS_AS(intersection_deltas(timeline, {}, "a", bad, {}), Error);
  bad = IntersectionParams{};
  bad.rho_gtc = 1.5;
  CHECK_THROWS_AS(intersection_deltas(timeline, {}, "a", bad, {}), Error);
  CHECK_THROWS_AS(
      intersection_deltas(timeline, {}, "missing", half_ratios(), {}), Error);
}

TEST_CASE("accumulate runs the cumulative sums with a zero row") {
  std::vector<std::vector<DeltaRecord>> per_clip(1);
  per_clip[0].push_back({0.7, 0, 1, {}});
  per_clip[0].push_back({0.6, 1, -1, {}});
  per_clip[0].push_back({0.3, -1, 1, {}});
  CurveTotals totals;
  totals.n_gp = 1;
  totals.t_total = 10.0;

  auto curve = accumulate("a", per_clip, totals);
  CHECK(curve.thresholds == std::vector<double>{0.7, 0.6, 0.3});
  CHECK(curve.n_tp == std::vector<std::int64_t>{0, 0, 1, 0});
  CHECK(curve.n_fp == std::vector<std::int64_t>{0, 1, 0, 1});
  CHECK(curve.n_gp == 1);
  CHECK(curve.t_total == 10.0);
  CHECK_FALSE(curve.has_n_gn);
}

TEST_CASE("accumulate merges equal scores across clips") {
  std::vector<std::vector<DeltaRecord>> per_clip(2);
  per_clip[0].push_back({0.5, 1, 0, {}});
  per_clip[1].push_back({0.5, 1, 0, {}});
  CurveTotals totals;
  totals.n_gp = 2;

  auto curve = accumulate("a", per_clip, totals);
  CHECK(curve.thresholds == std::vector<double>{0.5});
  CHECK(curve.n_tp == std::vector<std::int64_t>{0, 2});
  CHECK(curve.n_fp == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("accumulate with no deltas keeps only the zero row") {
  auto curve = accumulate("a", {}, {});
  CHECK(curve.thresholds.empty());
  CHECK(curve.n_tp == std::vector<std::int64_t>{0});
  CHECK(curve.n_fp == std::vector<std::int64_t>{0});
  CHECK(curve.size() == 1);
}

TEST_CASE("accumulate rejects deltas that drive a count negative") {
  std::vector<std::vector<DeltaRecord>> per_clip(1);
  per_clip[0].push_back({0.5, -1, 0, {}});
  CHECK_THROWS_AS(accumulate("a", per_clip, {}), Error);
}

TEST_CASE("dataset sweep fills totals and is independent of the job count") {
  Dataset dataset;
  dataset.class_names = {"a", "b"};
  for (int c = 0; c < 3; ++c) {
    Clip clip;
    clip.id = "clip" + std::to_string(c);
    clip.timeline = make_timeline(
        second_grid(6), {"a", "b"},
        {{0.1 * c, 0.5, 0.9, 0.4, 0.4, 0.2}, {0.3, 0.3, 0.1, 0.8, 0.2, 0.05 * c}});
    clip.duration = 6.0;
    clip.events = {make_event(1.0, 3.0, "a"), make_event(3.0, 4.0, "b")};
    dataset.clips.push_back(clip);
  }

  EvalParams params;
  params.mode = EvalMode::intersection;
  auto serial = compute_statistics_curves(dataset, params, 1);
  auto parallel = compute_statistics_curves(dataset, params, 4);

  REQUIRE(serial.size() == 2);
  for (const auto& [name, curve] : serial) {
    const auto& other = parallel.at(name);
    CHECK(curve.thresholds == other.thresholds);
    CHECK(curve.n_tp == other.n_tp);
    CHECK(curve.n_fp == other.n_fp);
    CHECK(curve.n_ct == other.n_ct);
    CHECK(curve.n_gp == 3);
    CHECK(curve.t_total == 18.0);
    REQUIRE(curve.other_classes.size() == 1);
    REQUIRE(curve.t_gt_other.size() == 1);
  }
  CHECK(serial.at("a").other_classes[0] == "b");
  CHECK(serial.at("a").t_gt_other[0] == doctest::Approx(3.0));
  CHECK(serial.at("b").t_gt_other[0] == doctest::Approx(6.0));
}

TEST_CASE("segment mode counts positive and negative segments") {
  Dataset dataset;
  dataset.class_names = {"a"};
  Clip clip;
  clip.id = "clip0";
  clip.timeline = make_timeline(second_grid(4), {"a"}, {{0.9, 0.1, 0.1, 0.7}});
  clip.duration = 4.0;
  clip.events = {make_event(0.2, 0.8, "a")};
  dataset.clips.push_back(clip);

  EvalParams params;
  params.mode = EvalMode::segment;
  params.segment_length = 1.0;
  auto curves = compute_statistics_curves(dataset, params, 1);
  const auto& curve = curves.at("a");
  CHECK(curve.n_gp == 1);
  CHECK(curve.has_n_gn);
  CHECK(curve.n_gn == 3);
  CHECK(curve.other_classes.empty());

  // Cumulative TP and DP never decrease as the threshold drops.
  for (std::size_t row = 1; row < curve.size(); ++row) {
    CHECK(curve.n_tp[row] >= curve.n_tp[row - 1]);
    const auto dp = derived_counts(curve, row);
    const auto prev = derived_counts(curve, row - 1);
    CHECK(dp.n_dp >= prev.n_dp);
  }
}
