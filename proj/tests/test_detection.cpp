#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "sedcurves/detection.hpp"
#include "support/builders.hpp"

using namespace sedcurves;
using sedtest::make_event;
using sedtest::make_timeline;
using sedtest::second_grid;

namespace {

ScoreTimeline single_column(std::vector<double> timestamps,
                            std::vector<double> scores) {
  return make_timeline(std::move(timestamps), {"a"}, {std::move(scores)});
}

// Midpoints between consecutive distinct scores, plus one value above the
// maximum and one below the minimum.
std::vector<double> sweep_taus(const std::vector<double>& scores) {
  std::set<double> distinct(scores.begin(), scores.end());
  std::vector<double> sorted(distinct.begin(), distinct.end());
  std::vector<double> taus;
  taus.push_back(sorted.front() - 1.0);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    taus.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  }
  taus.push_back(sorted.back() + 1.0);
  return taus;
}

std::vector<double> random_levels(std::mt19937& rng, std::size_t frames) {
  std::uniform_int_distribution<int> level(0, 7);
  std::vector<double> scores(frames);
  for (auto& value : scores) value = level(rng) / 8.0;
  return scores;
}

// The reference for the commutation property: threshold first, then majority
// vote over the same centered window with replicate padding.
EventList filter_binary_then_detect(const ScoreTimeline& timeline, double tau,
                                    int width) {
  const auto& scores = timeline.scores[0];
  const int frames = static_cast<int>(scores.size());
  const int half = width / 2;
  EventList events;
  std::vector<char> positive(scores.size());
  for (int i = 0; i < frames; ++i) positive[i] = scores[i] > tau ? 1 : 0;
  std::vector<char> filtered(scores.size());
  for (int i = 0; i < frames; ++i) {
    int ones = 0;
    for (int d = -half; d <= half; ++d) {
      const int j = std::clamp(i + d, 0, frames - 1);
      ones += positive[j];
    }
    filtered[i] = ones > half ? 1 : 0;
  }
  int i = 0;
  while (i < frames) {
    if (filtered[i]) {
      int j = i;
      while (j + 1 < frames && filtered[j + 1]) ++j;
      events.push_back(
          Event{timeline.timestamps[i], timeline.timestamps[j + 1], "a"});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return events;
}

}  // namespace

TEST_CASE("detect_events merges consecutive positive frames") {
  auto timeline = single_column({0, 1, 2, 3}, {0.2, 0.7, 0.6});
  auto events = detect_events(timeline, "a", 0.5);
  REQUIRE(events.size() == 1);
  CHECK(events[0].onset == 1.0);
  CHECK(events[0].offset == 3.0);

  CHECK(detect_events(timeline, "a", 0.8).empty());

  auto all = detect_events(timeline, "a", 0.1);
  REQUIRE(all.size() == 1);
  CHECK(all[0].onset == 0.0);
  CHECK(all[0].offset == 3.0);
}

TEST_CASE("detect_events uses a strict comparison") {
  auto timeline = single_column({0, 1, 2}, {0.5, 0.6});
  CHECK(detect_events(timeline, "a", 0.5).size() == 1);
  CHECK(detect_events(timeline, "a", 0.5)[0].onset == 1.0);
}

TEST_CASE("detect_events rejects unknown classes") {
  auto timeline = single_column({0, 1}, {0.5});
  CHECK_THROWS_AS(detect_events(timeline, "b", 0.5), Error);
}

TEST_CASE("detections are anti-monotone in the threshold") {
  std::mt19937 rng(7);
  for (int round = 0; round < 20; ++round) {
    auto scores = random_levels(rng, 40);
    auto timeline = single_column(second_grid(40), scores);
    auto taus = sweep_taus(scores);
    for (std::size_t t = 0; t + 1 < taus.size(); ++t) {
      auto low = detect_events(timeline, "a", taus[t]);
      auto high = detect_events(timeline, "a", taus[t + 1]);
      for (const auto& event : high) {
        bool contained = false;
        for (const auto& outer : low) {
          if (outer.onset <= event.onset && event.offset <= outer.offset) {
            contained = true;
            break;
          }
        }
        CHECK(contained);
      }
    }
  }
}

TEST_CASE("median filter handles the basic cases") {
  auto timeline = single_column(second_grid(5), {0, 1, 0, 1, 1});

  SUBCASE("width one is the identity") {
    auto out = median_filter(timeline, 1);
    CHECK(out.scores[0] == timeline.scores[0]);
    CHECK(out.timestamps == timeline.timestamps);
  }
  SUBCASE("width three with replicate padding") {
    auto out = median_filter(timeline, 3);
    CHECK(out.scores[0] == std::vector<double>{0, 0, 1, 1, 1});
    CHECK(out.timestamps == timeline.timestamps);
  }
  SUBCASE("invalid widths") {
    CHECK_THROWS_AS(median_filter(timeline, 2), Error);
    CHECK_THROWS_AS(median_filter(timeline, 0), Error);
    CHECK_THROWS_AS(median_filter(timeline, -3), Error);
  }
}

TEST_CASE("median filtering commutes with thresholding") {
  std::mt19937 rng(11);
  for (int round = 0; round < 20; ++round) {
    auto scores = random_levels(rng, 50);
    auto timeline = single_column(second_grid(50), scores);
    for (int width : {3, 5, 7}) {
      auto filtered = median_filter(timeline, width);
      for (double tau : sweep_taus(scores)) {
        auto via_scores = detect_events(filtered, "a", tau);
        auto via_binary = filter_binary_then_detect(timeline, tau, width);
        CHECK(via_scores == via_binary);
      }
    }
  }
}

TEST_CASE("segmentize takes the max score and marks overlapped targets") {
  auto timeline = single_column({0.0, 1.0, 2.0, 2.5}, {0.2, 0.9, 0.4});

  SUBCASE("scores and targets of the short final segment") {
    auto pairs = segmentize(timeline, {make_event(1.2, 1.4, "a")}, 1.0, 2.5);
    REQUIRE(pairs.size() == 1);
    REQUIRE(pairs[0].size() == 3);
    CHECK(pairs[0][0].score == 0.2);
    CHECK(pairs[0][1].score == 0.9);
    CHECK(pairs[0][2].score == 0.4);
    CHECK_FALSE(pairs[0][0].target);
    CHECK(pairs[0][1].target);
    CHECK_FALSE(pairs[0][2].target);
  }
  SUBCASE("events touching a boundary only mark the covered segment") {
    auto pairs = segmentize(timeline, {make_event(1.0, 2.0, "a")}, 1.0, 2.5);
    CHECK_FALSE(pairs[0][0].target);
    CHECK(pairs[0][1].target);
    CHECK_FALSE(pairs[0][2].target);
  }
  SUBCASE("no ground truth leaves every target false") {
    auto pairs = segmentize(timeline, {}, 1.0, 2.5);
    for (const auto& pair : pairs[0]) CHECK_FALSE(pair.target);
  }
  SUBCASE("invalid segment length") {
    CHECK_THROWS_AS(segmentize(timeline, {}, 0.0, 2.5), Error);
    CHECK_THROWS_AS(segmentize(timeline, {}, -1.0, 2.5), Error);
  }
  SUBCASE("unknown ground-truth label") {
    CHECK_THROWS_AS(segmentize(timeline, {make_event(0.0, 1.0, "b")}, 1.0, 2.5),
                    Error);
  }
}

TEST_CASE("segments past the scored range keep a zero score") {
  auto timeline = single_column({0.0, 1.0, 2.0}, {-0.5, -0.25});
  auto pairs = segmentize(timeline, {}, 1.0, 3.0);
  REQUIRE(pairs[0].size() == 3);
  CHECK(pairs[0][0].score == -0.5);
  CHECK(pairs[0][1].score == -0.25);
  CHECK(pairs[0][2].score == 0.0);
}

TEST_CASE("segment bounds cover the duration exactly once") {
  std::mt19937 rng(3);
  auto timeline = single_column(second_grid(10), random_levels(rng, 10));
  for (double duration : {10.0, 10.5, 12.0}) {
    for (double length : {1.0, 2.5, 3.0, 20.0}) {
      auto pairs = segmentize(timeline, {}, length, duration);
      const auto segments = pairs[0].size();
      const auto full = static_cast<std::size_t>(duration / length);
      CHECK(segments >= 1);
      CHECK(segments >= full);
      CHECK(segments <= full + 1);
    }
  }
}
