#include <algorithm>
#include <cmath>
#include <cstdint>

#include "run_tracker.hpp"
#include "sedcurves/change_points.hpp"

namespace sedcurves {

namespace {

struct GtWindow {
  double onset = 0.0;
  double offset = 0.0;
  double off_collar = 0.0;
  int lo = 0;  // first frame index whose timestamp is inside the onset collar
  int hi = -1; // last such frame index
};

}  // namespace

std::vector<DeltaRecord> collar_deltas(const ScoreTimeline& timeline,
                                       const EventList& ground_truth,
                                       const std::string& class_name,
                                       const CollarParams& params) {
  if (!(params.onset_collar > 0.0) || params.offset_collar_rate < 0.0) {
    throw Error(ErrorCode::invalid_params, "onset collar must be positive and "
                                           "the offset collar rate non-negative");
  }
  const auto column = timeline.class_index(class_name);
  if (!column) {
    throw Error(ErrorCode::unknown_class, "class '" + class_name + "'");
  }
  const auto& scores = timeline.scores[*column];
  const auto& ts = timeline.timestamps;
  const int frames = static_cast<int>(timeline.frame_count());

  std::vector<GtWindow> gts;
  for (const auto& event : ground_truth) {
    if (event.label != class_name) continue;
    GtWindow gt;
    gt.onset = event.onset;
    gt.offset = event.offset;
    gt.off_collar = offset_collar(params, event.length());
    gts.push_back(gt);
  }
  std::stable_sort(gts.begin(), gts.end(), [](const GtWindow& a, const GtWindow& b) {
    if (a.onset != b.onset) return a.onset < b.onset;
    return a.offset < b.offset;
  });

  // Frame-index window of run onsets that can satisfy |onset - gt.onset| <= d.
  // Binary search gives a first guess; the exact predicate fixes the edges so
  // the window never excludes an eligible onset.
  const double d = params.onset_collar;
  auto inside = [&](int i, double onset) {
    return std::abs(ts[static_cast<std::size_t>(i)] - onset) <= d;
  };
  for (auto& gt : gts) {
    auto begin = ts.begin();
    auto end = ts.begin() + frames;
    int lo = static_cast<int>(std::lower_bound(begin, end, gt.onset - d) - begin);
    while (lo > 0 && inside(lo - 1, gt.onset)) --lo;
    int hi = static_cast<int>(std::upper_bound(begin, end, gt.onset + d) - begin) - 1;
    while (hi + 1 < frames && inside(hi + 1, gt.onset)) ++hi;
    while (lo <= hi && !inside(lo, gt.onset)) ++lo;
    while (hi >= lo && !inside(hi, gt.onset)) --hi;
    gt.lo = lo;
    gt.hi = hi;
  }

  const auto groups = detail::group_by_score(scores);
  detail::RunTracker tracker(frames);

  std::vector<int> used_epoch(static_cast<std::size_t>(frames), -1);
  int epoch = 0;

  // Greedy one-to-one matching: ground truths in onset order, each taking the
  // earliest-onset unmatched run inside both collars.
  auto match_count = [&]() -> std::int64_t {
    ++epoch;
    std::int64_t matched = 0;
    const auto& starts = tracker.starts();
    for (const auto& gt : gts) {
      for (auto it = starts.lower_bound(gt.lo); it != starts.end() && *it <= gt.hi;
           ++it) {
        const int s = *it;
        if (used_epoch[static_cast<std::size_t>(s)] == epoch) continue;
        if (std::abs(ts[static_cast<std::size_t>(s)] - gt.onset) > d) continue;
        const double run_off = ts[static_cast<std::size_t>(tracker.run_end(s)) + 1];
        if (std::abs(run_off - gt.offset) > gt.off_collar) continue;
        used_epoch[static_cast<std::size_t>(s)] = epoch;
        ++matched;
        break;
      }
    }
    return matched;
  };

  std::vector<DeltaRecord> deltas;
  deltas.reserve(groups.values.size());
  std::int64_t prev_tp = 0;
  std::int64_t prev_fp = 0;
  for (std::size_t g = 0; g < groups.values.size(); ++g) {
    for (int frame : groups.frames[g]) tracker.activate(frame);
    const std::int64_t tp = gts.empty() ? 0 : match_count();
    const std::int64_t fp = tracker.run_count() - tp;
    DeltaRecord record;
    record.score = groups.values[g];
    record.d_tp = tp - prev_tp;
    record.d_fp = fp - prev_fp;
    deltas.push_back(std::move(record));
    prev_tp = tp;
    prev_fp = fp;
  }
  return deltas;
}

}  // namespace sedcurves
