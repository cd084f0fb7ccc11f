#include <algorithm>
#include <cstdint>
#include <iterator>
#include <set>
#include <vector>

#include "run_tracker.hpp"
#include "sedcurves/change_points.hpp"

namespace sedcurves {

namespace {

struct GtSpan {
  double onset = 0.0;
  double offset = 0.0;
  double length = 0.0;
};

}  // namespace

std::vector<DeltaRecord> intersection_deltas(
    const ScoreTimeline& timeline, const EventList& ground_truth_all_classes,
    const std::string& class_name, const IntersectionParams& params,
    const std::vector<std::string>& other_classes) {
  auto valid_rho = [](double rho) { return rho > 0.0 && rho <= 1.0; };
  if (!valid_rho(params.rho_dtc) || !valid_rho(params.rho_gtc) ||
      !valid_rho(params.rho_cttc)) {
    throw Error(ErrorCode::invalid_params,
                "intersection thresholds must lie in (0, 1]");
  }
  const auto column = timeline.class_index(class_name);
  if (!column) {
    throw Error(ErrorCode::unknown_class, "class '" + class_name + "'");
  }
  const auto& scores = timeline.scores[*column];
  const auto& ts = timeline.timestamps;
  const int frames = static_cast<int>(timeline.frame_count());
  const std::size_t n_other = other_classes.size();

  // Ground truths stay in file order so the intersection sums accumulate in
  // the same sequence as the brute-force reference.
  std::vector<GtSpan> gts;
  std::vector<std::vector<GtSpan>> others(n_other);
  for (const auto& event : ground_truth_all_classes) {
    GtSpan span;
    span.onset = event.onset;
    span.offset = event.offset;
    span.length = event.length();
    if (event.label == class_name) {
      gts.push_back(span);
      continue;
    }
    for (std::size_t j = 0; j < n_other; ++j) {
      if (event.label == other_classes[j]) {
        others[j].push_back(span);
        break;
      }
    }
  }

  const auto groups = detail::group_by_score(scores);
  detail::RunTracker tracker(frames);

  // Cached per-run classification, keyed by the run's start frame, plus the
  // clip-level counters it currently contributes to.
  std::vector<char> run_cached(static_cast<std::size_t>(frames), 0);
  std::vector<char> run_dtc(static_cast<std::size_t>(frames), 0);
  std::vector<char> run_ct(static_cast<std::size_t>(frames) * n_other, 0);
  std::int64_t fp_runs = 0;
  std::vector<std::int64_t> ct_counts(n_other, 0);
  std::vector<char> gt_tp(gts.size(), 0);
  std::int64_t tp_count = 0;

  auto retire = [&](int start) {
    const auto s = static_cast<std::size_t>(start);
    if (!run_cached[s]) return;
    if (!run_dtc[s]) {
      --fp_runs;
      for (std::size_t j = 0; j < n_other; ++j) {
        if (run_ct[s * n_other + j]) {
          --ct_counts[j];
          run_ct[s * n_other + j] = 0;
        }
      }
    }
    run_cached[s] = 0;
  };

  std::vector<int> gt_seen(gts.size(), -1);
  std::set<int> affected;

  std::vector<DeltaRecord> deltas;
  deltas.reserve(groups.values.size());
  std::int64_t prev_tp = 0;
  std::int64_t prev_fp = 0;
  std::vector<std::int64_t> prev_ct(n_other, 0);

  for (std::size_t g = 0; g < groups.values.size(); ++g) {
    affected.clear();
    for (int frame : groups.frames[g]) {
      const auto act = tracker.activate(frame);
      if (act.removed_start >= 0) {
        retire(act.removed_start);
        affected.erase(act.removed_start);
      }
      if (act.old_start >= 0 && act.old_start != act.start) {
        retire(act.old_start);
        affected.erase(act.old_start);
      }
      affected.insert(act.start);
    }

    // Reclassify every run whose extent changed. Sums are rebuilt from
    // scratch so they do not depend on the activation history.
    for (int start : affected) {
      retire(start);
      const auto s = static_cast<std::size_t>(start);
      const double on = ts[s];
      const double off =
          ts[static_cast<std::size_t>(tracker.run_end(start)) + 1];
      const double len = off - on;
      double i_same = 0.0;
      for (const auto& gt : gts) {
        i_same += overlap_length(on, off, gt.onset, gt.offset);
      }
      const bool dtc = ratio_at_least(i_same, len, params.rho_dtc);
      run_dtc[s] = dtc ? 1 : 0;
      if (!dtc) {
        ++fp_runs;
        for (std::size_t j = 0; j < n_other; ++j) {
          double i_other = 0.0;
          for (const auto& gt : others[j]) {
            i_other += overlap_length(on, off, gt.onset, gt.offset);
          }
          if (ratio_at_least(i_other, len, params.rho_cttc)) {
            run_ct[s * n_other + j] = 1;
            ++ct_counts[j];
          }
        }
      }
      run_cached[s] = 1;
      for (std::size_t gi = 0; gi < gts.size(); ++gi) {
        if (gts[gi].onset < off && on < gts[gi].offset) {
          gt_seen[gi] = static_cast<int>(g);
        }
      }
    }

    // Re-test the ground truths those runs overlap, summing their overlap
    // with the passing runs in ascending start order.
    const auto& starts = tracker.starts();
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_seen[gi] != static_cast<int>(g)) continue;
      const auto& gt = gts[gi];
      const int i0 = static_cast<int>(
          std::upper_bound(ts.begin() + 1, ts.end(), gt.onset) -
          (ts.begin() + 1));
      auto it = starts.upper_bound(i0);
      if (it != starts.begin()) {
        auto before = std::prev(it);
        if (tracker.run_end(*before) >= i0) it = before;
      }
      double covered = 0.0;
      for (; it != starts.end() &&
             ts[static_cast<std::size_t>(*it)] < gt.offset;
           ++it) {
        if (!run_dtc[static_cast<std::size_t>(*it)]) continue;
        const double run_off =
            ts[static_cast<std::size_t>(tracker.run_end(*it)) + 1];
        covered += overlap_length(ts[static_cast<std::size_t>(*it)], run_off,
                                  gt.onset, gt.offset);
      }
      const bool tp = ratio_at_least(covered, gt.length, params.rho_gtc);
      if (tp != static_cast<bool>(gt_tp[gi])) {
        tp_count += tp ? 1 : -1;
        gt_tp[gi] = tp ? 1 : 0;
      }
    }

    DeltaRecord record;
    record.score = groups.values[g];
    record.d_tp = tp_count - prev_tp;
    record.d_fp = fp_runs - prev_fp;
    record.d_ct.resize(n_other);
    for (std::size_t j = 0; j < n_other; ++j) {
      record.d_ct[j] = ct_counts[j] - prev_ct[j];
      prev_ct[j] = ct_counts[j];
    }
    deltas.push_back(std::move(record));
    prev_tp = tp_count;
    prev_fp = fp_runs;
  }
  return deltas;
}

}  // namespace sedcurves
