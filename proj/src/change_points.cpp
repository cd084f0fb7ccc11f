#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>

#include "sedcurves/change_points.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sedcurves {

namespace {

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) return jobs;
  return omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

}  // namespace

std::vector<DeltaRecord> segment_deltas(const std::vector<SegmentPair>& pairs) {
  std::vector<SegmentPair> sorted(pairs);
  std::sort(sorted.begin(), sorted.end(),
            [](const SegmentPair& a, const SegmentPair& b) {
              return a.score > b.score;
            });
  std::vector<DeltaRecord> deltas;
  for (const auto& pair : sorted) {
    if (deltas.empty() || deltas.back().score != pair.score) {
      DeltaRecord record;
      record.score = pair.score;
      deltas.push_back(std::move(record));
    }
    if (pair.target) {
      ++deltas.back().d_tp;
    } else {
      ++deltas.back().d_fp;
    }
  }
  return deltas;
}

StatisticsCurve accumulate(const std::string& class_name,
                           const std::vector<std::vector<DeltaRecord>>& per_clip,
                           const CurveTotals& totals) {
  const std::size_t n_other = totals.other_classes.size();
  std::size_t total_records = 0;
  for (const auto& clip : per_clip) total_records += clip.size();
  std::vector<DeltaRecord> merged;
  merged.reserve(total_records);
  for (const auto& clip : per_clip) {
    merged.insert(merged.end(), clip.begin(), clip.end());
  }
  std::sort(merged.begin(), merged.end(),
            [](const DeltaRecord& a, const DeltaRecord& b) {
              return a.score > b.score;
            });

  StatisticsCurve curve;
  curve.class_name = class_name;
  curve.other_classes = totals.other_classes;
  curve.n_gp = totals.n_gp;
  curve.n_gn = totals.n_gn;
  curve.has_n_gn = totals.has_n_gn;
  curve.t_total = totals.t_total;
  curve.t_gt_other = totals.t_gt_other;

  curve.thresholds.reserve(merged.size());
  curve.n_tp.reserve(merged.size() + 1);
  curve.n_fp.reserve(merged.size() + 1);
  curve.n_tp.push_back(0);
  curve.n_fp.push_back(0);
  curve.n_ct.assign(n_other, std::vector<std::int64_t>{0});

  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::vector<std::int64_t> ct(n_other, 0);
  std::size_t i = 0;
  while (i < merged.size()) {
    const double value = merged[i].score;
    curve.thresholds.push_back(value);
    for (; i < merged.size() && merged[i].score == value; ++i) {
      tp += merged[i].d_tp;
      fp += merged[i].d_fp;
      for (std::size_t j = 0; j < merged[i].d_ct.size() && j < n_other; ++j) {
        ct[j] += merged[i].d_ct[j];
      }
    }
    if (tp < 0 || fp < 0 ||
        std::any_of(ct.begin(), ct.end(),
                    [](std::int64_t c) { return c < 0; })) {
      throw Error(ErrorCode::negative_cumulative_count,
                  "class '" + class_name + "' at threshold " +
                      std::to_string(value));
    }
    curve.n_tp.push_back(tp);
    curve.n_fp.push_back(fp);
    for (std::size_t j = 0; j < n_other; ++j) curve.n_ct[j].push_back(ct[j]);
  }
  return curve;
}

std::map<std::string, StatisticsCurve> compute_statistics_curves(
    const Dataset& dataset, const EvalParams& params, int jobs) {
  const auto& classes = dataset.class_names;
  const std::size_t n_classes = classes.size();
  const std::size_t n_clips = dataset.clips.size();
  const int threads = resolve_jobs(jobs);

  // Class lists every curve of this run shares: the cross-trigger partners of
  // each class and the ground-truth seconds per class, summed in clip order.
  std::vector<std::vector<std::string>> other_lists(n_classes);
  if (params.mode == EvalMode::intersection) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t k = 0; k < n_classes; ++k) {
        if (k != c) other_lists[c].push_back(classes[k]);
      }
    }
  }
  std::vector<std::int64_t> gt_events(n_classes, 0);
  std::vector<double> gt_seconds(n_classes, 0.0);
  auto class_slot = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), label) -
        classes.begin());
  };
  for (const auto& clip : dataset.clips) {
    for (const auto& event : clip.events) {
      const std::size_t c = class_slot(event.label);
      ++gt_events[c];
      gt_seconds[c] += event.length();
    }
  }

  std::vector<std::vector<std::vector<DeltaRecord>>> deltas(
      n_classes, std::vector<std::vector<DeltaRecord>>(n_clips));
  std::vector<std::vector<std::int64_t>> positives(
      n_classes, std::vector<std::int64_t>(n_clips, 0));
  std::vector<std::vector<std::int64_t>> negatives(
      n_classes, std::vector<std::int64_t>(n_clips, 0));

  std::atomic<bool> failed{false};
  std::exception_ptr error;
  auto capture = [&]() {
    bool expected = false;
    if (failed.compare_exchange_strong(expected, true)) {
      error = std::current_exception();
    }
  };

  if (params.mode == EvalMode::segment) {
    const auto task_count = static_cast<std::int64_t>(n_clips);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t t = 0; t < task_count; ++t) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        const auto& clip = dataset.clips[static_cast<std::size_t>(t)];
        const auto pairs = segmentize(clip.timeline, clip.events,
                                      params.segment_length, clip.duration);
        for (std::size_t c = 0; c < n_classes; ++c) {
          const auto column = clip.timeline.class_index(classes[c]);
          const auto& segs = pairs[*column];
          deltas[c][static_cast<std::size_t>(t)] = segment_deltas(segs);
          std::int64_t pos = 0;
          for (const auto& seg : segs) pos += seg.target ? 1 : 0;
          positives[c][static_cast<std::size_t>(t)] = pos;
          negatives[c][static_cast<std::size_t>(t)] =
              static_cast<std::int64_t>(segs.size()) - pos;
        }
      } catch (...) {
        capture();
      }
    }
  } else {
    const auto task_count = static_cast<std::int64_t>(n_clips * n_classes);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t t = 0; t < task_count; ++t) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        const auto clip_idx = static_cast<std::size_t>(t) / n_classes;
        const auto class_idx = static_cast<std::size_t>(t) % n_classes;
        const auto& clip = dataset.clips[clip_idx];
        if (params.mode == EvalMode::collar) {
          deltas[class_idx][clip_idx] = collar_deltas(
              clip.timeline, clip.events, classes[class_idx], params.collar);
        } else {
          deltas[class_idx][clip_idx] = intersection_deltas(
              clip.timeline, clip.events, classes[class_idx],
              params.intersection, other_lists[class_idx]);
        }
      } catch (...) {
        capture();
      }
    }
  }
  if (error) std::rethrow_exception(error);

  const double t_total = dataset.total_duration();
  std::map<std::string, StatisticsCurve> curves;
  for (std::size_t c = 0; c < n_classes; ++c) {
    CurveTotals totals;
    totals.t_total = t_total;
    if (params.mode == EvalMode::segment) {
      std::int64_t pos = 0;
      std::int64_t neg = 0;
      for (std::size_t k = 0; k < n_clips; ++k) {
        pos += positives[c][k];
        neg += negatives[c][k];
      }
      totals.n_gp = pos;
      totals.n_gn = neg;
      totals.has_n_gn = true;
    } else {
      totals.n_gp = gt_events[c];
    }
    if (params.mode == EvalMode::intersection) {
      totals.other_classes = other_lists[c];
      totals.t_gt_other.reserve(other_lists[c].size());
      for (const auto& other : other_lists[c]) {
        totals.t_gt_other.push_back(gt_seconds[class_slot(other)]);
      }
    }
    curves.emplace(classes[c], accumulate(classes[c], deltas[c], totals));
  }
  return curves;
}

}  // namespace sedcurves
