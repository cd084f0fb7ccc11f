#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sedcurves/detection.hpp"
#include "sedcurves/types.hpp"

namespace sedcurves {

/// Change in the intermediate statistics when the decision threshold falls
/// below `score`. Frames that share a score value flip together, so equal
/// scores contribute one aggregated record.
struct DeltaRecord {
  double score = 0.0;
  std::int64_t d_tp = 0;
  std::int64_t d_fp = 0;
  std::vector<std::int64_t> d_ct;  // per other class, intersection mode only
};

/// Single-instance deltas: one record per distinct score, d_tp counting
/// positive-target pairs and d_fp negative-target pairs at that score.
std::vector<DeltaRecord> segment_deltas(const std::vector<SegmentPair>& pairs);

/// Collar-based deltas for one clip and class. Cumulative sums over the
/// records reproduce the brute-force counts at every threshold: a ground
/// truth is detected when a one-to-one matching (greedy over ground truths in
/// onset order, each taking the earliest-onset unmatched detection inside
/// both collars) assigns it a detection; every unmatched detection is a FP.
std::vector<DeltaRecord> collar_deltas(const ScoreTimeline& timeline,
                                       const EventList& ground_truth,
                                       const std::string& class_name,
                                       const CollarParams& params);

/// Intersection-based deltas for one clip and class, including cross-trigger
/// counts against `other_classes` (d_ct is aligned with that list).
std::vector<DeltaRecord> intersection_deltas(
    const ScoreTimeline& timeline, const EventList& ground_truth_all_classes,
    const std::string& class_name, const IntersectionParams& params,
    const std::vector<std::string>& other_classes);

/// Dataset-level totals attached to an accumulated curve.
struct CurveTotals {
  std::int64_t n_gp = 0;
  std::int64_t n_gn = 0;
  bool has_n_gn = false;
  double t_total = 0.0;
  std::vector<std::string> other_classes;
  std::vector<double> t_gt_other;
};

/// Merges per-clip delta lists of one class: aggregates equal scores across
/// clips, sorts descending, prepends the zero row, and emits running
/// cumulative sums.
StatisticsCurve accumulate(const std::string& class_name,
                           const std::vector<std::vector<DeltaRecord>>& per_clip,
                           const CurveTotals& totals);

enum class EvalMode { collar, intersection, segment };

struct EvalParams {
  EvalMode mode = EvalMode::intersection;
  CollarParams collar;
  IntersectionParams intersection;
  double segment_length = 1.0;
};

/// Full sweep over a dataset: per-(clip, class) deltas computed on up to
/// `jobs` OpenMP threads, then reduced in clip order. Output is independent
/// of the worker count. Returns one curve per class, keyed by class name.
std::map<std::string, StatisticsCurve> compute_statistics_curves(
    const Dataset& dataset, const EvalParams& params, int jobs = 0);

}  // namespace sedcurves
