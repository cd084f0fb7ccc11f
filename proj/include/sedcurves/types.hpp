#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sedcurves/errors.hpp"

namespace sedcurves {

/// Per-clip matrix of classification scores over contiguous timestamped
/// frames. Frame i spans [timestamps[i], timestamps[i+1]); scores are stored
/// per class column.
struct ScoreTimeline {
  std::vector<double> timestamps;           // M+1, strictly increasing, >= 0
  std::vector<std::string> class_names;     // K, unique, non-empty
  std::vector<std::vector<double>> scores;  // K columns of M finite values

  std::size_t frame_count() const {
    return timestamps.empty() ? 0 : timestamps.size() - 1;
  }

  std::optional<std::size_t> class_index(const std::string& name) const {
    auto it = std::find(class_names.begin(), class_names.end(), name);
    if (it == class_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - class_names.begin());
  }
};

struct Event {
  double onset = 0.0;
  double offset = 0.0;
  std::string label;

  double length() const { return offset - onset; }

  friend bool operator==(const Event& a, const Event& b) {
    return a.onset == b.onset && a.offset == b.offset && a.label == b.label;
  }
};

using EventList = std::vector<Event>;

struct Clip {
  std::string id;
  ScoreTimeline timeline;
  EventList events;
  double duration = 0.0;  // authoritative, may exceed the scored range
};

/// Validated evaluation set. Clips are sorted by id; class_names is the
/// canonical (sorted) class order shared by every timeline.
struct Dataset {
  std::vector<Clip> clips;
  std::vector<std::string> class_names;

  double total_duration() const {
    double t = 0.0;
    for (const auto& clip : clips) t += clip.duration;
    return t;
  }
};

struct CollarParams {
  double onset_collar = 0.2;       // d, seconds, > 0
  double offset_collar_rate = 0.2; // r, >= 0
  double offset_collar_min = 0.2;  // seconds, defaults to d
};

/// Effective offset collar for a ground-truth event of the given length.
inline double offset_collar(const CollarParams& params, double event_length) {
  return std::max(params.offset_collar_min,
                  params.offset_collar_rate * event_length);
}

struct IntersectionParams {
  double rho_dtc = 0.7;
  double rho_gtc = 0.7;
  double rho_cttc = 0.3;
};

enum class TimeUnit { second, minute, hour };

inline double time_unit_seconds(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::second: return 1.0;
    case TimeUnit::minute: return 60.0;
    case TimeUnit::hour: return 3600.0;
  }
  return 3600.0;
}

struct PsdsParams {
  double alpha_ct = 0.0;
  double alpha_st = 1.0;
  double efpr_max = 100.0;  // events per unit_of_time, > 0
  TimeUnit unit_of_time = TimeUnit::hour;
  bool clip_negative_etpr = false;
};

/// Length of the overlap of two half-open intervals, clamped at zero.
/// Both the sweep engine and the brute-force oracle use this one expression
/// so their ratio comparisons see bit-identical sums.
inline double overlap_length(double a_on, double a_off, double b_on,
                             double b_off) {
  return std::max(0.0, std::min(a_off, b_off) - std::max(a_on, b_on));
}

/// intersection / length >= rho, written multiplication-first. Equality at
/// exactly rho passes. Shared by the engine and the oracle so both sides
/// round identically.
inline bool ratio_at_least(double intersection, double length, double rho) {
  return intersection >= rho * length;
}

/// Intermediate statistics for every possible decision threshold of one
/// class. Index 0 is the "no positives" row (tau >= max score); row k >= 1
/// holds the counts valid for any tau in [thresholds[k] (or -inf), thresholds[k-1])
/// under the strict decision rule score > tau.
struct StatisticsCurve {
  std::string class_name;
  std::vector<double> thresholds;    // distinct scores, strictly descending
  std::vector<std::int64_t> n_tp;    // length thresholds.size() + 1
  std::vector<std::int64_t> n_fp;

  // Intersection mode only: cross-trigger counts against each other class.
  std::vector<std::string> other_classes;
  std::vector<std::vector<std::int64_t>> n_ct;  // [other class][row]

  std::int64_t n_gp = 0;            // ground-truth positives of this class
  std::int64_t n_gn = 0;            // ground-truth negatives (segment mode)
  bool has_n_gn = false;
  double t_total = 0.0;             // dataset duration, seconds
  std::vector<double> t_gt_other;   // ground-truth seconds per other class

  std::size_t size() const { return n_tp.size(); }

  /// Row whose threshold interval contains tau (count of change points
  /// strictly above tau).
  std::size_t row_for_threshold(double tau) const {
    auto it = std::lower_bound(thresholds.begin(), thresholds.end(), tau,
                               [](double value, double t) { return value > t; });
    return static_cast<std::size_t>(it - thresholds.begin());
  }
};

struct DerivedCounts {
  std::int64_t n_dp = 0;  // detected positives
  std::int64_t n_fn = 0;  // missed ground truths
};

/// N_DP and N_FN for one row of a statistics curve.
DerivedCounts derived_counts(const StatisticsCurve& curve, std::size_t index);

/// Builds a Dataset from the three per-clip mappings and checks every
/// invariant. Clips present in scores but absent from the ground truth get an
/// empty event list; any other key mismatch is an error.
Dataset validate_dataset(const std::map<std::string, ScoreTimeline>& scores,
                         const std::map<std::string, EventList>& ground_truth,
                         const std::map<std::string, double>& durations);

/// Re-checks the invariants of an already-built Dataset.
void validate_dataset(const Dataset& dataset);

}  // namespace sedcurves
