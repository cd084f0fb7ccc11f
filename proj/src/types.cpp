#include "sedcurves/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace sedcurves {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_clip: return "MissingClip";
    case ErrorCode::inconsistent_classes: return "InconsistentClasses";
    case ErrorCode::unknown_label: return "UnknownLabel";
    case ErrorCode::non_monotone_timestamps: return "NonMonotoneTimestamps";
    case ErrorCode::non_finite_score: return "NonFiniteScore";
    case ErrorCode::event_out_of_bounds: return "EventOutOfBounds";
    case ErrorCode::zero_length_event: return "ZeroLengthEvent";
    case ErrorCode::bad_header: return "BadHeader";
    case ErrorCode::bad_row: return "BadRow";
    case ErrorCode::non_contiguous_rows: return "NonContiguousRows";
    case ErrorCode::negative_onset: return "NegativeOnset";
    case ErrorCode::offset_not_after_onset: return "OffsetNotAfterOnset";
    case ErrorCode::non_positive_duration: return "NonPositiveDuration";
    case ErrorCode::duplicate_clip: return "DuplicateClip";
    case ErrorCode::even_width: return "EvenWidth";
    case ErrorCode::non_positive_width: return "NonPositiveWidth";
    case ErrorCode::non_positive_segment_length: return "NonPositiveSegmentLength";
    case ErrorCode::unknown_class: return "UnknownClass";
    case ErrorCode::no_ground_truth: return "NoGroundTruth";
    case ErrorCode::zero_cross_duration: return "ZeroCrossDuration";
    case ErrorCode::no_classes: return "NoClasses";
    case ErrorCode::empty_curve: return "EmptyCurve";
    case ErrorCode::unsorted_input: return "UnsortedInput";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::negative_cumulative_count: return "NegativeCumulativeCount";
    case ErrorCode::empty_threshold_list: return "EmptyThresholdList";
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

DerivedCounts derived_counts(const StatisticsCurve& curve, std::size_t index) {
  if (index >= curve.size()) {
    throw Error(ErrorCode::index_out_of_range,
                "row " + std::to_string(index) + " of " +
                    std::to_string(curve.size()));
  }
  DerivedCounts out;
  out.n_dp = curve.n_tp[index] + curve.n_fp[index];
  out.n_fn = curve.n_gp - curve.n_tp[index];
  return out;
}

namespace {

void check_timeline(const std::string& clip_id, const ScoreTimeline& timeline) {
  if (timeline.timestamps.size() < 2) {
    throw Error(ErrorCode::non_monotone_timestamps,
                "clip '" + clip_id + "' has no frames");
  }
  if (timeline.timestamps.front() < 0.0) {
    throw Error(ErrorCode::non_monotone_timestamps,
                "clip '" + clip_id + "' starts before 0");
  }
  for (std::size_t i = 0; i + 1 < timeline.timestamps.size(); ++i) {
    if (!(timeline.timestamps[i] < timeline.timestamps[i + 1])) {
      throw Error(ErrorCode::non_monotone_timestamps,
                  "clip '" + clip_id + "' at frame " + std::to_string(i));
    }
  }
  if (timeline.class_names.empty()) {
    throw Error(ErrorCode::inconsistent_classes,
                "clip '" + clip_id + "' has no classes");
  }
  std::set<std::string> seen;
  for (const auto& name : timeline.class_names) {
    if (name.empty()) {
      throw Error(ErrorCode::inconsistent_classes,
                  "clip '" + clip_id + "' has an empty class name");
    }
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::inconsistent_classes,
                  "clip '" + clip_id + "' repeats class '" + name + "'");
    }
  }
  const std::size_t frames = timeline.frame_count();
  if (timeline.scores.size() != timeline.class_names.size()) {
    throw Error(ErrorCode::inconsistent_classes,
                "clip '" + clip_id + "' score columns do not match classes");
  }
  for (std::size_t k = 0; k < timeline.scores.size(); ++k) {
    if (timeline.scores[k].size() != frames) {
      throw Error(ErrorCode::non_finite_score,
                  "clip '" + clip_id + "' column '" + timeline.class_names[k] +
                      "' has the wrong length");
    }
    for (std::size_t i = 0; i < frames; ++i) {
      if (!std::isfinite(timeline.scores[k][i])) {
        throw Error(ErrorCode::non_finite_score,
                    "clip '" + clip_id + "' class '" + timeline.class_names[k] +
                        "' frame " + std::to_string(i));
      }
    }
  }
}

std::string event_text(const Event& event) {
  std::ostringstream out;
  out << "(" << event.onset << ", " << event.offset << ", '" << event.label
      << "')";
  return out.str();
}

void check_clip(const Clip& clip, const std::set<std::string>& class_set) {
  check_timeline(clip.id, clip.timeline);
  if (clip.duration < clip.timeline.timestamps.back()) {
    throw Error(ErrorCode::event_out_of_bounds,
                "clip '" + clip.id + "' duration " +
                    std::to_string(clip.duration) +
                    " is shorter than its scored range");
  }
  for (const auto& event : clip.events) {
    if (event.label.empty() || class_set.count(event.label) == 0) {
      throw Error(ErrorCode::unknown_label,
                  "clip '" + clip.id + "' event " + event_text(event));
    }
    if (!(event.onset < event.offset)) {
      throw Error(ErrorCode::zero_length_event,
                  "clip '" + clip.id + "' event " + event_text(event));
    }
    if (event.onset < 0.0 || event.offset > clip.duration) {
      throw Error(ErrorCode::event_out_of_bounds,
                  "clip '" + clip.id + "' event " + event_text(event) +
                      " exceeds duration " + std::to_string(clip.duration));
    }
  }
}

}  // namespace

Dataset validate_dataset(const std::map<std::string, ScoreTimeline>& scores,
                         const std::map<std::string, EventList>& ground_truth,
                         const std::map<std::string, double>& durations) {
  for (const auto& [id, events] : ground_truth) {
    if (scores.count(id) == 0) {
      throw Error(ErrorCode::missing_clip,
                  "clip '" + id + "' has ground truth but no scores");
    }
  }
  for (const auto& [id, duration] : durations) {
    if (scores.count(id) == 0) {
      throw Error(ErrorCode::missing_clip,
                  "clip '" + id + "' has a duration but no scores");
    }
  }

  Dataset dataset;
  dataset.clips.reserve(scores.size());
  for (const auto& [id, timeline] : scores) {
    auto duration_it = durations.find(id);
    if (duration_it == durations.end()) {
      throw Error(ErrorCode::missing_clip, "clip '" + id + "' has no duration");
    }
    Clip clip;
    clip.id = id;
    clip.timeline = timeline;
    auto gt_it = ground_truth.find(id);
    if (gt_it != ground_truth.end()) clip.events = gt_it->second;
    clip.duration = duration_it->second;
    dataset.clips.push_back(std::move(clip));
  }

  if (!dataset.clips.empty()) {
    std::set<std::string> class_set(
        dataset.clips.front().timeline.class_names.begin(),
        dataset.clips.front().timeline.class_names.end());
    dataset.class_names.assign(class_set.begin(), class_set.end());
  }
  validate_dataset(dataset);
  return dataset;
}

void validate_dataset(const Dataset& dataset) {
  std::set<std::string> class_set(dataset.class_names.begin(),
                                  dataset.class_names.end());
  for (const auto& clip : dataset.clips) {
    std::set<std::string> clip_classes(clip.timeline.class_names.begin(),
                                       clip.timeline.class_names.end());
    if (clip_classes != class_set) {
      throw Error(ErrorCode::inconsistent_classes,
                  "clip '" + clip.id + "' has a different class set");
    }
    check_clip(clip, class_set);
  }
}

}  // namespace sedcurves
