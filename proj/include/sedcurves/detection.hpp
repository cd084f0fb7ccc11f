#pragma once

#include <string>
#include <vector>

#include "sedcurves/types.hpp"

namespace sedcurves {

/// Maximal runs of consecutive frames with score > tau, one Event per run,
/// sorted by onset and non-overlapping.
EventList detect_events(const ScoreTimeline& timeline,
                        const std::string& class_name, double tau);

/// Centered sliding median per class column with replicate padding at both
/// ends. Timestamps are unchanged; width must be an odd positive frame count.
ScoreTimeline median_filter(const ScoreTimeline& timeline, int width_frames);

/// One segment's worth of single-instance statistics.
struct SegmentPair {
  double score = 0.0;  // max frame score overlapping the segment
  bool target = false; // some same-class ground truth overlaps the segment
};

/// Fixed-length segmentation of [0, duration); the last segment may be short.
/// Returns one SegmentPair list per class column of the timeline.
std::vector<std::vector<SegmentPair>> segmentize(const ScoreTimeline& timeline,
                                                 const EventList& ground_truth,
                                                 double segment_length,
                                                 double duration);

}  // namespace sedcurves
