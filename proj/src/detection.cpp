#include "sedcurves/detection.hpp"

#include <algorithm>
#include <cstddef>

namespace sedcurves {

namespace {

std::size_t require_class(const ScoreTimeline& timeline,
                          const std::string& class_name) {
  auto index = timeline.class_index(class_name);
  if (!index) {
    throw Error(ErrorCode::unknown_class, "class '" + class_name + "'");
  }
  return *index;
}

}  // namespace

EventList detect_events(const ScoreTimeline& timeline,
                        const std::string& class_name, double tau) {
  const std::size_t column = require_class(timeline, class_name);
  const auto& scores = timeline.scores[column];
  EventList events;
  std::size_t i = 0;
  const std::size_t frames = timeline.frame_count();
  while (i < frames) {
    if (scores[i] > tau) {
      std::size_t j = i;
      while (j + 1 < frames && scores[j + 1] > tau) ++j;
      events.push_back(Event{timeline.timestamps[i], timeline.timestamps[j + 1],
                             class_name});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return events;
}

ScoreTimeline median_filter(const ScoreTimeline& timeline, int width_frames) {
  if (width_frames <= 0) {
    throw Error(ErrorCode::non_positive_width,
                "width " + std::to_string(width_frames));
  }
  if (width_frames % 2 == 0) {
    throw Error(ErrorCode::even_width, "width " + std::to_string(width_frames));
  }
  if (width_frames == 1) return timeline;

  ScoreTimeline out = timeline;
  const std::ptrdiff_t frames =
      static_cast<std::ptrdiff_t>(timeline.frame_count());
  const std::ptrdiff_t half = width_frames / 2;
  std::vector<double> window(static_cast<std::size_t>(width_frames));
  for (std::size_t column = 0; column < timeline.scores.size(); ++column) {
    const auto& in = timeline.scores[column];
    auto& filtered = out.scores[column];
    for (std::ptrdiff_t i = 0; i < frames; ++i) {
      for (std::ptrdiff_t d = -half; d <= half; ++d) {
        const std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(i + d, 0, frames - 1);
        window[static_cast<std::size_t>(d + half)] = in[static_cast<std::size_t>(j)];
      }
      auto mid = window.begin() + half;
      std::nth_element(window.begin(), mid, window.end());
      filtered[static_cast<std::size_t>(i)] = *mid;
    }
  }
  return out;
}

std::vector<std::vector<SegmentPair>> segmentize(const ScoreTimeline& timeline,
                                                 const EventList& ground_truth,
                                                 double segment_length,
                                                 double duration) {
  if (!(segment_length > 0.0)) {
    throw Error(ErrorCode::non_positive_segment_length,
                "segment length " + std::to_string(segment_length));
  }
  std::vector<double> bounds;
  bounds.push_back(0.0);
  for (std::size_t k = 1;; ++k) {
    const double edge = static_cast<double>(k) * segment_length;
    if (edge >= duration) {
      bounds.push_back(duration);
      break;
    }
    bounds.push_back(edge);
  }
  const std::size_t segments = bounds.size() - 1;
  const std::size_t frames = timeline.frame_count();

  std::vector<std::vector<SegmentPair>> out(timeline.class_names.size());
  for (auto& column : out) column.resize(segments);

  std::size_t first_frame = 0;
  for (std::size_t s = 0; s < segments; ++s) {
    const double seg_on = bounds[s];
    const double seg_off = bounds[s + 1];
    while (first_frame < frames && timeline.timestamps[first_frame + 1] <= seg_on) {
      ++first_frame;
    }
    bool any = false;
    for (std::size_t i = first_frame; i < frames && timeline.timestamps[i] < seg_off;
         ++i) {
      for (std::size_t k = 0; k < out.size(); ++k) {
        const double value = timeline.scores[k][i];
        if (!any || value > out[k][s].score) out[k][s].score = value;
      }
      any = true;
    }
  }

  for (const auto& event : ground_truth) {
    auto index = timeline.class_index(event.label);
    if (!index) {
      throw Error(ErrorCode::unknown_class, "label '" + event.label + "'");
    }
    auto& column = out[*index];
    for (std::size_t s = 0; s < segments; ++s) {
      if (event.onset < bounds[s + 1] && event.offset > bounds[s]) {
        column[s].target = true;
      }
    }
  }
  return out;
}

}  // namespace sedcurves
