#include <algorithm>
#include <cmath>

#include "sedcurves/detection.hpp"
#include "sedcurves/oracle.hpp"

namespace sedcurves {

namespace {

EventList events_of_class(const EventList& events, const std::string& label) {
  EventList out;
  for (const auto& event : events) {
    if (event.label == label) out.push_back(event);
  }
  return out;
}

void count_collar(const Clip& clip, const std::string& class_name,
                  double tau, const CollarParams& params,
                  ThresholdCounts& counts) {
  const auto detections = detect_events(clip.timeline, class_name, tau);
  auto gts = events_of_class(clip.events, class_name);
  std::stable_sort(gts.begin(), gts.end(), [](const Event& a, const Event& b) {
    if (a.onset != b.onset) return a.onset < b.onset;
    return a.offset < b.offset;
  });

  std::vector<char> used(detections.size(), 0);
  std::int64_t matched = 0;
  for (const auto& gt : gts) {
    const double off_collar = offset_collar(params, gt.length());
    for (std::size_t i = 0; i < detections.size(); ++i) {
      if (used[i]) continue;
      if (std::abs(detections[i].onset - gt.onset) > params.onset_collar)
        continue;
      if (std::abs(detections[i].offset - gt.offset) > off_collar) continue;
      used[i] = 1;
      ++matched;
      break;
    }
  }
  counts.n_tp += matched;
  counts.n_fp += static_cast<std::int64_t>(detections.size()) - matched;
}

void count_intersection(const Clip& clip, const std::string& class_name,
                        double tau, const IntersectionParams& params,
                        const std::vector<std::string>& other_classes,
                        ThresholdCounts& counts) {
  const auto detections = detect_events(clip.timeline, class_name, tau);
  const auto gts = events_of_class(clip.events, class_name);
  std::vector<EventList> others;
  others.reserve(other_classes.size());
  for (const auto& name : other_classes) {
    others.push_back(events_of_class(clip.events, name));
  }

  std::vector<char> relevant(detections.size(), 0);
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const auto& det = detections[i];
    const double len = det.length();
    double i_same = 0.0;
    for (const auto& gt : gts) {
      i_same += overlap_length(det.onset, det.offset, gt.onset, gt.offset);
    }
    if (ratio_at_least(i_same, len, params.rho_dtc)) {
      relevant[i] = 1;
      continue;
    }
    ++counts.n_fp;
    for (std::size_t j = 0; j < others.size(); ++j) {
      double i_other = 0.0;
      for (const auto& gt : others[j]) {
        i_other += overlap_length(det.onset, det.offset, gt.onset, gt.offset);
      }
      if (ratio_at_least(i_other, len, params.rho_cttc)) ++counts.n_ct[j];
    }
  }

  for (const auto& gt : gts) {
    double covered = 0.0;
    for (std::size_t i = 0; i < detections.size(); ++i) {
      if (!relevant[i]) continue;
      covered += overlap_length(detections[i].onset, detections[i].offset,
                                gt.onset, gt.offset);
    }
    if (ratio_at_least(covered, gt.length(), params.rho_gtc)) ++counts.n_tp;
  }
}

void count_segments(const Clip& clip, const std::string& class_name,
                    double tau, double segment_length,
                    ThresholdCounts& counts) {
  const auto column = clip.timeline.class_index(class_name);
  if (!column) {
    throw Error(ErrorCode::unknown_class, "class '" + class_name + "'");
  }
  const auto pairs =
      segmentize(clip.timeline, clip.events, segment_length, clip.duration);
  for (const auto& pair : pairs[*column]) {
    if (pair.score > tau) {
      if (pair.target) {
        ++counts.n_tp;
      } else {
        ++counts.n_fp;
      }
    }
  }
}

}  // namespace

ThresholdCounts evaluate_at_threshold(const Dataset& dataset,
                                      const std::string& class_name,
                                      double tau, const EvalParams& params) {
  std::vector<std::string> other_classes;
  if (params.mode == EvalMode::intersection) {
    for (const auto& name : dataset.class_names) {
      if (name != class_name) other_classes.push_back(name);
    }
  }
  ThresholdCounts counts;
  counts.n_ct.assign(other_classes.size(), 0);
  for (const auto& clip : dataset.clips) {
    switch (params.mode) {
      case EvalMode::collar:
        count_collar(clip, class_name, tau, params.collar, counts);
        break;
      case EvalMode::intersection:
        count_intersection(clip, class_name, tau, params.intersection,
                           other_classes, counts);
        break;
      case EvalMode::segment:
        count_segments(clip, class_name, tau, params.segment_length, counts);
        break;
    }
  }
  return counts;
}

ApproxPsds approx_psds(const Dataset& dataset,
                       const std::vector<double>& thresholds,
                       const EvalParams& eval_params,
                       const PsdsParams& psds_params) {
  if (thresholds.empty()) {
    throw Error(ErrorCode::empty_threshold_list,
                "at least one threshold is required");
  }
  const auto& classes = dataset.class_names;
  const double t_total = dataset.total_duration();

  // Same totals, summed in the same order, as the sweep engine attaches to
  // its curves, so both paths divide identical numbers.
  std::vector<std::int64_t> n_gp(classes.size(), 0);
  std::vector<double> gt_seconds(classes.size(), 0.0);
  auto class_slot = [&](const std::string& label) {
    return static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), label) -
        classes.begin());
  };
  for (const auto& clip : dataset.clips) {
    for (const auto& event : clip.events) {
      const std::size_t c = class_slot(event.label);
      ++n_gp[c];
      gt_seconds[c] += event.length();
    }
  }
  if (eval_params.mode == EvalMode::segment) {
    std::fill(n_gp.begin(), n_gp.end(), 0);
    for (const auto& clip : dataset.clips) {
      const auto pairs = segmentize(clip.timeline, clip.events,
                                    eval_params.segment_length, clip.duration);
      for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto column = clip.timeline.class_index(classes[c]);
        for (const auto& pair : pairs[*column]) {
          if (pair.target) ++n_gp[c];
        }
      }
    }
  }

  ApproxPsds result;
  std::vector<ClassRoc> rocs;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (n_gp[c] == 0) {
      result.excluded_classes.push_back(classes[c]);
      continue;
    }
    std::vector<double> t_gt_other;
    if (eval_params.mode == EvalMode::intersection) {
      for (std::size_t k = 0; k < classes.size(); ++k) {
        if (k != c) t_gt_other.push_back(gt_seconds[k]);
      }
    }
    std::vector<RocPoint> points;
    points.reserve(thresholds.size());
    for (double tau : thresholds) {
      const auto counts = evaluate_at_threshold(dataset, classes[c], tau,
                                                eval_params);
      RocPoint point;
      point.efpr = efpr_value(counts.n_fp, counts.n_ct, t_total, t_gt_other,
                              psds_params);
      point.tpr = static_cast<double>(counts.n_tp) /
                  static_cast<double>(n_gp[c]);
      points.push_back(point);
    }
    rocs.push_back(make_class_roc(classes[c], std::move(points)));
  }
  if (rocs.empty()) {
    throw Error(ErrorCode::no_classes, "no class has ground-truth events");
  }
  result.roc = psd_roc(rocs, psds_params);
  result.roc.psds = psds(result.roc, psds_params);
  result.psds = result.roc.psds;
  return result;
}

}  // namespace sedcurves
