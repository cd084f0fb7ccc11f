#include <algorithm>
#include <cmath>
#include <limits>

#include "sedcurves/curves.hpp"

namespace sedcurves {

PrCurve pr_f1_curve(const StatisticsCurve& curve) {
  if (curve.n_gp <= 0) {
    throw Error(ErrorCode::no_ground_truth,
                "class '" + curve.class_name + "' has no positive events");
  }
  const std::size_t rows = curve.size();
  const auto& values = curve.thresholds;

  PrCurve out;
  out.class_name = curve.class_name;
  out.thresholds.resize(rows);
  if (values.empty()) {
    out.thresholds[0] = 0.0;
  } else {
    double gap = 1.0;
    if (values.size() > 1) {
      gap = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < values.size(); ++k) {
        gap = std::min(gap, values[k - 1] - values[k]);
      }
    }
    out.thresholds[0] = values.front();
    for (std::size_t k = 1; k < values.size(); ++k) {
      out.thresholds[k] = 0.5 * (values[k - 1] + values[k]);
    }
    out.thresholds[rows - 1] = values.back() - 0.5 * gap;
  }

  out.precision.resize(rows);
  out.recall.resize(rows);
  out.f1.resize(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    const auto tp = static_cast<double>(curve.n_tp[k]);
    const auto dp = static_cast<double>(curve.n_tp[k] + curve.n_fp[k]);
    const double p = dp > 0.0 ? tp / dp : 1.0;
    const double r = tp / static_cast<double>(curve.n_gp);
    out.precision[k] = p;
    out.recall[k] = r;
    out.f1[k] = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  return out;
}

BestThreshold best_threshold(const PrCurve& curve) {
  if (curve.size() == 0) {
    throw Error(ErrorCode::empty_curve,
                "class '" + curve.class_name + "' has no intervals");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (curve.f1[k] > curve.f1[best]) best = k;
  }
  return BestThreshold{curve.thresholds[best], curve.f1[best]};
}

double auc(const std::vector<StepPoint>& points, double x_max) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].x < points[i - 1].x) {
      throw Error(ErrorCode::unsorted_input,
                  "x values decrease at index " + std::to_string(i));
    }
  }
  double area = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x0 = points[i].x;
    if (x0 >= x_max) break;
    const double x1 =
        i + 1 < points.size() ? std::min(points[i + 1].x, x_max) : x_max;
    area += points[i].y * (x1 - x0);
  }
  return area;
}

double efpr_value(std::int64_t n_fp, const std::vector<std::int64_t>& n_ct,
                  double t_total, const std::vector<double>& t_gt_other,
                  const PsdsParams& params) {
  if (!(t_total > 0.0)) {
    throw Error(ErrorCode::invalid_params, "dataset duration must be positive");
  }
  const double unit = time_unit_seconds(params.unit_of_time);
  double efpr = static_cast<double>(n_fp) / (t_total / unit);
  if (params.alpha_ct > 0.0 && !t_gt_other.empty()) {
    double ct_rate = 0.0;
    for (std::size_t j = 0; j < t_gt_other.size(); ++j) {
      if (!(t_gt_other[j] > 0.0)) {
        throw Error(ErrorCode::zero_cross_duration,
                    "cross-trigger class " + std::to_string(j) +
                        " has no ground-truth duration");
      }
      ct_rate += static_cast<double>(n_ct[j]) / (t_gt_other[j] / unit);
    }
    efpr += params.alpha_ct * ct_rate / static_cast<double>(t_gt_other.size());
  }
  return efpr;
}

ClassRoc make_class_roc(std::string class_name, std::vector<RocPoint> points) {
  points.push_back(RocPoint{0.0, 0.0});
  std::sort(points.begin(), points.end(),
            [](const RocPoint& a, const RocPoint& b) {
              if (a.efpr != b.efpr) return a.efpr < b.efpr;
              return a.tpr < b.tpr;
            });

  ClassRoc roc;
  roc.class_name = std::move(class_name);
  for (const auto& point : points) {
    if (!roc.points.empty() && roc.points.back().efpr == point.efpr) {
      roc.points.back().tpr = point.tpr;
    } else {
      roc.points.push_back(point);
    }
  }
  roc.envelope = roc.points;
  double best = 0.0;
  for (auto& point : roc.envelope) {
    best = std::max(best, point.tpr);
    point.tpr = best;
  }
  return roc;
}

ClassRoc class_roc(const StatisticsCurve& curve, const PsdsParams& params) {
  if (curve.n_gp <= 0) {
    throw Error(ErrorCode::no_ground_truth,
                "class '" + curve.class_name + "' has no positive events");
  }
  std::vector<RocPoint> points;
  points.reserve(curve.size());
  std::vector<std::int64_t> ct_row(curve.other_classes.size(), 0);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    for (std::size_t j = 0; j < ct_row.size(); ++j) ct_row[j] = curve.n_ct[j][k];
    RocPoint point;
    point.efpr = efpr_value(curve.n_fp[k], ct_row, curve.t_total,
                            curve.t_gt_other, params);
    point.tpr = static_cast<double>(curve.n_tp[k]) /
                static_cast<double>(curve.n_gp);
    points.push_back(point);
  }
  return make_class_roc(curve.class_name, std::move(points));
}

PsdRoc psd_roc(const std::vector<ClassRoc>& class_rocs,
               const PsdsParams& params) {
  if (class_rocs.empty()) {
    throw Error(ErrorCode::no_classes, "no classes to summarize");
  }
  PsdRoc roc;
  roc.efpr.push_back(0.0);
  roc.efpr.push_back(params.efpr_max);
  for (const auto& cls : class_rocs) {
    for (const auto& point : cls.envelope) roc.efpr.push_back(point.efpr);
  }
  std::sort(roc.efpr.begin(), roc.efpr.end());
  roc.efpr.erase(std::unique(roc.efpr.begin(), roc.efpr.end()),
                 roc.efpr.end());

  const std::size_t grid = roc.efpr.size();
  const auto count = static_cast<double>(class_rocs.size());
  roc.tpr.resize(class_rocs.size());
  for (std::size_t c = 0; c < class_rocs.size(); ++c) {
    roc.class_names.push_back(class_rocs[c].class_name);
    auto& samples = roc.tpr[c];
    samples.resize(grid);
    const auto& envelope = class_rocs[c].envelope;
    std::size_t at = 0;
    double value = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
      while (at < envelope.size() && envelope[at].efpr <= roc.efpr[i]) {
        value = envelope[at].tpr;
        ++at;
      }
      samples[i] = value;
    }
  }

  roc.mu.resize(grid);
  roc.sigma.resize(grid);
  roc.etpr.resize(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    double sum = 0.0;
    for (const auto& samples : roc.tpr) sum += samples[i];
    const double mu = sum / count;
    double variance = 0.0;
    for (const auto& samples : roc.tpr) {
      const double diff = samples[i] - mu;
      variance += diff * diff;
    }
    variance /= count;
    roc.mu[i] = mu;
    roc.sigma[i] = std::sqrt(variance);
    double etpr = mu - params.alpha_st * roc.sigma[i];
    if (params.clip_negative_etpr) etpr = std::max(0.0, etpr);
    roc.etpr[i] = etpr;
  }
  return roc;
}

double psds(const PsdRoc& roc, const PsdsParams& params) {
  if (!(params.efpr_max > 0.0)) {
    throw Error(ErrorCode::invalid_params, "efpr_max must be positive");
  }
  std::vector<StepPoint> points;
  points.reserve(roc.efpr.size());
  for (std::size_t i = 0; i < roc.efpr.size(); ++i) {
    points.push_back(StepPoint{roc.efpr[i], roc.etpr[i]});
  }
  return auc(points, params.efpr_max) / params.efpr_max;
}

PsdsResult compute_psds(const std::map<std::string, StatisticsCurve>& curves,
                        const PsdsParams& params) {
  PsdsResult result;
  std::vector<ClassRoc> rocs;
  for (const auto& [name, curve] : curves) {
    if (curve.n_gp <= 0) {
      result.excluded_classes.push_back(name);
      continue;
    }
    rocs.push_back(class_roc(curve, params));
  }
  if (rocs.empty()) {
    throw Error(ErrorCode::no_classes, "no class has ground-truth events");
  }
  result.roc = psd_roc(rocs, params);
  result.roc.psds = psds(result.roc, params);
  return result;
}

SegmentRoc segment_roc(const StatisticsCurve& curve) {
  if (!curve.has_n_gn) {
    throw Error(ErrorCode::invalid_params,
                "class '" + curve.class_name +
                    "' was not evaluated in segment mode");
  }
  if (curve.n_gp <= 0) {
    throw Error(ErrorCode::no_ground_truth,
                "class '" + curve.class_name + "' has no positive segments");
  }
  if (curve.n_gn <= 0) {
    throw Error(ErrorCode::invalid_params,
                "class '" + curve.class_name + "' has no negative segments");
  }
  std::vector<RocPoint> points;
  points.reserve(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    RocPoint point;
    point.efpr = static_cast<double>(curve.n_fp[k]) /
                 static_cast<double>(curve.n_gn);
    point.tpr = static_cast<double>(curve.n_tp[k]) /
                static_cast<double>(curve.n_gp);
    points.push_back(point);
  }
  auto roc = make_class_roc(curve.class_name, std::move(points));
  SegmentRoc out;
  out.class_name = roc.class_name;
  out.points = std::move(roc.points);
  out.envelope = std::move(roc.envelope);
  std::vector<StepPoint> steps;
  steps.reserve(out.envelope.size());
  for (const auto& point : out.envelope) {
    steps.push_back(StepPoint{point.efpr, point.tpr});
  }
  out.auc = auc(steps, 1.0);
  return out;
}

}  // namespace sedcurves
