#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sedcurves/types.hpp"

namespace sedcurves {

/// Precision, recall, and F1 per threshold interval of a StatisticsCurve,
/// including the no-positives row. Each interval is named by a representative
/// threshold: the top interval by the highest score, interior intervals by
/// the midpoint of their bounding scores, and the bottom interval by the
/// lowest score minus half the smallest score gap.
struct PrCurve {
  std::string class_name;
  std::vector<double> thresholds;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;

  std::size_t size() const { return thresholds.size(); }
};

PrCurve pr_f1_curve(const StatisticsCurve& curve);

struct BestThreshold {
  double tau = 0.0;
  double f1 = 0.0;
};

/// Interval with the highest F1; ties go to the highest threshold interval.
BestThreshold best_threshold(const PrCurve& curve);

struct StepPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Area of the left-step function through `points`, truncated at x_max.
double auc(const std::vector<StepPoint>& points, double x_max);

struct RocPoint {
  double efpr = 0.0;
  double tpr = 0.0;
};

struct ClassRoc {
  std::string class_name;
  std::vector<RocPoint> points;    // ascending efpr, one point per efpr value
  std::vector<RocPoint> envelope;  // running max of tpr over the points
};

/// eFPR of one operating point: false positives per unit of time plus the
/// alpha_ct-weighted average cross-trigger rate against the other classes.
double efpr_value(std::int64_t n_fp, const std::vector<std::int64_t>& n_ct,
                  double t_total, const std::vector<double>& t_gt_other,
                  const PsdsParams& params);

/// Assembles a ClassRoc from raw operating points: adds the trivial (0, 0)
/// point, sorts by efpr, keeps the best tpr per efpr value, and takes the
/// running max as the envelope.
ClassRoc make_class_roc(std::string class_name, std::vector<RocPoint> points);

ClassRoc class_roc(const StatisticsCurve& curve, const PsdsParams& params);

/// Summary curve over all classes on the union grid of their envelope
/// breakpoints: per-class envelope samples, their mean and population
/// standard deviation, and etpr = mu - alpha_st * sigma.
struct PsdRoc {
  std::vector<double> efpr;  // ascending, deduplicated, includes 0 and efpr_max
  std::vector<std::string> class_names;
  std::vector<std::vector<double>> tpr;  // [class][grid point]
  std::vector<double> mu;
  std::vector<double> sigma;
  std::vector<double> etpr;
  double psds = 0.0;
};

PsdRoc psd_roc(const std::vector<ClassRoc>& class_rocs,
               const PsdsParams& params);

/// Normalized area under the etpr step curve over [0, efpr_max].
double psds(const PsdRoc& roc, const PsdsParams& params);

struct PsdsResult {
  PsdRoc roc;
  std::vector<std::string> excluded_classes;  // no ground truth, left out
};

/// Full pipeline from per-class statistics curves. Classes without ground
/// truth cannot contribute a TPR and are excluded; their names are reported
/// so callers can warn.
PsdsResult compute_psds(const std::map<std::string, StatisticsCurve>& curves,
                        const PsdsParams& params);

/// Segment-mode ROC: FPR = N_FP / N_GN against TPR = N_TP / N_GP, with the
/// area under the envelope over FPR in [0, 1].
struct SegmentRoc {
  std::string class_name;
  std::vector<RocPoint> points;  // efpr field holds the FPR
  std::vector<RocPoint> envelope;
  double auc = 0.0;
};

SegmentRoc segment_roc(const StatisticsCurve& curve);

}  // namespace sedcurves
