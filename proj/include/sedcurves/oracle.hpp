#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sedcurves/change_points.hpp"
#include "sedcurves/curves.hpp"
#include "sedcurves/types.hpp"

namespace sedcurves {

struct ThresholdCounts {
  std::int64_t n_tp = 0;
  std::int64_t n_fp = 0;
  std::vector<std::int64_t> n_ct;  // per other class, canonical order
};

/// Brute-force evaluation of one class at one fixed threshold: detections are
/// built explicitly per clip and counted by the literal matching rules. This
/// shares the decision constants with the sweep engine but none of its code,
/// so the two can check each other.
ThresholdCounts evaluate_at_threshold(const Dataset& dataset,
                                      const std::string& class_name,
                                      double tau, const EvalParams& params);

struct ApproxPsds {
  double psds = 0.0;
  PsdRoc roc;
  std::vector<std::string> excluded_classes;
};

/// Grid-based PSDS: evaluates only the listed thresholds and feeds those
/// operating points through the same summary-curve machinery as the exact
/// path. Reproduces the behavior of fixed-grid evaluation for comparisons.
ApproxPsds approx_psds(const Dataset& dataset,
                       const std::vector<double>& thresholds,
                       const EvalParams& eval_params,
                       const PsdsParams& psds_params);

}  // namespace sedcurves
