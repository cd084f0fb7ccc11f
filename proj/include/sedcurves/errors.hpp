#pragma once

#include <stdexcept>
#include <string>

namespace sedcurves {

enum class ErrorCode {
  // dataset validation
  missing_clip,
  inconsistent_classes,
  unknown_label,
  non_monotone_timestamps,
  non_finite_score,
  event_out_of_bounds,
  zero_length_event,
  // parsing
  bad_header,
  bad_row,
  non_contiguous_rows,
  negative_onset,
  offset_not_after_onset,
  non_positive_duration,
  duplicate_clip,
  // detection / segmentation
  even_width,
  non_positive_width,
  non_positive_segment_length,
  unknown_class,
  // curves and metrics
  no_ground_truth,
  zero_cross_duration,
  no_classes,
  empty_curve,
  unsorted_input,
  index_out_of_range,
  // engine / oracle
  negative_cumulative_count,
  empty_threshold_list,
  // parameter sanity
  invalid_params,
  // filesystem-level problems in the CLI and loaders
  io_failure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sedcurves
