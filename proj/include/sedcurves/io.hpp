#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sedcurves/types.hpp"

namespace sedcurves {

/// Parses one clip's score file: header `onset<TAB>offset<TAB><classes...>`,
/// one row per frame with contiguous timestamps.
ScoreTimeline parse_score_file(const std::string& text);

/// Parses the annotation table, header `filename onset offset event_label`.
/// The clip id is the filename minus its extension. A row whose cells after
/// the filename are all empty registers a clip with no events.
std::map<std::string, EventList> parse_ground_truth(const std::string& text);

/// Parses the duration table, header `filename duration`.
std::map<std::string, double> parse_durations(const std::string& text);

/// Inverse writers. Numbers use the shortest representation that parses back
/// to the identical double, so parse(write(x)) == x holds exactly.
std::string write_score_file(const ScoreTimeline& timeline);
std::string write_ground_truth(
    const std::map<std::string, EventList>& ground_truth);
std::string write_durations(const std::map<std::string, double>& durations);

enum class ReportFormat { csv, json };

/// Serializable curve: one x column plus any number of equally long series,
/// scalar summary values, and an ordered metadata echo of the run config.
struct CurveReport {
  std::string kind;  // pr | roc | psd_roc
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string x_name;
  std::vector<double> x;  // ascending
  std::vector<std::string> series_names;
  std::vector<std::vector<double>> series;  // [series][point]
  std::vector<std::pair<std::string, double>> scalars;
};

/// Deterministic serialization: stable key order, 12 significant digits.
/// Serializing the same report twice yields identical bytes.
std::string write_report(const CurveReport& report, ReportFormat format);

/// Fixed 12-significant-digit formatting used by reports.
std::string format_number(double value);

/// Shortest text that parses back to exactly the same double.
std::string format_exact(double value);

/// Reads `<scores_dir>/*.tsv` (clip id = file stem) plus the two tables and
/// returns the validated dataset.
Dataset load_dataset(const std::string& scores_dir,
                     const std::string& ground_truth_path,
                     const std::string& durations_path);

/// Stable 64-bit content hash of the dataset, as 16 hex digits, for report
/// metadata.
std::string dataset_fingerprint(const Dataset& dataset);

}  // namespace sedcurves
