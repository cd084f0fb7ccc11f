#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sedcurves/errors.hpp"
#include "sedcurves/io.hpp"

namespace sedcurves {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find('\t', start);
    if (end == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

double parse_number(const std::string& cell, const std::string& context) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw Error(ErrorCode::bad_row,
                "cannot parse number '" + cell + "' in " + context);
  }
  return value;
}

std::string clip_id_of(const std::string& filename) {
  const auto dot = filename.rfind('.');
  if (dot == std::string::npos || dot == 0) return filename;
  return filename.substr(0, dot);
}

bool all_empty_after(const std::vector<std::string>& cells, std::size_t from) {
  for (std::size_t i = from; i < cells.size(); ++i) {
    if (!cells[i].empty()) return false;
  }
  return true;
}

std::string row_context(std::size_t row) {
  return "row " + std::to_string(row);
}

}  // namespace

ScoreTimeline parse_score_file(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::bad_header, "score file is empty");
  }
  const auto header = split_tabs(lines[0]);
  if (header.size() < 3 || header[0] != "onset" || header[1] != "offset") {
    throw Error(ErrorCode::bad_header,
                "score header must be onset, offset, then class names");
  }
  ScoreTimeline timeline;
  timeline.class_names.assign(header.begin() + 2, header.end());
  for (std::size_t i = 0; i < timeline.class_names.size(); ++i) {
    if (timeline.class_names[i].empty()) {
      throw Error(ErrorCode::bad_header, "empty class name in score header");
    }
    for (std::size_t j = i + 1; j < timeline.class_names.size(); ++j) {
      if (timeline.class_names[i] == timeline.class_names[j]) {
        throw Error(ErrorCode::bad_header,
                    "duplicate class '" + timeline.class_names[i] + "'");
      }
    }
  }

  const std::size_t k = timeline.class_names.size();
  timeline.scores.resize(k);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto cells = split_tabs(lines[row]);
    if (cells.size() != 2 + k) {
      throw Error(ErrorCode::bad_row,
                  row_context(row) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(2 + k));
    }
    const double onset = parse_number(cells[0], row_context(row));
    const double offset = parse_number(cells[1], row_context(row));
    if (row == 1) {
      timeline.timestamps.push_back(onset);
    } else if (onset != timeline.timestamps.back()) {
      throw Error(ErrorCode::non_contiguous_rows,
                  row_context(row) + " starts at " + cells[0] +
                      ", previous row ended elsewhere");
    }
    if (!(offset > onset)) {
      throw Error(ErrorCode::non_monotone_timestamps,
                  row_context(row) + " has offset <= onset");
    }
    timeline.timestamps.push_back(offset);
    for (std::size_t c = 0; c < k; ++c) {
      const double score = parse_number(cells[2 + c], row_context(row));
      if (!std::isfinite(score)) {
        throw Error(ErrorCode::non_finite_score,
                    row_context(row) + " class '" + timeline.class_names[c] +
                        "' score is not finite");
      }
      timeline.scores[c].push_back(score);
    }
  }
  return timeline;
}

std::map<std::string, EventList> parse_ground_truth(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::bad_header, "ground-truth file is empty");
  }
  const auto header = split_tabs(lines[0]);
  const std::vector<std::string> expected = {"filename", "onset", "offset",
                                             "event_label"};
  if (header != expected) {
    throw Error(ErrorCode::bad_header,
                "ground-truth header must be filename, onset, offset, "
                "event_label");
  }

  std::map<std::string, EventList> out;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto cells = split_tabs(lines[row]);
    if (cells[0].empty()) {
      throw Error(ErrorCode::bad_row, row_context(row) + " has no filename");
    }
    const std::string clip = clip_id_of(cells[0]);
    if (all_empty_after(cells, 1)) {
      out[clip];
      continue;
    }
    if (cells.size() != 4) {
      throw Error(ErrorCode::bad_row,
                  row_context(row) + " has " + std::to_string(cells.size()) +
                      " cells, expected 4");
    }
    Event event;
    event.onset = parse_number(cells[1], row_context(row));
    event.offset = parse_number(cells[2], row_context(row));
    event.label = cells[3];
    if (event.onset < 0.0) {
      throw Error(ErrorCode::negative_onset,
                  row_context(row) + " of clip '" + clip + "'");
    }
    if (!(event.offset > event.onset)) {
      throw Error(ErrorCode::offset_not_after_onset,
                  row_context(row) + " of clip '" + clip + "'");
    }
    out[clip].push_back(event);
  }
  return out;
}

std::map<std::string, double> parse_durations(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::bad_header, "duration file is empty");
  }
  const auto header = split_tabs(lines[0]);
  if (header != std::vector<std::string>{"filename", "duration"}) {
    throw Error(ErrorCode::bad_header,
                "duration header must be filename, duration");
  }

  std::map<std::string, double> out;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto cells = split_tabs(lines[row]);
    if (cells.size() != 2 || cells[0].empty()) {
      throw Error(ErrorCode::bad_row,
                  row_context(row) + " must be filename and duration");
    }
    const std::string clip = clip_id_of(cells[0]);
    const double value = parse_number(cells[1], row_context(row));
    if (!(value > 0.0)) {
      throw Error(ErrorCode::non_positive_duration,
                  "clip '" + clip + "' has duration " + cells[1]);
    }
    if (!out.emplace(clip, value).second) {
      throw Error(ErrorCode::duplicate_clip,
                  "clip '" + clip + "' listed twice");
    }
  }
  return out;
}

std::string format_exact(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::string(buf);
}

std::string write_score_file(const ScoreTimeline& timeline) {
  std::string out = "onset\toffset";
  for (const auto& name : timeline.class_names) {
    out += '\t';
    out += name;
  }
  out += '\n';
  for (std::size_t i = 0; i < timeline.frame_count(); ++i) {
    out += format_exact(timeline.timestamps[i]);
    out += '\t';
    out += format_exact(timeline.timestamps[i + 1]);
    for (const auto& column : timeline.scores) {
      out += '\t';
      out += format_exact(column[i]);
    }
    out += '\n';
  }
  return out;
}

std::string write_ground_truth(
    const std::map<std::string, EventList>& ground_truth) {
  std::string out = "filename\tonset\toffset\tevent_label\n";
  for (const auto& [clip, events] : ground_truth) {
    if (events.empty()) {
      out += clip + ".wav\t\t\t\n";
      continue;
    }
    for (const auto& event : events) {
      out += clip + ".wav\t" + format_exact(event.onset) + '\t' +
             format_exact(event.offset) + '\t' + event.label + '\n';
    }
  }
  return out;
}

std::string write_durations(const std::map<std::string, double>& durations) {
  std::string out = "filename\tduration\n";
  for (const auto& [clip, value] : durations) {
    out += clip + ".wav\t" + format_exact(value) + '\n';
  }
  return out;
}

namespace {

std::string json_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::string json_array(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(values[i]);
  }
  out += "]";
  return out;
}

void check_report(const CurveReport& report) {
  for (std::size_t i = 1; i < report.x.size(); ++i) {
    if (report.x[i] < report.x[i - 1]) {
      throw Error(ErrorCode::unsorted_input,
                  "report points must ascend along " + report.x_name);
    }
  }
  if (report.series.size() != report.series_names.size()) {
    throw Error(ErrorCode::invalid_params,
                "each report series needs exactly one name");
  }
  for (const auto& series : report.series) {
    if (series.size() != report.x.size()) {
      throw Error(ErrorCode::invalid_params,
                  "report series length differs from the x column");
    }
  }
}

std::string write_csv(const CurveReport& report) {
  std::string out;
  out += "# kind=" + report.kind + '\n';
  for (const auto& [key, value] : report.metadata) {
    out += "# " + key + '=' + value + '\n';
  }
  for (const auto& [key, value] : report.scalars) {
    out += "# " + key + '=' + format_number(value) + '\n';
  }
  out += report.x_name;
  for (const auto& name : report.series_names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t i = 0; i < report.x.size(); ++i) {
    out += format_number(report.x[i]);
    for (const auto& series : report.series) {
      out += ',';
      out += format_number(series[i]);
    }
    out += '\n';
  }
  return out;
}

std::string write_json(const CurveReport& report) {
  std::string out = "{\n";
  out += "  \"kind\": \"" + json_escape(report.kind) + "\",\n";
  out += "  \"metadata\": {";
  for (std::size_t i = 0; i < report.metadata.size(); ++i) {
    if (i > 0) out += ',';
    out += "\n    \"" + json_escape(report.metadata[i].first) + "\": \"" +
           json_escape(report.metadata[i].second) + '"';
  }
  out += report.metadata.empty() ? "},\n" : "\n  },\n";
  for (const auto& [key, value] : report.scalars) {
    out += "  \"" + json_escape(key) + "\": " + format_number(value) + ",\n";
  }
  out += "  \"" + json_escape(report.x_name) + "\": " + json_array(report.x);
  for (std::size_t s = 0; s < report.series.size(); ++s) {
    out += ",\n  \"" + json_escape(report.series_names[s]) +
           "\": " + json_array(report.series[s]);
  }
  out += "\n}\n";
  return out;
}

}  // namespace

std::string write_report(const CurveReport& report, ReportFormat format) {
  check_report(report);
  return format == ReportFormat::csv ? write_csv(report) : write_json(report);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io_failure, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Re-raise a parse error with the offending file prepended; the code is kept
// and the original code name prefix dropped from the message to avoid
// repeating it.
[[noreturn]] void rethrow_with_file(const Error& error,
                                    const std::string& file) {
  const std::string what = error.what();
  const auto pos = what.find(": ");
  const std::string detail =
      pos == std::string::npos ? what : what.substr(pos + 2);
  throw Error(error.code(), file + ": " + detail);
}

}  // namespace

Dataset load_dataset(const std::string& scores_dir,
                     const std::string& ground_truth_path,
                     const std::string& durations_path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(scores_dir, ec)) {
    throw Error(ErrorCode::io_failure,
                "'" + scores_dir + "' is not a readable directory");
  }

  std::map<std::string, ScoreTimeline> scores;
  for (const auto& entry : fs::directory_iterator(scores_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".tsv") {
      continue;
    }
    const std::string clip = entry.path().stem().string();
    try {
      scores[clip] = parse_score_file(read_file(entry.path()));
    } catch (const Error& error) {
      rethrow_with_file(error, entry.path().filename().string());
    }
  }

  std::map<std::string, EventList> ground_truth;
  try {
    ground_truth = parse_ground_truth(read_file(ground_truth_path));
  } catch (const Error& error) {
    rethrow_with_file(error, ground_truth_path);
  }

  std::map<std::string, double> durations;
  try {
    durations = parse_durations(read_file(durations_path));
  } catch (const Error& error) {
    rethrow_with_file(error, durations_path);
  }

  return validate_dataset(scores, ground_truth, durations);
}

namespace {

struct Fnv1a {
  std::uint64_t state = 1469598103934665603ull;

  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state ^= p[i];
      state *= 1099511628211ull;
    }
  }

  void number(double value) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &value, sizeof bits);
    bytes(&bits, sizeof bits);
  }

  void text(const std::string& value) {
    const std::uint64_t size = value.size();
    bytes(&size, sizeof size);
    bytes(value.data(), value.size());
  }
};

}  // namespace

std::string dataset_fingerprint(const Dataset& dataset) {
  Fnv1a hash;
  for (const auto& clip : dataset.clips) {
    hash.text(clip.id);
    hash.number(clip.duration);
    for (double t : clip.timeline.timestamps) hash.number(t);
    for (const auto& name : clip.timeline.class_names) hash.text(name);
    for (const auto& column : clip.timeline.scores) {
      for (double score : column) hash.number(score);
    }
    for (const auto& event : clip.events) {
      hash.number(event.onset);
      hash.number(event.offset);
      hash.text(event.label);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash.state));
  return std::string(buf);
}

}  // namespace sedcurves
