#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sedcurves/change_points.hpp"
#include "sedcurves/curves.hpp"
#include "sedcurves/detection.hpp"
#include "sedcurves/errors.hpp"
#include "sedcurves/io.hpp"
#include "sedcurves/oracle.hpp"

namespace {

using namespace sedcurves;

struct Options {
  std::string scores_dir;
  std::string gt_path;
  std::string durations_path;
  std::string output;
  std::string mode;  // resolved to a per-command default when empty
  std::string format = "csv";
  std::string unit = "hour";
  std::string grid = "linear:50:0.01:0.99";
  double collar = 0.2;
  double offset_collar_rate = 0.2;
  double dtc = 0.7;
  double gtc = 0.7;
  double cttc = 0.3;
  double alpha_ct = 0.0;
  double alpha_st = 1.0;
  double max_efpr = 100.0;
  double segment_length = 1.0;
  bool clip_negative_etpr = false;
  int median_filter_width = 0;
  int jobs = 1;
};

std::vector<double> parse_grid(const std::string& spec) {
  const auto split = [](const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto end = text.find(sep, start);
      parts.push_back(text.substr(start, end - start));
      if (end == std::string::npos) return parts;
      start = end + 1;
    }
  };
  const auto number = [](const std::string& cell) {
    std::size_t used = 0;
    const double value = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return value;
  };

  if (spec.rfind("linear:", 0) == 0) {
    const auto parts = split(spec.substr(7), ':');
    if (parts.size() != 3) {
      throw Error(ErrorCode::invalid_params, "grid must be linear:N:lo:hi");
    }
    const int count = static_cast<int>(number(parts[0]));
    const double lo = number(parts[1]);
    const double hi = number(parts[2]);
    if (count < 2 || !(lo < hi)) {
      throw Error(ErrorCode::invalid_params,
                  "linear grid needs N >= 2 and lo < hi");
    }
    std::vector<double> taus(count);
    for (int i = 0; i < count; ++i) {
      taus[i] = lo + (hi - lo) * i / (count - 1);
    }
    return taus;
  }
  if (spec.rfind("list:", 0) == 0) {
    const auto parts = split(spec.substr(5), ',');
    std::vector<double> taus;
    for (const auto& part : parts) {
      if (part.empty()) {
        throw Error(ErrorCode::invalid_params, "empty value in grid list");
      }
      taus.push_back(number(part));
    }
    if (taus.empty()) {
      throw Error(ErrorCode::invalid_params, "grid list is empty");
    }
    return taus;
  }
  throw Error(ErrorCode::invalid_params,
              "grid must be linear:N:lo:hi or list:v1,v2,...");
}

void add_input_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--scores", opt.scores_dir,
                  "Directory of per-clip score TSV files")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--gt", opt.gt_path, "Ground-truth event table (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--durations", opt.durations_path,
                  "Clip duration table (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_eval_options(CLI::App* cmd, Options& opt, bool with_mode = true) {
  if (with_mode) {
    cmd->add_option("--mode", opt.mode, "Evaluation mode")
        ->check(CLI::IsMember({"collar", "intersection", "segment"}));
  }
  cmd->add_option("--collar", opt.collar,
                  "Onset collar d in seconds; also the offset collar floor");
  cmd->add_option("--offset-collar-rate", opt.offset_collar_rate,
                  "Offset collar as a rate r of the event length");
  cmd->add_option("--dtc", opt.dtc, "Detection tolerance ratio");
  cmd->add_option("--gtc", opt.gtc, "Ground truth intersection ratio");
  cmd->add_option("--cttc", opt.cttc, "Cross-trigger tolerance ratio");
  cmd->add_option("--segment-length", opt.segment_length,
                  "Segment length in seconds for segment mode");
  cmd->add_option("--median-filter", opt.median_filter_width,
                  "Median filter width in frames before evaluation, 0 = off")
      ->check(CLI::Validator(
          [](std::string& value) {
            const int width = std::atoi(value.c_str());
            return (width == 0 || (width > 0 && width % 2 == 1))
                       ? std::string()
                       : std::string("width must be 0 or odd and positive");
          },
          "ODD"));
  cmd->add_option("--jobs", opt.jobs, "Worker thread count")
      ->check(CLI::PositiveNumber);
}

void add_psds_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--alpha-ct", opt.alpha_ct, "Cross-trigger weight");
  cmd->add_option("--alpha-st", opt.alpha_st,
                  "Across-class instability penalty");
  cmd->add_option("--max-efpr", opt.max_efpr,
                  "Upper integration bound, per unit of time");
  cmd->add_option("--unit-of-time", opt.unit, "Rate unit")
      ->check(CLI::IsMember({"second", "minute", "hour"}));
  cmd->add_flag("--clip-negative-etpr", opt.clip_negative_etpr,
                "Clip negative effective TPR values at zero");
}

void add_format_option(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

EvalParams eval_params(const Options& opt) {
  EvalParams params;
  if (opt.mode == "collar") {
    params.mode = EvalMode::collar;
  } else if (opt.mode == "segment") {
    params.mode = EvalMode::segment;
  } else {
    params.mode = EvalMode::intersection;
  }
  params.collar = CollarParams{opt.collar, opt.offset_collar_rate, opt.collar};
  params.intersection = IntersectionParams{opt.dtc, opt.gtc, opt.cttc};
  params.segment_length = opt.segment_length;
  return params;
}

PsdsParams psds_params(const Options& opt) {
  PsdsParams params;
  params.alpha_ct = opt.alpha_ct;
  params.alpha_st = opt.alpha_st;
  params.efpr_max = opt.max_efpr;
  if (opt.unit == "second") {
    params.unit_of_time = TimeUnit::second;
  } else if (opt.unit == "minute") {
    params.unit_of_time = TimeUnit::minute;
  } else {
    params.unit_of_time = TimeUnit::hour;
  }
  params.clip_negative_etpr = opt.clip_negative_etpr;
  return params;
}

// Full effective config, echoed into every report so a run can be reproduced.
// The worker count is execution detail, not configuration: reports must be
// byte-identical across --jobs values, so it is deliberately left out.
std::vector<std::pair<std::string, std::string>> config_echo(
    const Options& opt, const Dataset& dataset) {
  return {
      {"mode", opt.mode},
      {"collar", format_exact(opt.collar)},
      {"offset_collar_rate", format_exact(opt.offset_collar_rate)},
      {"dtc", format_exact(opt.dtc)},
      {"gtc", format_exact(opt.gtc)},
      {"cttc", format_exact(opt.cttc)},
      {"alpha_ct", format_exact(opt.alpha_ct)},
      {"alpha_st", format_exact(opt.alpha_st)},
      {"max_efpr", format_exact(opt.max_efpr)},
      {"unit_of_time", opt.unit},
      {"clip_negative_etpr", opt.clip_negative_etpr ? "true" : "false"},
      {"segment_length", format_exact(opt.segment_length)},
      {"median_filter", std::to_string(opt.median_filter_width)},
      {"scores", opt.scores_dir},
      {"gt", opt.gt_path},
      {"durations", opt.durations_path},
      {"dataset", dataset_fingerprint(dataset)},
  };
}

Dataset load_prepared(const Options& opt) {
  Dataset dataset =
      load_dataset(opt.scores_dir, opt.gt_path, opt.durations_path);
  if (opt.median_filter_width > 0) {
    for (auto& clip : dataset.clips) {
      clip.timeline = median_filter(clip.timeline, opt.median_filter_width);
    }
  }
  return dataset;
}

ReportFormat report_format(const Options& opt) {
  return opt.format == "json" ? ReportFormat::json : ReportFormat::csv;
}

std::string extension(ReportFormat format) {
  return format == ReportFormat::json ? ".json" : ".csv";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::io_failure, "cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::io_failure, "failed while writing '" + path + "'");
  }
}

std::string class_file_name(const std::string& class_name) {
  std::string name = class_name;
  for (char& ch : name) {
    const bool safe = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '.' || ch == '_' ||
                      ch == '-';
    if (!safe) ch = '_';
  }
  return name;
}

void warn_excluded(const std::string& class_name) {
  std::cerr << "warning: class '" << class_name
            << "' has no ground truth; excluded\n";
}

CurveReport psd_roc_report(const PsdRoc& roc, const Options& opt,
                           const Dataset& dataset) {
  CurveReport report;
  report.kind = "psd_roc";
  report.metadata = config_echo(opt, dataset);
  report.x_name = "efpr";
  report.x = roc.efpr;
  report.series_names = {"etpr", "mu", "sigma"};
  report.series = {roc.etpr, roc.mu, roc.sigma};
  for (std::size_t c = 0; c < roc.class_names.size(); ++c) {
    report.series_names.push_back("envelope." + roc.class_names[c]);
    report.series.push_back(roc.tpr[c]);
  }
  report.scalars = {{"psds", roc.psds}};
  return report;
}

int run_validate(const Options& opt) {
  const auto dataset = load_prepared(opt);
  std::cout << "ok: " << dataset.clips.size() << " clips, "
            << dataset.class_names.size() << " classes, "
            << format_number(dataset.total_duration()) << " s total, "
            << "fingerprint " << dataset_fingerprint(dataset) << "\n";
  return 0;
}

int run_psds(const Options& opt) {
  const auto dataset = load_prepared(opt);
  const auto curves =
      compute_statistics_curves(dataset, eval_params(opt), opt.jobs);
  const auto result = compute_psds(curves, psds_params(opt));
  for (const auto& name : result.excluded_classes) warn_excluded(name);

  const auto report = psd_roc_report(result.roc, opt, dataset);
  write_file(opt.output, write_report(report, ReportFormat::json));
  std::cout << "psds " << format_number(result.roc.psds) << "\n";
  return 0;
}

int run_psd_roc(const Options& opt) {
  const auto dataset = load_prepared(opt);
  const auto curves =
      compute_statistics_curves(dataset, eval_params(opt), opt.jobs);
  const auto result = compute_psds(curves, psds_params(opt));
  for (const auto& name : result.excluded_classes) warn_excluded(name);

  const auto report = psd_roc_report(result.roc, opt, dataset);
  write_file(opt.output, write_report(report, report_format(opt)));
  std::cout << "psds " << format_number(result.roc.psds) << "\n";
  return 0;
}

CurveReport pr_report(const PrCurve& pr, const Options& opt,
                      const Dataset& dataset) {
  CurveReport report;
  report.kind = "pr";
  report.metadata = config_echo(opt, dataset);
  report.metadata.emplace_back("class", pr.class_name);
  report.x_name = "threshold";
  const std::size_t n = pr.size();
  report.x.resize(n);
  report.series_names = {"precision", "recall", "f1"};
  report.series.assign(3, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = n - 1 - i;  // report rows ascend along threshold
    report.x[i] = pr.thresholds[k];
    report.series[0][i] = pr.precision[k];
    report.series[1][i] = pr.recall[k];
    report.series[2][i] = pr.f1[k];
  }
  const auto best = best_threshold(pr);
  report.scalars = {{"best_tau", best.tau}, {"best_f1", best.f1}};
  return report;
}

int run_pr_curve(const Options& opt) {
  const auto dataset = load_prepared(opt);
  const auto curves =
      compute_statistics_curves(dataset, eval_params(opt), opt.jobs);
  std::filesystem::create_directories(opt.output);

  const auto format = report_format(opt);
  int written = 0;
  for (const auto& [name, curve] : curves) {
    if (curve.n_gp <= 0) {
      warn_excluded(name);
      continue;
    }
    const auto report = pr_report(pr_f1_curve(curve), opt, dataset);
    const auto path = std::filesystem::path(opt.output) /
                      (class_file_name(name) + extension(format));
    write_file(path.string(), write_report(report, format));
    ++written;
  }
  if (written == 0) {
    throw Error(ErrorCode::no_classes, "no class has ground-truth events");
  }
  std::cout << "wrote " << written << " pr curve files to " << opt.output
            << "\n";
  return 0;
}

int run_best_threshold(const Options& opt) {
  const auto dataset = load_prepared(opt);
  const auto curves =
      compute_statistics_curves(dataset, eval_params(opt), opt.jobs);

  CurveReport report;
  report.kind = "best_threshold";
  report.metadata = config_echo(opt, dataset);
  report.x_name = "threshold";
  double f1_sum = 0.0;
  int included = 0;
  for (const auto& [name, curve] : curves) {
    if (curve.n_gp <= 0) {
      warn_excluded(name);
      continue;
    }
    const auto best = best_threshold(pr_f1_curve(curve));
    report.scalars.emplace_back("tau_star." + name, best.tau);
    report.scalars.emplace_back("f1_star." + name, best.f1);
    f1_sum += best.f1;
    ++included;
  }
  if (included == 0) {
    throw Error(ErrorCode::no_classes, "no class has ground-truth events");
  }
  const double macro_f1 = f1_sum / included;
  report.scalars.emplace_back("macro_f1", macro_f1);

  write_file(opt.output, write_report(report, report_format(opt)));
  std::cout << "macro_f1 " << format_number(macro_f1) << "\n";
  return 0;
}

int run_compare_approx(const Options& opt) {
  const auto dataset = load_prepared(opt);
  const auto params = eval_params(opt);
  const auto summary = psds_params(opt);

  const auto curves = compute_statistics_curves(dataset, params, opt.jobs);
  const auto exact = compute_psds(curves, summary);
  for (const auto& name : exact.excluded_classes) warn_excluded(name);
  const auto approx = approx_psds(dataset, parse_grid(opt.grid), params,
                                  summary);

  CurveReport report;
  report.kind = "compare_approx";
  report.metadata = config_echo(opt, dataset);
  report.metadata.emplace_back("grid", opt.grid);
  report.x_name = "threshold";
  report.scalars = {{"exact_psds", exact.roc.psds},
                    {"approx_psds", approx.psds},
                    {"difference", exact.roc.psds - approx.psds}};

  write_file(opt.output, write_report(report, report_format(opt)));
  std::cout << "exact " << format_number(exact.roc.psds) << " approx "
            << format_number(approx.psds) << " difference "
            << format_number(exact.roc.psds - approx.psds) << "\n";
  return 0;
}

int run_segment_roc(const Options& opt) {
  const auto dataset = load_prepared(opt);
  const auto curves =
      compute_statistics_curves(dataset, eval_params(opt), opt.jobs);
  std::filesystem::create_directories(opt.output);

  const auto format = report_format(opt);
  int written = 0;
  for (const auto& [name, curve] : curves) {
    if (curve.n_gp <= 0) {
      warn_excluded(name);
      continue;
    }
    const auto roc = segment_roc(curve);

    CurveReport report;
    report.kind = "roc";
    report.metadata = config_echo(opt, dataset);
    report.metadata.emplace_back("class", name);
    report.x_name = "fpr";
    report.series_names = {"tpr", "envelope"};
    report.series.assign(2, {});
    for (const auto& point : roc.points) {
      report.x.push_back(point.efpr);
      report.series[0].push_back(point.tpr);
    }
    for (const auto& point : roc.envelope) {
      report.series[1].push_back(point.tpr);
    }
    report.scalars = {{"auc", roc.auc}};

    const auto path = std::filesystem::path(opt.output) /
                      (class_file_name(name) + extension(format));
    write_file(path.string(), write_report(report, format));
    ++written;
  }
  if (written == 0) {
    throw Error(ErrorCode::no_classes, "no class has ground-truth events");
  }
  std::cout << "wrote " << written << " roc curve files to " << opt.output
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sound event detection evaluation curves"};
  app.require_subcommand(1);
  Options opt;

  auto* cmd_validate = app.add_subcommand(
      "validate", "Check a dataset and print its summary");
  add_input_options(cmd_validate, opt);
  add_eval_options(cmd_validate, opt, false);

  auto* cmd_psds = app.add_subcommand(
      "psds", "Exact PSDS with a JSON report of the PSD-ROC");
  add_input_options(cmd_psds, opt);
  add_eval_options(cmd_psds, opt);
  add_psds_options(cmd_psds, opt);
  cmd_psds->add_option("--output", opt.output, "Report file")->required();

  auto* cmd_psd_roc = app.add_subcommand(
      "psd-roc", "Exact PSD-ROC curve data");
  add_input_options(cmd_psd_roc, opt);
  add_eval_options(cmd_psd_roc, opt);
  add_psds_options(cmd_psd_roc, opt);
  add_format_option(cmd_psd_roc, opt);
  cmd_psd_roc->add_option("--output", opt.output, "Report file")->required();

  auto* cmd_pr = app.add_subcommand(
      "pr-curve", "Per-class precision/recall/F1 curves");
  add_input_options(cmd_pr, opt);
  add_eval_options(cmd_pr, opt);
  add_format_option(cmd_pr, opt);
  cmd_pr->add_option("--output", opt.output, "Output directory")->required();

  auto* cmd_best = app.add_subcommand(
      "best-threshold", "Per-class F1-optimal thresholds and macro F1");
  add_input_options(cmd_best, opt);
  add_eval_options(cmd_best, opt);
  add_format_option(cmd_best, opt);
  cmd_best->add_option("--output", opt.output, "Report file")->required();

  auto* cmd_compare = app.add_subcommand(
      "compare-approx", "Exact PSDS versus a fixed threshold grid");
  add_input_options(cmd_compare, opt);
  add_eval_options(cmd_compare, opt);
  add_psds_options(cmd_compare, opt);
  add_format_option(cmd_compare, opt);
  cmd_compare->add_option("--grid", opt.grid,
                          "Threshold grid, linear:N:lo:hi or list:v1,v2,...")
      ->check(CLI::Validator(
          [](std::string& value) {
            try {
              parse_grid(value);
              return std::string();
            } catch (const std::exception& error) {
              return std::string(error.what());
            }
          },
          "GRID"));
  cmd_compare->add_option("--output", opt.output, "Report file")->required();

  auto* cmd_segment = app.add_subcommand(
      "segment-roc", "Per-class segment-level ROC curves and AUC");
  add_input_options(cmd_segment, opt);
  add_eval_options(cmd_segment, opt, false);
  add_format_option(cmd_segment, opt);
  cmd_segment->add_option("--output", opt.output, "Output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  if (opt.mode.empty()) {
    const bool collar_default =
        cmd_pr->parsed() || cmd_best->parsed() || cmd_validate->parsed();
    opt.mode = collar_default ? "collar" : "intersection";
  }
  if (cmd_segment->parsed()) opt.mode = "segment";

  try {
    if (cmd_validate->parsed()) return run_validate(opt);
    if (cmd_psds->parsed()) return run_psds(opt);
    if (cmd_psd_roc->parsed()) return run_psd_roc(opt);
    if (cmd_pr->parsed()) return run_pr_curve(opt);
    if (cmd_best->parsed()) return run_best_threshold(opt);
    if (cmd_compare->parsed()) return run_compare_approx(opt);
    if (cmd_segment->parsed()) return run_segment_roc(opt);
  } catch (const Error& error) {
    std::cerr << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << error.what() << "\n";
    return 1;
  }
  return 0;
}
