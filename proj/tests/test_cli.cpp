#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    ++failures;
    std::cout << "FAILED: " << what << "\n";
  }
}

int run(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cout << "usage: test_cli <cli-binary> <toy-dataset-dir>\n";
    return 1;
  }
  const std::string cli = argv[1];
  const std::string toy = argv[2];
  const fs::path tmp = fs::temp_directory_path() / "sedcurves_cli_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  const std::string inputs = " --scores '" + toy + "/scores' --gt '" + toy +
                             "/ground_truth.tsv' --durations '" + toy +
                             "/durations.tsv'";

  try {
    const fs::path psds_path = tmp / "psds.json";
    const fs::path stdout_path = tmp / "stdout.txt";
    int code = run("'" + cli + "' psds" + inputs +
                   " --dtc 0.7 --gtc 0.7 --alpha-st 1 --max-efpr 100" +
                   " --output '" + psds_path.string() + "' > '" +
                   stdout_path.string() + "'");
    check(code == 0, "psds exits 0");
    check(fs::exists(psds_path), "psds report exists");
    const auto doc = nlohmann::json::parse(slurp(psds_path));
    const double psds = doc.at("psds").get<double>();
    check(psds >= -0.5 && psds <= 1.0, "psds lies in [-0.5, 1]");
    const auto line = slurp(stdout_path);
    check(line.rfind("psds ", 0) == 0 &&
              std::count(line.begin(), line.end(), '\n') == 1,
          "stdout is a single summary line");
    check(doc.at("metadata").contains("dtc") &&
              doc.at("metadata").contains("unit_of_time") &&
              doc.at("metadata").contains("max_efpr"),
          "report echoes the effective config");

    const fs::path cmp_path = tmp / "cmp.json";
    code = run("'" + cli + "' compare-approx" + inputs +
               " --alpha-st 0 --grid linear:50:0.01:0.99 --format json" +
               " --output '" + cmp_path.string() + "' > /dev/null");
    check(code == 0, "compare-approx exits 0");
    const auto cmp = nlohmann::json::parse(slurp(cmp_path));
    check(cmp.at("approx_psds").get<double>() <=
              cmp.at("exact_psds").get<double>() + 1e-12,
          "grid psds does not exceed exact psds");
  } catch (const std::exception& oops) {
    check(false, std::string("report checks threw: ") + oops.what());
  }

  const fs::path bad = tmp / "bad";
  fs::create_directories(bad / "scores");
  write_text(bad / "scores" / "clip_x.tsv",
             "onset\toffset\tdog_bark\n0\t1\t0.5\n");
  write_text(bad / "gt.tsv",
             "filename\tonset\toffset\tevent_label\n"
             "clip_x.wav\t0.5\t9\tdog_bark\n");
  write_text(bad / "durations.tsv", "filename\tduration\nclip_x.wav\t1\n");
  const fs::path diag = tmp / "diag.txt";
  int code = run("'" + cli + "' validate --scores '" +
                 (bad / "scores").string() + "' --gt '" +
                 (bad / "gt.tsv").string() + "' --durations '" +
                 (bad / "durations.tsv").string() + "' 2> '" + diag.string() +
                 "' > /dev/null");
  check(code == 1, "validate exits 1 on an out-of-bounds event");
  const auto message = slurp(diag);
  check(message.find("clip_x") != std::string::npos,
        "diagnostic names the clip");
  check(message.find("0.5") != std::string::npos &&
            message.find("9") != std::string::npos,
        "diagnostic names the event");

  code = run("'" + cli + "' psds" + inputs + " --output '" +
             (tmp / "x.json").string() + "' --bogus 2> /dev/null");
  check(code == 2, "unknown flag exits 2");
  code = run("'" + cli + "' frobnicate 2> /dev/null");
  check(code == 2, "unknown subcommand exits 2");

  if (failures == 0) std::cout << "test_cli: all checks passed\n";
  return failures == 0 ? 0 : 1;
}
