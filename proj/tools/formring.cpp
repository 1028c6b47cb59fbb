// formring: run a job file and print the report.
//
//   formring <command> --job <path> [--out <dir>] [--nmax <int>]
//            [--field Q|Fp:<p>] [--trunc-max <int>]
//
// Exit codes: 0 success (every verdict holds), 2 a verdict failed,
// 1 input, hypothesis or stabilization error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "formring/runner.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw formring::job_error("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact lengths, multiplicities and Koszul-type homology over localized polynomial rings"};
  std::string command, job_path, out_dir, field_text;
  long nmax = 0;
  std::uint32_t trunc_max = 0;
  std::vector<std::string> commands = formring::job_commands();
  commands.push_back("run");
  app.add_option("command", command, "hs, initform, regseq, homology, formula, multiplicity, decompose, bezout, "
                                     "chi, euler, verify-all, or run (use the job's command)")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--job", job_path, "job file")->required();
  app.add_option("--out", out_dir, "directory for report.txt, summary.json and CSV tables");
  app.add_option("--nmax", nmax, "last n of the checking window")->check(CLI::PositiveNumber);
  app.add_option("--field", field_text, "coefficient field: Q or Fp:<p>");
  app.add_option("--trunc-max", trunc_max, "largest truncation level N")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const formring::JobFile job = formring::load_job(job_path);
    formring::RunOptions opts;
    if (nmax > 0) opts.n_max = nmax;
    if (trunc_max > 0) opts.trunc_max = trunc_max;
    if (!field_text.empty()) opts.field = formring::parse_field_spec(field_text);
    const formring::RunOutput result = formring::run_job(job, command, opts);
    std::cout << result.report;
    const std::string dir = !out_dir.empty() ? out_dir : job.out;
    if (!dir.empty()) {
      fs::create_directories(dir);
      write_file(fs::path(dir) / "report.txt", result.report);
      write_file(fs::path(dir) / "summary.json", result.summary.dump(2) + "\n");
      for (const auto& [name, content] : result.files) write_file(fs::path(dir) / name, content);
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "formring: " << e.what() << "\n";
    return 1;
  }
}
