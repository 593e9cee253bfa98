#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "stoqkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // --report FILE is handled here so the library never touches stdout.
  std::string report_path;
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (*it == "--report" && it + 1 != args.end()) {
      report_path = *(it + 1);
      args.erase(it, it + 2);
      break;
    }
  }

  const stoqkit::cli::CommandResult r = stoqkit::cli::run_command(args);
  if (r.report.is_null()) {
    std::cout << r.text;
    return r.exit_code;
  }
  if (r.exit_code == stoqkit::cli::kExitError) std::cerr << "error: " << r.text << "\n";

  const std::string payload = r.report.dump(2) + "\n";
  if (!report_path.empty()) {
    std::ofstream(report_path) << payload;
  }
  const bool csv_on_stdout = !r.csv.empty() &&
                             std::find(args.begin(), args.end(), "--csv") == args.end();
  if (csv_on_stdout) {
    std::cout << r.csv;
  } else if (report_path.empty()) {
    std::cout << payload;
  }
  return r.exit_code;
}
