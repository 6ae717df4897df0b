// Command-line front end: reads one JSON request per line from stdin and
// writes one JSON result per line to stdout.  Exit code 0 on success, 2 on
// validation errors, 3 on internal failures.

#include <CLI11.hpp>

#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "layergraph/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"layergraph: unit-distance graph geometry of strips and layers"};

  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> tol_values;
  int jobs = 1;
  std::string out_path;
  bool show_schema = false;

  app.add_option("--seed", seed, "default RNG seed applied to requests without one")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--tol", tol_values, "default tolerance: abs [rel]")->expected(1, 2);
  app.add_option("--jobs", jobs, "run batch requests concurrently")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "default SVG output path for render requests");
  app.add_flag("--schema", show_schema, "print the request/response schemas and exit");

  CLI11_PARSE(app, argc, argv);

  if (show_schema) {
    std::cout << layergraph::cli::schemas().dump(2) << "\n";
    return 0;
  }

  std::optional<std::uint64_t> default_seed;
  if (seed_set) default_seed = seed;
  std::optional<layergraph::Tolerance> default_tol;
  if (!tol_values.empty()) {
    layergraph::Tolerance t;
    t.abs_tol = tol_values[0];
    if (tol_values.size() > 1) t.rel_tol = tol_values[1];
    default_tol = t;
  }

  std::vector<std::string> lines;
  for (std::string line; std::getline(std::cin, line);) {
    if (!line.empty()) lines.push_back(line);
  }

  auto run_one = [&](std::string line, std::uint64_t index) {
    if (!out_path.empty()) {
      // Merge the --out default into render requests lacking one.
      auto doc = nlohmann::json::parse(line, nullptr, false);
      if (!doc.is_discarded() && doc.is_object() && doc.value("command", "") == "render") {
        if (!doc.contains("params")) doc["params"] = nlohmann::json::object();
        if (!doc["params"].contains("out")) doc["params"]["out"] = out_path;
        line = doc.dump();
      }
    }
    auto per_line_seed = default_seed;
    if (per_line_seed && lines.size() > 1) *per_line_seed = *per_line_seed + index;
    return layergraph::cli::run_line(line, per_line_seed, default_tol);
  };

  int exit_code = 0;
  if (jobs <= 1 || lines.size() <= 1) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto result = run_one(lines[i], i);
      std::cout << result.to_json().dump() << "\n";
      exit_code = std::max(exit_code, result.exit_code);
    }
  } else {
    std::vector<std::future<layergraph::cli::JobResult>> futures;
    futures.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i)
      futures.push_back(std::async(std::launch::async, run_one, lines[i], i));
    for (auto& f : futures) {
      const auto result = f.get();
      std::cout << result.to_json().dump() << "\n";
      exit_code = std::max(exit_code, result.exit_code);
    }
  }
  return exit_code;
}
