#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "eitlab/app/config.hpp"
#include "eitlab/app/run.hpp"
#include "eitlab/errors.hpp"

int main(int argc, char** argv) {
  using namespace eitlab::app;
  CLI::App cli{"eitlab: slow-light and light-storage simulations in a Lambda medium"};
  std::vector<std::string> configs;
  std::vector<std::string> presets;
  std::string solver;
  std::string out;
  unsigned workers = 1;
  bool list = false;
  cli.add_option("--config", configs, "INI configuration file (repeat for a sweep)");
  cli.add_option("--preset", presets, "Built-in configuration: fig3, fig4, fig5, fig6");
  cli.add_option("--solver", solver, "Propagation solver override")
      ->check(CLI::IsMember({"mb", "polariton", "both"}));
  cli.add_option("--out", out, "Output directory (default: output.dir of the config)");
  cli.add_option("--workers", workers, "Concurrent runs in a sweep")->check(CLI::PositiveNumber);
  cli.add_flag("--list-presets", list, "Print the preset names and exit");
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (list) {
    for (const auto& n : preset_names()) std::cout << n << '\n';
    return 0;
  }

  std::vector<RunConfig> runs;
  try {
    for (const auto& p : presets) runs.push_back(preset(p));
    for (const auto& c : configs) runs.push_back(load_config(c));
    if (runs.empty()) throw eitlab::ValidationError("nothing to run: give --config or --preset");
    if (!solver.empty())
      for (auto& r : runs) apply_solver(r, solver);
  } catch (const eitlab::ValidationError& e) {
    std::cerr << "eitlab: " << e.what() << '\n';
    return kExitValidation;
  }

  std::vector<std::string> dirs;
  for (const auto& r : runs) {
    std::filesystem::path base = out.empty() ? std::filesystem::path(r.output.dir) : std::filesystem::path(out);
    dirs.push_back(runs.size() == 1 ? base.string() : (base / r.name).string());
  }

  std::vector<int> codes(runs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) codes[i] = run(runs[i], dirs[i]);
  };
  const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(runs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (int c : codes)
    if (c != 0) return c;
  return 0;
}
