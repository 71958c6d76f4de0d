// ugbench: command-line harness over the libugm C interface.
//
//   ugbench run|sweep|compare [--config FILE]... [--problem ...] [--solver ...]
//           [--oracle exact|gaussian:SIGMA|minibatch:B] [--D X] [--radius R]
//           [--iters N] [--seeds s1,s2,...] [--jobs N] [--out DIR]

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ugm/ugm.h"

namespace {

struct Flag {
  const char* name;  // CLI flag
  const char* key;   // configuration key
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--problem", "problem", "ls | logistic | ppower:P"},
    {"--data", "data", "LIBSVM file or synthetic:MxN[:SEED]"},
    {"--solver", "solvers", "comma list of ugm, usgm, usfgm[:det], sgd[:STEP[:decay]], adagrad[:grad_diff|grad_norm]"},
    {"--oracle", "oracle", "exact | gaussian:SIGMA | minibatch:B"},
    {"--D", "D", "diameter bound (default 2 * radius)"},
    {"--radius", "radius", "ball radius (default 1)"},
    {"--iters", "iters", "iterations per run"},
    {"--trace-every", "trace_every", "evaluate F every N iterations"},
    {"--seeds", "seeds", "comma list of oracle seeds"},
    {"--nseeds", "nseeds", "number of seeds derived from UGBENCH_SEED when --seeds is absent"},
    {"--jobs", "jobs", "parallel runs"},
    {"--out", "out", "output directory"},
    {"--normalize", "normalize", "max-abs column scaling (true/false)"},
    {"--report", "report", "average | last"},
    {"--steps", "steps", "sweep: step-size grid"},
    {"--diameters", "diameters", "sweep: diameter grid"},
};

int fail(ugm_status status) {
  std::fprintf(stderr, "ugbench: %s\n", ugm_last_error());
  return static_cast<int>(status);
}

struct ConfigHandle {
  ugm_config* ptr = nullptr;
  ConfigHandle() = default;
  ConfigHandle(ConfigHandle&& o) noexcept : ptr(std::exchange(o.ptr, nullptr)) {}
  ConfigHandle(const ConfigHandle&) = delete;
  ~ConfigHandle() { ugm_config_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for universal line-search-free gradient methods"};
  app.require_subcommand(1, 1);

  std::vector<std::string> config_files;
  std::vector<std::string> values(std::size(kFlags));
  std::vector<CLI::Option*> options;

  for (const char* name : {"run", "sweep", "compare"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "run"       ? "run solver(s) on one problem"
                                         : std::string(name) == "sweep" ? "grid search over step sizes or diameters"
                                                                        : "aligned traces for several solvers");
    sub->add_option("--config", config_files, "key = value configuration file (compare accepts several)");
  }
  for (std::size_t i = 0; i < std::size(kFlags); ++i) {
    for (auto* sub : app.get_subcommands({})) {
      auto* opt = sub->add_option(kFlags[i].name, values[i], kFlags[i].help);
      options.push_back(opt);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return UGM_ERR_USAGE;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const std::size_t n_subs = app.get_subcommands({}).size();

  if (command != "compare" && config_files.size() > 1) {
    std::fprintf(stderr, "ugbench: %s accepts a single --config\n", command.c_str());
    return UGM_ERR_USAGE;
  }

  std::vector<ConfigHandle> configs(std::max<std::size_t>(1, config_files.size()));
  for (std::size_t c = 0; c < configs.size(); ++c) {
    if (auto st = ugm_config_create(&configs[c].ptr); st != UGM_OK) return fail(st);
    if (c < config_files.size())
      if (auto st = ugm_config_load_file(configs[c].ptr, config_files[c].c_str()); st != UGM_OK) return fail(st);
    // Command-line flags override file settings.
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      bool given = false;
      for (std::size_t s = 0; s < n_subs; ++s) given = given || options[i * n_subs + s]->count() > 0;
      if (!given) continue;
      if (auto st = ugm_config_set(configs[c].ptr, kFlags[i].key, values[i].c_str()); st != UGM_OK) return fail(st);
    }
  }

  ugm_status status = UGM_OK;
  if (command == "run") {
    status = ugm_cmd_run(configs.front().ptr);
  } else if (command == "sweep") {
    status = ugm_cmd_sweep(configs.front().ptr);
  } else {
    std::vector<const ugm_config*> raw;
    for (const auto& c : configs) raw.push_back(c.ptr);
    status = ugm_cmd_compare(raw.data(), raw.size());
  }
  return status == UGM_OK ? 0 : fail(status);
}
