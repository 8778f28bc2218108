#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mmdd/mmdd.h"

namespace {

struct VerbOptions {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
};

int report(mmdd_status status, const char* verb) {
  if (status == MMDD_OK) return 0;
  std::fprintf(stderr, "mmdd %s: %s error: %s\n", verb, mmdd_status_name(status), mmdd_last_error());
  return static_cast<int>(status);
}

int run(const VerbOptions& opts, const char* verb, mmdd_status (*fn)(const mmdd_config*)) {
  mmdd_config* cfg = nullptr;
  mmdd_status status = mmdd_config_load(opts.config.c_str(), &cfg);
  if (status != MMDD_OK) return report(status, verb);
  if (opts.seed_set) status = mmdd_config_set_seed(cfg, opts.seed);
  if (status == MMDD_OK && !opts.out.empty()) status = mmdd_config_set_output(cfg, opts.out.c_str());
  if (status == MMDD_OK) status = fn(cfg);
  mmdd_config_free(cfg);
  return report(status, verb);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax diffusion dataset distillation at desk scale"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mmdd_version());

  const std::map<std::string, std::pair<std::string, mmdd_status (*)(const mmdd_config*)>> verbs = {
      {"distill", {"build surrogate datasets for every (method, ipc)", mmdd_run_distill}},
      {"eval", {"train classifiers on surrogates and compute metrics", mmdd_run_eval}},
      {"control-sim", {"simulate the Follmer control problem and tri-level toy", mmdd_run_control_sim}},
      {"plot", {"render embedding scatter plots", mmdd_run_plot}},
      {"all", {"distill, eval, control-sim and plot in order", mmdd_run_all}},
  };

  std::map<std::string, VerbOptions> options;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, info] : verbs) {
    CLI::App* sub = app.add_subcommand(name, info.first);
    VerbOptions& o = options[name];
    sub->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master seed, overrides the config");
    sub->add_option("--out", o.out, "output directory, overrides the config");
    subs[name] = sub;
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    VerbOptions& o = options[name];
    o.seed_set = sub->count("--seed") > 0;
    return run(o, name.c_str(), verbs.at(name).second);
  }
  return 1;
}
