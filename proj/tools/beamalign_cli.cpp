#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "beamalign/beamalign.h"

namespace {

struct Options {
  std::string config;
  std::string seed;
  std::string trials;
  std::string out;
};

int report_failure(ba_status s, const char* what) {
  std::cerr << "beamalign: " << what << ": " << ba_status_string(s) << ": " << ba_last_error() << "\n";
  return 1;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

// the resolved configuration is archived next to every output file
bool emit(const Options& o, ba_config* cfg, const char* text) {
  if (o.out.empty()) {
    std::cout << text;
    return true;
  }
  if (!write_file(o.out, text)) {
    std::cerr << "beamalign: cannot write " << o.out << "\n";
    return false;
  }
  char* dump = nullptr;
  if (ba_config_dump(cfg, &dump) == BA_OK) {
    bool ok = write_file(o.out + ".config", dump);
    ba_string_free(dump);
    if (!ok) std::cerr << "beamalign: cannot write " << o.out << ".config\n";
    return ok;
  }
  return true;
}

int run(const std::string& cmd, const Options& o) {
  ba_config* cfg = nullptr;
  ba_status st = ba_config_create(&cfg);
  if (st != BA_OK) return report_failure(st, "config");
  struct Guard {
    ba_config* c;
    ~Guard() { ba_config_destroy(c); }
  } guard{cfg};

  if (!o.config.empty() && (st = ba_config_load(cfg, o.config.c_str())) != BA_OK)
    return report_failure(st, o.config.c_str());
  if (!o.seed.empty() && (st = ba_config_set(cfg, "seed", o.seed.c_str())) != BA_OK)
    return report_failure(st, "--seed");
  if (!o.trials.empty() && (st = ba_config_set(cfg, "trials", o.trials.c_str())) != BA_OK)
    return report_failure(st, "--trials");

  char* text = nullptr;
  char* rows = nullptr;
  if (cmd == "plan") st = ba_plan_report(cfg, &text);
  else if (cmd == "sweep-pe") st = ba_sweep_pe(cfg, &text);
  else if (cmd == "compare") st = ba_compare(cfg, &text);
  else if (cmd == "multicluster") st = ba_multicluster(cfg, &text);
  else st = ba_simulate(cfg, &text, o.out.empty() ? nullptr : &rows);
  if (st != BA_OK) return report_failure(st, cmd.c_str());

  bool ok;
  if (cmd == "simulate") {
    std::cout << text;
    ok = rows ? emit(o, cfg, rows) : true;
  } else {
    ok = emit(o, cfg, text);
  }
  ba_string_free(text);
  ba_string_free(rows);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive beam-alignment planner and Monte-Carlo verifier"};
  app.require_subcommand(1);
  Options o;
  const char* cmds[][2] = {
      {"plan", "optimal alignment schedule report"},
      {"sweep-pe", "analytic power vs detection error probability (CSV)"},
      {"compare", "DFS vs baseline power across spectral efficiencies (CSV)"},
      {"multicluster", "two-cluster degradation sweep (CSV)"},
      {"simulate", "Monte-Carlo run of the configured policy; --out writes per-trial CSV"},
  };
  for (auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", o.config, "configuration file (key = value)");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--trials", o.trials, "Monte-Carlo frames");
    sub->add_option("--out", o.out, "output path (default stdout)");
  }
  CLI11_PARSE(app, argc, argv);
  for (auto* sub : app.get_subcommands()) return run(sub->get_name(), o);
  return 1;
}
