#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morselab/localglobal.hpp"
#include "morselab/sampler.hpp"

namespace morselab {

inline constexpr const char* kToolkitVersion = "morse-lab 0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Declarative experiment description; one config file per run, echoed
// verbatim into the report.
struct ExperimentConfig {
  std::string kind;  // profile|catalog|certify|middle|exitpoints|counterexample|lemma-suite
  GroupSpec group = GroupSpec::free_group({"a", "b"});
  int radius = 6;
  std::uint64_t seed = 0;
  std::int64_t budget_nodes = 2'000'000;
  int threads = 1;
  std::string out_dir = "out";

  std::string path_literal;        // profile / certify
  std::vector<QGParams> grid;      // profile
  std::vector<int> lengths;        // middle
  std::vector<Rat> t_values{Rat(1, 4)};  // middle
  std::vector<Rat> c_values{Rat(2)};     // middle
  int scale = 9;                   // catalog / certify / counterexample D
  int exit_d = 1;                  // exitpoints D
  int ell = 2;                     // exitpoints l
  QGParams local_params{Rat(1), Rat(0)};
  QGParams weak_qg{Rat(3), Rat(0)};
  Rat mu{1};
  int trials = 100;

  std::string raw_text;  // the config file, verbatim
};

ExperimentConfig parse_config_text(const std::string& text);

struct RunReport {
  int exit_status = 0;  // 0 ok, 1 lemma violation, 3 budget exhaustion
  std::string report_json;  // canonical bytes; deterministic for (config, seed, version)
  std::vector<std::pair<std::string, std::string>> csv_files;  // name -> content
  std::string timing_json;  // sidecar; the only timing-bearing output
};

RunReport run_experiment(const ExperimentConfig& config);

// Tidy long-format rows (fixture,n,quantity,value) extracted from a report.
std::string emit_plotdata(const std::string& report_json);

void write_run_outputs(const RunReport& report, const std::string& out_dir);

// --- randomized lemma suites ---------------------------------------------------
// Shared by the lemma-suite experiment kind and the acceptance tests. Every
// trial draws from CounterRng(seed, trial), so results are independent of
// scheduling.

struct SuiteResult {
  std::string name;
  int requested = 0;
  int completed = 0;
  std::vector<std::string> violations;
  // reported linear fits etc., already rendered as strings
  std::vector<std::pair<std::string, std::string>> notes;
};

SuiteResult reverse_inclusion_suite(const CayleyBall& tree, const CayleyBall& grid,
                                    int trials, std::uint64_t seed, int threads = 1);
SuiteResult concatenation_suite(const CayleyBall& tree, const CayleyBall& grid, int trials,
                                std::uint64_t seed, int threads = 1);
SuiteResult exit_point_suite(const CayleyBall& tree, const CayleyBall& grid, int trials,
                             int D, int ell, std::uint64_t seed, int threads = 1);
SuiteResult qg_stay_suite(const CayleyBall& tree, const CayleyBall& grid, int trials, int D,
                          std::uint64_t seed, int threads = 1);

}  // namespace morselab
