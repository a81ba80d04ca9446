#include "morselab/experiment.hpp"

#include "doctest.h"
#include "json.hpp"

using namespace morselab;

TEST_CASE("config parsing: happy path and errors") {
  auto cfg = parse_config_text(
      "# demo\n"
      "kind=profile\n"
      "group=abelian(a,b)\n"
      "radius=8\n"
      "seed=7\n"
      "path=a a a a\n"
      "grid=(1,0);(3,0)\n");
  CHECK(cfg.kind == "profile");
  CHECK(cfg.radius == 8);
  CHECK(cfg.seed == 7);
  CHECK(cfg.grid.size() == 2);
  CHECK(cfg.grid[1].lambda == Rat(3));

  CHECK_THROWS_AS(parse_config_text("kind=profile\nwhatnot=3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("group=free(a,b)\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("kind=dance\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("kind=profile\ngrid=(0,1)\n"), ConfigError);
}

TEST_CASE("profile experiment: exact cells, csv, empty grid") {
  auto cfg = parse_config_text(
      "kind=profile\ngroup=abelian(a,b)\nradius=16\nseed=1\npath=a a a a\n"
      "grid=(1,0);(3,0)\n");
  auto run = run_experiment(cfg);
  CHECK(run.exit_status == 0);
  auto report = nlohmann::json::parse(run.report_json);
  CHECK(report["schema"] == "report/v1");
  CHECK(report["summary"]["all_exact"] == true);
  REQUIRE(report["items"].size() == 2);
  CHECK(report["items"][1]["mu_star"] == "4");  // mu*(3,0) of the length-4 axis segment
  REQUIRE(run.csv_files.size() == 1);
  CHECK(run.csv_files[0].first == "profile.csv");
  CHECK(run.csv_files[0].second.find("3,0,4,1,") != std::string::npos);

  auto empty = parse_config_text(
      "kind=profile\ngroup=abelian(a,b)\nradius=6\nseed=1\npath=a a\ngrid=\n");
  auto empty_run = run_experiment(empty);
  CHECK(empty_run.exit_status == 0);
  CHECK(nlohmann::json::parse(empty_run.report_json)["items"].empty());
}

TEST_CASE("middle experiment emits growth rows and plot data") {
  auto cfg = parse_config_text(
      "kind=middle\ngroup=abelian(a,b)\nradius=16\nseed=1\nlengths=4,8\nt=1/4\nc=2\n");
  auto run = run_experiment(cfg);
  CHECK(run.exit_status == 0);
  auto report = nlohmann::json::parse(run.report_json);
  REQUIRE(report["items"].size() == 2);
  CHECK(report["items"][0]["m_hat"] == "1");
  CHECK(report["items"][1]["m_hat"] == "2");
  std::string plot = emit_plotdata(run.report_json);
  CHECK(plot.find("abelian(a,b),4,m_hat(t=1/4,c=2),1") != std::string::npos);
  CHECK(plot.find("abelian(a,b),8,m_hat(t=1/4,c=2),2") != std::string::npos);
}

TEST_CASE("counterexample experiment: wedge(20) passes, a short cycle is detected") {
  auto cfg = parse_config_text(
      "kind=counterexample\ngroup=wedge(20)\nradius=10\nseed=1\nD=9\n");
  auto run = run_experiment(cfg);
  CHECK(run.exit_status == 0);
  auto report = nlohmann::json::parse(run.report_json);
  CHECK(report["summary"]["certified"] == true);
  CHECK(report["summary"]["global_fit_absent"] == true);
  CHECK(report["items"][0]["mu_fix"] == "7");

  // a 6-cycle is short enough to fit inside the kappa budget, so it is not a
  // counterexample and the run reports the violation loudly
  auto short_cfg = parse_config_text(
      "kind=counterexample\ngroup=wedge(6)\nradius=3\nseed=1\nD=2\n");
  auto short_run = run_experiment(short_cfg);
  CHECK(short_run.exit_status == 1);
  auto short_report = nlohmann::json::parse(short_run.report_json);
  CHECK(short_report["violations"].size() == 1);

  auto bad = parse_config_text("kind=counterexample\ngroup=free(a,b)\nradius=4\nseed=1\n");
  CHECK_THROWS_AS(run_experiment(bad), ConfigError);
}

TEST_CASE("lemma-suite: small run is clean") {
  auto cfg = parse_config_text(
      "kind=lemma-suite\ngroup=free(a,b)\nradius=6\nseed=20240817\ntrials=40\n"
      "exit_d=1\nell=2\n");
  auto run = run_experiment(cfg);
  auto report = nlohmann::json::parse(run.report_json);
  CAPTURE(run.report_json);
  CHECK(run.exit_status == 0);
  CHECK(report["violations"].empty());
  REQUIRE(report["items"].size() == 4);
  for (const auto& item : report["items"]) CHECK(item["completed"] == item["requested"]);
}

TEST_CASE("byte-identical reports across thread counts") {
  std::string base =
      "kind=lemma-suite\ngroup=free(a,b)\nradius=6\nseed=99\ntrials=24\nexit_d=1\nell=2\n";
  auto cfg1 = parse_config_text(base + "threads=1\n");
  auto cfg3 = parse_config_text(base + "threads=3\n");
  // identical config text except the threads line, which is not echoed into
  // any item; normalize the echo by setting raw_text equal
  cfg1.raw_text = base;
  cfg3.raw_text = base;
  auto r1 = run_experiment(cfg1);
  auto r3 = run_experiment(cfg3);
  CHECK(r1.report_json == r3.report_json);
  REQUIRE(r1.csv_files.size() == r3.csv_files.size());
  for (size_t i = 0; i < r1.csv_files.size(); ++i) {
    CHECK(r1.csv_files[i].first == r3.csv_files[i].first);
    CHECK(r1.csv_files[i].second == r3.csv_files[i].second);
  }
}

TEST_CASE("catalog and certify experiment kinds") {
  auto cat_cfg = parse_config_text(
      "kind=catalog\ngroup=free(a,b)\nradius=6\nseed=1\nD=3\nlocal=(1,0)\nweak=(3,0)\nmu=1\n");
  auto cat_run = run_experiment(cat_cfg);
  CHECK(cat_run.exit_status == 0);
  REQUIRE(cat_run.csv_files.size() == 1);
  CHECK(cat_run.csv_files[0].first == "catalog.txt");
  CHECK(cat_run.csv_files[0].second.find("catalog/v1") == 0);

  auto cert_cfg = parse_config_text(
      "kind=certify\ngroup=free(a,b)\nradius=6\nseed=1\nD=3\nlocal=(1,0)\nweak=(3,0)\nmu=1\n"
      "path=a b a b a\n");
  auto cert_run = run_experiment(cert_cfg);
  CHECK(cert_run.exit_status == 0);
  auto report = nlohmann::json::parse(cert_run.report_json);
  CHECK(report["summary"]["overall"] == "certified");
  bool has_cert_file = false;
  for (auto& [name, content] : cert_run.csv_files)
    if (name == "certificate.json") {
      has_cert_file = true;
      auto cert = nlohmann::json::parse(content);
      CHECK(cert["overall"] == "certified");
      CHECK(cert["fitted_params"]["lambda"] == "1");
      CHECK(cert["hausdorff"] == "0");
    }
  CHECK(has_cert_file);
}
