#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "webrec/errors.hpp"
#include "webrec/harness.hpp"

using namespace webrec;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("webrec_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.master_seed = 7;
  cfg.n_realisations = 4;
  cfg.n_time = 101;
  cfg.n_r = 50;
  cfg.deltas = {0.0, 0.05};
  cfg.families = {"se"};
  cfg.weights = {1.0};
  cfg.n_grid = 200;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config file parsing") {
  const fs::path dir = temp_dir("cfg");
  const fs::path path = dir / "exp.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "[experiment]\n"
        << "master_seed = 11\n"
        << "n_realisations = 3\n"
        << "n_time = 101\n"
        << "deltas = 0, 0.05\n"
        << "transfer = klo_to_sg\n"
        << "\n[profiles]\n"
        << "families = se, hybrid\n"
        << "weights = 2, 1\n"
        << "hybrid_n_rect = 3\n"
        << "\n[klo_inverse]\n"
        << "n_r = 64\n"
        << "x_min = 0.08\n";
  }
  const ExperimentConfig cfg = parse_config_file(path.string());
  CHECK(cfg.master_seed == 11);
  CHECK(cfg.n_realisations == 3);
  CHECK(cfg.transfer == TransferDirection::KloToSg);
  CHECK(cfg.deltas == std::vector<double>{0.0, 0.05});
  CHECK(cfg.families == std::vector<std::string>{"se", "hybrid"});
  CHECK(cfg.weights == std::vector<double>{2.0, 1.0});
  CHECK(cfg.hybrid_spec.hybrid.n_rect == 3);
  CHECK(cfg.n_r == 64);
  CHECK(cfg.x_min == 0.08);

  SUBCASE("unknown keys fail fast") {
    std::ofstream out(path, std::ios::app);
    out << "typo_key = 1\n";
    out.close();
    CHECK_THROWS_WITH_AS(parse_config_file(path.string()),
                         doctest::Contains("klo_inverse.typo_key"), ParamError);
  }
}

TEST_CASE("single uniform realisation is reconstructed by both methods") {
  ExperimentConfig cfg = small_config();
  cfg.n_realisations = 1;
  cfg.deltas = {0.0};
  cfg.families = {"uniform"};
  const ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.errors.size() == 2);
  for (const auto& r : res.errors) CHECK(r.l2_rel < 1e-2);
  REQUIRE(res.reports.size() == 4);
  for (const auto& rep : res.reports) {
    CHECK(rep.n == 1);
    CHECK(rep.degenerate);
  }
}

TEST_CASE("reruns are identical and independent of the worker count") {
  const ExperimentConfig cfg = small_config();
  const fs::path d1 = temp_dir("det1"), d2 = temp_dir("det2"), d4 = temp_dir("det4");
  ExperimentConfig c1 = cfg;
  c1.jobs = 1;
  write_experiment_outputs(run_experiment(c1), c1, d1.string());
  write_experiment_outputs(run_experiment(c1), c1, d2.string());
  ExperimentConfig c4 = cfg;
  c4.jobs = 4;
  write_experiment_outputs(run_experiment(c4), c4, d4.string());

  const std::string e1 = slurp(d1 / "errors.csv");
  CHECK(e1 == slurp(d2 / "errors.csv"));
  CHECK(e1 == slurp(d4 / "errors.csv"));
  CHECK(slurp(d1 / "table8.csv") == slurp(d4 / "table8.csv"));
  CHECK(!e1.empty());
}

TEST_CASE("pairing integrity of the error records") {
  const ExperimentConfig cfg = small_config();
  const ExperimentResult res = run_experiment(cfg);
  // every (realisation, delta) appears exactly once per method
  for (const auto& a : res.errors) {
    int mates = 0;
    for (const auto& b : res.errors)
      if (a.realisation == b.realisation && a.delta == b.delta && a.method != b.method)
        ++mates;
    CHECK(mates == 1);
  }
  CHECK(res.errors.size() == 2 * cfg.deltas.size() * static_cast<std::size_t>(
                                 cfg.n_realisations - static_cast<int>(res.failures.size())));
}

TEST_CASE("klo-to-sg direction runs the same contract") {
  ExperimentConfig cfg = small_config();
  cfg.transfer = TransferDirection::KloToSg;
  cfg.n_realisations = 2;
  const ExperimentResult res = run_experiment(cfg);
  CHECK(res.failures.empty());
  CHECK(res.errors.size() == 8);  // 2 realisations x 2 deltas x 2 methods
}

TEST_CASE("mixture weights choose the generator deterministically") {
  ExperimentConfig cfg = small_config();
  cfg.families = {"se", "matern", "hybrid"};
  cfg.weights = {1.0, 1.0, 1.0};
  cfg.n_realisations = 9;
  cfg.deltas = {0.0};
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  REQUIRE(a.errors.size() == b.errors.size());
  bool seen_non_se = false;
  for (std::size_t i = 0; i < a.errors.size(); ++i) {
    CHECK(a.errors[i].generator == b.errors[i].generator);
    seen_non_se |= a.errors[i].generator != "se";
  }
  CHECK(seen_non_se);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  cfg.fine_ratio = 1;
  CHECK_THROWS_AS(run_experiment(cfg), ParamError);
  cfg = small_config();
  cfg.n_time = 100;  // even
  CHECK_THROWS_AS(run_experiment(cfg), ParamError);
  cfg = small_config();
  cfg.deltas = {-0.1};
  CHECK_THROWS_AS(run_experiment(cfg), ParamError);
  cfg = small_config();
  cfg.families = {"se"};
  cfg.weights = {1.0, 2.0};
  CHECK_THROWS_AS(run_experiment(cfg), ParamError);
}

}  // TEST_SUITE
