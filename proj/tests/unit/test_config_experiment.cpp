// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cirauth/experiment.hpp"

using namespace cirauth;

TEST_SUITE_BEGIN("config");

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::path(CIRAUTH_TEST_TMP) / name).string();
}

std::string slurp_text(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config files parse with comments and whitespace") {
    const std::string path = tmp_path("exp.conf");
    {
        std::ofstream out(path);
        out << "# experiment settings\n";
        out << "scenario=mobile\n";
        out << "model=tb_ae   # trailing comment\n";
        out << "seed=17\n";
        out << "eve_interval=3\n";
        out << "kl2_weight=0.25\n";
        out << "\n";
        out << "hz_list=8:4,16:8\n";
    }
    const ExperimentConfig cfg = parse_config(path, {});
    CHECK(cfg.scenario == "mobile");
    CHECK(cfg.model == ModelKind::TbAe);
    CHECK(cfg.seed == 17);
    CHECK(cfg.eve_interval == 3);
    CHECK(cfg.kl2_weight == doctest::Approx(0.25));
    REQUIRE(cfg.hz_list.size() == 2);
    CHECK(cfg.hz_list[1].first == 16);
    CHECK(cfg.hz_list[1].second == 8);
}

TEST_CASE("flags override file values") {
    const std::string path = tmp_path("exp2.conf");
    {
        std::ofstream out(path);
        out << "seed=17\nmodel=tf_ae\n";
    }
    const ExperimentConfig cfg = parse_config(path, {{"seed", "99"}, {"alpha", "0.75"}});
    CHECK(cfg.seed == 99);
    CHECK(cfg.model == ModelKind::TfAe);
    CHECK(cfg.alpha == doctest::Approx(0.75));
}

TEST_CASE("unknown keys and malformed values are named") {
    CHECK_THROWS_WITH_AS(parse_config("", {{"no_such_key", "1"}}),
                         doctest::Contains("no_such_key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("", {{"seed", "abc"}}), doctest::Contains("seed"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("", {{"model", "bogus"}}), doctest::Contains("bogus"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("", {{"scenario", "space"}}), doctest::Contains("scenario"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config(tmp_path("missing.conf"), {}), ConfigError);
}

TEST_CASE("the echoed config re-parses to the same settings") {
    ExperimentConfig cfg = parse_config("", {{"scenario", "mobile"},
                                             {"model", "tf_vae"},
                                             {"seed", "5"},
                                             {"kl_mode", "exact"},
                                             {"feature_mode", "reim"},
                                             {"f_alice", "2"},
                                             {"f_eve", "1"},
                                             {"seed_list", "1,2,3"}});
    std::ostringstream echo;
    cfg.echo(echo);
    const std::string path = tmp_path("echo.conf");
    {
        std::ofstream out(path);
        out << echo.str();
    }
    const ExperimentConfig back = parse_config(path, {});
    CHECK(back.scenario == cfg.scenario);
    CHECK(back.model == cfg.model);
    CHECK(back.kl_mode == cfg.kl_mode);
    CHECK(back.feature_mode == cfg.feature_mode);
    CHECK(back.alpha_from_rates);
    CHECK(back.seed_list == cfg.seed_list);
    CHECK(back.protocol_config().auth.effective_alpha() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("split validation guards runs") {
    ExperimentConfig cfg;
    cfg.samples_per_node = 10;
    cfg.train_per_node = 10;
    CHECK_THROWS_AS(cfg.validate_for_run(), ConfigError);
    cfg.train_per_node = 8;
    CHECK_NOTHROW(cfg.validate_for_run());
}

namespace {

ExperimentConfig small_run(const std::string& out_name) {
    ExperimentConfig cfg;
    cfg.scenario = "static";
    cfg.seed = 51;
    cfg.samples_per_node = 6;
    cfg.train_per_node = 4;
    cfg.test_per_node = 2;
    cfg.h = 16;
    cfg.z = 8;
    cfg.kl2_weight = 0.001;
    cfg.kl3_weight = 0.001;
    cfg.epochs = 4;
    cfg.learning_rate = 0.005;
    cfg.out_dir = (std::filesystem::path(CIRAUTH_TEST_TMP) / out_name).string();
    return cfg;
}

}  // namespace

TEST_CASE("experiments write the full artifact set") {
    const ExperimentConfig cfg = small_run("run_a");
    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.report.per_node.size() == 44);
    namespace fs = std::filesystem;
    const fs::path out(cfg.out_dir);
    for (const char* name : {"config_effective.txt", "dataset.cir", "model.hvae",
                             "loss_history.csv", "per_node_f1.csv", "report.csv", "summary.csv"}) {
        CHECK_MESSAGE(fs::exists(out / name), name);
    }
    const std::string summary = slurp_text((out / "summary.csv").string());
    CHECK(summary.find("model,seed,scenario") == 0);
    CHECK(summary.find("tf_hvae,51,static") != std::string::npos);
    const std::string per_node = slurp_text((out / "per_node_f1.csv").string());
    CHECK(per_node.find("node_id,distance_to_alice,f1") == 0);
    const std::string report_csv = slurp_text((out / "report.csv").string());
    CHECK(report_csv.find("node_id,score,decision,ground_truth") == 0);
    CHECK(report_csv.find("# average_f1") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    const ExperimentConfig a = small_run("run_b1");
    const ExperimentConfig b = small_run("run_b2");
    run_experiment(a);
    run_experiment(b);
    for (const char* name :
         {"dataset.cir", "model.hvae", "loss_history.csv", "per_node_f1.csv", "report.csv"}) {
        const std::string lhs = slurp_text((std::filesystem::path(a.out_dir) / name).string());
        const std::string rhs = slurp_text((std::filesystem::path(b.out_dir) / name).string());
        CHECK_MESSAGE(lhs == rhs, name);
    }
}

TEST_CASE("threshold baseline adds its sweep artifact") {
    ExperimentConfig cfg = small_run("run_tb");
    cfg.model = ModelKind::TbAe;
    cfg.threshold_points = 25;
    run_experiment(cfg);
    const std::string curve =
        slurp_text((std::filesystem::path(cfg.out_dir) / "threshold_sweep.csv").string());
    CHECK(curve.find("threshold,f1") == 0);
    // header + 25 grid rows
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 26);
}

TEST_CASE("sweeps expand list axes and aggregate") {
    ExperimentConfig cfg = small_run("run_sweep");
    cfg.scenario = "mobile";
    cfg.eve_interval_list = {1, 2};
    cfg.seed_list = {51, 52};
    const SweepResult result = run_sweep(cfg);
    CHECK(result.rows.size() == 4);
    const std::string summary =
        slurp_text((std::filesystem::path(cfg.out_dir) / "sweep_summary.csv").string());
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 5);
    const std::string intervals =
        slurp_text((std::filesystem::path(cfg.out_dir) / "interval_sweep.csv").string());
    CHECK(intervals.find("model,eve_interval") == 0);
    CHECK(std::count(intervals.begin(), intervals.end(), '\n') == 3);

    // Mean over seeds matches the row data.
    double sum = 0.0;
    for (const auto& row : result.rows) {
        if (row.eve_interval == 1) sum += row.average_f1;
    }
    std::stringstream ss(intervals);
    std::string line;
    std::getline(ss, line);
    std::getline(ss, line);
    const double mean = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(mean == doctest::Approx(sum / 2.0));
}

TEST_CASE("file scenarios load datasets instead of generating") {
    const ExperimentConfig gen_cfg = small_run("run_file_src");
    run_experiment(gen_cfg);
    ExperimentConfig cfg = small_run("run_file");
    cfg.scenario =
        "file:" + (std::filesystem::path(gen_cfg.out_dir) / "dataset.cir").string();
    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.report.per_node.size() == 44);
    CHECK_FALSE(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / "dataset.cir"));
}

TEST_SUITE_END();
