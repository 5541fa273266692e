#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nrperc/experiments/runner.hpp"

using namespace nrperc;
using namespace nrperc::experiments;

namespace {

json minimal(const std::string& experiment) {
    return json{{"version", 1}, {"experiment", experiment}, {"n_grid", {1000}}};
}

}  // namespace

TEST(Config, ParsesMinimalConfigWithDefaults) {
    const auto c = config_from_json(minimal("multi_giant"));
    EXPECT_EQ(c.experiment, Experiment::multi_giant);
    EXPECT_EQ(c.tau, 2.5);
    EXPECT_EQ(c.replicas, 1);
    EXPECT_EQ(c.effective_mode(), PercolationMode::multi);
    EXPECT_EQ(config_from_json(minimal("core_giant")).effective_mode(), PercolationMode::single);
}

TEST(Config, RoundTripsThroughJson) {
    auto j = minimal("exploration_limit");
    j["T"] = 3.0;
    j["lambda_rule"] = {{"kind", "log_power"}, {"value", 0.5}};
    j["replicas"] = 7;
    const auto c = config_from_json(j);
    const auto c2 = config_from_json(to_json(c));
    EXPECT_EQ(to_json(c), to_json(c2));
    EXPECT_EQ(*c2.T, 3.0);
    EXPECT_EQ(c2.lambda_rule.kind_name(), "log_power");
}

TEST(Config, FailsClosed) {
    auto j = minimal("multi_giant");
    j["replica"] = 3;
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = minimal("multi_giant");
    j["version"] = 2;
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = minimal("multi_giant");
    j.erase("version");
    EXPECT_THROW(config_from_json(j), ConfigError);
    EXPECT_THROW(config_from_json(minimal("giant")), ConfigError);
    j = minimal("multi_giant");
    j["lambda_rule"] = {{"kind", "power"}, {"value", 0.1}, {"extra", 1}};
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = minimal("multi_giant");
    j["tau"] = "2.5";
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = minimal("multi_giant");
    j["tau"] = 3.5;
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = minimal("multi_giant");
    j["n_grid"] = {1000, 100};
    EXPECT_THROW(config_from_json(j), ConfigError);
    j = minimal("multi_giant");
    j["replicas"] = 0;
    EXPECT_THROW(config_from_json(j), ConfigError);
}

TEST(Config, InfeasibleScheduleRejectedBeforeSampling) {
    auto j = minimal("multi_giant");
    j["n_grid"] = {10000};
    j["lambda_rule"] = {{"kind", "constant"}, {"value", 100.0}};
    try {
        (void)config_from_json(j);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("rejected before sampling"), std::string::npos);
    }
}

TEST(Config, LoadFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "nrperc_cfg_test.json";
    {
        std::ofstream out(path);
        out << minimal("residual_components").dump();
    }
    EXPECT_EQ(load_config(path.string()).experiment, Experiment::residual_components);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path.string()), ConfigError);
}

TEST(Runner, SingleReplicaTinyGraph) {
    ExperimentConfig c;
    c.n_grid = {10};
    c.replicas = 1;
    const auto r = execute(c);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].n, 10);
    EXPECT_EQ(r.records[0].seed, derive_seed(c.master_seed, 10, 0));
    EXPECT_FALSE(r.records[0].runtime_seconds.has_value());
    const auto t = summarize(r);
    EXPECT_EQ(t.at(10, "giant").count, 1);
    EXPECT_EQ(t.at(10, "giant").std, 0.0);
}

TEST(Runner, RecordsOrderedAndSeeded) {
    ExperimentConfig c;
    c.n_grid = {200, 400};
    c.replicas = 3;
    c.master_seed = 99;
    const auto r = execute(c);
    ASSERT_EQ(r.records.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(r.records[i].n, i < 3 ? 200 : 400);
        EXPECT_EQ(r.records[i].replica, static_cast<std::int64_t>(i % 3));
        EXPECT_EQ(r.records[i].seed, derive_seed(99, r.records[i].n, i % 3));
    }
}

TEST(Runner, DeterministicAcrossRunsAndThreads) {
    for (auto e : {Experiment::multi_giant, Experiment::exploration_limit, Experiment::core_giant,
                   Experiment::single_vs_multi, Experiment::residual_components}) {
        ExperimentConfig c;
        c.experiment = e;
        c.n_grid = {2000, 5000};
        c.replicas = 6;
        c.master_seed = 17;
        const std::string one = render(execute(c), OutputFormat::json);
        EXPECT_EQ(one, render(execute(c), OutputFormat::json)) << to_string(e);
        c.threads = 4;
        EXPECT_EQ(one, render(execute(c), OutputFormat::json)) << to_string(e);
    }
}

TEST(Runner, TimingOnlyWhenRequested) {
    ExperimentConfig c;
    c.n_grid = {100};
    c.record_timing = true;
    const auto r = execute(c);
    ASSERT_TRUE(r.records[0].runtime_seconds.has_value());
    EXPECT_GE(*r.records[0].runtime_seconds, 0.0);
    EXPECT_EQ(summarize(r).at(100, "runtime_seconds").count, 1);
}

TEST(Runner, SingleVsMultiRequiresSingleMode) {
    ExperimentConfig c;
    c.n_grid = {1000};
    c.mode = PercolationMode::multi;
    EXPECT_THROW(single_vs_multi_suite(c), ConfigError);
    c.mode.reset();
    const auto r = single_vs_multi_suite(c);
    for (const auto& rec : r.records) EXPECT_GE(rec.stats.at("diff_over_beta"), 0.0);
}

TEST(Summary, ConstantRecordsAndEmptyResult) {
    ExperimentResult r;
    for (int i = 0; i < 5; ++i) r.records.push_back(Record{100, i, 0, {{"x", 2.5}}, std::nullopt});
    const auto t = summarize(r);
    const auto& a = t.at(100, "x");
    EXPECT_EQ(a.count, 5);
    EXPECT_EQ(a.mean, 2.5);
    EXPECT_EQ(a.std, 0.0);
    EXPECT_EQ(a.q05, 2.5);
    EXPECT_EQ(a.q95, 2.5);
    EXPECT_THROW(t.at(200, "x"), RangeError);
    EXPECT_THROW(t.at(100, "y"), RangeError);
    EXPECT_THROW(summarize(ExperimentResult{}), DomainError);
}

TEST(Summary, AggregateQuantiles) {
    const auto a = aggregate({4, 1, 3, 2, 5});
    EXPECT_EQ(a.median, 3);
    EXPECT_EQ(a.min, 1);
    EXPECT_EQ(a.max, 5);
    EXPECT_DOUBLE_EQ(a.q25, 2);
    EXPECT_DOUBLE_EQ(a.q95, 4.8);
    EXPECT_DOUBLE_EQ(a.std, std::sqrt(2.5));
    EXPECT_THROW(aggregate({}), DomainError);
}

TEST(Summary, LogLogSlope) {
    EXPECT_NEAR(loglog_slope({0.5, 0.25, 0.125}, {1, 0.5, 0.25}), 1.0, 1e-12);
    EXPECT_THROW(loglog_slope({1}, {1}), DomainError);
    EXPECT_THROW(loglog_slope({1, 2}, {1, -1}), DomainError);
}

TEST(Summary, SlopeTrendFromRepeatFraction) {
    ExperimentResult r;
    r.records.push_back(Record{1, 0, 0, {{"pi_n", 0.1}, {"repeat_fraction", 0.3}}, std::nullopt});
    r.records.push_back(Record{2, 0, 0, {{"pi_n", 0.01}, {"repeat_fraction", 0.03}}, std::nullopt});
    EXPECT_NEAR(summarize(r).trends.at("slope_vs_pi"), 1.0, 1e-12);
}

TEST(TheoryTables, ReferenceRowAndTrends) {
    ExperimentConfig c;
    c.experiment = Experiment::theory_tables;
    c.a = 1.0;
    const auto r = execute(c);
    EXPECT_TRUE(r.records.empty());
    const auto& k = r.theory.at("constants");
    EXPECT_NEAR(k.at("kappa").get<double>(), 1.772454, 1e-6);
    EXPECT_NEAR(k.at("mu").get<double>(), 3.0, 1e-12);
    EXPECT_NEAR(k.at("zeta").get<double>(), 9.424778, 1e-6);
    EXPECT_NEAR(k.at("rho_star_inf").get<double>(), 3.141593, 1e-6);
    const auto& table = r.theory.at("a_table");
    ASSERT_EQ(table.size(), 6u);
    for (std::size_t i = 1; i < table.size(); ++i) {
        EXPECT_GT(table[i].at("zeta_a").get<double>(), table[i - 1].at("zeta_a").get<double>());
        EXPECT_GT(table[i].at("scaled_rho_star_a").get<double>(),
                  table[i - 1].at("scaled_rho_star_a").get<double>());
    }
    const auto& norms = r.theory.at("operator_norms");
    ASSERT_EQ(norms.size(), 6u);
    for (std::size_t i = 1; i < norms.size(); ++i) {
        EXPECT_GT(norms[i].at("operator_norm").get<double>(),
                  norms[i - 1].at("operator_norm").get<double>());
    }
    const std::string csv = render(r, OutputFormat::csv);
    EXPECT_EQ(csv.rfind("a,rho_star_a,scaled_rho_star_a,zeta_a,rho_a_mean\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Output, JsonShapeAndCsvSummary) {
    ExperimentConfig c;
    c.experiment = Experiment::repeat_fraction;
    c.n_grid = {1000, 4000};
    c.replicas = 2;
    const auto r = execute(c);
    const auto j = json::parse(render(r, OutputFormat::json));
    for (const char* key : {"version", "config", "records", "aggregates", "theory"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j.at("records").size(), 4u);
    EXPECT_TRUE(j.at("aggregates").at("trends").contains("slope_vs_pi"));
    const std::string csv = render(r, OutputFormat::csv);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "n,stat,count,mean,median,std,min,max,q05,q25,q75,q95,target");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 12);
        ++rows;
    }
    EXPECT_EQ(rows, 2 * 3);
}

TEST(Output, AtomicWrite) {
    const auto dir = std::filesystem::temp_directory_path() / "nrperc_atomic_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "out.json").string();
    write_atomically(path, "first");
    write_atomically(path, "second");
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(s, "second");
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    EXPECT_THROW(write_atomically((dir / "missing" / "x.json").string(), "x"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST(Output, RunWritesConfiguredPath) {
    const auto path = std::filesystem::temp_directory_path() / "nrperc_run_test.csv";
    ExperimentConfig c;
    c.n_grid = {500};
    c.output_path = path.string();
    c.output_format = OutputFormat::csv;
    (void)run(c);
    ASSERT_TRUE(std::filesystem::exists(path));
    std::filesystem::remove(path);
}
