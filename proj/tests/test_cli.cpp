#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "randns/app.hpp"
#include "randns/errors.hpp"

namespace fs = std::filesystem;
using namespace randns;
using namespace randns::app;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("randns_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string config_error(RunConfig cfg) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

RunConfig small_solve(const fs::path& out) {
    RunConfig cfg;
    cfg.M = 6;
    cfg.T = 0.1;
    cfg.dt = 2e-3;
    cfg.snapshot_every = 5;
    cfg.write_every = 2;
    cfg.output = out;
    return cfg;
}

}  // namespace

TEST(Config, DefaultsAreValid) {
    RunConfig cfg;
    EXPECT_EQ(config_error(cfg), "");
    EXPECT_EQ(cfg.dim, 2);
    EXPECT_EQ(cfg.M, 32);
    EXPECT_EQ(cfg.samples, 200u);
    EXPECT_DOUBLE_EQ(cfg.dt, 2.5e-4);
}

TEST(Config, RejectionsNameTheInequality) {
    RunConfig cfg;
    cfg.alpha = 0.6;
    EXPECT_NE(config_error(cfg).find("0 < alpha < 1/2"), std::string::npos);
    cfg = RunConfig{};
    cfg.dim = 3;
    cfg.M = 8;
    EXPECT_NE(config_error(cfg).find("0 < alpha < 1/4"), std::string::npos);
    cfg.alpha = 0.2;
    EXPECT_NE(config_error(cfg).find("alpha < 1/4 + 2 gamma"), std::string::npos);
    cfg.alpha = 0.1;
    EXPECT_EQ(config_error(cfg), "");
    cfg = RunConfig{};
    cfg.alpha = 0.35;
    cfg.gamma = -0.1;
    EXPECT_NE(config_error(cfg).find("alpha < 1/2 + 2 gamma"), std::string::npos);
    cfg = RunConfig{};
    cfg.gamma = 0.0;
    EXPECT_NE(config_error(cfg).find("gamma < 0"), std::string::npos);
    cfg = RunConfig{};
    cfg.law = "cauchy";
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = RunConfig{};
    cfg.probe = "single";
    cfg.p = 6.0;
    cfg.q = 6.0;  // (0 + 0.3 + 0.1) * 6 >= 2
    EXPECT_NE(config_error(cfg).find("q < 2"), std::string::npos);
    cfg = RunConfig{};
    cfg.lambdas = {2.0, 1.0};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, SetParsesAndRejects) {
    RunConfig cfg;
    cfg.set("M", " 12 ");
    cfg.set("lambdas", "1, 2.5,4");
    cfg.set("duhamel", "no");
    EXPECT_EQ(cfg.M, 12);
    EXPECT_EQ(cfg.lambdas, (std::vector<double>{1.0, 2.5, 4.0}));
    EXPECT_FALSE(cfg.duhamel);
    EXPECT_THROW(cfg.set("M", "12x"), ConfigError);
    EXPECT_THROW(cfg.set("seed", "-1"), ConfigError);
    EXPECT_THROW(cfg.set("colour", "red"), ConfigError);
}

TEST(Config, FilesEnvAndFlagsInOrder) {
    const fs::path dir = scratch("precedence");
    {
        std::ofstream ini(dir / "run.ini");
        ini << "seed = 4\n[run]\nM = 12\nalpha = 0.2\n[solve]\nM = 16\n[tail]\nM = 20\n";
    }
    setenv("RANDNS_WORKERS", "3", 1);
    setenv("RANDNS_OUTPUT_DIR", (dir / "env_out").c_str(), 1);
    RunConfig a = load_config("solve", dir / "run.ini", {});
    EXPECT_EQ(a.M, 16);
    EXPECT_EQ(a.seed, 4u);
    EXPECT_DOUBLE_EQ(a.alpha, 0.2);
    EXPECT_EQ(a.workers, 3);
    EXPECT_EQ(a.output, dir / "env_out");
    RunConfig b = load_config("tail", dir / "run.ini", {{"M", "8"}, {"workers", "2"}, {"output", "flag_out"}});
    EXPECT_EQ(b.M, 8);
    EXPECT_EQ(b.workers, 2);
    EXPECT_EQ(b.output, "flag_out");
    unsetenv("RANDNS_WORKERS");
    unsetenv("RANDNS_OUTPUT_DIR");
    EXPECT_EQ(load_config("randomize", dir / "run.ini", {}).M, 12);
    EXPECT_THROW(load_config("solve", dir / "missing.ini", {}), ConfigError);
}

TEST(Config, EchoReproducesConfig) {
    RunConfig cfg;
    cfg.M = 10;
    cfg.dt = 1e-3 / 3;
    cfg.lambdas = {0.5, 1.5};
    cfg.workers = 7;
    cfg.output = "somewhere";
    const auto j = cfg.to_json();
    EXPECT_FALSE(j.contains("workers"));
    EXPECT_FALSE(j.contains("output"));
    RunConfig back;
    for (const auto& [k, v] : j.items()) {
        if (v.is_string()) back.set(k, v.get<std::string>());
        else if (v.is_array()) {
            std::string s;
            for (const auto& x : v) s += format_double(x.get<double>()) + ",";
            back.set(k, s);
        } else if (v.is_boolean()) back.set(k, v.get<bool>() ? "true" : "false");
        else if (v.is_number_float()) back.set(k, format_double(v.get<double>()));
        else back.set(k, v.dump());
    }
    EXPECT_EQ(back.to_json(), j);
}

TEST(Artifacts, TraceCsvRoundTrip) {
    const fs::path dir = scratch("trace");
    RunConfig cfg = small_solve(dir);
    ASSERT_EQ(run_solve(cfg), kExitOk);
    const EnergyTrace tr = read_trace_csv(dir / "trace.csv");
    write_trace_csv(dir / "again.csv", tr);
    EXPECT_EQ(slurp(dir / "trace.csv"), slurp(dir / "again.csv"));
    EXPECT_EQ(tr.rows(), 51u);
    EXPECT_GT(tr.duhamel_residual, 0.0);
    EXPECT_LT(tr.duhamel_residual, 1e-3);
    const auto header = slurp(dir / "trace.csv").substr(0, 100);
    EXPECT_EQ(header.rfind("t,l2sq_w,grad_sq,cum_enstrophy,energy_E,energy_E_half,dwdt_hm1,dual_rate_p,g_L4,", 0),
              0u);
}

TEST(Artifacts, SolveIsIdempotent) {
    const fs::path a = scratch("idem_a"), b = scratch("idem_b");
    ASSERT_EQ(run_solve(small_solve(a)), kExitOk);
    ASSERT_EQ(run_solve(small_solve(b)), kExitOk);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), a);
        EXPECT_EQ(slurp(e.path()), slurp(b / rel)) << rel;
        ++files;
    }
    EXPECT_GT(files, 5u);
}

TEST(Artifacts, TailByteIdenticalAcrossWorkers) {
    std::string json1, csv1;
    for (int workers : {1, 4}) {
        const fs::path dir = scratch("tail_" + std::to_string(workers));
        RunConfig cfg;
        cfg.M = 5;
        cfg.samples = 120;
        cfg.probe_points = 60;
        cfg.workers = workers;
        cfg.output = dir;
        ASSERT_EQ(run_tail(cfg), kExitOk);
        if (workers == 1) {
            json1 = slurp(dir / "tail.json");
            csv1 = slurp(dir / "tail_norms.csv");
        } else {
            EXPECT_EQ(slurp(dir / "tail.json"), json1);
            EXPECT_EQ(slurp(dir / "tail_norms.csv"), csv1);
        }
    }
    const auto j = nlohmann::json::parse(json1);
    EXPECT_EQ(j["n_samples"], 120);
    EXPECT_EQ(j["lambda"].size(), 12u);
    EXPECT_EQ(j["config"]["samples"], 120);
}

TEST(Artifacts, BlowUpKeepsPartialOutput) {
    const fs::path dir = scratch("blowup");
    RunConfig cfg = small_solve(dir);
    cfg.amplitude = 1e4;
    EXPECT_EQ(run_solve(cfg), kExitNumerical);
    const auto j = read_json(dir / "solve.json");
    EXPECT_FALSE(j["completed"].get<bool>());
    EXPECT_NE(j["failure"].get<std::string>().find("blow-up"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "trace.csv"));
    EXPECT_THROW(run_check(cfg, {dir, {}, {}}), NumericalFailure);
}

TEST(Commands, CheckWithRefinementAndCompare) {
    const fs::path a = scratch("chk_a"), b = scratch("chk_b"), c = scratch("chk_c"), out = scratch("chk_out");
    ASSERT_EQ(run_solve(small_solve(a)), kExitOk);
    RunConfig fine = small_solve(b);
    fine.dt = 1e-3;
    ASSERT_EQ(run_solve(fine), kExitOk);
    RunConfig pert = small_solve(c);
    pert.initial = "taylor-green";
    pert.initial_scale = 1e-6;
    ASSERT_EQ(run_solve(pert), kExitOk);
    RunConfig cfg;
    cfg.output = out;
    EXPECT_EQ(run_check(cfg, {a, {b}, c}), kExitOk);
    const auto j = read_json(out / "check.json");
    for (const char* key : {"pass", "sup_E", "envelope_margin", "rate_norm", "refinement_delta"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_LT(j["refinement_delta"].get<double>(), 0.1);
    EXPECT_TRUE(j["gronwall"]["within"].get<bool>());
    EXPECT_THROW(run_check(cfg, {a, {}, b}), std::invalid_argument);  // different dt, different times
}

TEST(Commands, RandomizeHeatProbeRegression) {
    const fs::path dir = scratch("misc");
    RunConfig cfg;
    cfg.M = 8;
    cfg.probe_points = 80;
    cfg.output = dir;
    EXPECT_EQ(run_randomize(cfg), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "f_omega.snsf"));
    const auto r = read_json(dir / "randomize.json");
    EXPECT_GT(r["norms"]["f_omega_h_minus_alpha"].get<double>(), 0.0);
    EXPECT_EQ(run_heat_probe(cfg), kExitOk);
    EXPECT_EQ(read_json(dir / "heat_probe.json")["deterministic"].size(), 2u);
    EXPECT_EQ(run_regression(cfg), kExitOk);
    const auto g = read_json(dir / "regression.json");
    for (const auto& s : g["suites"]) EXPECT_LE(s["l2_error"].get<double>(), 1e-8);
}

TEST(Binary, ExitCodesAndErrorJson) {
    const fs::path dir = scratch("binary");
    const std::string exe = RANDNS_CLI_PATH;
    auto run = [&](const std::string& args) {
        const int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    EXPECT_EQ(run("solve --alpha 0.6 --output " + (dir / "bad").string()), kExitConfig);
    const auto err = read_json(dir / "bad" / "error.json");
    EXPECT_EQ(err["error"], "config");
    EXPECT_NE(err["message"].get<std::string>().find("0 < alpha < 1/2"), std::string::npos);
    EXPECT_EQ(run("solve --no-such-flag"), kExitConfig);
    EXPECT_EQ(run("solve --M 6 --T 0.05 --dt 1e-3 -s amplitude=1e4 --output " + (dir / "blow").string()),
              kExitNumerical);
    EXPECT_EQ(run("regression --output " + (dir / "reg").string()), kExitOk);
}
