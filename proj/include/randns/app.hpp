#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "randns/galerkin.hpp"
#include "randns/heatflow.hpp"

namespace randns::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedCheck = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct RunConfig {
    int dim = 2;
    int M = 32;
    double alpha = 0.3;
    double gamma = -0.05;
    std::string law = "gaussian";
    std::uint64_t seed = 0;
    std::uint64_t sample = 0;        // sample index of the single realization used by randomize/heat-probe/solve
    std::size_t samples = 200;       // tail
    double T = 1.0;
    double dt = 2.5e-4;
    double c1 = -1.0;
    double c2 = -1.0;
    std::string integrator = "exponential-rk4";

    std::string datum = "rough";     // rough | taylor-green | abc | zero | file
    std::string datum_path;
    std::uint64_t datum_seed = 1;
    double amplitude = 1.0;
    std::string initial = "zero";    // w(0): zero | taylor-green | abc | file
    std::string initial_path;
    double initial_scale = 1.0;

    std::string probe = "standard";  // standard | single
    double sigma = 0.0;
    double p = 4.0;
    double q = 4.0;
    double t_min = 1e-6;
    int probe_points = 400;
    std::vector<double> lambdas;     // empty: chosen from the sampled norms

    int snapshot_every = 10;
    int dense_steps = 40;
    int trace_every = 1;
    int trilinear_every = 0;
    int write_every = 10;            // write every k-th stored snapshot
    double grading_alpha = 0.0;
    double grading_span = 0.01;
    bool duhamel = true;

    std::filesystem::path output = "randns_out";
    int workers = 1;

    /// Throws ConfigError naming the violated condition.
    void validate() const;

    /// Sets one key from its text form; throws ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);

    /// Every field that affects results. Output directory and worker count are left out.
    nlohmann::json to_json() const;

    DifferenceEqParams solver_params() const;
    GridSpec grid() const { return GridSpec(dim, M); }
    std::vector<NormProbeSpec> probes() const;
};

/// Defaults, then the [run] and [<subcommand>] sections of an INI file,
/// then RANDNS_OUTPUT_DIR / RANDNS_WORKERS, then `overrides` (flags).
RunConfig load_config(const std::string& subcommand, const std::filesystem::path& file,
                      const std::map<std::string, std::string>& overrides);

SpectralField make_datum(const RunConfig& cfg);
SpectralField make_forcing(const RunConfig& cfg);

int run_randomize(const RunConfig& cfg);
int run_heat_probe(const RunConfig& cfg);
int run_tail(const RunConfig& cfg);
int run_solve(const RunConfig& cfg);
int run_regression(const RunConfig& cfg);

struct CheckInputs {
    std::filesystem::path run;
    std::vector<std::filesystem::path> refinements;
    std::filesystem::path compare;  // second trajectory for the d=2 Gronwall check
};
int run_check(const RunConfig& cfg, const CheckInputs& in);

/// Writes {"error": kind, "message": ...} to <output>/error.json and stderr.
void report_error(const std::filesystem::path& output, const std::string& kind, const std::string& message);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

void write_trace_csv(const std::filesystem::path& path, const EnergyTrace& trace);
EnergyTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace randns::app
