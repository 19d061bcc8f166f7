#include "randns/app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "randns/checkpoint.hpp"
#include "randns/datum.hpp"
#include "randns/errors.hpp"
#include "randns/randomize.hpp"
#include "randns/spectral.hpp"
#include "randns/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace randns::app {

namespace {

double parse_double(const std::string& key, const std::string& v) {
    double out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

int narrow(const std::string& key, long long v) {
    if (v < -1000000000LL || v > 1000000000LL) throw ConfigError(key + ": value out of range");
    return static_cast<int>(v);
}

fs::path prepare_output(const RunConfig& cfg) {
    fs::create_directories(cfg.output);
    return cfg.output;
}

SpectralField initial_field(const RunConfig& cfg, const GridSpec& grid) {
    SpectralField w0(grid);
    if (cfg.initial == "zero") return w0;
    if (cfg.initial == "taylor-green") {
        w0 = taylor_green(grid);
    } else if (cfg.initial == "abc") {
        w0 = abc_flow(grid);
    } else {
        w0 = read_checkpoint(cfg.initial_path);
        if (w0.grid() != grid) throw ConfigError("initial checkpoint does not match the configured grid");
    }
    return cfg.initial_scale * w0;
}

json trilinear_json(const TrilinearDiagnostics& t) {
    return {{"checked_steps", t.checked_steps}, {"max_rel_www", t.max_rel_www}, {"max_rel_gww", t.max_rel_gww}};
}

json with_config(const RunConfig& cfg, const std::string& command) {
    json j;
    j["command"] = command;
    j["config"] = cfg.to_json();
    return j;
}

void write_snapshots(const fs::path& dir, const TrajectoryRecord& rec, int every) {
    fs::create_directories(dir);
    std::ofstream index(dir / "index.csv");
    index << "index,t,file\n";
    const std::size_t n = rec.snapshots.size();
    for (std::size_t m = 0; m < n; ++m) {
        if (m % static_cast<std::size_t>(every) != 0 && m + 1 != n) continue;
        char name[32];
        std::snprintf(name, sizeof(name), "w_%06zu.snsf", m);
        write_checkpoint(dir / name, rec.snapshots[m]);
        index << m << ',' << format_double(rec.times[m]) << ',' << name << '\n';
    }
}

TrajectoryRecord load_trajectory(const fs::path& dir) {
    const json meta = read_json(dir / "solve.json");
    RunConfig cfg;
    for (const auto& [k, v] : meta.at("config").items()) {
        if (v.is_string()) {
            cfg.set(k, v.get<std::string>());
        } else if (v.is_array()) {
            std::string s;
            for (const auto& x : v) s += format_double(x.get<double>()) + ",";
            cfg.set(k, s);
        } else if (v.is_boolean()) {
            cfg.set(k, v.get<bool>() ? "true" : "false");
        } else if (v.is_number_float()) {
            cfg.set(k, format_double(v.get<double>()));
        } else {
            cfg.set(k, v.dump());
        }
    }
    TrajectoryRecord rec;
    rec.grid = cfg.grid();
    rec.params = cfg.solver_params();
    rec.completed = meta.at("completed").get<bool>();
    rec.trace = read_trace_csv(dir / "trace.csv");
    const fs::path snaps = dir / "snapshots";
    if (fs::exists(snaps / "index.csv")) {
        std::ifstream in(snaps / "index.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto a = line.find(','), b = line.rfind(',');
            rec.times.push_back(parse_double("t", line.substr(a + 1, b - a - 1)));
            rec.snapshots.push_back(read_checkpoint(snaps / line.substr(b + 1)));
        }
    }
    return rec;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void RunConfig::set(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    if (key == "dim") dim = narrow(key, parse_int(key, v));
    else if (key == "M") M = narrow(key, parse_int(key, v));
    else if (key == "alpha") alpha = parse_double(key, v);
    else if (key == "gamma") gamma = parse_double(key, v);
    else if (key == "law") law = v;
    else if (key == "seed") seed = parse_u64(key, v);
    else if (key == "sample") sample = parse_u64(key, v);
    else if (key == "samples") samples = parse_u64(key, v);
    else if (key == "T") T = parse_double(key, v);
    else if (key == "dt") dt = parse_double(key, v);
    else if (key == "c1") c1 = parse_double(key, v);
    else if (key == "c2") c2 = parse_double(key, v);
    else if (key == "integrator") integrator = v;
    else if (key == "datum") datum = v;
    else if (key == "datum_path") datum_path = v;
    else if (key == "datum_seed") datum_seed = parse_u64(key, v);
    else if (key == "amplitude") amplitude = parse_double(key, v);
    else if (key == "initial") initial = v;
    else if (key == "initial_path") initial_path = v;
    else if (key == "initial_scale") initial_scale = parse_double(key, v);
    else if (key == "probe") probe = v;
    else if (key == "sigma") sigma = parse_double(key, v);
    else if (key == "p") p = parse_double(key, v);
    else if (key == "q") q = parse_double(key, v);
    else if (key == "t_min") t_min = parse_double(key, v);
    else if (key == "probe_points") probe_points = narrow(key, parse_int(key, v));
    else if (key == "lambdas") lambdas = parse_list(key, v);
    else if (key == "snapshot_every") snapshot_every = narrow(key, parse_int(key, v));
    else if (key == "dense_steps") dense_steps = narrow(key, parse_int(key, v));
    else if (key == "trace_every") trace_every = narrow(key, parse_int(key, v));
    else if (key == "trilinear_every") trilinear_every = narrow(key, parse_int(key, v));
    else if (key == "write_every") write_every = narrow(key, parse_int(key, v));
    else if (key == "grading_alpha") grading_alpha = parse_double(key, v);
    else if (key == "grading_span") grading_span = parse_double(key, v);
    else if (key == "duhamel") duhamel = parse_bool(key, v);
    else if (key == "output") output = v;
    else if (key == "workers") workers = narrow(key, parse_int(key, v));
    else throw ConfigError("unknown configuration key '" + key + "'");
}

void RunConfig::validate() const {
    if (dim != 2 && dim != 3) throw ConfigError("dim must be 2 or 3");
    if (M < 1 || M > 512) throw ConfigError("M must lie in [1, 512]");
    if (!(gamma < 0.0)) throw ConfigError("violated gamma < 0");
    const double a_max = dim == 2 ? 0.5 : 0.25;
    const char* a_txt = dim == 2 ? "1/2" : "1/4";
    if (!(alpha > 0.0 && alpha < a_max)) {
        throw ConfigError(std::string("violated 0 < alpha < ") + a_txt + " for d=" + std::to_string(dim) +
                          " (alpha = " + format_double(alpha) + ")");
    }
    if (!(alpha < a_max + 2.0 * gamma)) {
        throw ConfigError(std::string("violated alpha < ") + a_txt + " + 2 gamma for d=" + std::to_string(dim) +
                          " (alpha = " + format_double(alpha) + ", gamma = " + format_double(gamma) + ")");
    }
    parse_law(law);
    solver_params().validate();
    for (const auto& [name, value] : {std::pair{"datum", datum}, std::pair{"initial", initial}}) {
        const bool ok = value == "rough" || value == "taylor-green" || value == "abc" || value == "zero" ||
                        value == "file";
        if (!ok || (std::string(name) == "initial" && value == "rough")) {
            throw ConfigError(std::string(name) + ": unknown choice '" + value + "'");
        }
    }
    if ((datum == "taylor-green" || initial == "taylor-green") && dim != 2) {
        throw ConfigError("taylor-green requires dim = 2");
    }
    if ((datum == "abc" || initial == "abc") && dim != 3) throw ConfigError("abc requires dim = 3");
    if (datum == "file" && datum_path.empty()) throw ConfigError("datum = file requires datum_path");
    if (initial == "file" && initial_path.empty()) throw ConfigError("initial = file requires initial_path");
    if (probe != "standard" && probe != "single") throw ConfigError("probe must be standard or single");
    if (!(t_min > 0.0 && t_min < T)) throw ConfigError("probe requires 0 < t_min < T");
    if (probe_points < 2) throw ConfigError("probe_points must be >= 2");
    for (const auto& pr : probes()) pr.validate();
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) throw ConfigError("lambdas must be strictly increasing");
    }
    if (write_every < 1) throw ConfigError("write_every must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
}

json RunConfig::to_json() const {
    return {{"dim", dim},
            {"M", M},
            {"alpha", alpha},
            {"gamma", gamma},
            {"law", law},
            {"seed", seed},
            {"sample", sample},
            {"samples", samples},
            {"T", T},
            {"dt", dt},
            {"c1", c1},
            {"c2", c2},
            {"integrator", integrator},
            {"datum", datum},
            {"datum_path", datum_path},
            {"datum_seed", datum_seed},
            {"amplitude", amplitude},
            {"initial", initial},
            {"initial_path", initial_path},
            {"initial_scale", initial_scale},
            {"probe", probe},
            {"sigma", sigma},
            {"p", p},
            {"q", q},
            {"t_min", t_min},
            {"probe_points", probe_points},
            {"lambdas", lambdas},
            {"snapshot_every", snapshot_every},
            {"dense_steps", dense_steps},
            {"trace_every", trace_every},
            {"trilinear_every", trilinear_every},
            {"write_every", write_every},
            {"grading_alpha", grading_alpha},
            {"grading_span", grading_span},
            {"duhamel", duhamel}};
}

DifferenceEqParams RunConfig::solver_params() const {
    DifferenceEqParams prm;
    prm.c1 = c1;
    prm.c2 = c2;
    prm.T = T;
    prm.dt = dt;
    prm.integrator = parse_integrator(integrator);
    prm.grading_alpha = grading_alpha;
    prm.grading_span = grading_span;
    prm.snapshot_every = snapshot_every;
    prm.dense_steps = dense_steps;
    prm.trace_every = trace_every;
    prm.trilinear_every = trilinear_every;
    return prm;
}

std::vector<NormProbeSpec> RunConfig::probes() const {
    if (probe == "single") {
        NormProbeSpec s;
        s.sigma = sigma;
        s.gamma = gamma;
        s.p = p;
        s.q = q;
        s.T = T;
        s.alpha = alpha;
        s.t_min = t_min;
        s.points = probe_points;
        return {s};
    }
    return standard_probes(dim, alpha, gamma, T, t_min, probe_points);
}

RunConfig load_config(const std::string& subcommand, const fs::path& file,
                      const std::map<std::string, std::string>& overrides) {
    RunConfig cfg;
    if (!file.empty()) {
        if (!fs::exists(file)) throw ConfigError("config file not found: " + file.string());
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::read_ini(file.string(), tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("config file: ") + e.what());
        }
        std::vector<std::pair<std::string, std::string>> top, run, own;
        for (const auto& [key, node] : tree) {
            if (node.empty()) {
                top.emplace_back(key, node.data());
                continue;
            }
            for (const auto& [k, leaf] : node) {
                if (key == "run") run.emplace_back(k, leaf.data());
                else if (key == subcommand) own.emplace_back(k, leaf.data());
            }
        }
        for (const auto* group : {&top, &run, &own}) {
            for (const auto& [k, v] : *group) cfg.set(k, v);
        }
    }
    if (const char* dir = std::getenv("RANDNS_OUTPUT_DIR"); dir && *dir) cfg.set("output", dir);
    if (const char* w = std::getenv("RANDNS_WORKERS"); w && *w) cfg.set("workers", w);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    return cfg;
}

SpectralField make_datum(const RunConfig& cfg) {
    const GridSpec grid = cfg.grid();
    SpectralField f(grid);
    if (cfg.datum == "rough") {
        f = rough_datum(grid, rough_decay(cfg.dim, cfg.alpha), cfg.datum_seed);
    } else if (cfg.datum == "taylor-green") {
        f = taylor_green(grid);
    } else if (cfg.datum == "abc") {
        f = abc_flow(grid);
    } else if (cfg.datum == "file") {
        f = read_checkpoint(cfg.datum_path);
        if (f.grid() != grid) throw ConfigError("datum checkpoint does not match the configured grid");
    }
    return cfg.amplitude * f;
}

SpectralField make_forcing(const RunConfig& cfg) {
    return randomize(make_datum(cfg), parse_law(cfg.law), {cfg.seed, cfg.sample});
}

int run_randomize(const RunConfig& cfg) {
    cfg.validate();
    const fs::path out = prepare_output(cfg);
    const SpectralField f = make_datum(cfg);
    const SpectralField fw = randomize(f, parse_law(cfg.law), {cfg.seed, cfg.sample});
    write_checkpoint(out / "datum.snsf", f);
    write_checkpoint(out / "f_omega.snsf", fw);
    json j = with_config(cfg, "randomize");
    j["norms"] = {{"datum_h_minus_alpha", sobolev_norm(f, -cfg.alpha)},
                  {"f_omega_h_minus_alpha", sobolev_norm(fw, -cfg.alpha)},
                  {"datum_l2", sobolev_norm(f, 0.0)},
                  {"f_omega_l2", sobolev_norm(fw, 0.0)}};
    j["artifacts"] = {"datum.snsf", "f_omega.snsf"};
    write_json(out / "randomize.json", j);
    return kExitOk;
}

int run_heat_probe(const RunConfig& cfg) {
    cfg.validate();
    const fs::path out = prepare_output(cfg);
    const SpectralField fw = make_forcing(cfg);
    json j = with_config(cfg, "heat-probe");
    bool pass = true;
    const TimeGrid tg{cfg.t_min, cfg.T, cfg.probe_points};
    for (int k : {0, 1}) {
        const auto r = deterministic_bound_check(fw, cfg.alpha, k, tg, 2);
        j["deterministic"].push_back({{"k", k},
                                      {"data_norm", r.data_norm},
                                      {"c2", r.c2},
                                      {"cinf", r.cinf},
                                      {"c2_levels", r.c2_levels},
                                      {"cinf_levels", r.cinf_levels},
                                      {"finite", r.finite},
                                      {"stable", r.stable},
                                      {"pass", r.pass}});
        pass = pass && r.pass;
    }
    double total = 0.0;
    for (const auto& pr : cfg.probes()) {
        const auto m = mixed_norm_detail(fw, pr);
        total += m.value;
        j["probes"].push_back({{"sigma", pr.sigma},
                               {"gamma", pr.gamma},
                               {"p", pr.p},
                               {"q", pr.q},
                               {"value", m.value},
                               {"head_defect", m.head_defect}});
    }
    j["probe_norm"] = total;
    j["pass"] = pass;
    write_json(out / "heat_probe.json", j);
    return pass ? kExitOk : kExitFailedCheck;
}

int run_tail(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.samples < 100) throw ConfigError("tail requires samples >= 100");
    const fs::path out = prepare_output(cfg);
    const auto probes = cfg.probes();
    const SpectralField f = make_datum(cfg);
    const MultiplierLaw law = parse_law(cfg.law);
    ExceedanceReport r = monte_carlo_exceedance(f, law, probes, {}, cfg.samples, cfg.seed, cfg.workers);
    const std::vector<double> lambdas = cfg.lambdas.empty() ? default_lambdas(r.norms) : cfg.lambdas;
    r = exceedance_from_norms(std::move(r.norms), lambdas);

    json j = with_config(cfg, "tail");
    j["lambda"] = r.lambda;
    j["p_hat"] = r.p_hat;
    j["ci_lo"] = r.ci_lo;
    j["ci_hi"] = r.ci_hi;
    j["exceed_count"] = r.exceed_count;
    j["slope"] = r.slope;
    j["intercept"] = r.intercept;
    j["r2"] = r.r2;
    j["fit_bins"] = r.fit_bins;
    j["n_samples"] = r.n_samples;
    write_json(out / "tail.json", j);

    std::ofstream csv(out / "tail_norms.csv");
    csv << "sample,norm,level\n";
    for (std::size_t i = 0; i < r.norms.size(); ++i) {
        csv << i << ',' << format_double(r.norms[i]) << ',' << r.level_index[i] << '\n';
    }
    return kExitOk;
}

int run_solve(const RunConfig& cfg) {
    cfg.validate();
    const fs::path out = prepare_output(cfg);
    const SpectralField fw = make_forcing(cfg);
    const SpectralField w0 = initial_field(cfg, fw.grid());
    write_checkpoint(out / "f_omega.snsf", fw);

    TrajectoryRecord rec = integrate(fw, cfg.solver_params(), w0);
    json j = with_config(cfg, "solve");
    j["completed"] = rec.completed;
    j["steps"] = rec.steps;
    j["max_divergence_defect"] = rec.max_divergence_defect;
    j["trilinear"] = trilinear_json(rec.trilinear);
    if (!rec.completed) {
        j["failure"] = rec.failure;
        j["failure_time"] = rec.failure_time;
    } else {
        if (cfg.duhamel) rec.trace.duhamel_residual = duhamel_residual(rec, fw);
        const auto e = energy_bound_monitor(rec.trace, cfg.T, cfg.alpha, cfg.gamma);
        j["sup_E"] = e.sup_E;
        j["sup_E_half"] = e.sup_E_half;
        j["lambda_hat"] = e.lambda_hat;
        j["rate_norm"] = rate_norm(rec.trace, cfg.dim);
        if (cfg.duhamel) j["duhamel_residual"] = rec.trace.duhamel_residual;
    }
    write_trace_csv(out / "trace.csv", rec.trace);
    if (!rec.snapshots.empty()) write_snapshots(out / "snapshots", rec, cfg.write_every);
    write_json(out / "solve.json", j);
    if (!rec.completed) {
        std::cerr << "numerical failure at t=" << rec.failure_time << ": " << rec.failure << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

int run_check(const RunConfig& cfg, const CheckInputs& in) {
    if (in.run.empty()) throw ConfigError("check requires a trajectory directory");
    const fs::path out = prepare_output(cfg);
    const TrajectoryRecord rec = load_trajectory(in.run);
    const json meta = read_json(in.run / "solve.json");
    const json& rc = meta.at("config");
    if (!rec.completed) throw NumericalFailure("trajectory did not complete", 0.0);
    const double T = rc.at("T").get<double>();
    const double alpha = rc.at("alpha").get<double>();
    const double gamma = rc.at("gamma").get<double>();

    std::vector<EnergyTrace> refs;
    for (const auto& dir : in.refinements) refs.push_back(load_trajectory(dir).trace);
    const auto e = energy_bound_monitor(rec.trace, T, alpha, gamma, refs);

    json j;
    j["command"] = "check";
    j["run_config"] = rc;
    j["sup_E"] = e.sup_E;
    j["sup_E_half"] = e.sup_E_half;
    j["lambda_hat"] = e.lambda_hat;
    j["finite"] = e.finite;
    j["refinement_sup_E"] = e.refinement_sup_E;
    j["refinement_delta"] = e.refinement_delta;
    j["stable"] = e.stable;
    j["rate_norm"] = rate_norm(rec.trace, rec.grid.dim);
    bool pass = e.pass;
    j["envelope_margin"] = nullptr;
    if (!in.compare.empty()) {
        const TrajectoryRecord other = load_trajectory(in.compare);
        if (rec.snapshots.empty() || other.snapshots.empty()) {
            throw ConfigError("Gronwall check needs snapshots in both trajectory directories");
        }
        const SpectralField fw = read_checkpoint(in.run / "f_omega.snsf");
        const SpectralField fw2 = read_checkpoint(in.compare / "f_omega.snsf");
        if (fw2.grid() != fw.grid() || (fw2 - fw).max_abs() != 0.0) {
            throw ConfigError("Gronwall check needs both runs driven by the same forcing");
        }
        const auto g = gronwall_uniqueness_check(rec, other, fw);
        j["envelope_margin"] = g.envelope_margin;
        j["gronwall"] = {{"within", g.within},
                         {"v_final", g.v_final},
                         {"final_exponent", g.exponent.back()},
                         {"final_log_envelope", g.log_envelope.back()},
                         {"max_interpolation_ratio", g.max_interpolation_ratio},
                         {"interpolation_ok", g.interpolation_ok},
                         {"pass", g.pass}};
        pass = pass && g.pass;
    }
    j["pass"] = pass;
    write_json(out / "check.json", j);
    return pass ? kExitOk : kExitFailedCheck;
}

int run_regression(const RunConfig& cfg) {
    const fs::path out = prepare_output(cfg);
    json j = with_config(cfg, "regression");
    bool pass = true;
    auto suite = [&](const std::string& name, const SpectralField& w0, double rate) {
        DifferenceEqParams prm;
        prm.T = 1.0;
        prm.dt = 1e-3;
        prm.snapshot_every = 100;
        const TrajectoryRecord rec = solve(SpectralField(w0.grid()), prm, w0);
        const SpectralField exact = std::exp(-rate * prm.T) * w0;
        const double err = sobolev_norm(rec.final_state() - exact, 0.0);
        const EnergyTrace& tr = rec.trace;
        const double e0 = tr.l2sq.front();
        const double identity = std::abs(tr.l2sq.back() + tr.cum_enstrophy.back() - e0) / e0;
        const bool ok = err <= 1e-8 && identity <= 1e-6;
        j["suites"].push_back({{"name", name},
                               {"M", w0.grid().M},
                               {"dt", prm.dt},
                               {"T", prm.T},
                               {"l2_error", err},
                               {"energy_identity_rel", identity},
                               {"pass", ok}});
        pass = pass && ok;
    };
    suite("taylor-green-2d", taylor_green(GridSpec(2, 8)), 2.0);
    suite("beltrami-abc-3d", abc_flow(GridSpec(3, 8)), 1.0);
    j["pass"] = pass;
    write_json(out / "regression.json", j);
    return pass ? kExitOk : kExitFailedCheck;
}

void report_error(const fs::path& output, const std::string& kind, const std::string& message) {
    const json j = {{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
    std::error_code ec;
    fs::create_directories(output, ec);
    if (!ec) {
        std::ofstream os(output / "error.json");
        os << j.dump(2) << '\n';
    }
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path.string());
    return json::parse(is);
}

void write_trace_csv(const fs::path& path, const EnergyTrace& tr) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << "t,l2sq_w,grad_sq,cum_enstrophy,energy_E,energy_E_half,dwdt_hm1,dual_rate_p";
    os << (tr.dim == 2 ? ",g_L4" : ",g_probe_norms,g_half_L6,g_half_L8_3,g_L8");
    os << ",duhamel_residual\n";
    const auto f = format_double;
    for (std::size_t i = 0; i < tr.rows(); ++i) {
        os << f(tr.t[i]) << ',' << f(tr.l2sq[i]) << ',' << f(tr.grad_sq[i]) << ',' << f(tr.cum_enstrophy[i]) << ','
           << f(tr.energy_E[i]) << ',' << f(tr.energy_E_half[i]) << ',' << f(tr.dwdt_hm1[i]) << ','
           << f(tr.dual_rate[i]) << ',' << f(tr.g_norm[i]);
        if (tr.dim == 3) {
            for (double v : tr.g_probe[i]) os << ',' << f(v);
        }
        os << ',';
        if (i + 1 == tr.rows() && tr.duhamel_residual >= 0.0) os << f(tr.duhamel_residual);
        os << '\n';
    }
}

EnergyTrace read_trace_csv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path.string());
    std::string line;
    std::getline(is, line);
    EnergyTrace tr;
    tr.dim = line.find("g_probe_norms") != std::string::npos ? 3 : 2;
    tr.rate_exponent = tr.dim == 2 ? 2.0 : 4.0 / 3.0;
    const std::size_t expected = tr.dim == 2 ? 10 : 13;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        if (line.back() == ',') cells.emplace_back();
        if (cells.size() != expected) throw ConfigError("malformed trace row in " + path.string());
        std::vector<double> v;
        for (std::size_t k = 0; k + 1 < cells.size(); ++k) v.push_back(parse_double("trace", cells[k]));
        tr.t.push_back(v[0]);
        tr.l2sq.push_back(v[1]);
        tr.grad_sq.push_back(v[2]);
        tr.cum_enstrophy.push_back(v[3]);
        tr.energy_E.push_back(v[4]);
        tr.energy_E_half.push_back(v[5]);
        tr.dwdt_hm1.push_back(v[6]);
        tr.dual_rate.push_back(v[7]);
        tr.g_norm.push_back(v[8]);
        tr.g_probe.push_back(tr.dim == 3 ? std::array<double, 3>{v[9], v[10], v[11]} : std::array<double, 3>{});
        if (!cells.back().empty()) tr.duhamel_residual = parse_double("trace", cells.back());
    }
    return tr;
}

}  // namespace randns::app
