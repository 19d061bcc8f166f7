#include "randns/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "randns/errors.hpp"
#include "randns/heatflow.hpp"
#include "randns/spectral.hpp"

namespace randns {

namespace {

void require_complete(const EnergyTrace& trace, double T) {
    if (trace.rows() < 2) throw std::invalid_argument("energy trace has fewer than 2 rows");
    if (trace.t.front() != 0.0 || std::abs(trace.t.back() - T) > 1e-12 * std::max(1.0, T)) {
        throw std::invalid_argument("energy trace does not span [0, T]");
    }
    const std::size_t n = trace.rows();
    for (const auto* col : {&trace.l2sq, &trace.cum_enstrophy, &trace.energy_E, &trace.energy_E_half,
                            &trace.dwdt_hm1, &trace.g_norm}) {
        if (col->size() != n) throw std::invalid_argument("energy trace columns have unequal length");
    }
}

double sup_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        m = std::max(m, x);
    }
    return m;
}

double realized_forcing(const EnergyTrace& trace, double gamma) {
    const std::size_t n = trace.rows();
    std::vector<double> phi(n);
    if (trace.dim == 2) {
        for (std::size_t i = 0; i < n; ++i) phi[i] = std::pow(trace.g_norm[i], 4);
        return std::pow(weighted_time_integral(trace.t, phi, 4.0 * gamma), 0.25);
    }
    const double q[3] = {2.0, 8.0 / 3.0, 8.0};
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < n; ++i) phi[i] = std::pow(trace.g_probe[i][k], q[k]);
        total += std::pow(weighted_time_integral(trace.t, phi, gamma * q[k]), 1.0 / q[k]);
    }
    return total;
}

}  // namespace

double weighted_time_integral(std::span<const double> t, std::span<const double> phi, double beta) {
    if (t.size() != phi.size()) throw std::invalid_argument("weighted_time_integral: size mismatch");
    if (!(beta > -1.0)) throw std::invalid_argument("weighted_time_integral: beta must exceed -1");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double a = t[i], b = t[i + 1];
        const double I0 = (std::pow(b, beta + 1) - std::pow(a, beta + 1)) / (beta + 1);
        const double I1 = (std::pow(b, beta + 2) - std::pow(a, beta + 2)) / (beta + 2);
        const double slope = (phi[i + 1] - phi[i]) / (b - a);
        acc += phi[i] * I0 + slope * (I1 - a * I0);
    }
    return acc;
}

EnergyBoundReport energy_bound_monitor(const EnergyTrace& trace, double T, double /*alpha*/, double gamma,
                                       std::span<const EnergyTrace> refinements) {
    require_complete(trace, T);
    EnergyBoundReport r;
    r.sup_E = sup_of(trace.energy_E);
    r.sup_E_half = sup_of(trace.energy_E_half);
    r.lambda_hat = realized_forcing(trace, gamma);
    r.finite = std::isfinite(r.sup_E) && std::isfinite(r.sup_E_half) && std::isfinite(r.lambda_hat);
    for (const auto& ref : refinements) {
        require_complete(ref, T);
        const double s = sup_of(ref.energy_E);
        r.refinement_sup_E.push_back(s);
        const double delta = r.sup_E > 0.0 ? std::abs(s - r.sup_E) / r.sup_E : (s == 0.0 ? 0.0 : 1.0);
        r.refinement_delta = std::max(r.refinement_delta, delta);
    }
    r.stable = r.refinement_delta <= 0.10;
    r.pass = r.finite && r.stable;
    return r;
}

double rate_norm(const EnergyTrace& trace, int dim) {
    const double p = dim == 2 ? 2.0 : 4.0 / 3.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < trace.rows(); ++i) {
        acc += 0.5 * (trace.t[i + 1] - trace.t[i]) *
               (std::pow(trace.dwdt_hm1[i], p) + std::pow(trace.dwdt_hm1[i + 1], p));
    }
    return std::pow(acc, 1.0 / p);
}

double interpolation_ratio(const SpectralField& v) {
    const double l2 = sobolev_norm(v, 0.0);
    const double grad = homogeneous_norm(v, 1.0);
    if (l2 == 0.0 || grad == 0.0) return 0.0;
    return lp_norm(v, 4.0) / std::sqrt(l2 * grad);
}

GronwallConfig GronwallConfig::resolved(double c1, double T) const {
    GronwallConfig c = *this;
    if (c.mu == 0.0) {
        if (c1 == 0.0) throw ConfigError("Gronwall weights: mu must be given when c1 = 0");
        c.mu = 1.0 / (4.0 * std::abs(c1));
    }
    if (c.rho == 0.0) c.rho = std::min(T, 1.0);
    if (!(c.nu1 > 0 && c.nu2 > 0 && c.nu3 > 0 && c.mu > 0)) {
        throw ConfigError("Gronwall weights must be positive");
    }
    const double sum = std::abs(c1) * c.mu + c.nu1 + c.nu2 + c.nu3;
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "Gronwall weights violate |c1| mu + nu1 + nu2 + nu3 = 1 (sum = " << sum << ")";
        throw ConfigError(msg.str());
    }
    if (!(c.rho > 0.0 && c.rho <= T)) throw ConfigError("Gronwall interval requires 0 < rho <= T");
    return c;
}

GronwallReport gronwall_uniqueness_check(const TrajectoryRecord& traj1, const TrajectoryRecord& traj2,
                                         const SpectralField& f_omega, const GronwallConfig& config) {
    if (traj1.grid.dim != 2) throw std::invalid_argument("gronwall_uniqueness_check: d=2 only");
    if (traj1.grid != traj2.grid || traj1.grid != f_omega.grid()) {
        throw GridMismatch("gronwall_uniqueness_check: runs on different grids");
    }
    if (traj1.times != traj2.times) {
        throw std::invalid_argument("gronwall_uniqueness_check: snapshot times differ");
    }
    if (traj1.params.c1 != traj2.params.c1 || traj1.params.c2 != traj2.params.c2 ||
        traj1.params.T != traj2.params.T) {
        throw std::invalid_argument("gronwall_uniqueness_check: runs use different parameters");
    }
    const GronwallConfig cfg = config.resolved(traj1.params.c1, traj1.params.T);
    const double c1 = traj1.params.c1;
    const double gcoef = c1 * c1 / (cfg.mu * cfg.mu * cfg.nu3);

    GronwallReport r;
    std::vector<double> integrand;
    for (std::size_t m = 0; m < traj1.times.size(); ++m) {
        const double t = traj1.times[m];
        if (t > cfg.rho * (1 + 1e-12)) break;
        const SpectralField v = traj1.snapshots[m] - traj2.snapshots[m];
        const double g4 = std::pow(lp_norm(heat_flow(f_omega, t), 4.0), 4);
        integrand.push_back(std::pow(homogeneous_norm(traj1.snapshots[m], 1.0), 2) / cfg.nu1 +
                            std::pow(homogeneous_norm(traj2.snapshots[m], 1.0), 2) / cfg.nu2 + gcoef * g4);
        r.t.push_back(t);
        r.v_sq.push_back(std::pow(sobolev_norm(v, 0.0), 2));
        const double ratio = interpolation_ratio(v);
        r.max_interpolation_ratio = std::max(r.max_interpolation_ratio, ratio);
    }
    double expo = 0.0;
    r.within = true;
    r.envelope_margin = std::numeric_limits<double>::infinity();
    const double log_v0 = r.v_sq.front() > 0.0 ? std::log(r.v_sq.front()) : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.t.size(); ++i) {
        if (i > 0) expo += 0.5 * (r.t[i] - r.t[i - 1]) * (integrand[i] + integrand[i - 1]);
        r.exponent.push_back(expo);
        r.log_envelope.push_back(log_v0 + expo);
        r.envelope.push_back(r.v_sq.front() * std::exp(expo));
        if (r.v_sq[i] == 0.0) {
            if (i > 0) r.envelope_margin = std::min(r.envelope_margin, 1.0);
            continue;
        }
        const double log_ratio = std::log(r.v_sq[i]) - r.log_envelope[i];
        if (log_ratio > std::log1p(cfg.slack)) r.within = false;
        if (i > 0) r.envelope_margin = std::min(r.envelope_margin, -std::expm1(log_ratio));
    }
    if (r.t.size() < 2) r.envelope_margin = 0.0;
    r.v_final = std::sqrt(r.v_sq.back());
    r.interpolation_ok = r.max_interpolation_ratio <= kInterpolationConstant;
    r.pass = r.within && r.interpolation_ok;
    return r;
}

double observed_order(const TrajectoryRecord& a, const TrajectoryRecord& b, const TrajectoryRecord& c) {
    const double e1 = sobolev_norm(a.final_state() - b.final_state(), 0.0);
    const double e2 = sobolev_norm(b.final_state() - c.final_state(), 0.0);
    if (e2 == 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(e1 / e2);
}

double tensor_head_norm(const TrajectoryRecord& traj, double delta) {
    std::vector<double> t, phi;
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        if (traj.times[m] > delta * (1 + 1e-12)) break;
        t.push_back(traj.times[m]);
        phi.push_back(std::pow(lp_norm(traj.snapshots[m], 4.0), 4));
    }
    return std::sqrt(weighted_time_integral(t, phi, 0.0));
}

}  // namespace randns
