#include "randns/heatflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "randns/errors.hpp"
#include "randns/parallel.hpp"
#include "randns/spectral.hpp"

namespace randns {

SpectralField heat_flow(const SpectralField& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat_flow: t must be >= 0");
    if (t == 0.0) return f;
    return apply_radial(f, [t](double q) { return std::exp(-q * t); });
}

void TimeGrid::validate() const {
    if (points < 2) throw ConfigError("time grid needs at least 2 points");
    if (!(t_min > 0.0)) throw ConfigError("time grid needs t_min > 0");
    if (!(T > t_min)) throw ConfigError("time grid needs T > t_min");
}

std::vector<double> TimeGrid::times() const {
    validate();
    std::vector<double> t(points);
    const double lr = std::log(T / t_min) / (points - 1);
    for (int j = 0; j < points; ++j) t[j] = t_min * std::exp(lr * j);
    t.front() = t_min;
    t.back() = T;
    return t;
}

TimeGrid TimeGrid::refined(int factor) const {
    return {t_min, T, (points - 1) * factor + 1};
}

namespace {

double sup_magnitude(const std::vector<std::vector<double>>& comps) {
    double best = 0.0;
    const std::size_t np = comps.front().size();
    for (std::size_t x = 0; x < np; ++x) {
        double m = 0.0;
        for (const auto& c : comps) m += c[x] * c[x];
        best = std::max(best, m);
    }
    return std::sqrt(best);
}

struct BoundLevel {
    std::vector<double> t, l2, linf;
    double c2 = 0, cinf = 0;
};

BoundLevel bound_level(const SpectralField& f, double alpha, int k, const TimeGrid& grid,
                       double data_norm) {
    BoundLevel lv;
    lv.t = grid.times();
    const int d = f.grid().dim;
    const int pts = f.grid().sup_points();
    for (double t : lv.t) {
        const SpectralField u = heat_flow(f, t);
        double l2, linf;
        if (k == 0) {
            l2 = sobolev_norm(u, 0.0);
            linf = sup_magnitude(to_physical(u, pts));
        } else {
            l2 = homogeneous_norm(u, 1.0);
            linf = sup_magnitude(gradient_to_physical(u, pts));
        }
        lv.l2.push_back(l2);
        lv.linf.push_back(linf);
        if (data_norm > 0.0) {
            const double w2 = 1.0 + std::pow(t, -(alpha + k) / 2.0);
            const double winf =
                std::sqrt(std::max(1.0 / t, std::pow(t, -(k + alpha + 0.5 * d))));
            lv.c2 = std::max(lv.c2, l2 / (w2 * data_norm));
            lv.cinf = std::max(lv.cinf, linf / (winf * data_norm));
        }
    }
    return lv;
}

bool within_factor(const std::vector<double>& v, double factor) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*hi == 0.0) return true;
    return *lo > 0.0 && *hi <= factor * *lo;
}

}  // namespace

DeterministicBoundReport deterministic_bound_check(const SpectralField& f, double alpha, int k,
                                                   const TimeGrid& grid, int refinements) {
    if (grid.points <= 0) throw std::invalid_argument("deterministic_bound_check: empty time grid");
    grid.validate();
    if (k != 0 && k != 1) throw std::invalid_argument("deterministic_bound_check: k must be 0 or 1");
    if (refinements < 0) throw std::invalid_argument("deterministic_bound_check: refinements < 0");

    DeterministicBoundReport r;
    r.k = k;
    r.alpha = alpha;
    r.data_norm = sobolev_norm(f, -alpha);
    for (int level = 0; level <= refinements; ++level) {
        BoundLevel lv = bound_level(f, alpha, k, grid.refined(1 << level), r.data_norm);
        if (level == 0) {
            r.t = std::move(lv.t);
            r.l2 = std::move(lv.l2);
            r.linf = std::move(lv.linf);
        }
        r.c2_levels.push_back(lv.c2);
        r.cinf_levels.push_back(lv.cinf);
    }
    r.c2 = *std::max_element(r.c2_levels.begin(), r.c2_levels.end());
    r.cinf = *std::max_element(r.cinf_levels.begin(), r.cinf_levels.end());
    r.finite = std::isfinite(r.c2) && std::isfinite(r.cinf);
    r.stable = within_factor(r.c2_levels, 2.0) && within_factor(r.cinf_levels, 2.0);
    r.pass = r.finite && r.stable;
    return r;
}

bool NormProbeSpec::admissible() const { return (sigma + alpha - 2.0 * gamma) * q < 2.0; }

void NormProbeSpec::validate() const {
    std::ostringstream msg;
    if (!(sigma >= 0.0)) {
        msg << "probe requires sigma >= 0 (sigma=" << sigma << ")";
    } else if (!(q >= 2.0 && q <= p)) {
        msg << "probe requires 2 <= q <= p (q=" << q << ", p=" << p << ")";
    } else if (!admissible()) {
        msg << "probe requires (sigma + alpha - 2 gamma) q < 2, got ("
            << sigma << " + " << alpha << " - 2*" << gamma << ")*" << q << " = "
            << (sigma + alpha - 2.0 * gamma) * q;
    } else if (!(T > 0.0)) {
        msg << "probe requires T > 0";
    } else {
        time_grid().validate();
        return;
    }
    throw ConfigError(msg.str());
}

MixedNormResult mixed_norm_detail(const SpectralField& f, const NormProbeSpec& probe) {
    probe.validate();
    const auto t = probe.time_grid().times();
    const double h = std::log(t[1] / t[0]);
    const double gq = probe.gamma * probe.q;
    const SpectralField base = probe.sigma == 0.0 ? f : fractional_laplacian(f, probe.sigma);

    // ∫ v(t) dt = ∫ v(t) t d(log t)
    std::vector<double> lp(t.size()), h_int(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        lp[j] = lp_norm(heat_flow(base, t[j]), probe.p);
        h_int[j] = std::pow(t[j], gq + 1.0) * std::pow(lp[j], probe.q);
    }
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) acc += 0.5 * h * (h_int[j] + h_int[j + 1]);

    MixedNormResult r;
    r.value = std::pow(acc, 1.0 / probe.q);
    r.head_defect = std::pow(t[0], gq + 1.0) / (gq + 1.0) * std::pow(lp[0], probe.q);
    return r;
}

double mixed_norm(const SpectralField& f, const NormProbeSpec& probe) {
    return mixed_norm_detail(f, probe).value;
}

std::vector<NormProbeSpec> standard_probes(int dim, double alpha, double gamma, double T,
                                           double t_min, int points) {
    auto make = [&](double sigma, double p, double q) {
        NormProbeSpec s;
        s.sigma = sigma;
        s.gamma = gamma;
        s.p = p;
        s.q = q;
        s.T = T;
        s.alpha = alpha;
        s.t_min = t_min;
        s.points = points;
        return s;
    };
    if (dim == 2) return {make(0.0, 4.0, 4.0)};
    if (dim == 3) return {make(0.5, 6.0, 2.0), make(0.5, 8.0 / 3.0, 8.0 / 3.0), make(0.0, 8.0, 8.0)};
    throw std::invalid_argument("standard_probes: dim must be 2 or 3");
}

double probe_norm(const SpectralField& f, std::span<const NormProbeSpec> probes) {
    double acc = 0.0;
    for (const auto& p : probes) acc += mixed_norm(f, p);
    return acc;
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int dyadic_level(double value) {
    int j = 0;
    double bound = 1.0;
    while (value > bound) {
        bound *= 2.0;
        ++j;
    }
    return j;
}

std::vector<double> default_lambdas(std::vector<double> norms, int count) {
    if (norms.size() < 2 || count < 2) throw std::invalid_argument("default_lambdas: need 2 norms and 2 bins");
    std::sort(norms.begin(), norms.end());
    const std::size_t n = norms.size();
    const double lo = norms[n / 2];
    const double hi = norms[n > 11 ? n - 11 : n - 1];
    std::vector<double> out;
    if (!(hi > lo)) return {lo};
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

ExceedanceReport exceedance_from_norms(std::vector<double> norms, std::span<const double> lambdas) {
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) {
            throw std::invalid_argument("exceedance: lambda list must be strictly increasing");
        }
    }
    ExceedanceReport r;
    r.n_samples = norms.size();
    const double n = static_cast<double>(norms.size());
    for (double lam : lambdas) {
        const auto k = static_cast<std::size_t>(
            std::count_if(norms.begin(), norms.end(), [lam](double v) { return v > lam; }));
        r.lambda.push_back(lam);
        r.exceed_count.push_back(k);
        r.p_hat.push_back(static_cast<double>(k) / n);
        const auto [lo, hi] = wilson_interval(k, norms.size());
        r.ci_lo.push_back(lo);
        r.ci_hi.push_back(hi);
    }

    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.lambda.size(); ++i) {
        if (r.exceed_count[i] >= 10) {
            x.push_back(r.lambda[i] * r.lambda[i]);
            y.push_back(std::log(r.p_hat[i]));
        }
    }
    r.fit_bins = x.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.slope = r.intercept = r.r2 = nan;
    if (x.size() >= 2) {
        const double m = static_cast<double>(x.size());
        double sx = 0, sy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx += x[i];
            sy += y[i];
        }
        const double mx = sx / m, my = sy / m;
        double sxx = 0, sxy = 0, syy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
            syy += (y[i] - my) * (y[i] - my);
        }
        if (sxx > 0.0) {
            r.slope = sxy / sxx;
            r.intercept = my - r.slope * mx;
            double ssr = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double e = y[i] - (r.intercept + r.slope * x[i]);
                ssr += e * e;
            }
            r.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
        }
    }

    r.level_index.reserve(norms.size());
    for (double v : norms) r.level_index.push_back(dyadic_level(v));
    r.norms = std::move(norms);
    return r;
}

ExceedanceReport monte_carlo_exceedance(const SpectralField& f, MultiplierLaw law,
                                        std::span<const NormProbeSpec> probes,
                                        std::span<const double> lambdas, std::size_t n,
                                        std::uint64_t seed, int workers) {
    if (n < 100) throw std::invalid_argument("monte_carlo_exceedance: need at least 100 samples");
    if (f.max_abs() == 0.0) throw std::invalid_argument("monte_carlo_exceedance: zero field");
    if (probes.empty()) throw std::invalid_argument("monte_carlo_exceedance: no probe");
    for (const auto& p : probes) p.validate();
    std::vector<double> norms(n);
    parallel_for(n, workers, [&](std::size_t i) {
        norms[i] = probe_norm(randomize(f, law, {seed, i}), probes);
    });
    return exceedance_from_norms(std::move(norms), lambdas);
}

}  // namespace randns
