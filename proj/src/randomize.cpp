#include "randns/randomize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randns/errors.hpp"
#include "randns/parallel.hpp"
#include "randns/rng.hpp"

namespace randns {

MultiplierLaw parse_law(const std::string& name) {
    if (name == "gaussian") return MultiplierLaw::Gaussian;
    if (name == "rademacher") return MultiplierLaw::Rademacher;
    throw ConfigError("unknown multiplier law '" + name +
                      "' (expected \"gaussian\" or \"rademacher\")");
}

std::string to_string(MultiplierLaw law) {
    return law == MultiplierLaw::Gaussian ? "gaussian" : "rademacher";
}

namespace {

double draw(MultiplierLaw law, std::uint64_t seed, Stream stream, std::uint64_t sample,
            std::uint64_t site) {
    const auto words = draw_words(seed, stream, sample, site);
    if (law == MultiplierLaw::Rademacher) return (words[0] >> 63) ? 1.0 : -1.0;
    return standard_normal(words);
}

}  // namespace

std::vector<double> sample_multipliers(MultiplierLaw law, const SeedSpec& seed, const GridSpec& grid) {
    const Lattice& lat = lattice(grid);
    std::vector<double> l(lat.size());
    for (std::size_t i = lat.center; i < lat.size(); ++i) {
        l[i] = draw(law, seed.master_seed, Stream::Multiplier, seed.sample_index,
                    site_code(lat.n[i], grid.dim));
        l[lat.mirror(i)] = l[i];
    }
    return l;
}

SpectralField randomize(const SpectralField& f, MultiplierLaw law, const SeedSpec& seed) {
    const double tol = 1e-12 * std::max(f.max_abs(), 1e-300);
    if (f.hermitian_defect() > tol) throw std::invalid_argument("randomize: field is not real");
    if (f.mean_defect() > tol) throw std::invalid_argument("randomize: field has nonzero mean");
    const auto l = sample_multipliers(law, seed, f.grid());
    SpectralField out(f);
    for (int c = 0; c < f.components(); ++c) {
        auto comp = out.component(c);
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= l[i];
    }
    return out;
}

double subgaussian_moment_constant() { return std::sqrt(2.0); }

MomentReport moment_growth_check(std::span<const double> c, MultiplierLaw law,
                                 std::span<const double> qs, std::size_t samples,
                                 std::uint64_t seed, int workers) {
    if (c.empty()) throw std::invalid_argument("moment_growth_check: empty sequence");
    if (samples < 2) throw std::invalid_argument("moment_growth_check: need at least 2 samples");
    for (double q : qs) {
        if (!(q >= 2.0)) throw std::invalid_argument("moment_growth_check: q must be >= 2");
    }
    double c2 = 0.0;
    for (double v : c) c2 += v * v;
    const double cnorm = std::sqrt(c2);

    std::vector<double> s(samples);
    parallel_for(samples, workers, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < c.size(); ++r) {
            acc += c[r] * draw(law, seed, Stream::Moment, i, r);
        }
        s[i] = acc;
    });

    MomentReport rep;
    rep.samples = samples;
    rep.bound_constant = subgaussian_moment_constant();
    const double n = static_cast<double>(samples);
    for (double q : qs) {
        double mean = 0.0;
        for (double v : s) mean += std::pow(std::abs(v), q);
        mean /= n;
        double var = 0.0;
        for (double v : s) {
            const double e = std::pow(std::abs(v), q) - mean;
            var += e * e;
        }
        var /= (n - 1.0);
        const double se = std::sqrt(var / n);
        MomentEstimate est;
        est.q = q;
        est.norm = std::pow(mean, 1.0 / q);
        est.norm_lo = std::pow(std::max(mean - 3.0 * se, 0.0), 1.0 / q);
        est.norm_hi = std::pow(mean + 3.0 * se, 1.0 / q);
        const double scale = std::sqrt(q) * cnorm;
        est.ratio = est.norm / scale;
        est.ratio_lo = est.norm_lo / scale;
        est.ratio_hi = est.norm_hi / scale;
        rep.fitted_constant = std::max(rep.fitted_constant, est.ratio);
        if (est.ratio_lo > rep.bound_constant) rep.violation = true;
        rep.per_q.push_back(est);
    }
    return rep;
}

}  // namespace randns
