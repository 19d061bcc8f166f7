#include "randns/galerkin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "randns/errors.hpp"
#include "randns/fft.hpp"
#include "randns/heatflow.hpp"
#include "randns/spectral.hpp"

namespace randns {

Integrator parse_integrator(const std::string& name) {
    if (name == "exponential-rk4") return Integrator::ExponentialRK4;
    if (name == "exponential-rk2") return Integrator::ExponentialRK2;
    throw ConfigError("unknown integrator '" + name +
                      "' (expected \"exponential-rk2\" or \"exponential-rk4\")");
}

std::string to_string(Integrator integrator) {
    return integrator == Integrator::ExponentialRK4 ? "exponential-rk4" : "exponential-rk2";
}

void DifferenceEqParams::validate() const {
    if (!(T > 0.0)) throw ConfigError("difference equation requires T > 0");
    if (!(dt > 0.0)) throw ConfigError("difference equation requires dt > 0");
    if (!(dt <= T)) throw ConfigError("difference equation requires dt <= T");
    if (!std::isfinite(c1) || !std::isfinite(c2)) throw ConfigError("c1, c2 must be finite");
    if (grading_alpha != 0.0) {
        if (!(grading_alpha > 0.0 && grading_alpha < 2.0)) {
            throw ConfigError("grading_alpha must lie in (0, 2)");
        }
        if (!(grading_span > 0.0 && grading_span < T)) {
            throw ConfigError("grading_span must lie in (0, T)");
        }
    }
    if (snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
    if (trace_every < 1) throw ConfigError("trace_every must be >= 1");
    if (dense_steps < 0 || trilinear_every < 0) throw ConfigError("step counts must be >= 0");
}

std::vector<double> time_mesh(const DifferenceEqParams& params) {
    params.validate();
    std::vector<double> t{0.0};
    double start = 0.0;
    if (params.grading_alpha != 0.0) {
        const double beta = 1.0 / (1.0 - 0.5 * params.grading_alpha);
        const int J = std::max(1, static_cast<int>(std::ceil(params.grading_span / params.dt - 1e-9)));
        for (int j = 1; j <= J; ++j) {
            t.push_back(params.grading_span * std::pow(static_cast<double>(j) / J, beta));
        }
        start = params.grading_span;
    }
    const double span = params.T - start;
    const long n = std::max(1L, static_cast<long>(std::ceil(span / params.dt - 1e-9)));
    for (long k = 1; k <= n; ++k) t.push_back(start + span * static_cast<double>(k) / n);
    t.back() = params.T;
    return t;
}

SpectralField coupling_terms(const SpectralField& w, const SpectralField& g, double c1, double c2) {
    require_same_grid(w, g, "coupling_terms");
    const GridSpec& grid = w.grid();
    const Lattice& lat = lattice(grid);
    const int d = grid.dim;
    const bool has_w = w.max_abs() > 0.0;
    const bool has_g = g.max_abs() > 0.0 && (c1 != 0.0 || c2 != 0.0);
    SpectralField out(grid);
    out.set_divergence_free(true);
    if (!has_w && !has_g) return out;

    if (c1 == -1.0 && c2 == -1.0 && has_g) {
        SpectralField u = w + g;
        return -1.0 * nonlinear_term(u, u);
    }
    if (!has_g) return -1.0 * nonlinear_term(w, w);

    // sum_j a_j ∂_j w_i + b_j ∂_j g_i with a = -w + c1 g, b = c1 w + c2 g
    PhysicalGrid pg(d, grid.product_points());
    const std::size_t np = pg.size();
    std::vector<std::vector<double>> a(d, std::vector<double>(np, 0.0));
    std::vector<std::vector<double>> b(d, std::vector<double>(np, 0.0));
    std::vector<double> tmp(np);
    for (int j = 0; j < d; ++j) {
        if (has_w) {
            pg.synthesize(w.component(j), lat, tmp);
            for (std::size_t x = 0; x < np; ++x) {
                a[j][x] -= tmp[x];
                b[j][x] += c1 * tmp[x];
            }
        }
        if (has_g) {
            pg.synthesize(g.component(j), lat, tmp);
            for (std::size_t x = 0; x < np; ++x) {
                a[j][x] += c1 * tmp[x];
                b[j][x] += c2 * tmp[x];
            }
        }
    }
    std::vector<double> acc(np);
    for (int i = 0; i < d; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < d; ++j) {
            if (has_w) {
                pg.synthesize(w.component(i), lat, tmp, j);
                for (std::size_t x = 0; x < np; ++x) acc[x] += a[j][x] * tmp[x];
            }
            if (has_g) {
                pg.synthesize(g.component(i), lat, tmp, j);
                for (std::size_t x = 0; x < np; ++x) acc[x] += b[j][x] * tmp[x];
            }
        }
        pg.analyze(acc, lat, out.component(i));
        out.at(i, lat.center) = 0.0;
    }
    return leray_project(out);
}

SpectralField rhs(const SpectralField& w, const SpectralField& g, const DifferenceEqParams& params) {
    SpectralField out = coupling_terms(w, g, params.c1, params.c2);
    const Lattice& lat = lattice(w.grid());
    for (int c = 0; c < w.components(); ++c) {
        for (std::size_t i = 0; i < lat.size(); ++i) out.at(c, i) -= lat.norm2[i] * w.at(c, i);
    }
    return out;
}

namespace {

void scale_modes(SpectralField& f, const std::vector<double>& weight) {
    for (int c = 0; c < f.components(); ++c) {
        auto comp = f.component(c);
        for (std::size_t i = 0; i < comp.size(); ++i) comp[i] *= weight[i];
    }
}

SpectralField scaled(SpectralField f, const std::vector<double>& weight) {
    scale_modes(f, weight);
    return f;
}

double sum_sq(const SpectralField& f) {
    double acc = 0.0;
    for (const auto& c : f.coeffs()) acc += std::norm(c);
    return acc;
}

bool all_finite(const SpectralField& f) {
    for (const auto& c : f.coeffs()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

void require_admissible_field(const SpectralField& f, const char* what) {
    const double scale = std::max(f.max_abs(), 1e-300);
    std::ostringstream msg;
    if (f.hermitian_defect() > 1e-12 * scale) {
        msg << what << " is not real (Hermitian defect " << f.hermitian_defect() << ")";
    } else if (f.mean_defect() > 1e-12 * scale) {
        msg << what << " has nonzero mean";
    } else if (f.divergence_defect() > 1e-12) {
        msg << what << " is not divergence free (defect " << f.divergence_defect() << ")";
    } else {
        return;
    }
    throw std::invalid_argument(msg.str());
}

class TraceWriter {
public:
    TraceWriter(EnergyTrace& trace, const SpectralField& f) : tr_(trace), f_(f) {
        tr_.dim = f.grid().dim;
        tr_.rate_exponent = tr_.dim == 2 ? 2.0 : 4.0 / 3.0;
        g_zero_ = f.max_abs() == 0.0;
    }

    void row(double t, const SpectralField& w, const SpectralField& coupling, double z, double zh) {
        const Lattice& lat = lattice(w.grid());
        const double l2 = sum_sq(w);
        const double grad = std::pow(homogeneous_norm(w, 1.0), 2);
        const double half = std::pow(homogeneous_norm(w, 0.5), 2);
        SpectralField dwdt = coupling;
        for (int c = 0; c < w.components(); ++c) {
            for (std::size_t i = 0; i < lat.size(); ++i) dwdt.at(c, i) -= lat.norm2[i] * w.at(c, i);
        }
        const double rate = sobolev_norm(dwdt, -1.0);
        const double p = tr_.rate_exponent;
        if (!tr_.t.empty()) {
            rate_int_ += 0.5 * (t - tr_.t.back()) * (std::pow(tr_.dwdt_hm1.back(), p) + std::pow(rate, p));
        }
        tr_.t.push_back(t);
        tr_.l2sq.push_back(l2);
        tr_.grad_sq.push_back(grad);
        tr_.cum_enstrophy.push_back(z);
        tr_.energy_E.push_back(l2 + z);
        tr_.energy_E_half.push_back(l2 + z + half + zh);
        tr_.dwdt_hm1.push_back(rate);
        tr_.dual_rate.push_back(std::pow(rate_int_, 1.0 / p));

        std::array<double, 3> probe{0.0, 0.0, 0.0};
        double gn = 0.0;
        if (!g_zero_) {
            const SpectralField g = heat_flow(f_, t);
            if (tr_.dim == 2) {
                gn = lp_norm(g, 4.0);
            } else {
                const SpectralField lg = fractional_laplacian(g, 0.5);
                probe = {lp_norm(lg, 6.0), lp_norm(lg, 8.0 / 3.0), lp_norm(g, 8.0)};
                gn = probe[0] + probe[1] + probe[2];
            }
        }
        tr_.g_norm.push_back(gn);
        tr_.g_probe.push_back(probe);
    }

private:
    EnergyTrace& tr_;
    const SpectralField& f_;
    bool g_zero_ = false;
    double rate_int_ = 0.0;
};

double relative_trilinear(const SpectralField& u, const SpectralField& w) {
    const SpectralField adv = advection(u, w);
    const double scale = std::sqrt(sum_sq(adv) * sum_sq(w));
    return scale == 0.0 ? 0.0 : std::abs(inner(adv, w)) / scale;
}

}  // namespace

TrajectoryRecord integrate(const SpectralField& f_omega, const DifferenceEqParams& params,
                           const std::optional<SpectralField>& w0) {
    params.validate();
    const GridSpec& grid = f_omega.grid();
    grid.validate();
    require_admissible_field(f_omega, "forcing datum");
    SpectralField w(grid);
    if (w0) {
        require_same_grid(f_omega, *w0, "integrate");
        require_admissible_field(*w0, "initial state");
        w = *w0;
    }
    w.set_divergence_free(true);

    const Lattice& lat = lattice(grid);
    const auto mesh = time_mesh(params);
    const std::size_t nsteps = mesh.size() - 1;

    TrajectoryRecord rec;
    rec.grid = grid;
    rec.params = params;
    rec.times.push_back(0.0);
    rec.snapshots.push_back(w);
    TraceWriter trace(rec.trace, f_omega);

    auto F = [&](double t, const SpectralField& s) {
        return coupling_terms(s, heat_flow(f_omega, t), params.c1, params.c2);
    };
    auto q = [](const SpectralField& s) { return 2.0 * std::pow(homogeneous_norm(s, 1.0), 2); };
    auto qh = [](const SpectralField& s) { return 2.0 * std::pow(homogeneous_norm(s, 1.5), 2); };

    std::vector<double> eh(lat.size()), e2(lat.size());
    double last_h = -1.0;
    double z = 0.0, zh = 0.0;
    const bool rk4 = params.integrator == Integrator::ExponentialRK4;

    for (std::size_t n = 0; n < nsteps; ++n) {
        const double t = mesh[n];
        const double h = mesh[n + 1] - t;
        if (h != last_h) {
            for (std::size_t i = 0; i < lat.size(); ++i) {
                eh[i] = std::exp(-0.5 * h * lat.norm2[i]);
                e2[i] = std::exp(-h * lat.norm2[i]);
            }
            last_h = h;
        }
        const SpectralField k1 = F(t, w);
        if (n % static_cast<std::size_t>(params.trace_every) == 0) trace.row(t, w, k1, z, zh);
        if (params.trilinear_every > 0 && n % static_cast<std::size_t>(params.trilinear_every) == 0) {
            rec.trilinear.max_rel_www = std::max(rec.trilinear.max_rel_www, relative_trilinear(w, w));
            rec.trilinear.max_rel_gww =
                std::max(rec.trilinear.max_rel_gww, relative_trilinear(heat_flow(f_omega, t), w));
            ++rec.trilinear.checked_steps;
        }

        SpectralField next;
        if (rk4) {
            SpectralField s2 = w;
            s2.axpy(0.5 * h, k1);
            scale_modes(s2, eh);
            const SpectralField k2 = F(t + 0.5 * h, s2);
            SpectralField s3 = scaled(w, eh);
            s3.axpy(0.5 * h, k2);
            const SpectralField k3 = F(t + 0.5 * h, s3);
            SpectralField s4 = scaled(w, e2);
            s4.axpy(h, scaled(k3, eh));
            const SpectralField k4 = F(t + h, s4);

            SpectralField mid = k2 + k3;
            scale_modes(mid, eh);
            next = scaled(w, e2);
            next.axpy(h / 6.0, scaled(k1, e2));
            next.axpy(h / 3.0, mid);
            next.axpy(h / 6.0, k4);
            z += h / 6.0 * (q(w) + 2.0 * q(s2) + 2.0 * q(s3) + q(s4));
            zh += h / 6.0 * (qh(w) + 2.0 * qh(s2) + 2.0 * qh(s3) + qh(s4));
        } else {
            SpectralField s2 = w;
            s2.axpy(h, k1);
            scale_modes(s2, e2);
            const SpectralField k2 = F(t + h, s2);
            next = w;
            next.axpy(0.5 * h, k1);
            scale_modes(next, e2);
            next.axpy(0.5 * h, k2);
            z += 0.5 * h * (q(w) + q(s2));
            zh += 0.5 * h * (qh(w) + qh(s2));
        }
        next.set_divergence_free(true);
        w = std::move(next);
        ++rec.steps;

        const double t1 = mesh[n + 1];
        const double l2 = sum_sq(w);
        const double div = w.divergence_defect();
        rec.max_divergence_defect = std::max(rec.max_divergence_defect, div);
        std::string failure;
        std::ostringstream num;
        if (!all_finite(w) || !std::isfinite(z)) {
            failure = "non-finite values";
        } else if (l2 > params.blowup_threshold) {
            num << params.blowup_threshold;
            failure = "blow-up: ||w||^2 exceeded " + num.str();
        } else if (div > params.divergence_tol) {
            num << div;
            failure = "divergence constraint violated (defect " + num.str() + ")";
        }
        if (!failure.empty()) {
            rec.completed = false;
            rec.failure = failure;
            rec.failure_time = t1;
            return rec;
        }
        const bool last = n + 1 == nsteps;
        if (last || (n + 1) % static_cast<std::size_t>(params.snapshot_every) == 0 ||
            n + 1 <= static_cast<std::size_t>(params.dense_steps)) {
            rec.times.push_back(t1);
            rec.snapshots.push_back(w);
        }
        if (last) trace.row(t1, w, F(t1, w), z, zh);
    }
    return rec;
}

TrajectoryRecord solve(const SpectralField& f_omega, const DifferenceEqParams& params,
                       const std::optional<SpectralField>& w0) {
    TrajectoryRecord rec = integrate(f_omega, params, w0);
    if (!rec.completed) throw NumericalFailure(rec.failure, rec.failure_time);
    return rec;
}

namespace {

// J_k = ∫_0^h e^{-λv} v^k dv, k = 0..3
std::array<double, 4> exp_moments(double lambda, double h) {
    std::array<double, 4> J{};
    const double x = lambda * h;
    if (x < 1.0) {
        for (int k = 0; k < 4; ++k) {
            double term = std::pow(h, k + 1);  // (-λ)^j h^{k+j+1} / j!
            double acc = 0.0;
            for (int j = 0; j < 40; ++j) {
                const double add = term / (k + j + 1);
                acc += add;
                if (std::abs(add) < 1e-18 * std::abs(acc)) break;
                term *= -x / (j + 1);
            }
            J[k] = acc;
        }
    } else {
        const double e = std::exp(-x);
        J[0] = (1.0 - e) / lambda;
        double hk = 1.0;
        for (int k = 1; k < 4; ++k) {
            hk *= h;
            J[k] = (k * J[k - 1] - hk * e) / lambda;
        }
    }
    return J;
}

// Coefficients of the Lagrange basis polynomials through nodes v[0..3], lowest degree first.
std::array<std::array<double, 4>, 4> lagrange_coefficients(const std::array<double, 4>& v) {
    std::array<std::array<double, 4>, 4> out{};
    for (int i = 0; i < 4; ++i) {
        std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};
        int deg = 0;
        double denom = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            // poly *= (v - v_j)
            std::array<double, 4> next{};
            for (int k = 0; k <= deg; ++k) {
                next[k + 1] += poly[k];
                next[k] -= v[j] * poly[k];
            }
            poly = next;
            ++deg;
            denom *= v[i] - v[j];
        }
        for (int k = 0; k < 4; ++k) out[i][k] = poly[k] / denom;
    }
    return out;
}

}  // namespace

double duhamel_residual(const TrajectoryRecord& traj, const SpectralField& f_omega) {
    const std::size_t S = traj.snapshots.size();
    if (S < 4) throw std::invalid_argument("duhamel_residual: need at least 4 snapshots");
    if (!traj.completed) throw std::invalid_argument("duhamel_residual: trajectory did not complete");
    require_same_grid(traj.snapshots.front(), f_omega, "duhamel_residual");
    const auto mesh = time_mesh(traj.params);
    double hmax = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) hmax = std::max(hmax, mesh[i + 1] - mesh[i]);
    for (std::size_t m = 0; m + 1 < S; ++m) {
        if (traj.times[m + 1] - traj.times[m] > 10.0 * hmax * (1.0 + 1e-9)) {
            throw std::invalid_argument("duhamel_residual: snapshot spacing exceeds 10 steps");
        }
    }

    const GridSpec& grid = f_omega.grid();
    const Lattice& lat = lattice(grid);
    const int d = grid.dim;
    const double T = traj.times.back();
    std::vector<SpectralField> F;
    F.reserve(S);
    for (std::size_t m = 0; m < S; ++m) {
        F.push_back(coupling_terms(traj.snapshots[m], heat_flow(f_omega, traj.times[m]),
                                   traj.params.c1, traj.params.c2));
    }

    const int lmax = static_cast<int>(std::lround(*std::max_element(lat.norm2.begin(), lat.norm2.end())));
    SpectralField wd = heat_flow(traj.snapshots.front(), T);
    std::vector<std::array<double, 4>> weights(lmax + 1);
    for (std::size_t m = 0; m + 1 < S; ++m) {
        const std::size_t i0 = std::min(m > 0 ? m - 1 : 0, S - 4);
        const double s1 = traj.times[m + 1];
        const double H = s1 - traj.times[m];
        std::array<double, 4> v{};
        for (int i = 0; i < 4; ++i) v[i] = s1 - traj.times[i0 + i];
        const auto L = lagrange_coefficients(v);
        for (int lam = 0; lam <= lmax; ++lam) {
            const auto J = exp_moments(lam, H);
            const double decay = std::exp(-lam * (T - s1));
            for (int i = 0; i < 4; ++i) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += L[i][k] * J[k];
                weights[lam][i] = decay * acc;
            }
        }
        for (std::size_t idx = 0; idx < lat.size(); ++idx) {
            const auto& wgt = weights[static_cast<int>(lat.norm2[idx])];
            for (int c = 0; c < d; ++c) {
                cplx acc = 0.0;
                for (int i = 0; i < 4; ++i) acc += wgt[i] * F[i0 + i].at(c, idx);
                wd.at(c, idx) += acc;
            }
        }
    }
    const SpectralField diff = traj.final_state() - wd;
    const double denom = std::max(std::sqrt(sum_sq(traj.final_state())), 1e-300);
    return std::sqrt(sum_sq(diff)) / denom;
}

ReconstructedU reconstruct_u(const TrajectoryRecord& traj, const SpectralField& f_omega) {
    ReconstructedU out;
    const std::size_t S = traj.snapshots.size();
    out.times = traj.times;
    for (std::size_t m = 0; m < S; ++m) {
        SpectralField u = heat_flow(f_omega, traj.times[m]);
        u += traj.snapshots[m];
        u.set_divergence_free(true);
        out.u.push_back(std::move(u));
    }
    for (std::size_t m = 1; m + 1 < S; ++m) {
        const double h1 = traj.times[m] - traj.times[m - 1];
        const double h2 = traj.times[m + 1] - traj.times[m];
        SpectralField dudt = (-h2 / (h1 * (h1 + h2))) * out.u[m - 1];
        dudt.axpy((h2 - h1) / (h1 * h2), out.u[m]);
        dudt.axpy(h1 / (h2 * (h1 + h2)), out.u[m + 1]);
        SpectralField lap = apply_radial(out.u[m], [](double q) { return q; });  // -Δu
        const SpectralField nl = nonlinear_term(out.u[m], out.u[m]);
        SpectralField r = dudt + lap;
        r += nl;
        const double res = std::sqrt(sum_sq(r));
        const double scale = std::sqrt(sum_sq(dudt)) + std::sqrt(sum_sq(lap)) + std::sqrt(sum_sq(nl));
        out.residual_times.push_back(traj.times[m]);
        out.residual.push_back(res);
        out.residual_rel.push_back(scale == 0.0 ? 0.0 : res / scale);
    }
    return out;
}

}  // namespace randns
