#pragma once

#include <cstdint>
#include <functional>

#include "randns/field.hpp"

namespace randns {

/// f = amplitude * (e_n + e_{-n}) on one component, i.e. 2 a cos(n.x).
SpectralField single_pair(const GridSpec& grid, const Wavevector& n, int component,
                          double amplitude = 1.0);

/// d=2 Taylor-Green cell u = a (sin x cos y, -cos x sin y); decays as e^{-2t}.
SpectralField taylor_green(const GridSpec& grid, double amplitude = 1.0);

/// d=3 ABC (Beltrami) flow with curl u = u; decays as e^{-t}.
SpectralField abc_flow(const GridSpec& grid, double A = 1.0, double B = 1.0, double C = 1.0);

/// Samples a trigonometric polynomial given pointwise; exact when its degree is <= M.
SpectralField sample_function(const GridSpec& grid,
                              const std::function<void(const double* x, double* u)>& fn);

/// Rough divergence-free datum f(n) = amplitude <n>^decay P xi(n), with xi a
/// complex gaussian vector per canonical site keyed by (seed, n). Coefficients
/// do not depend on M, so truncations at different M are nested.
/// decay = alpha/2 - d/2 puts f in H^{-alpha} but not in L^2.
SpectralField rough_datum(const GridSpec& grid, double decay, std::uint64_t seed,
                          double amplitude = 1.0);

/// Default decay exponent for rough_datum at regularity alpha.
inline double rough_decay(int dim, double alpha) { return 0.5 * alpha - 0.5 * dim; }

}  // namespace randns
