#include "randns/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "randns/errors.hpp"

namespace randns {

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), modes_(grid.modes()), coeffs_(grid.size(), cplx{0.0, 0.0}) {
    grid_.validate();
}

SpectralField::SpectralField(const GridSpec& grid, std::vector<cplx> coeffs, bool divergence_free)
    : grid_(grid), modes_(grid.modes()), coeffs_(std::move(coeffs)),
      divergence_free_(divergence_free) {
    grid_.validate();
    if (coeffs_.size() != grid_.size()) {
        throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                    " does not match grid size " +
                                    std::to_string(grid_.size()));
    }
}

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* op) {
    if (a.grid() != b.grid()) {
        throw GridMismatch(std::string(op) + ": operands on different grids (d=" +
                           std::to_string(a.grid().dim) + ",M=" + std::to_string(a.grid().M) +
                           " vs d=" + std::to_string(b.grid().dim) +
                           ",M=" + std::to_string(b.grid().M) + ")");
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(*this, o, "operator+=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    divergence_free_ = divergence_free_ && o.divergence_free_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(*this, o, "operator-=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    divergence_free_ = divergence_free_ && o.divergence_free_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
    require_same_grid(*this, x, "axpy");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
    divergence_free_ = divergence_free_ && x.divergence_free_;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double SpectralField::hermitian_defect() const {
    const Lattice& lat = lattice(grid_);
    double worst = 0.0;
    for (int c = 0; c < components(); ++c) {
        for (std::size_t i = 0; i < modes_; ++i) {
            worst = std::max(worst, std::abs(at(c, lat.mirror(i)) - std::conj(at(c, i))));
        }
    }
    return worst;
}

double SpectralField::mean_defect() const {
    const Lattice& lat = lattice(grid_);
    double worst = 0.0;
    for (int c = 0; c < components(); ++c) worst = std::max(worst, std::abs(at(c, lat.center)));
    return worst;
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::norm(c));
    return std::sqrt(m);
}

double SpectralField::divergence_defect(double floor) const {
    const Lattice& lat = lattice(grid_);
    const double cutoff = floor * max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < modes_; ++i) {
        if (i == lat.center) continue;
        cplx dot{0.0, 0.0};
        double mag2 = 0.0;
        for (int c = 0; c < components(); ++c) {
            dot += static_cast<double>(lat.n[i][c]) * at(c, i);
            mag2 += std::norm(at(c, i));
        }
        const double mag = std::sqrt(mag2);
        if (mag <= cutoff || mag == 0.0) continue;
        worst = std::max(worst, std::abs(dot) / (std::sqrt(lat.norm2[i]) * mag));
    }
    return worst;
}

}  // namespace randns
