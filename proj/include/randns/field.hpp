#pragma once

#include <complex>
#include <span>
#include <vector>

#include "randns/grid.hpp"

namespace randns {

using cplx = std::complex<double>;

/// Real vector field on T^d stored by its Fourier coefficients on the
/// truncated lattice. Storage order: components outermost, then the
/// lattice order of Lattice.
///
/// The field is real, so coeff(-n) == conj(coeff(n)), and has zero mean.
/// Operations in this library preserve both properties exactly; they are
/// checked (not enforced) by hermitian_defect() and mean_defect().
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& grid);
    SpectralField(const GridSpec& grid, std::vector<cplx> coeffs, bool divergence_free = false);

    const GridSpec& grid() const { return grid_; }
    int components() const { return grid_.dim; }
    std::size_t modes() const { return modes_; }
    bool empty() const { return coeffs_.empty(); }

    cplx& at(int comp, std::size_t idx) { return coeffs_[comp * modes_ + idx]; }
    const cplx& at(int comp, std::size_t idx) const { return coeffs_[comp * modes_ + idx]; }

    std::span<cplx> component(int comp) { return {coeffs_.data() + comp * modes_, modes_}; }
    std::span<const cplx> component(int comp) const {
        return {coeffs_.data() + comp * modes_, modes_};
    }
    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<cplx> coeffs() { return coeffs_; }

    bool divergence_free() const { return divergence_free_; }
    void set_divergence_free(bool flag) { divergence_free_ = flag; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    /// this += a * x
    SpectralField& axpy(double a, const SpectralField& x);

    bool operator==(const SpectralField& o) const {
        return grid_ == o.grid_ && coeffs_ == o.coeffs_;
    }

    /// Largest |coeff(-n) - conj(coeff(n))| over all components and modes.
    double hermitian_defect() const;
    /// Largest |coeff(0)| over components.
    double mean_defect() const;
    /// Largest |n . c(n)| / (|n| |c(n)|) over modes with |c(n)| above
    /// floor * max|c|; modes below the floor are round-off and skipped.
    double divergence_defect(double floor = 1e-13) const;
    double max_abs() const;

private:
    GridSpec grid_{};
    std::size_t modes_ = 0;
    std::vector<cplx> coeffs_;
    bool divergence_free_ = false;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* op);

}  // namespace randns
