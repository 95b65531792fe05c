#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gph/grid.hpp"

namespace gph {

using MomentumVec = std::array<double, kMaxDim>;

// Complex lattice function on a Grid; the same container holds position
// values or momentum coefficients depending on which space it was produced in.
class Field {
public:
    explicit Field(const Grid& grid)
        : grid_(grid), values_(grid.size(), cplx(0.0, 0.0)) {}
    Field(const Grid& grid, std::vector<cplx> values);

    const Grid& grid() const { return grid_; }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx* data() { return values_.data(); }
    const cplx* data() const { return values_.data(); }
    std::size_t size() const { return values_.size(); }

    TensorShape shape() const { return {grid_.dim(), grid_.points()}; }
    bool all_finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cplx s);
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(cplx s, Field f) { return f *= s; }

private:
    Grid grid_;
    std::vector<cplx> values_;
};

// --- spectral transforms -------------------------------------------------

Field to_momentum(const Field& f);
Field to_position(const Field& fhat);

// Pointwise Fourier multiplier: coefficients scaled by symbol(p). The symbol
// is evaluated once on the momentum lattice; a non-finite value is rejected
// naming the offending momentum.
Field apply_multiplier(const Field& f,
                       const std::function<cplx(const MomentumVec&)>& symbol);

// Evaluated symbol table over the momentum lattice (flat, same layout as the
// coefficient array). Reused by integrators that apply one symbol many times.
std::vector<cplx> multiplier_table(
    const Grid& grid, const std::function<cplx(const MomentumVec&)>& symbol);

// --- quadrature and one-particle functionals ------------------------------

// h^n * sum conj(f) g; conjugate-linear in f.
cplx quadrature_inner(const Field& f, const Field& g);

double l2_norm_sq(const Field& f);
double l2_norm(const Field& f);

// integral of |f|^p for even p (L^4, L^6 interaction integrals)
double lp_norm_pow(const Field& f, int p);

// (2L)^-n * sum |p|^2 |fhat|^2
double gradient_norm_sq(const Field& f);

// (2L)^-n * sum (1+|p|^2)^s |fhat|^2
double sobolev_norm_sq(const Field& f, double s);

// (2L)^-n * sum (1+|p|^2)^s conj(fhat) ghat
cplx sobolev_inner(const Field& f, const Field& g, double s);

// integral of |x|^2 |f|^2
double second_moment(const Field& f);

// 4 Im integral of conj(f) x.grad f  (time derivative of the second moment
// under Schroedinger flow)
double second_moment_rate(const Field& f);

// --- reference fields -----------------------------------------------------

// amplitude * (2/(pi w^2))^{n/4} exp(-|x-c|^2 / w^2); L2 norm = |amplitude|
Field make_gaussian(const Grid& grid, const std::array<double, kMaxDim>& center,
                    double width, double amplitude);

// amplitude * e^{i p0.x}; every component of p0 must lie on the momentum
// lattice, otherwise rejected (an off-lattice wave would alias).
Field make_plane_wave(const Grid& grid, const MomentumVec& p0, double amplitude);

// sqrt(2) a sech(a x), dimension 1 only; standing solution of the focusing
// cubic equation with phase e^{i a^2 t}.
Field make_soliton(const Grid& grid, double a);

// multiply by e^{i b |x|^2}
Field with_quadratic_chirp(const Field& f, double b);

// Smooth random field: Gaussian coefficient amplitudes damped by
// exp(-|p|^2/(2 decay^2)), deterministic in the seed.
Field random_smooth_field(const Grid& grid, std::uint64_t seed,
                          double decay = 2.0);

}  // namespace gph
