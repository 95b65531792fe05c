#include "gph/field.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gph/fft.hpp"

namespace gph {

namespace {

void require_same_grid(const Field& a, const Field& b, const char* who) {
    if (a.grid() != b.grid())
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

// momentum vector of the flat coefficient index
MomentumVec momentum_of(const Grid& g, std::size_t flat) {
    MomentumVec p{};
    for (int a = g.dim() - 1; a >= 0; --a) {
        p[a] = g.momentum(int(flat % g.points()));
        flat /= g.points();
    }
    return p;
}

MomentumVec coord_of(const Grid& g, std::size_t flat) {
    MomentumVec x{};
    for (int a = g.dim() - 1; a >= 0; --a) {
        x[a] = g.coord(int(flat % g.points()));
        flat /= g.points();
    }
    return x;
}

}  // namespace

Field::Field(const Grid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("Field: value count does not match grid");
}

bool Field::all_finite() const {
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o, "Field+");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o, "Field-");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(cplx s) {
    for (cplx& v : values_) v *= s;
    return *this;
}

Field to_momentum(const Field& f) {
    Field out = f;
    const TensorShape sh = out.shape();
    for (int a = 0; a < sh.rank; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_momentum, f.grid().halfwidth());
    return out;
}

Field to_position(const Field& fhat) {
    Field out = fhat;
    const TensorShape sh = out.shape();
    for (int a = 0; a < sh.rank; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_position, fhat.grid().halfwidth());
    return out;
}

std::vector<cplx> multiplier_table(
    const Grid& grid, const std::function<cplx(const MomentumVec&)>& symbol) {
    std::vector<cplx> table(grid.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const MomentumVec p = momentum_of(grid, i);
        const cplx v = symbol(p);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "apply_multiplier: non-finite symbol at p = (";
            for (int a = 0; a < grid.dim(); ++a)
                os << (a ? ", " : "") << p[a];
            os << ")";
            throw std::invalid_argument(os.str());
        }
        table[i] = v;
    }
    return table;
}

Field apply_multiplier(const Field& f,
                       const std::function<cplx(const MomentumVec&)>& symbol) {
    if (!f.all_finite())
        throw std::invalid_argument("apply_multiplier: non-finite input field");
    const std::vector<cplx> table = multiplier_table(f.grid(), symbol);
    Field fhat = to_momentum(f);
    fft::scale_pointwise(fhat.data(), fhat.size(), table.data());
    return to_position(fhat);
}

cplx quadrature_inner(const Field& f, const Field& g) {
    require_same_grid(f, g, "quadrature_inner");
    double re = 0.0, im = 0.0;
    const cplx* a = f.data();
    const cplx* b = g.data();
    const std::ptrdiff_t n = std::ptrdiff_t(f.size());
#pragma omp parallel for schedule(static) reduction(+ : re, im)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const cplx t = std::conj(a[i]) * b[i];
        re += t.real();
        im += t.imag();
    }
    return f.grid().cell_volume() * cplx(re, im);
}

double l2_norm_sq(const Field& f) {
    double s = 0.0;
    for (const cplx& v : f.values()) s += std::norm(v);
    return f.grid().cell_volume() * s;
}

double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

double lp_norm_pow(const Field& f, int p) {
    if (p % 2 != 0 || p < 2)
        throw std::invalid_argument("lp_norm_pow: p must be even and >= 2");
    double s = 0.0;
    for (const cplx& v : f.values()) {
        double a = std::norm(v);  // |v|^2
        double t = a;
        for (int q = 4; q <= p; q += 2) t *= a;
        s += t;
    }
    return f.grid().cell_volume() * s;
}

double gradient_norm_sq(const Field& f) {
    const Field fhat = to_momentum(f);
    const Grid& g = f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const MomentumVec p = momentum_of(g, i);
        double p2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) p2 += p[a] * p[a];
        s += p2 * std::norm(fhat.values()[i]);
    }
    return g.momentum_measure() * s;
}

double sobolev_norm_sq(const Field& f, double s) {
    const Field fhat = to_momentum(f);
    const Grid& g = f.grid();
    double acc = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const MomentumVec p = momentum_of(g, i);
        double p2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) p2 += p[a] * p[a];
        acc += std::pow(1.0 + p2, s) * std::norm(fhat.values()[i]);
    }
    return g.momentum_measure() * acc;
}

cplx sobolev_inner(const Field& f, const Field& g, double s) {
    require_same_grid(f, g, "sobolev_inner");
    const Field fh = to_momentum(f);
    const Field gh = to_momentum(g);
    const Grid& gr = f.grid();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        const MomentumVec p = momentum_of(gr, i);
        double p2 = 0.0;
        for (int a = 0; a < gr.dim(); ++a) p2 += p[a] * p[a];
        acc += std::pow(1.0 + p2, s) * std::conj(fh.values()[i]) * gh.values()[i];
    }
    return gr.momentum_measure() * acc;
}

double second_moment(const Field& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const MomentumVec x = coord_of(g, i);
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) x2 += x[a] * x[a];
        s += x2 * std::norm(f.values()[i]);
    }
    return g.cell_volume() * s;
}

double second_moment_rate(const Field& f) {
    const Grid& g = f.grid();
    // grad f via per-axis momentum multiplier i p_a
    double total = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        Field da = to_momentum(f);
        const TensorShape sh = da.shape();
        std::vector<cplx> tab(g.points());
        for (int j = 0; j < g.points(); ++j) tab[j] = cplx(0.0, g.momentum(j));
        fft::scale_axis(da.data(), sh, a, std::span<const cplx>(tab));
        da = to_position(da);
        double im = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const MomentumVec x = coord_of(g, i);
            im += (std::conj(f.values()[i]) * da.values()[i]).imag() * x[a];
        }
        total += im;
    }
    return 4.0 * g.cell_volume() * total;
}

Field make_gaussian(const Grid& grid, const std::array<double, kMaxDim>& center,
                    double width, double amplitude) {
    if (!(width > 0.0))
        throw std::invalid_argument("make_gaussian: width must be positive");
    Field f(grid);
    const double norm =
        std::pow(2.0 / (Grid::kPi * width * width), grid.dim() / 4.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const MomentumVec x = coord_of(grid, i);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            const double d = x[a] - center[a];
            r2 += d * d;
        }
        f.values()[i] = amplitude * norm * std::exp(-r2 / (width * width));
    }
    return f;
}

Field make_plane_wave(const Grid& grid, const MomentumVec& p0,
                      double amplitude) {
    const double unit = Grid::kPi / grid.halfwidth();
    for (int a = 0; a < grid.dim(); ++a) {
        const double fidx = p0[a] / unit;
        const double rounded = std::round(fidx);
        if (std::abs(fidx - rounded) > 1e-9 || rounded < -grid.points() / 2 ||
            rounded > grid.points() / 2 - 1) {
            std::ostringstream os;
            os << "make_plane_wave: momentum component " << p0[a]
               << " (axis " << a << ") is not on the lattice pi/L * [-"
               << grid.points() / 2 << ", " << grid.points() / 2 - 1 << "]";
            throw std::invalid_argument(os.str());
        }
    }
    Field f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const MomentumVec x = coord_of(grid, i);
        double phase = 0.0;
        for (int a = 0; a < grid.dim(); ++a) phase += p0[a] * x[a];
        f.values()[i] = amplitude * std::polar(1.0, phase);
    }
    return f;
}

Field make_soliton(const Grid& grid, double a) {
    if (grid.dim() != 1)
        throw std::invalid_argument("make_soliton: dimension 1 only");
    if (!(a > 0.0))
        throw std::invalid_argument("make_soliton: parameter must be positive");
    Field f(grid);
    for (int i = 0; i < grid.points(); ++i)
        f.values()[i] = std::sqrt(2.0) * a / std::cosh(a * grid.coord(i));
    return f;
}

Field with_quadratic_chirp(const Field& f, double b) {
    Field out = f;
    const Grid& g = f.grid();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const MomentumVec x = coord_of(g, i);
        double x2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) x2 += x[a] * x[a];
        out.values()[i] *= std::polar(1.0, b * x2);
    }
    return out;
}

Field random_smooth_field(const Grid& grid, std::uint64_t seed, double decay) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Field fhat(grid);
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const MomentumVec p = momentum_of(grid, i);
        double p2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) p2 += p[a] * p[a];
        const double damp = std::exp(-p2 / (2.0 * decay * decay));
        fhat.values()[i] = damp * cplx(normal(rng), normal(rng));
    }
    Field f = to_position(fhat);
    const double n = l2_norm(f);
    if (n > 0) f *= cplx(1.0 / n, 0.0);
    return f;
}

}  // namespace gph
