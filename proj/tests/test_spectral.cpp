#include <doctest.h>

#include <cmath>

#include "gph/fft.hpp"
#include "gph/field.hpp"

using namespace gph;

namespace {
const Grid grid1d(1, 256, 16.0);

Field normalized_gaussian(const Grid& g) {
    return make_gaussian(g, {0.0, 0.0, 0.0}, 1.0, 1.0);
}
}  // namespace

TEST_CASE("fourier round trip") {
    Field f = random_smooth_field(grid1d, 42);
    Field back = to_position(to_momentum(f));
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        worst = std::max(worst, std::abs(back.values()[i] - f.values()[i]));
        scale = std::max(scale, std::abs(f.values()[i]));
    }
    CHECK(worst / scale < 1e-12);
}

TEST_CASE("fft agrees with the direct transform definition") {
    for (int dim : {1, 2}) {
        const Grid g(dim, 32, 8.0);
        Field f = random_smooth_field(g, 7 + dim);
        Field a = f, b = f;
        const TensorShape sh = f.shape();
        for (auto kind : {fft::AxisKind::unprimed, fft::AxisKind::primed}) {
            for (auto dir : {fft::Dir::to_momentum, fft::Dir::to_position}) {
                fft::transform_axis(a.data(), sh, dim - 1, kind, dir,
                                    g.halfwidth(), fft::Backend::fft);
                fft::transform_axis(b.data(), sh, dim - 1, kind, dir,
                                    g.halfwidth(), fft::Backend::dft_direct);
                double worst = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    worst = std::max(worst,
                                     std::abs(a.values()[i] - b.values()[i]));
                CHECK(worst < 1e-11);
            }
        }
    }
}

TEST_CASE("identity multiplier returns the field unchanged") {
    Field f = random_smooth_field(grid1d, 3);
    Field g = apply_multiplier(f, [](const MomentumVec&) { return cplx(1.0); });
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(g.values()[i] - f.values()[i]) < 1e-12);
}

TEST_CASE("plane waves are multiplier eigenfunctions") {
    const double p0 = Grid::kPi / 16.0 * 12.0;  // lattice momentum, f = 12
    Field f = make_plane_wave(grid1d, {p0, 0, 0}, 1.0);
    const double s = 1.5;
    Field g = apply_multiplier(f, [&](const MomentumVec& p) {
        return cplx(std::pow(1.0 + p[0] * p[0], s / 2.0));
    });
    const double expected = std::pow(1.0 + p0 * p0, s / 2.0);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(g.values()[i] - expected * f.values()[i]) <
              1e-10 * expected);
}

TEST_CASE("|p|^2 multiplier pairs to the gradient norm of the gaussian") {
    // int 4 x^2 |phi|^2 = 1 for the normalized width-1 gaussian
    Field f = normalized_gaussian(grid1d);
    Field lap = apply_multiplier(
        f, [](const MomentumVec& p) { return cplx(p[0] * p[0]); });
    const cplx pairing = quadrature_inner(f, lap);
    CHECK(std::abs(pairing.real() - 1.0) < 1e-8);
    CHECK(std::abs(pairing.imag()) < 1e-12);
}

TEST_CASE("multiplier rejects non-finite symbols naming the momentum") {
    Field f = normalized_gaussian(grid1d);
    CHECK_THROWS_WITH_AS(
        apply_multiplier(f,
                         [](const MomentumVec& p) {
                             return p[0] == 0.0 ? cplx(1.0 / 0.0) : cplx(1.0);
                         }),
        doctest::Contains("non-finite symbol at p = (0"),
        std::invalid_argument);
}

TEST_CASE("quadrature inner product") {
    SUBCASE("normalized gaussian has unit mass") {
        Field f = normalized_gaussian(grid1d);
        CHECK(std::abs(quadrature_inner(f, f).real() - 1.0) < 1e-10);
    }
    SUBCASE("distinct lattice plane waves are orthogonal") {
        const double unit = Grid::kPi / 16.0;
        Field f = make_plane_wave(grid1d, {3 * unit, 0, 0}, 1.0);
        Field g = make_plane_wave(grid1d, {-5 * unit, 0, 0}, 1.0);
        CHECK(std::abs(quadrature_inner(f, g)) < 1e-12);
    }
    SUBCASE("zero fields pair to zero") {
        Field z(grid1d);
        CHECK(quadrature_inner(z, z) == cplx(0.0));
    }
    SUBCASE("grid mismatch is rejected") {
        Field a(grid1d), b(Grid(1, 128, 16.0));
        CHECK_THROWS_AS((void)quadrature_inner(a, b), std::invalid_argument);
    }
}

TEST_CASE("reference fields") {
    SUBCASE("gaussian norms and moments") {
        Field f = normalized_gaussian(grid1d);
        CHECK(std::abs(l2_norm(f) - 1.0) < 1e-10);
        CHECK(std::abs(gradient_norm_sq(f) - 1.0) < 1e-8);
        CHECK(std::abs(second_moment(f) - 0.25) < 1e-8);
        // |phi|_{L4}^4 = 1/sqrt(pi)
        CHECK(std::abs(lp_norm_pow(f, 4) - 0.5641895835477563) < 1e-8);
    }
    SUBCASE("plane wave has constant modulus") {
        Field f = make_plane_wave(grid1d, {Grid::kPi / 16.0 * 4, 0, 0}, 0.7);
        for (const cplx& v : f.values()) CHECK(std::abs(std::abs(v) - 0.7) < 1e-13);
    }
    SUBCASE("off-lattice momentum is rejected") {
        CHECK_THROWS_AS((void)make_plane_wave(grid1d, {0.1234, 0, 0}, 1.0),
                        std::invalid_argument);
    }
    SUBCASE("soliton mass: int 2 sech^2 = 4") {
        const Grid g(1, 512, 32.0);
        Field f = make_soliton(g, 1.0);
        CHECK(std::abs(l2_norm_sq(f) - 4.0) < 1e-8);
    }
    SUBCASE("soliton requires dimension 1") {
        CHECK_THROWS_AS((void)make_soliton(Grid(2, 32, 8.0), 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("parseval identity on random fields") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Field f = random_smooth_field(grid1d, seed);
        Field fhat = to_momentum(f);
        double mom = 0.0;
        for (const cplx& c : fhat.values()) mom += std::norm(c);
        mom *= grid1d.momentum_measure();
        const double pos = quadrature_inner(f, f).real();
        CHECK(std::abs(pos - mom) < 1e-12 * std::max(1.0, pos));
    }
}

TEST_CASE("multipliers compose") {
    Field f = random_smooth_field(grid1d, 11);
    auto s1 = [](const MomentumVec& p) { return std::polar(1.0, 0.3 * p[0]); };
    auto s2 = [](const MomentumVec& p) { return cplx(1.0 / (1.0 + p[0] * p[0])); };
    Field seq = apply_multiplier(apply_multiplier(f, s1), s2);
    Field prod = apply_multiplier(
        f, [&](const MomentumVec& p) { return s1(p) * s2(p); });
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(seq.values()[i] - prod.values()[i]) < 1e-12);
}

TEST_CASE("free propagator is unitary") {
    Field f = random_smooth_field(grid1d, 13);
    const double t = 0.37;
    Field g = apply_multiplier(f, [&](const MomentumVec& p) {
        return std::polar(1.0, -t * p[0] * p[0]);
    });
    CHECK(std::abs(l2_norm_sq(g) - l2_norm_sq(f)) < 1e-12);
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(1, 15, 8.0), std::invalid_argument);  // odd m
    CHECK_THROWS_AS(Grid(1, 32, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(4, 32, 8.0), std::invalid_argument);
    const std::size_t saved = entry_budget();
    entry_budget() = 1000;
    CHECK_THROWS_AS(Grid(2, 64, 8.0), std::invalid_argument);
    entry_budget() = saved;
}
