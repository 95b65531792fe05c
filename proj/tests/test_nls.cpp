#include <doctest.h>

#include <cmath>

#include "gph/nls.hpp"

using namespace gph;

namespace {
const Grid grid1d(1, 256, 16.0);

Field normalized_gaussian(const Grid& g, double amplitude = 1.0) {
    return make_gaussian(g, {0.0, 0.0, 0.0}, 1.0, amplitude);
}

double max_pointwise_error(const Field& a, const Field& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}
}  // namespace

TEST_CASE("plane wave evolves with the exact dispersion phase") {
    const double p0 = Grid::kPi / 16.0 * 8.0;
    const double A = 0.75;
    for (Power power : {Power::cubic, Power::quintic}) {
        for (int mu : {+1, -1}) {
            Field init = make_plane_wave(grid1d, {p0, 0, 0}, A);
            StepController ctrl{1e-3, 1e-9, 1e6, 0.5};
            auto rec = nls_evolve({mu, power, init}, ctrl, 1.0, 0.5);
            const double omega =
                p0 * p0 +
                mu * (power == Power::cubic ? A * A : A * A * A * A);
            Field exact = init;
            exact *= std::polar(1.0, -omega * 1.0);
            CHECK(rec.times.back() == doctest::Approx(1.0));
            CHECK(max_pointwise_error(rec.states.back().front(), exact) < 1e-6);
        }
    }
}

TEST_CASE("soliton keeps its modulus under the focusing cubic flow") {
    const Grid g(1, 512, 32.0);
    Field init = make_soliton(g, 1.0);
    StepController ctrl{1e-3, 1e-9, 1e6, 0.5};
    auto rec = nls_evolve({-1, Power::cubic, init}, ctrl, 1.0, 1.0);
    const Field& fin = rec.states.back().front();
    double worst = 0.0;
    for (std::size_t i = 0; i < fin.size(); ++i)
        worst = std::max(worst, std::abs(std::abs(fin.values()[i]) -
                                         std::abs(init.values()[i])));
    CHECK(worst < 1e-5);
    // phase is e^{i a^2 t}: compare against the exact solution as well
    Field exact = init;
    exact *= std::polar(1.0, 1.0);
    CHECK(max_pointwise_error(fin, exact) < 1e-4);
}

TEST_CASE("zero initial data stays zero") {
    Field zero(grid1d);
    StepController ctrl{1e-2, 1e-9, 1e6, 0.5};
    auto rec = nls_evolve({+1, Power::cubic, zero}, ctrl, 0.1, 0.05);
    CHECK(l2_norm(rec.states.back().front()) == 0.0);
}

TEST_CASE("splitting conserves mass to roundoff per step") {
    Field f = normalized_gaussian(grid1d, 1.3);
    const double m0 = l2_norm_sq(f);
    for (int i = 0; i < 50; ++i) {
        strang_step(f, 1e-3, -1, Power::cubic);
        CHECK(std::abs(l2_norm_sq(f) - m0) < 1e-12);
    }
}

TEST_CASE("energy drift is second order in dt") {
    auto drift = [&](double dt) {
        Field init = normalized_gaussian(grid1d, 1.2);
        StepController ctrl{dt, 1e-12, 1e6, 0.5};
        auto rec = nls_evolve({+1, Power::cubic, init}, ctrl, 0.5, 0.05);
        const auto e = rec.series("energy");
        double worst = 0.0;
        for (double v : e) worst = std::max(worst, std::abs(v - e.front()));
        return worst;
    };
    const double d1 = drift(2e-3);
    const double d2 = drift(1e-3);
    CHECK(d1 / d2 >= 3.5);
    CHECK(d2 < 1e-6);
}

TEST_CASE("evolution is time reversible") {
    Field f = normalized_gaussian(grid1d, 1.1);
    const Field init = f;
    const double dt = 1e-3;
    for (int i = 0; i < 200; ++i) strang_step(f, dt, -1, Power::cubic);
    for (int i = 0; i < 200; ++i) strang_step(f, -dt, -1, Power::cubic);
    CHECK(max_pointwise_error(f, init) < 1e-8);
}

TEST_CASE("nls energy closed forms") {
    SUBCASE("normalized gaussian, cubic defocusing: 1/2 + 1/(4 sqrt(pi))") {
        Field f = normalized_gaussian(grid1d);
        CHECK(std::abs(nls_energy(f, +1, Power::cubic) - 0.6410473958869391) <
              1e-7);
    }
    SUBCASE("zero field") {
        CHECK(nls_energy(Field(grid1d), +1, Power::cubic) == 0.0);
        CHECK(nls_energy(Field(grid1d), -1, Power::quintic) == 0.0);
    }
    SUBCASE("soliton gradient term agrees between momentum and position") {
        const Grid g(1, 512, 32.0);
        Field f = make_soliton(g, 1.0);
        const double momentum_route = gradient_norm_sq(f);
        Field df = apply_multiplier(
            f, [](const MomentumVec& p) { return cplx(0.0, p[0]); });
        const double position_route = quadrature_inner(df, df).real();
        CHECK(std::abs(momentum_route - position_route) < 1e-10);
        const double e = nls_energy(f, -1, Power::cubic);
        CHECK(std::abs(e - (0.5 * momentum_route - 0.25 * lp_norm_pow(f, 4))) <
              1e-12);
    }
}

TEST_CASE("focusing quintic with negative energy halts on the norm threshold") {
    const Grid g(1, 512, 16.0);
    Field init = normalized_gaussian(g, 2.0);
    REQUIRE(nls_energy(init, -1, Power::quintic) < 0.0);
    StepController ctrl{1e-3, 1e-10, 25.0, 0.5};
    auto rec = nls_evolve({-1, Power::quintic, init}, ctrl, 2.0, 0.01);
    REQUIRE(rec.halted.has_value());
    CHECK(rec.halted->time < 2.0);
    CHECK(rec.halted->reason.find("halt threshold") != std::string::npos);
}

TEST_CASE("controller preconditions") {
    Field f = normalized_gaussian(grid1d);
    SUBCASE("halt_norm must exceed the initial norm") {
        StepController ctrl{1e-3, 1e-9, 0.5, 0.5};
        CHECK_THROWS_AS((void)nls_evolve({+1, Power::cubic, f}, ctrl, 1.0, 0.1),
                        std::invalid_argument);
    }
    SUBCASE("dt_min must stay below dt") {
        StepController ctrl{1e-3, 1e-2, 1e6, 0.5};
        CHECK_THROWS_AS((void)nls_evolve({+1, Power::cubic, f}, ctrl, 1.0, 0.1),
                        std::invalid_argument);
    }
    SUBCASE("step collapse aborts with a diagnostic") {
        const Grid g(1, 256, 16.0);
        Field init = normalized_gaussian(g, 2.5);
        StepController ctrl{1e-3, 2e-4, 1e25, 0.5};
        CHECK_THROWS_WITH_AS(
            (void)nls_evolve({-1, Power::quintic, init}, ctrl, 2.0, 0.01),
            doctest::Contains("step collapse"), std::runtime_error);
    }
}
