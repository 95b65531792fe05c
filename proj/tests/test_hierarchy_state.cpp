#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gph/mixture.hpp"

using namespace gph;

namespace {
const Grid grid32(1, 32, 8.0);

Field normalized_gaussian(const Grid& g, double amplitude = 1.0) {
    return make_gaussian(g, {0.0, 0.0, 0.0}, 1.0, amplitude);
}
}  // namespace

TEST_CASE("factorized kernel is the outer product at order 1") {
    Field phi = make_gaussian(grid32, {0.5, 0, 0}, 0.7, 1.0);
    DenseKernel g = factorized_kernel(phi, 1);
    const int m = grid32.points();
    for (int x = 0; x < m; ++x)
        for (int xp = 0; xp < m; ++xp)
            CHECK(std::abs(g.values()[std::size_t(x) * m + xp] -
                           phi.values()[x] * std::conj(phi.values()[xp])) <
                  1e-14);
}

TEST_CASE("partial trace of a factorized pair returns the lower level") {
    SUBCASE("normalized component: admissible") {
        Field phi = normalized_gaussian(grid32);
        DenseKernel two = factorized_kernel(phi, 2);
        DenseKernel traced = partial_trace(two);
        DenseKernel one = factorized_kernel(phi, 1);
        traced -= one;
        CHECK(kernel_l2_norm(traced) < 1e-10);
    }
    SUBCASE("mass-2 component scales the trace") {
        Field phi = normalized_gaussian(grid32, std::sqrt(2.0));
        DenseKernel traced = partial_trace(factorized_kernel(phi, 2));
        DenseKernel one = factorized_kernel(phi, 1);
        one *= cplx(2.0, 0.0);
        traced -= one;
        CHECK(kernel_l2_norm(traced) < 1e-10);
    }
    SUBCASE("random symmetric kernel against the brute-force diagonal sum") {
        DenseKernel g = random_symmetric_kernel(2, grid32, 99);
        DenseKernel traced = partial_trace(g);
        const int m = grid32.points();
        const double h = grid32.spacing();
        // oracle: direct h * sum over the traced diagonal pair
        double worst = 0.0;
        for (int x = 0; x < m; ++x)
            for (int xp = 0; xp < m; ++xp) {
                cplx acc = 0.0;
                for (int y = 0; y < m; ++y) {
                    const std::size_t idx =
                        ((std::size_t(x) * m + y) * m + xp) * m + y;
                    acc += g.values()[idx];
                }
                worst = std::max(
                    worst,
                    std::abs(h * acc - traced.values()[std::size_t(x) * m + xp]));
            }
        CHECK(worst < 1e-12);
    }
    SUBCASE("order 1 cannot be traced") {
        Field phi = normalized_gaussian(grid32);
        CHECK_THROWS_AS((void)partial_trace(factorized_kernel(phi, 1)),
                        std::invalid_argument);
    }
}

TEST_CASE("materialize") {
    SUBCASE("single unit-weight component equals the factorized kernel") {
        Field phi = normalized_gaussian(grid32);
        ProductMixture mix(1.0, phi);
        DenseKernel a = materialize(mix, 2);
        DenseKernel b = factorized_kernel(phi, 2);
        a -= b;
        CHECK(kernel_l2_norm(a) == 0.0);
    }
    SUBCASE("trace is linear in the weights") {
        const double unit = Grid::kPi / 8.0;
        Field f1 = make_plane_wave(grid32, {unit, 0, 0}, 1.0);
        Field f2 = make_plane_wave(grid32, {2 * unit, 0, 0}, 1.0);
        ProductMixture mix({{0.5, f1}, {0.5, f2}});
        DenseKernel g = materialize(mix, 1);
        const double expected = 0.5 * l2_norm_sq(f1) + 0.5 * l2_norm_sq(f2);
        CHECK(std::abs(kernel_trace(g).real() - expected) < 1e-12);
        CHECK(std::abs(kernel_trace(g).imag()) < 1e-13);
    }
    SUBCASE("3-component mixture at k=2: symmetric, matches direct sum") {
        std::vector<ProductMixture::Component> comps;
        for (int r = 0; r < 3; ++r)
            comps.push_back(
                {0.3 + 0.2 * r, random_smooth_field(grid32, 500 + r)});
        ProductMixture mix(comps);
        DenseKernel g = materialize(mix, 2);
        const SymmetryReport rep = symmetry_report(g);
        CHECK(rep.hermitian_defect < 1e-12);
        CHECK(rep.permutation_defect < 1e-12);
        // direct tensor-sum oracle
        const int m = grid32.points();
        double worst = 0.0;
        for (int x1 = 0; x1 < m; x1 += 7)
            for (int x2 = 0; x2 < m; x2 += 5)
                for (int y1 = 0; y1 < m; y1 += 3)
                    for (int y2 = 0; y2 < m; y2 += 7) {
                        cplx acc = 0.0;
                        for (const auto& c : comps)
                            acc += c.weight * c.field.values()[x1] *
                                   c.field.values()[x2] *
                                   std::conj(c.field.values()[y1]) *
                                   std::conj(c.field.values()[y2]);
                        const std::size_t idx =
                            ((std::size_t(x1) * m + x2) * m + y1) * m + y2;
                        worst = std::max(worst, std::abs(acc - g.values()[idx]));
                    }
        CHECK(worst < 1e-12);
    }
    SUBCASE("weights must be positive") {
        Field phi = normalized_gaussian(grid32);
        CHECK_THROWS_AS(ProductMixture(0.0, phi), std::invalid_argument);
        CHECK_THROWS_AS(ProductMixture(-1.0, phi), std::invalid_argument);
    }
}

TEST_CASE("admissibility defect") {
    Field phi = normalized_gaussian(grid32);
    SUBCASE("unit-norm component is admissible") {
        CHECK(admissibility_defect(ProductMixture(1.0, phi), 1) < 1e-10);
        CHECK(admissibility_defect(ProductMixture(1.0, phi), 2) < 1e-10);
    }
    SUBCASE("mass-2 component: defect equals the level norm") {
        Field heavy = normalized_gaussian(grid32, std::sqrt(2.0));
        ProductMixture mix(1.0, heavy);
        const double defect = admissibility_defect(mix, 1);
        CHECK(std::abs(defect - kernel_l2_norm(factorized_kernel(heavy, 1))) <
              1e-10);
        // dense route agrees
        CHECK(std::abs(defect - admissibility_defect(materialize(mix, 1),
                                                     materialize(mix, 2))) <
              1e-10);
    }
    SUBCASE("mixtures of normalized states are admissible") {
        ProductMixture mix(
            {{0.4, normalized_gaussian(grid32)},
             {0.6, make_plane_wave(grid32, {Grid::kPi / 8.0, 0, 0},
                                   1.0 / std::sqrt(16.0))}});
        for (const auto& c : mix.components())
            REQUIRE(std::abs(l2_norm_sq(c.field) - 1.0) < 1e-9);
        CHECK(admissibility_defect(mix, 1) < 1e-10);
        CHECK(std::abs(admissibility_defect(mix, 1) -
                       admissibility_defect(materialize(mix, 1),
                                            materialize(mix, 2))) < 1e-10);
    }
}

TEST_CASE("symmetry report") {
    Field phi = normalized_gaussian(grid32);
    SUBCASE("factorized kernels are exactly symmetric") {
        const SymmetryReport rep = symmetry_report(factorized_kernel(phi, 2));
        CHECK(rep.hermitian_defect < 1e-15);
        CHECK(rep.permutation_defect < 1e-15);
    }
    SUBCASE("a single perturbed entry shows up as its own size") {
        DenseKernel g = factorized_kernel(phi, 1);
        const double eps = 3e-7;
        g.values()[5 * 32 + 9] += eps;  // off-diagonal entry
        const SymmetryReport rep = symmetry_report(g);
        CHECK(rep.hermitian_defect == doctest::Approx(eps).epsilon(1e-9));
    }
    SUBCASE("explicit symmetrization drives defects to roundoff") {
        DenseKernel g = random_symmetric_kernel(2, grid32, 7);
        const SymmetryReport rep = symmetry_report(g);
        CHECK(rep.hermitian_defect < 1e-13);
        CHECK(rep.permutation_defect < 1e-13);
    }
}

TEST_CASE("partial trace of a mixture rescales the weights") {
    std::vector<ProductMixture::Component> comps = {
        {0.7, normalized_gaussian(grid32, 1.2)},
        {0.3, random_smooth_field(grid32, 21)}};
    ProductMixture mix(comps);
    DenseKernel traced = partial_trace(materialize(mix, 2));
    std::vector<ProductMixture::Component> scaled;
    for (const auto& c : comps)
        scaled.push_back({c.weight * l2_norm_sq(c.field), c.field});
    DenseKernel expected = materialize(ProductMixture(scaled), 1);
    traced -= expected;
    CHECK(kernel_l2_norm(traced) < 1e-10);
}

TEST_CASE("materialized order-1 kernels are positive semidefinite") {
    std::vector<ProductMixture::Component> comps;
    for (int r = 0; r < 4; ++r)
        comps.push_back({0.1 + 0.3 * r, random_smooth_field(grid32, 900 + r)});
    DenseKernel g = materialize(ProductMixture(comps), 1);
    const int m = grid32.points();
    Eigen::MatrixXcd M(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) M(r, c) = g.values()[std::size_t(r) * m + c];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
    CHECK(es.eigenvalues().minCoeff() * grid32.spacing() > -1e-10);
}

TEST_CASE("dense kernels respect the entry budget") {
    Field phi = normalized_gaussian(Grid(1, 256, 8.0));
    CHECK_THROWS_WITH_AS((void)factorized_kernel(phi, 2),
                         doctest::Contains("exceed the budget"),
                         std::invalid_argument);
}
