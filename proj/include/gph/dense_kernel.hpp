#pragma once

#include <vector>

#include "gph/field.hpp"
#include "gph/grid.hpp"

namespace gph {

// Order-k marginal kernel gamma(x_1..x_k; x'_1..x'_k) as a dense complex
// tensor, dimension-1 grids only. Axis layout is row-major with the k
// unprimed coordinates first (x_1 slowest), then the k primed ones.
class DenseKernel {
public:
    DenseKernel(int order, const Grid& grid);
    DenseKernel(int order, const Grid& grid, std::vector<cplx> values);

    int order() const { return order_; }
    const Grid& grid() const { return grid_; }
    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }
    cplx* data() { return values_.data(); }
    const cplx* data() const { return values_.data(); }
    std::size_t size() const { return values_.size(); }

    TensorShape shape() const { return {2 * order_, grid_.points()}; }

    DenseKernel& operator+=(const DenseKernel& o);
    DenseKernel& operator-=(const DenseKernel& o);
    DenseKernel& operator*=(cplx s);
    friend DenseKernel operator-(DenseKernel a, const DenseKernel& b) {
        return a -= b;
    }
    friend DenseKernel operator+(DenseKernel a, const DenseKernel& b) {
        return a += b;
    }
    friend DenseKernel operator*(cplx s, DenseKernel g) { return g *= s; }

    // Throws when m^{2k} would exceed the entry budget.
    static void check_budget(int order, const Grid& grid);

private:
    int order_;
    Grid grid_;
    std::vector<cplx> values_;
};

struct SymmetryReport {
    double hermitian_defect = 0.0;    // max |g(x;x') - conj(g(x';x))|
    double permutation_defect = 0.0;  // max over simultaneous permutations
};

// Rank-one product kernel phi(x_1)..phi(x_k) conj(phi(x'_1)..phi(x'_k)).
DenseKernel factorized_kernel(const Field& phi, int order);

// Quadrature over the last diagonal pair: h * sum_y g(x_k, y; x'_k, y).
DenseKernel partial_trace(const DenseKernel& g);

SymmetryReport symmetry_report(const DenseKernel& g);

// L2 kernel norm, h^{2k} weighted
double kernel_l2_norm(const DenseKernel& g);

// h^k * sum_x g(x; x)
cplx kernel_trace(const DenseKernel& g);

// Free flow e^{i t Delta^{(k)}}: multiplier e^{-i t |p_j|^2} on unprimed
// axes and e^{+i t |p'_j|^2} on primed ones.
DenseKernel free_propagate(const DenseKernel& g, double t);

// Explicit symmetrization: hermitian average followed by averaging over all
// simultaneous permutations of both argument blocks.
DenseKernel symmetrize(const DenseKernel& g);

// Random smooth symmetric kernel (test input), deterministic in the seed.
DenseKernel random_symmetric_kernel(int order, const Grid& grid,
                                    std::uint64_t seed);

}  // namespace gph
