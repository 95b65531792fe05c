#pragma once

#include "gph/dense_kernel.hpp"
#include "gph/mixture.hpp"

namespace gph {

enum class HalfSign { plus, minus };

struct CollisionResult {
    DenseKernel kernel;
    int source_order;         // k+1 (cubic) or k+2 (quintic)
    std::pair<int, int> j_range;
};

// Cubic half-operators: index restriction of the extra coordinate pair to
// x_j (plus) or x'_j (minus). Input order k+1, output order k.
DenseKernel apply_B_half(const DenseKernel& g, int j, HalfSign sign);

// Full cubic operator sum_j (plus - minus); its position diagonal vanishes
// identically.
CollisionResult apply_B(const DenseKernel& g);

// Momentum-space evaluation of the same operator via the shifted double
// momentum sum; independent code path used as an oracle. Cost m^{2k+2}.
DenseKernel apply_B_momentum(const DenseKernel& g);

// Quintic half-operators: both extra coordinate pairs restricted to x_j or
// x'_j. Input order k+2, output order k.
DenseKernel apply_Q_half(const DenseKernel& g, int j, HalfSign sign);

CollisionResult apply_Q(const DenseKernel& g);

// Trace of B_{1,+} gamma^{k+1} (or Q_{1,+} gamma^{k+2}) along the diagonal:
// closed form sum_r w_r |phi_r|_2^{2(k-1)} |phi_r|_{L4}^4 (cubic, L6 quintic).
double interaction_trace_mixture(const ProductMixture& mix, int k, Power power);

// Same trace from an explicitly stored upper level.
double interaction_trace_dense(const DenseKernel& upper, int k, Power power);

// Closed-form materialization of B^{(k)} gamma^{(k+1)} (cubic) or
// Q^{(k)} gamma^{(k+2)} (quintic) for product mixtures; the collision output
// leaves the product class, so it only exists in dense form.
DenseKernel mixture_collision_kernel(const ProductMixture& mix, int k,
                                     Power power);

}  // namespace gph
