#pragma once

#include "gph/collision.hpp"
#include "gph/dense_kernel.hpp"
#include "gph/mixture.hpp"
#include "gph/trajectory.hpp"

namespace gph {

// Level-norm sequence a_k with a tail model past the stored head. Geometric
// tails are exact for factorized states, whose level norms are c^k.
struct NormSequence {
    enum class Tail { zero, geometric };

    std::vector<double> head;  // a_1 .. a_K
    Tail tail = Tail::zero;
    double ratio = 0.0;

    void validate() const;
    static NormSequence with_fitted_tail(std::vector<double> head);
};

// inf{ lambda > 0 : sum_k a_k / lambda^k <= 1 }, bisection to 1e-12 relative.
double seq_quasinorm(const NormSequence& a);

// sum_k xi^k a_k for 0 < xi < 1 (comparison norm; closed form for the tail).
double xi_norm(const NormSequence& a, double xi);

// |S_s gamma|_{L2} with the multiplier prod_j (1+|p_j|^2)^{s/2} (1+|p'_j|^2)^{s/2}.
double kernel_hs_norm(const DenseKernel& g, double s);

// Same norm from the Gram closed form
//   |gamma^k|^2 = sum_{a,b} w_a w_b |<phi_a, phi_b>_{H^s}|^{2k}.
double mixture_hs_norm(const ProductMixture& mix, int k, double s);

// Level norms a_1..a_K with fitted geometric tail.
NormSequence mixture_level_norms(const ProductMixture& mix, double s, int K);

// Quasi-norm of the full level sequence of a mixture (2|phi|_{H^s}^2 for a
// single normalized component).
double mixture_hs_quasinorm(const ProductMixture& mix, double s, int K = 8);

// Trace norm Tr|S gamma S| via singular values of the sandwiched kernel;
// rejects kernels whose hermitian defect exceeds `herm_tol`.
double trace_norm_k(const DenseKernel& g, double herm_tol = 1e-8);

// Positive mixtures: sum_r w_r |phi_r|_{H^1}^{2k}.
double trace_norm_k(const ProductMixture& mix, int k);

// Time-integrated quasi-norm of a mixture trajectory: per-level trapezoid
// integrals of a_k(t), then the sequence infimum.
double l1t_seq_quasinorm(const TrajectoryRecord& traj, double s, int K = 8);

// Per-level trapezoid integrals over a sample subrange [i0, i1] (additivity
// over disjoint subintervals is exact by construction).
std::vector<double> l1t_level_integrals(const TrajectoryRecord& traj, double s,
                                        int K, std::size_t i0, std::size_t i1);

enum class KineticForm { gradient_pairing, laplacian };

struct EnergyReport {
    int k = 1;
    double kinetic = 0.0;      // (k/2) grad-pairing trace
    double kinetic_alt = 0.0;  // same via the one-sided Laplacian
    double interaction = 0.0;  // k Tr[B_{1,+} gamma^{k+gap}] analogue
    double total = 0.0;        // kinetic + (mu/4 or mu/6) interaction
    KineticForm form_used = KineticForm::gradient_pairing;

    double form_defect() const { return kinetic - kinetic_alt; }
};

EnergyReport energy(const ProductMixture& mix, int k, int mu, Power power);
// Dense path: both kinetic forms are evaluated and must agree to 1e-10.
EnergyReport energy(const DenseKernel& level, const DenseKernel& upper, int mu,
                    Power power);
EnergyReport energy(const HierarchyTruncation& state, int k, int mu,
                    Power power);

// V_k = Tr[|x_k|^2 gamma^k] = k * int |x_1|^2 gamma^k(x;x)
double virial(const ProductMixture& mix, int k);
double virial(const DenseKernel& g);

// dV_k/dt via the momentum current (dense) or the one-particle current
// moment (mixtures).
double virial_dt(const ProductMixture& mix, int k);
double virial_dt(const DenseKernel& g);

// Right side of the second-derivative identity:
//   8k int |p_1|^2 gamma^k(p;p) + c nk mu * interaction trace,
// with c = 2 for cubic and 8/3 for quintic.
double virial_rhs(const ProductMixture& mix, int k, int mu, Power power);
double virial_rhs(const DenseKernel& level, const DenseKernel& upper, int mu,
                  Power power);

// k * Tr[-Delta_{x_1} gamma^k]: the kinetic trace entering both the energy
// and the virial right side.
double kinetic_trace(const DenseKernel& g);
double kinetic_trace(const ProductMixture& mix, int k);

}  // namespace gph
