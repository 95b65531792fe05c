#pragma once

#include "gph/functionals.hpp"
#include "gph/mixture.hpp"
#include "gph/nls.hpp"
#include "gph/trajectory.hpp"

namespace gph {

// Which per-sample hierarchy diagnostics a mixture run records.
struct MixtureDiagnostics {
    std::vector<int> levels = {1};       // E_k, V_k, Vdot_k, Vrhs_k per k
    std::vector<double> hs_orders = {};  // quasi-norm |Gamma|_{H^s} per s
    int norm_head = 8;                   // head length for level sequences
    bool include_trace_quasinorm = false;
};

std::string hs_series_name(double s);

// Every component advances by the splitting stepper on a shared time grid;
// weights stay constant, so the induced Gamma(t) solves the hierarchy up to
// the one-particle solver error. Halts at the earliest component halt.
TrajectoryRecord evolve_mixture(const ProductMixture& mix, int mu, Power power,
                                const StepController& ctrl, double t_end,
                                double sample_every = 0.0,
                                const MixtureDiagnostics& diag = {});

// Dense truncated-hierarchy integrator. Strang-type step per level: half
// interaction source, exact free flow, half interaction source with the
// already-updated upper level. Levels without a stored source level draw on
// the closure (evolved alongside for mixture_reference, zero otherwise).
// Levels 1..store_levels are recorded at sample times; the final stack is
// always kept.
TrajectoryRecord evolve_truncated(const HierarchyTruncation& init, int mu,
                                  Power power, double dt, double t_end,
                                  double sample_every = 0.0,
                                  int store_levels = 1,
                                  double symmetry_guard = 1e-6);

// Deviation of the recorded level k from its Duhamel reconstruction
//   e^{it Delta} gamma_0 - i mu int_0^t e^{i(t-s) Delta} B gamma^{k+gap}(s) ds
// with trapezoid quadrature over the recorded samples, relative to |gamma_t|.
double duhamel_residual(const TrajectoryRecord& traj, int k, int mu);

// Max over sampled tau of the mismatch between interpolating the norm series
// at t0+tau and measuring the norm of the interpolated state there; zero up
// to the interpolation modulus (exact when t0 lies on the sample grid).
double time_shift_check(const TrajectoryRecord& traj, double t0, double s);

}  // namespace gph
