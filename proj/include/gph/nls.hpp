#pragma once

#include <functional>

#include "gph/field.hpp"
#include "gph/trajectory.hpp"

namespace gph {

struct NlsProblem {
    int mu = 1;  // +1 defocusing, -1 focusing
    Power power = Power::cubic;
    Field initial;
};

struct StepController {
    double dt = 1e-3;
    double dt_min = 1e-9;
    double halt_norm = 1e9;  // H1 threshold for the blowup halt
    double safety = 0.5;     // step shrink factor near divergence
};

// One Strang step: half nonlinear phase, full free flow, half nonlinear
// phase. Exact in each substep; dt may be negative (time reversal).
void strang_step(Field& f, double dt, int mu, Power power);

// One-particle conserved energy: |grad phi|^2/2 + (mu/4)|phi|_{L4}^4 or
// (mu/6)|phi|_{L6}^6.
double nls_energy(const Field& f, int mu, Power power);

// Shared driver: advances all components on one time grid with a global
// adaptive step; halts when any component's H1 norm crosses the threshold.
// `extra_diag` extends the per-sample diagnostics.
using DiagnosticsFn = std::function<std::map<std::string, double>(
    double t, const std::vector<Field>& components)>;

TrajectoryRecord evolve_components(std::vector<Field> components,
                                   std::vector<double> weights, int mu,
                                   Power power, const StepController& ctrl,
                                   double t_end, double sample_every,
                                   const DiagnosticsFn& extra_diag = nullptr,
                                   bool store_states = true);

TrajectoryRecord nls_evolve(const NlsProblem& prob, const StepController& ctrl,
                            double t_end, double sample_every);

}  // namespace gph
