#pragma once

#include <limits>
#include <string>

#include "gph/mixture.hpp"
#include "gph/trajectory.hpp"

namespace gph {

struct GlasseyBound {
    bool applicable = false;  // requires E_k(0) < 0
    double t_bound = 0.0;     // upper bound on the time V_k reaches zero
};

// Positive root of v0 + vdot0 t + 8 e0 t^2, the time by which the concave
// V_k must vanish when e0 < 0; "not applicable" otherwise.
GlasseyBound glassey_bound(double e0, double v0, double vdot0);

struct BlowupDetection {
    bool found = false;
    double t_star = 0.0;
    double confidence = 0.0;  // R^2 of the best reciprocal-power fit
    std::string note;
};

// Extrapolates the divergence time by fitting norm^{-1/p} -> 0 linearly over
// the final decade of growth, scanning the trial exponent p.
BlowupDetection detect_blowup(const TrajectoryRecord& traj, double s);

enum class RateRegime {
    cubic_s_gt_n2,      // lower-bound exponent 1
    cubic_s_gt_nm1_2,   // 1/2
    quintic_s_gt_n2,    // 1/2
    quintic_s_gt_nm1_2  // 1/4
};

double bound_exponent(RateRegime regime);

struct BlowupReport {
    double t_star = 0.0;
    double t_bound = std::numeric_limits<double>::quiet_NaN();
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;
    double bound_exp = 0.0;
    double r_squared = 0.0;
    bool verdict = false;  // fitted_exponent >= bound - 0.05
    RateRegime regime = RateRegime::cubic_s_gt_n2;
};

// Log-log regression of the quasi-norm against (t_star - t) over the final
// stable decade; at least 8 usable samples required.
BlowupReport fit_rate(const TrajectoryRecord& traj, double t_star, double s,
                      RateRegime regime);

struct NegativeEnergyState {
    double amplitude = 0.0;
    ProductMixture mixture;
};

// Scale the base field until E_k turns negative: bisection locates the zero
// crossing of the energy in the amplitude, the result sits 10% above it.
NegativeEnergyState negative_energy_state(const Field& base, int k,
                                          Power power, int mu = -1);

// least-squares line fit utility shared by the detection and rate code
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Norm series used by detection/fitting: the recorded `hs_norm_s<s>` column
// when present, otherwise recomputed from the stored states.
std::vector<double> hs_norm_series(const TrajectoryRecord& traj, double s);

}  // namespace gph
