#include "gph/blowup.hpp"

#include <cmath>

#include "gph/dynamics.hpp"
#include "gph/functionals.hpp"

namespace gph {

GlasseyBound glassey_bound(double e0, double v0, double vdot0) {
    if (!(v0 > 0.0))
        throw std::invalid_argument("glassey_bound: V_k(0) must be positive");
    if (e0 >= 0.0) return {false, 0.0};
    // roots of 8 e0 t^2 + vdot0 t + v0 with e0 < 0, v0 > 0: exactly one is
    // positive
    const double a = 8.0 * e0;
    const double disc = vdot0 * vdot0 - 4.0 * a * v0;
    const double root = (-vdot0 - std::sqrt(disc)) / (2.0 * a);
    return {true, root};
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2)
        throw std::invalid_argument("fit_line: need matching samples, >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

std::vector<double> hs_norm_series(const TrajectoryRecord& traj, double s) {
    const std::string name = hs_series_name(s);
    if (traj.has_series(name)) return traj.series(name);
    std::vector<double> out(traj.samples());
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        std::vector<ProductMixture::Component> comps;
        for (std::size_t r = 0; r < traj.states.at(i).size(); ++r)
            comps.push_back({traj.weights.empty() ? 1.0 : traj.weights[r],
                             traj.states[i][r]});
        out[i] = mixture_hs_quasinorm(ProductMixture(std::move(comps)), s);
    }
    return out;
}

BlowupDetection detect_blowup(const TrajectoryRecord& traj, double s) {
    BlowupDetection det;
    if (!traj.halted) {
        det.note = "no blowup in window";
        return det;
    }
    const std::vector<double> norms = hs_norm_series(traj, s);
    const double n_end = norms.back();
    std::vector<double> ts, ns;
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (norms[i] >= 0.1 * n_end) {
            ts.push_back(traj.times[i]);
            ns.push_back(norms[i]);
        }
    if (ts.size() < 10) {
        det.note = "fewer than 10 samples in the final decade";
        return det;
    }

    double best_r2 = -1.0, best_tstar = 0.0;
    for (double p = 0.2; p <= 3.0 + 1e-9; p += 0.05) {
        std::vector<double> y(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i)
            y[i] = std::pow(ns[i], -1.0 / p);
        const LineFit fit = fit_line(ts, y);
        if (fit.slope >= 0.0) continue;
        const double t_star = -fit.intercept / fit.slope;
        if (t_star <= ts.back()) continue;
        if (fit.r_squared > best_r2) {
            best_r2 = fit.r_squared;
            best_tstar = t_star;
        }
    }
    if (best_r2 < 0.0) {
        det.note = "no divergence detected";
        return det;
    }
    det.found = true;
    det.t_star = best_tstar;
    det.confidence = best_r2;
    return det;
}

double bound_exponent(RateRegime regime) {
    switch (regime) {
        case RateRegime::cubic_s_gt_n2: return 1.0;
        case RateRegime::cubic_s_gt_nm1_2: return 0.5;
        case RateRegime::quintic_s_gt_n2: return 0.5;
        case RateRegime::quintic_s_gt_nm1_2: return 0.25;
    }
    return 1.0;
}

BlowupReport fit_rate(const TrajectoryRecord& traj, double t_star, double s,
                      RateRegime regime) {
    const std::vector<double> norms = hs_norm_series(traj, s);
    double n_max = 0.0;
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (traj.times[i] < t_star) n_max = std::max(n_max, norms[i]);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (traj.times[i] >= t_star) continue;
        if (norms[i] < 0.1 * n_max) continue;
        lx.push_back(std::log(t_star - traj.times[i]));
        ly.push_back(std::log(norms[i]));
    }
    if (lx.size() < 8)
        throw std::invalid_argument(
            "fit_rate: fewer than 8 usable samples in the final decade");
    const LineFit fit = fit_line(lx, ly);
    BlowupReport rep;
    rep.t_star = t_star;
    rep.fitted_exponent = -fit.slope;
    rep.fitted_constant = std::exp(fit.intercept);
    rep.r_squared = fit.r_squared;
    rep.regime = regime;
    rep.bound_exp = bound_exponent(regime);
    rep.verdict = rep.fitted_exponent >= rep.bound_exp - 0.05;
    return rep;
}

NegativeEnergyState negative_energy_state(const Field& base, int k,
                                          Power power, int mu) {
    if (mu != -1)
        throw std::invalid_argument(
            "negative_energy_state: only the focusing sign admits E_k < 0");
    const double kin = gradient_norm_sq(base);
    const double pot =
        lp_norm_pow(base, power == Power::cubic ? 4 : 6);
    if (!(kin > 0.0) || !(pot > 0.0))
        throw std::invalid_argument("negative_energy_state: base must be nonzero");
    const double sigma = double(level_gap(power));
    // bracket f(A) = A^2 kin / 2 - A^{2 sigma + 2} pot / (2 sigma + 2)
    auto f = [&](double A) {
        return 0.5 * A * A * kin -
               std::pow(A, 2.0 * sigma + 2.0) * pot / (2.0 * sigma + 2.0);
    };
    double hi = 1.0;
    while (f(hi) > 0.0) hi *= 2.0;
    double lo = hi * 0.5;
    while (f(lo) <= 0.0) lo *= 0.5;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double amplitude = 1.1 * hi;
    Field scaled = base;
    scaled *= cplx(amplitude, 0.0);
    (void)k;  // the energy sign at every order is set by the same bracket
    return {amplitude, ProductMixture(1.0, std::move(scaled))};
}

}  // namespace gph
