#include "gph/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gph/collision.hpp"

namespace gph {

std::string hs_series_name(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "hs_norm_s%g", s);
    return buf;
}

namespace {

ProductMixture mixture_at(const TrajectoryRecord& traj, std::size_t i) {
    if (traj.states.size() != traj.samples() || traj.states[i].empty())
        throw std::invalid_argument("trajectory does not store states");
    std::vector<ProductMixture::Component> comps;
    for (std::size_t r = 0; r < traj.states[i].size(); ++r)
        comps.push_back({traj.weights.empty() ? 1.0 : traj.weights[r],
                         traj.states[i][r]});
    return ProductMixture(std::move(comps));
}

}  // namespace

TrajectoryRecord evolve_mixture(const ProductMixture& mix, int mu, Power power,
                                const StepController& ctrl, double t_end,
                                double sample_every,
                                const MixtureDiagnostics& diag) {
    std::vector<Field> comps;
    std::vector<double> weights;
    for (const auto& c : mix.components()) {
        comps.push_back(c.field);
        weights.push_back(c.weight);
    }
    auto extra = [weights, diag, mu, power](
                     double, const std::vector<Field>& fields) {
        std::vector<ProductMixture::Component> cs;
        for (std::size_t r = 0; r < fields.size(); ++r)
            cs.push_back({weights[r], fields[r]});
        ProductMixture m(std::move(cs));
        std::map<std::string, double> d;
        double mass = 0.0;
        for (const auto& c : m.components())
            mass += c.weight * l2_norm_sq(c.field);
        d["mass"] = mass;
        for (int k : diag.levels) {
            const std::string suffix = "_" + std::to_string(k);
            d["E" + suffix] = energy(m, k, mu, power).total;
            d["V" + suffix] = virial(m, k);
            d["Vdot" + suffix] = virial_dt(m, k);
            d["Vrhs" + suffix] = virial_rhs(m, k, mu, power);
            if (k == 1) d["kin_1"] = kinetic_trace(m, 1);
        }
        for (double s : diag.hs_orders)
            d[hs_series_name(s)] = mixture_hs_quasinorm(m, s, diag.norm_head);
        if (diag.include_trace_quasinorm) {
            std::vector<double> head(diag.norm_head);
            for (int k = 1; k <= diag.norm_head; ++k)
                head[k - 1] = trace_norm_k(m, k);
            d["trace_quasinorm"] =
                seq_quasinorm(NormSequence::with_fitted_tail(std::move(head)));
        }
        return d;
    };
    return evolve_components(std::move(comps), std::move(weights), mu, power,
                             ctrl, t_end, sample_every, extra, true);
}

namespace {

// interaction source -i mu * (B or Q applied to the order k+gap level)
DenseKernel level_source(const std::vector<DenseKernel>& levels,
                         const ProductMixture* closure_mix, int k, int mu,
                         Power power, const Grid& grid) {
    const int gap = level_gap(power);
    const int K = int(levels.size());
    DenseKernel src(k, grid);
    if (k + gap <= K) {
        src = power == Power::cubic ? apply_B(levels[k + gap - 1]).kernel
                                    : apply_Q(levels[k + gap - 1]).kernel;
    } else if (closure_mix != nullptr) {
        src = mixture_collision_kernel(*closure_mix, k, power);
    }  // zero closure: src stays zero
    src *= cplx(0.0, -double(mu));
    return src;
}

}  // namespace

TrajectoryRecord evolve_truncated(const HierarchyTruncation& init, int mu,
                                  Power power, double dt, double t_end,
                                  double sample_every, int store_levels,
                                  double symmetry_guard) {
    init.validate();
    if (mu != 1 && mu != -1)
        throw std::invalid_argument("evolve_truncated: mu must be +1 or -1");
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("evolve_truncated: dt and t_end must be > 0");
    const Grid grid = init.levels.front().grid();
    const int K = init.depth();
    store_levels = std::clamp(store_levels, 0, K);

    std::vector<DenseKernel> levels = init.levels;
    const bool has_closure =
        init.closure.kind == ClosurePolicy::Kind::mixture_reference;
    std::vector<Field> closure_fields;
    std::vector<double> closure_weights;
    if (has_closure)
        for (const auto& c : init.closure.reference->components()) {
            closure_fields.push_back(c.field);
            closure_weights.push_back(c.weight);
        }
    auto closure_mixture = [&]() -> ProductMixture {
        std::vector<ProductMixture::Component> cs;
        for (std::size_t r = 0; r < closure_fields.size(); ++r)
            cs.push_back({closure_weights[r], closure_fields[r]});
        return ProductMixture(std::move(cs));
    };

    TrajectoryRecord rec;
    rec.mu = mu;
    rec.power = power;

    auto record = [&](double t) {
        std::map<std::string, double> diag;
        for (int k = 1; k <= K; ++k) {
            const SymmetryReport rep = symmetry_report(levels[k - 1]);
            const double defect =
                std::max(rep.hermitian_defect, rep.permutation_defect);
            const double scale = std::max(1.0, kernel_l2_norm(levels[k - 1]));
            if (defect > symmetry_guard * scale)
                throw std::runtime_error(
                    "evolve_truncated: symmetry defect " +
                    std::to_string(defect) + " at level " + std::to_string(k) +
                    ", t = " + std::to_string(t) +
                    " (integration left the state class)");
            diag["sym_defect_" + std::to_string(k)] = defect;
            diag["l2_" + std::to_string(k)] = kernel_l2_norm(levels[k - 1]);
            diag["trace_re_" + std::to_string(k)] =
                kernel_trace(levels[k - 1]).real();
        }
        rec.push_sample(t, {}, std::move(diag));
        std::vector<DenseKernel> stored;
        for (int k = 1; k <= store_levels; ++k) stored.push_back(levels[k - 1]);
        rec.dense_levels.push_back(std::move(stored));
    };

    double t = 0.0;
    record(0.0);
    if (sample_every <= 0.0) sample_every = std::max(dt, t_end / 16.0);
    double next_sample = sample_every;

    const ProductMixture* closure_ptr = nullptr;
    ProductMixture closure_now = has_closure
                                     ? closure_mixture()
                                     : ProductMixture(1.0, Field(grid));
    if (has_closure) closure_ptr = &closure_now;

    while (t < t_end - 1e-12 * t_end) {
        double step = std::min(dt, t_end - t);
        bool on_sample = false;
        if (next_sample - t <= step * (1.0 + 1e-12)) {
            step = next_sample - t;
            on_sample = true;
        }

        // sources at time t, all levels, before any update
        std::vector<DenseKernel> sources_old;
        sources_old.reserve(K);
        for (int k = 1; k <= K; ++k)
            sources_old.push_back(
                level_source(levels, closure_ptr, k, mu, power, grid));

        // advance the closure to t + step
        if (has_closure) {
            for (Field& f : closure_fields) strang_step(f, step, mu, power);
            closure_now = closure_mixture();
        }

        // descending k: the upper dense level is already at t + step when the
        // trailing half-source is taken
        for (int k = K; k >= 1; --k) {
            DenseKernel& g = levels[k - 1];
            DenseKernel half = sources_old[k - 1];
            half *= cplx(0.5 * step, 0.0);
            g += half;
            g = free_propagate(g, step);
            DenseKernel src_new =
                level_source(levels, closure_ptr, k, mu, power, grid);
            src_new *= cplx(0.5 * step, 0.0);
            g += src_new;
        }
        t += step;
        if (on_sample) {
            next_sample += sample_every;
            record(t);
        } else if (t >= t_end - 1e-12 * t_end) {
            record(t);
        }
    }
    rec.final_levels = std::move(levels);
    return rec;
}

double duhamel_residual(const TrajectoryRecord& traj, int k, int mu) {
    if (traj.samples() < 3)
        throw std::invalid_argument(
            "duhamel_residual: need at least 3 samples");
    const Power power = traj.power;
    const double t_final = traj.times.back();

    DenseKernel gamma_t = materialize(mixture_at(traj, traj.samples() - 1), k);
    DenseKernel recon = materialize(mixture_at(traj, 0), k);
    recon = free_propagate(recon, t_final);

    DenseKernel integral(k, gamma_t.grid());
    for (std::size_t i = 0; i < traj.samples(); ++i) {
        double w;  // composite trapezoid weight for nonuniform nodes
        if (i == 0)
            w = 0.5 * (traj.times[1] - traj.times[0]);
        else if (i + 1 == traj.samples())
            w = 0.5 * (traj.times[i] - traj.times[i - 1]);
        else
            w = 0.5 * (traj.times[i + 1] - traj.times[i - 1]);
        DenseKernel collided =
            mixture_collision_kernel(mixture_at(traj, i), k, power);
        collided = free_propagate(collided, t_final - traj.times[i]);
        collided *= cplx(w, 0.0);
        integral += collided;
    }
    integral *= cplx(0.0, -double(mu));
    recon += integral;

    recon -= gamma_t;
    const double denom = kernel_l2_norm(gamma_t);
    return denom > 0.0 ? kernel_l2_norm(recon) / denom : kernel_l2_norm(recon);
}

double time_shift_check(const TrajectoryRecord& traj, double t0, double s) {
    if (traj.samples() < 2)
        throw std::invalid_argument("time_shift_check: need >= 2 samples");
    const double t_first = traj.times.front();
    const double t_last = traj.times.back();
    if (t0 < t_first - 1e-12 || t0 > t_last + 1e-12)
        throw std::invalid_argument("time_shift_check: shift outside record");

    std::vector<double> norms(traj.samples());
    for (std::size_t i = 0; i < traj.samples(); ++i)
        norms[i] = mixture_hs_quasinorm(mixture_at(traj, i), s);

    auto bracket = [&](double t) {
        std::size_t hi = 1;
        while (hi + 1 < traj.samples() && traj.times[hi] < t) ++hi;
        return hi;
    };
    auto interp_norm = [&](double t) {
        const std::size_t hi = bracket(t);
        const double t0_ = traj.times[hi - 1], t1_ = traj.times[hi];
        const double a = (t - t0_) / (t1_ - t0_);
        return (1.0 - a) * norms[hi - 1] + a * norms[hi];
    };
    auto interp_state_norm = [&](double t) {
        const std::size_t hi = bracket(t);
        const double t0_ = traj.times[hi - 1], t1_ = traj.times[hi];
        const double a = (t - t0_) / (t1_ - t0_);
        if (a <= 1e-12) return norms[hi - 1];
        if (a >= 1.0 - 1e-12) return norms[hi];
        std::vector<ProductMixture::Component> comps;
        for (std::size_t r = 0; r < traj.states[hi].size(); ++r) {
            Field blend = traj.states[hi - 1][r];
            blend *= cplx(1.0 - a, 0.0);
            Field upper = traj.states[hi][r];
            upper *= cplx(a, 0.0);
            blend += upper;
            comps.push_back(
                {traj.weights.empty() ? 1.0 : traj.weights[r], blend});
        }
        return mixture_hs_quasinorm(ProductMixture(std::move(comps)), s);
    };

    double worst = 0.0;
    for (std::size_t j = 0; j < traj.samples(); ++j) {
        const double target = t0 + (traj.times[j] - t_first);
        if (target > t_last + 1e-12) break;
        const double clipped = std::min(target, t_last);
        worst = std::max(worst,
                         std::abs(interp_norm(clipped) - interp_state_norm(clipped)));
    }
    return worst;
}

}  // namespace gph
