#include "gph/nls.hpp"

#include <cmath>
#include <sstream>

#include "gph/fft.hpp"

namespace gph {

void TrajectoryRecord::push_sample(double t, std::vector<Field> fields,
                                   std::map<std::string, double> diag) {
    if (!times.empty() && !(t > times.back()))
        throw std::invalid_argument(
            "TrajectoryRecord: sample times must increase");
    times.push_back(t);
    states.push_back(std::move(fields));
    diagnostics.push_back(std::move(diag));
}

std::vector<double> TrajectoryRecord::series(const std::string& name) const {
    std::vector<double> out;
    out.reserve(diagnostics.size());
    for (std::size_t i = 0; i < diagnostics.size(); ++i) {
        auto it = diagnostics[i].find(name);
        if (it == diagnostics[i].end())
            throw std::invalid_argument("TrajectoryRecord: no diagnostic '" +
                                        name + "' at sample " +
                                        std::to_string(i));
        out.push_back(it->second);
    }
    return out;
}

bool TrajectoryRecord::has_series(const std::string& name) const {
    if (diagnostics.empty()) return false;
    for (const auto& d : diagnostics)
        if (d.find(name) == d.end()) return false;
    return true;
}

void strang_step(Field& f, double dt, int mu, Power power) {
    const Grid& g = f.grid();
    const int sigma = level_gap(power);

    auto nonlinear_half = [&](Field& u) {
        cplx* v = u.data();
        const std::ptrdiff_t n = std::ptrdiff_t(u.size());
        const double c = -mu * 0.5 * dt;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            double dens = std::norm(v[i]);
            if (sigma == 2) dens *= dens;
            v[i] *= std::polar(1.0, c * dens);
        }
    };

    nonlinear_half(f);
    // free flow: e^{it Delta} multiplies coefficients by e^{-i dt |p|^2},
    // separable across axes
    const TensorShape sh = f.shape();
    std::vector<cplx> tab(g.points());
    for (int j = 0; j < g.points(); ++j)
        tab[j] = std::polar(1.0, -dt * g.momentum(j) * g.momentum(j));
    for (int a = 0; a < g.dim(); ++a)
        fft::transform_axis(f.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_momentum, g.halfwidth());
    for (int a = 0; a < g.dim(); ++a)
        fft::scale_axis(f.data(), sh, a, std::span<const cplx>(tab));
    for (int a = 0; a < g.dim(); ++a)
        fft::transform_axis(f.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_position, g.halfwidth());
    nonlinear_half(f);
}

double nls_energy(const Field& f, int mu, Power power) {
    if (mu != 1 && mu != -1)
        throw std::invalid_argument("nls_energy: mu must be +1 or -1");
    if (!f.all_finite())
        throw std::invalid_argument("nls_energy: non-finite field");
    if (power == Power::cubic)
        return 0.5 * gradient_norm_sq(f) + (mu / 4.0) * lp_norm_pow(f, 4);
    return 0.5 * gradient_norm_sq(f) + (mu / 6.0) * lp_norm_pow(f, 6);
}

TrajectoryRecord evolve_components(std::vector<Field> components,
                                   std::vector<double> weights, int mu,
                                   Power power, const StepController& ctrl,
                                   double t_end, double sample_every,
                                   const DiagnosticsFn& extra_diag,
                                   bool store_states) {
    if (components.empty())
        throw std::invalid_argument("evolve_components: no components");
    if (!(t_end > 0.0))
        throw std::invalid_argument("evolve_components: t_end must be > 0");
    if (!(ctrl.dt > ctrl.dt_min))
        throw std::invalid_argument("evolve_components: dt_min must be < dt");
    for (const Field& f : components)
        if (!f.all_finite())
            throw std::invalid_argument(
                "evolve_components: non-finite initial field");

    auto h1_max = [&]() {
        double h = 0.0;
        for (const Field& f : components)
            h = std::max(h, std::sqrt(sobolev_norm_sq(f, 1.0)));
        return h;
    };
    double h1 = h1_max();
    if (!(ctrl.halt_norm > h1))
        throw std::invalid_argument(
            "evolve_components: halt_norm must exceed the initial H1 norm");

    TrajectoryRecord rec;
    rec.mu = mu;
    rec.power = power;
    rec.weights = std::move(weights);

    auto record = [&](double t) {
        std::map<std::string, double> diag;
        diag["h1_max"] = h1;
        if (extra_diag) {
            auto extra = extra_diag(t, components);
            diag.insert(extra.begin(), extra.end());
        }
        for (const auto& [name, value] : diag) {
            if (!std::isfinite(value) && !rec.halted)
                throw std::runtime_error("evolve_components: diagnostic '" +
                                         name + "' non-finite at t = " +
                                         std::to_string(t));
        }
        rec.push_sample(t, store_states ? components : std::vector<Field>{},
                        std::move(diag));
    };

    double t = 0.0;
    double dt = ctrl.dt;
    record(0.0);
    if (sample_every <= 0.0) sample_every = ctrl.dt;
    double next_sample = sample_every;
    const double densify_at = 0.1 * ctrl.halt_norm;

    while (t < t_end - 1e-15 * t_end) {
        double step = std::min(dt, t_end - t);
        bool on_sample = false;
        if (next_sample - t <= step * (1.0 + 1e-12)) {
            step = next_sample - t;
            on_sample = true;
        }
        if (step < ctrl.dt_min)
            throw std::runtime_error(
                "evolve_components: step collapse at t = " + std::to_string(t) +
                " (dt fell below dt_min without reaching halt_norm)");

        for (Field& f : components) strang_step(f, step, mu, power);
        t += step;
        if (on_sample) next_sample += sample_every;

        for (const Field& f : components)
            if (!f.all_finite()) {
                std::ostringstream os;
                os << "evolve_components: non-finite state at t = " << t;
                throw std::runtime_error(os.str());
            }

        const double h1_new = h1_max();
        const bool hot = h1_new >= densify_at;
        if (h1_new >= ctrl.halt_norm) {
            rec.halted = HaltInfo{"h1 norm crossed halt threshold", t};
            h1 = h1_new;
            record(t);
            break;
        }
        if (h1_new > 1.1 * h1) dt = std::max(dt * ctrl.safety, ctrl.dt_min);
        h1 = h1_new;
        if (on_sample || hot || t >= t_end - 1e-15 * t_end) record(t);
    }
    return rec;
}

TrajectoryRecord nls_evolve(const NlsProblem& prob, const StepController& ctrl,
                            double t_end, double sample_every) {
    if (prob.mu != 1 && prob.mu != -1)
        throw std::invalid_argument("nls_evolve: mu must be +1 or -1");
    const int mu = prob.mu;
    const Power power = prob.power;
    auto diag = [mu, power](double, const std::vector<Field>& comps) {
        const Field& f = comps.front();
        std::map<std::string, double> d;
        d["mass"] = l2_norm_sq(f);
        d["energy"] = nls_energy(f, mu, power);
        d["virial_v"] = second_moment(f);
        d["virial_vdot"] = second_moment_rate(f);
        return d;
    };
    return evolve_components({prob.initial}, {1.0}, prob.mu, prob.power, ctrl,
                             t_end, sample_every, diag, true);
}

}  // namespace gph
