#include "gph/functionals.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "gph/fft.hpp"

namespace gph {

namespace {

void require_mu(int mu) {
    if (mu != 1 && mu != -1)
        throw std::invalid_argument("mu must be +1 or -1");
}

double interaction_prefactor(int mu, Power power) {
    return power == Power::cubic ? mu / 4.0 : mu / 6.0;
}

// momentum table per axis
std::vector<double> momentum_table(const Grid& g) {
    std::vector<double> t(g.points());
    for (int j = 0; j < g.points(); ++j) t[j] = g.momentum(j);
    return t;
}

// diagonal trace h^k sum_x A(x;x) of an order-k kernel
cplx diagonal_trace(const DenseKernel& g) { return kernel_trace(g); }

DenseKernel to_momentum_kernel(const DenseKernel& g) {
    DenseKernel out = g;
    const TensorShape sh = out.shape();
    const int k = g.order();
    for (int a = 0; a < k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_momentum, g.grid().halfwidth());
    for (int a = k; a < 2 * k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::primed,
                            fft::Dir::to_momentum, g.grid().halfwidth());
    return out;
}

DenseKernel to_position_kernel(const DenseKernel& ghat) {
    DenseKernel out = ghat;
    const TensorShape sh = out.shape();
    const int k = ghat.order();
    for (int a = 0; a < k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_position, ghat.grid().halfwidth());
    for (int a = k; a < 2 * k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::primed,
                            fft::Dir::to_position, ghat.grid().halfwidth());
    return out;
}

}  // namespace

void NormSequence::validate() const {
    for (double a : head)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument(
                "NormSequence: levels must be finite and non-negative");
    if (tail == Tail::geometric &&
        (!(ratio >= 0.0) || !std::isfinite(ratio)))
        throw std::invalid_argument("NormSequence: tail ratio must be finite");
}

NormSequence NormSequence::with_fitted_tail(std::vector<double> head) {
    NormSequence seq;
    seq.head = std::move(head);
    const std::size_t K = seq.head.size();
    if (K >= 2 && seq.head[K - 2] > 0.0) {
        seq.tail = Tail::geometric;
        seq.ratio = seq.head[K - 1] / seq.head[K - 2];
    }
    seq.validate();
    return seq;
}

namespace {

// sum_k a_k / lambda^k, +inf when the tail diverges
double quasinorm_sum(const NormSequence& a, double lambda) {
    double s = 0.0;
    double lam_pow = 1.0;
    for (double ak : a.head) {
        lam_pow *= lambda;
        s += ak / lam_pow;
    }
    if (a.tail == NormSequence::Tail::geometric && !a.head.empty() &&
        a.head.back() > 0.0 && a.ratio > 0.0) {
        const double q = a.ratio / lambda;
        if (q >= 1.0) return std::numeric_limits<double>::infinity();
        s += (a.head.back() / lam_pow) * q / (1.0 - q);
    }
    return s;
}

}  // namespace

double seq_quasinorm(const NormSequence& a) {
    a.validate();
    double lo = 0.0;
    for (std::size_t i = 0; i < a.head.size(); ++i)
        lo = std::max(lo, std::pow(a.head[i], 1.0 / double(i + 1)));
    if (a.tail == NormSequence::Tail::geometric && !a.head.empty() &&
        a.head.back() > 0.0)
        lo = std::max(lo, a.ratio);
    if (lo == 0.0) return 0.0;  // all levels vanish

    // The sum is strictly decreasing in lambda and >= 1 at lo (the maximal
    // term alone reaches 1 there; a geometric tail diverges at its ratio).
    if (quasinorm_sum(a, lo) <= 1.0) return lo;
    double hi = lo;
    while (quasinorm_sum(a, hi) > 1.0) {
        hi *= 2.0;
        if (!std::isfinite(hi))
            throw std::invalid_argument("seq_quasinorm: sum never reaches 1");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (quasinorm_sum(a, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double xi_norm(const NormSequence& a, double xi) {
    a.validate();
    if (!(xi > 0.0 && xi < 1.0))
        throw std::invalid_argument("xi_norm: xi must lie in (0,1)");
    double s = 0.0;
    double xp = 1.0;
    for (double ak : a.head) {
        xp *= xi;
        s += xp * ak;
    }
    if (a.tail == NormSequence::Tail::geometric && !a.head.empty() &&
        a.head.back() > 0.0 && a.ratio > 0.0) {
        const double q = xi * a.ratio;
        if (q >= 1.0)
            throw std::invalid_argument("xi_norm: divergent tail at this xi");
        s += xp * a.head.back() * q / (1.0 - q);
    }
    return s;
}

double kernel_hs_norm(const DenseKernel& g, double s) {
    if (!std::isfinite(s)) throw std::invalid_argument("kernel_hs_norm: bad s");
    DenseKernel ghat = to_momentum_kernel(g);
    const Grid& gr = g.grid();
    const int m = gr.points();
    const int k = g.order();
    std::vector<double> wtab(m);
    for (int j = 0; j < m; ++j)
        wtab[j] = std::pow(1.0 + gr.momentum(j) * gr.momentum(j), s);
    const TensorShape sh = ghat.shape();
    const cplx* v = ghat.data();
    double acc = 0.0;
    const std::ptrdiff_t n = std::ptrdiff_t(ghat.size());
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::ptrdiff_t flat = 0; flat < n; ++flat) {
        int idx[2 * 8];
        sh.decode(std::size_t(flat), idx);
        double w = 1.0;
        for (int a = 0; a < 2 * k; ++a) w *= wtab[idx[a]];
        acc += w * std::norm(v[flat]);
    }
    double measure = 1.0;
    for (int a = 0; a < 2 * k; ++a) measure *= gr.momentum_measure();
    return std::sqrt(measure * acc);
}

double mixture_hs_norm(const ProductMixture& mix, int k, double s) {
    const auto& comps = mix.components();
    const std::size_t R = comps.size();
    std::vector<std::vector<double>> gram(R, std::vector<double>(R));
    for (std::size_t a = 0; a < R; ++a)
        for (std::size_t b = a; b < R; ++b) {
            gram[a][b] = gram[b][a] =
                std::abs(sobolev_inner(comps[a].field, comps[b].field, s));
        }
    double acc = 0.0;
    for (std::size_t a = 0; a < R; ++a)
        for (std::size_t b = 0; b < R; ++b)
            acc += comps[a].weight * comps[b].weight *
                   std::pow(gram[a][b], 2.0 * k);
    return std::sqrt(std::max(0.0, acc));
}

NormSequence mixture_level_norms(const ProductMixture& mix, double s, int K) {
    std::vector<double> head(K);
    for (int k = 1; k <= K; ++k) head[k - 1] = mixture_hs_norm(mix, k, s);
    return NormSequence::with_fitted_tail(std::move(head));
}

double mixture_hs_quasinorm(const ProductMixture& mix, double s, int K) {
    return seq_quasinorm(mixture_level_norms(mix, s, K));
}

double trace_norm_k(const DenseKernel& g, double herm_tol) {
    const SymmetryReport rep = symmetry_report(g);
    if (rep.hermitian_defect > herm_tol)
        throw std::invalid_argument(
            "trace_norm_k: hermitian defect " +
            std::to_string(rep.hermitian_defect) + " exceeds tolerance");
    // sandwich: (1+p^2)^{1/2} weight on every axis
    DenseKernel ghat = to_momentum_kernel(g);
    const Grid& gr = g.grid();
    const int k = g.order();
    const int m = gr.points();
    std::vector<double> wtab(m);
    for (int j = 0; j < m; ++j)
        wtab[j] = std::sqrt(1.0 + gr.momentum(j) * gr.momentum(j));
    const TensorShape sh = ghat.shape();
    for (int a = 0; a < 2 * k; ++a)
        fft::scale_axis(ghat.data(), sh, a, std::span<const double>(wtab));
    DenseKernel sandwiched = to_position_kernel(ghat);

    const Eigen::Index dim = Eigen::Index(std::pow(double(m), k));
    Eigen::MatrixXcd M(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            M(r, c) = sandwiched.values()[std::size_t(r) * dim + c];
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
    double sum = svd.singularValues().sum();
    double w = 1.0;
    for (int a = 0; a < k; ++a) w *= gr.spacing();
    return w * sum;
}

double trace_norm_k(const ProductMixture& mix, int k) {
    double acc = 0.0;
    for (const auto& c : mix.components())
        acc += c.weight * std::pow(sobolev_norm_sq(c.field, 1.0), k);
    return acc;
}

std::vector<double> l1t_level_integrals(const TrajectoryRecord& traj, double s,
                                        int K, std::size_t i0, std::size_t i1) {
    if (traj.samples() < 2)
        throw std::invalid_argument("l1t: need at least 2 samples");
    if (i1 >= traj.samples() || i0 >= i1)
        throw std::invalid_argument("l1t: bad sample range");
    if (traj.states.size() != traj.samples())
        throw std::invalid_argument("l1t: trajectory does not store states");
    std::vector<double> integrals(K, 0.0);
    std::vector<double> prev(K), cur(K);
    auto level_norms = [&](std::size_t i, std::vector<double>& out) {
        std::vector<ProductMixture::Component> comps;
        for (std::size_t r = 0; r < traj.states[i].size(); ++r)
            comps.push_back(
                {traj.weights.empty() ? 1.0 : traj.weights[r], traj.states[i][r]});
        ProductMixture mix(std::move(comps));
        for (int k = 1; k <= K; ++k) out[k - 1] = mixture_hs_norm(mix, k, s);
    };
    level_norms(i0, prev);
    for (std::size_t i = i0 + 1; i <= i1; ++i) {
        level_norms(i, cur);
        const double dt = traj.times[i] - traj.times[i - 1];
        for (int k = 0; k < K; ++k)
            integrals[k] += 0.5 * dt * (prev[k] + cur[k]);
        std::swap(prev, cur);
    }
    return integrals;
}

double l1t_seq_quasinorm(const TrajectoryRecord& traj, double s, int K) {
    auto integrals =
        l1t_level_integrals(traj, s, K, 0, traj.samples() - 1);
    return seq_quasinorm(NormSequence::with_fitted_tail(std::move(integrals)));
}

namespace {

// k/2 * h^k sum_x (M gamma)(x,x) for the two kinetic multipliers
double kinetic_form_trace(const DenseKernel& g, KineticForm form) {
    const Grid& gr = g.grid();
    const int k = g.order();
    DenseKernel ghat = to_momentum_kernel(g);
    const TensorShape sh = ghat.shape();
    const std::vector<double> ptab = momentum_table(gr);
    if (form == KineticForm::gradient_pairing) {
        // grad_{x_1} . grad_{x'_1}  <->  p_1 p'_1
        fft::scale_axis(ghat.data(), sh, 0, std::span<const double>(ptab));
        fft::scale_axis(ghat.data(), sh, k, std::span<const double>(ptab));
    } else {
        std::vector<double> p2(ptab.size());
        for (std::size_t j = 0; j < ptab.size(); ++j) p2[j] = ptab[j] * ptab[j];
        fft::scale_axis(ghat.data(), sh, 0, std::span<const double>(p2));
    }
    DenseKernel back = to_position_kernel(ghat);
    return 0.5 * k * diagonal_trace(back).real();
}

}  // namespace

double kinetic_trace(const DenseKernel& g) {
    return 2.0 * kinetic_form_trace(g, KineticForm::laplacian);
}

double kinetic_trace(const ProductMixture& mix, int k) {
    double acc = 0.0;
    for (const auto& c : mix.components())
        acc += c.weight * std::pow(l2_norm_sq(c.field), k - 1) *
               gradient_norm_sq(c.field);
    return k * acc;
}

EnergyReport energy(const ProductMixture& mix, int k, int mu, Power power) {
    require_mu(mu);
    EnergyReport rep;
    rep.k = k;
    double kin = 0.0;
    for (const auto& c : mix.components())
        kin += c.weight * std::pow(l2_norm_sq(c.field), k - 1) *
               gradient_norm_sq(c.field);
    rep.kinetic = 0.5 * k * kin;
    rep.kinetic_alt = rep.kinetic;
    rep.interaction = k * interaction_trace_mixture(mix, k, power);
    rep.total = rep.kinetic + interaction_prefactor(mu, power) * rep.interaction;
    return rep;
}

EnergyReport energy(const DenseKernel& level, const DenseKernel& upper, int mu,
                    Power power) {
    require_mu(mu);
    const int k = level.order();
    const int gap = level_gap(power);
    if (upper.order() != k + gap)
        throw std::invalid_argument(
            "energy: interaction level must have order " +
            std::to_string(k + gap));
    EnergyReport rep;
    rep.k = k;
    rep.kinetic = kinetic_form_trace(level, KineticForm::gradient_pairing);
    rep.kinetic_alt = kinetic_form_trace(level, KineticForm::laplacian);
    const double scale = std::max(1.0, std::abs(rep.kinetic));
    if (std::abs(rep.form_defect()) > 1e-10 * scale)
        throw std::runtime_error(
            "energy: kinetic forms disagree by " +
            std::to_string(rep.form_defect()));
    rep.interaction = k * interaction_trace_dense(upper, k, power);
    rep.total = rep.kinetic + interaction_prefactor(mu, power) * rep.interaction;
    return rep;
}

EnergyReport energy(const HierarchyTruncation& state, int k, int mu,
                    Power power) {
    require_mu(mu);
    state.validate();
    const int gap = level_gap(power);
    if (k < 1 || k > state.depth())
        throw std::invalid_argument("energy: level k not stored");
    if (k + gap <= state.depth())
        return energy(state.level(k), state.level(k + gap), mu, power);
    if (state.closure.kind != ClosurePolicy::Kind::mixture_reference)
        throw std::invalid_argument(
            "energy: interaction level " + std::to_string(k + gap) +
            " unavailable (zero closure)");
    EnergyReport rep;
    rep.k = k;
    rep.kinetic = kinetic_form_trace(state.level(k), KineticForm::gradient_pairing);
    rep.kinetic_alt = kinetic_form_trace(state.level(k), KineticForm::laplacian);
    rep.interaction =
        k * interaction_trace_mixture(*state.closure.reference, k, power);
    rep.total = rep.kinetic + interaction_prefactor(mu, power) * rep.interaction;
    return rep;
}

double virial(const ProductMixture& mix, int k) {
    double acc = 0.0;
    for (const auto& c : mix.components())
        acc += c.weight * std::pow(l2_norm_sq(c.field), k - 1) *
               second_moment(c.field);
    return k * acc;
}

double virial(const DenseKernel& g) {
    const Grid& gr = g.grid();
    const int k = g.order();
    const int m = gr.points();
    const TensorShape sh = g.shape();
    TensorShape diag{k, m};
    const std::size_t nd = diag.size();
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::ptrdiff_t d = 0; d < std::ptrdiff_t(nd); ++d) {
        int idx[2 * 8];
        diag.decode(std::size_t(d), idx);
        for (int a = 0; a < k; ++a) idx[k + a] = idx[a];
        const double x1 = gr.coord(idx[0]);
        acc += x1 * x1 * g.values()[sh.encode(idx)].real();
    }
    double w = 1.0;
    for (int a = 0; a < k; ++a) w *= gr.spacing();
    return k * w * acc;
}

double virial_dt(const ProductMixture& mix, int k) {
    double acc = 0.0;
    for (const auto& c : mix.components())
        acc += c.weight * std::pow(l2_norm_sq(c.field), k - 1) *
               second_moment_rate(c.field);
    return k * acc;
}

double virial_dt(const DenseKernel& g) {
    // dV/dt = 2 int <x_k, P> with P the (p + p') current; by permutation
    // symmetry this is 2k * the x_1 term.
    const Grid& gr = g.grid();
    const int k = g.order();
    const int m = gr.points();
    const std::vector<double> ptab = momentum_table(gr);

    DenseKernel ghat = to_momentum_kernel(g);
    const TensorShape sh = ghat.shape();
    DenseKernel term_a = ghat;  // p_1 part
    fft::scale_axis(term_a.data(), sh, 0, std::span<const double>(ptab));
    DenseKernel term_b = std::move(ghat);  // p'_1 part
    fft::scale_axis(term_b.data(), sh, k, std::span<const double>(ptab));
    term_a += term_b;
    DenseKernel current = to_position_kernel(term_a);

    TensorShape diag{k, m};
    const std::size_t nd = diag.size();
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::ptrdiff_t d = 0; d < std::ptrdiff_t(nd); ++d) {
        int idx[2 * 8];
        diag.decode(std::size_t(d), idx);
        for (int a = 0; a < k; ++a) idx[k + a] = idx[a];
        acc += gr.coord(idx[0]) * current.values()[sh.encode(idx)].real();
    }
    double w = 1.0;
    for (int a = 0; a < k; ++a) w *= gr.spacing();
    return 2.0 * k * w * acc;
}

namespace {

double virial_rhs_coeff(Power power) {
    return power == Power::cubic ? 2.0 : 8.0 / 3.0;
}

}  // namespace

double virial_rhs(const ProductMixture& mix, int k, int mu, Power power) {
    require_mu(mu);
    const int n = mix.grid().dim();
    return 8.0 * kinetic_trace(mix, k) +
           virial_rhs_coeff(power) * n * k * mu *
               interaction_trace_mixture(mix, k, power);
}

double virial_rhs(const DenseKernel& level, const DenseKernel& upper, int mu,
                  Power power) {
    require_mu(mu);
    const int k = level.order();
    const int gap = level_gap(power);
    if (upper.order() != k + gap)
        throw std::invalid_argument(
            "virial_rhs: interaction level must have order " +
            std::to_string(k + gap));
    const int n = level.grid().dim();
    return 8.0 * kinetic_trace(level) +
           virial_rhs_coeff(power) * n * k * mu *
               interaction_trace_dense(upper, k, power);
}

}  // namespace gph
