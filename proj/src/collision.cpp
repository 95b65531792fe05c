#include "gph/collision.hpp"

#include <cmath>

#include "gph/fft.hpp"

namespace gph {

namespace {

struct RestrictPlan {
    // strides of the output coordinates inside the input tensor
    std::size_t out_stride_unprimed[8];
    std::size_t out_stride_primed[8];
    // combined stride of the restricted extra coordinate(s)
    std::size_t extra_stride;
};

RestrictPlan restriction_plan(const DenseKernel& g, int k, int gap) {
    const TensorShape in_sh = g.shape();
    RestrictPlan plan{};
    for (int a = 0; a < k; ++a) {
        plan.out_stride_unprimed[a] = in_sh.stride(a);
        plan.out_stride_primed[a] = in_sh.stride(k + gap + a);
    }
    plan.extra_stride = 0;
    for (int e = 0; e < gap; ++e) {
        plan.extra_stride += in_sh.stride(k + e);
        plan.extra_stride += in_sh.stride(2 * k + gap + e);
    }
    return plan;
}

DenseKernel apply_half(const DenseKernel& g, int j, HalfSign sign, int gap,
                       const char* who) {
    const int k = g.order() - gap;
    if (k < 1)
        throw std::invalid_argument(std::string(who) + ": order too small");
    if (j < 1 || j > k)
        throw std::invalid_argument(std::string(who) + ": index j = " +
                                    std::to_string(j) + " out of range [1, " +
                                    std::to_string(k) + "]");
    const RestrictPlan plan = restriction_plan(g, k, gap);
    DenseKernel out(k, g.grid());
    const int m = g.grid().points();
    const cplx* in = g.data();
    cplx* o = out.data();
    const std::size_t n = out.size();
    const TensorShape out_sh = out.shape();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
        int idx[2 * 8];
        out_sh.decode(std::size_t(flat), idx);
        std::size_t base = 0;
        for (int a = 0; a < k; ++a) {
            base += std::size_t(idx[a]) * plan.out_stride_unprimed[a];
            base += std::size_t(idx[k + a]) * plan.out_stride_primed[a];
        }
        const int y = (sign == HalfSign::plus) ? idx[j - 1] : idx[k + j - 1];
        o[flat] = in[base + std::size_t(y) * plan.extra_stride];
    }
    (void)m;
    return out;
}

CollisionResult apply_full(const DenseKernel& g, int gap, const char* who) {
    const int k = g.order() - gap;
    if (k < 1)
        throw std::invalid_argument(std::string(who) + ": order too small");
    const RestrictPlan plan = restriction_plan(g, k, gap);
    DenseKernel out(k, g.grid());
    const cplx* in = g.data();
    cplx* o = out.data();
    const std::size_t n = out.size();
    const TensorShape out_sh = out.shape();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
        int idx[2 * 8];
        out_sh.decode(std::size_t(flat), idx);
        std::size_t base = 0;
        for (int a = 0; a < k; ++a) {
            base += std::size_t(idx[a]) * plan.out_stride_unprimed[a];
            base += std::size_t(idx[k + a]) * plan.out_stride_primed[a];
        }
        cplx acc(0.0, 0.0);
        for (int j = 0; j < k; ++j) {
            const std::size_t plus = base + std::size_t(idx[j]) * plan.extra_stride;
            const std::size_t minus =
                base + std::size_t(idx[k + j]) * plan.extra_stride;
            acc += in[plus] - in[minus];
        }
        o[flat] = acc;
    }
    return {std::move(out), k + gap, {1, k}};
}

}  // namespace

DenseKernel apply_B_half(const DenseKernel& g, int j, HalfSign sign) {
    return apply_half(g, j, sign, 1, "apply_B_half");
}

CollisionResult apply_B(const DenseKernel& g) {
    return apply_full(g, 1, "apply_B");
}

DenseKernel apply_Q_half(const DenseKernel& g, int j, HalfSign sign) {
    return apply_half(g, j, sign, 2, "apply_Q_half");
}

CollisionResult apply_Q(const DenseKernel& g) {
    return apply_full(g, 2, "apply_Q");
}

DenseKernel apply_B_momentum(const DenseKernel& g) {
    const int k = g.order() - 1;
    if (k < 1) throw std::invalid_argument("apply_B_momentum: order too small");
    const Grid& gr = g.grid();
    const int m = gr.points();
    const double cost =
        std::pow(double(m), 2.0 * k + 2.0) * double(k);
    if (cost > double(entry_budget()))
        throw std::invalid_argument(
            "apply_B_momentum: cost " + std::to_string(std::size_t(cost)) +
            " exceeds the cap of " + std::to_string(entry_budget()));

    // full momentum kernel of the upper level
    DenseKernel ghat = g;
    const TensorShape in_sh = ghat.shape();
    for (int a = 0; a <= k; ++a)
        fft::transform_axis(ghat.data(), in_sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_momentum, gr.halfwidth());
    for (int a = k + 1; a <= 2 * k + 1; ++a)
        fft::transform_axis(ghat.data(), in_sh, a, fft::AxisKind::primed,
                            fft::Dir::to_momentum, gr.halfwidth());

    DenseKernel out_hat(k, gr);
    const TensorShape out_sh = out_hat.shape();
    const std::size_t n = out_hat.size();
    const cplx* in = ghat.data();
    cplx* o = out_hat.data();
    const double measure = gr.momentum_measure() * gr.momentum_measure();
    // frequency integer of bin, and bin of a (wrapped) frequency integer
    auto freq = [m](int bin) { return bin <= m / 2 - 1 ? bin : bin - m; };
    auto bin = [m](int f) { return ((f % m) + m) % m; };

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
        int idx[2 * 8];
        out_sh.decode(std::size_t(flat), idx);
        // strides in the input tensor for output coordinates
        std::size_t base = 0;
        for (int a = 0; a < k; ++a) {
            base += std::size_t(idx[a]) * in_sh.stride(a);
            base += std::size_t(idx[k + a]) * in_sh.stride(k + 1 + a);
        }
        const std::size_t q_stride = in_sh.stride(k);
        const std::size_t qp_stride = in_sh.stride(2 * k + 1);
        cplx acc(0.0, 0.0);
        for (int j = 0; j < k; ++j) {
            const std::size_t pj_stride = in_sh.stride(j);
            const std::size_t ppj_stride = in_sh.stride(k + 1 + j);
            const std::size_t base_wo_pj = base - std::size_t(idx[j]) * pj_stride;
            const std::size_t base_wo_ppj =
                base - std::size_t(idx[k + j]) * ppj_stride;
            for (int q = 0; q < m; ++q)
                for (int qp = 0; qp < m; ++qp) {
                    // plus term: p_j shifted to p_j - q + q'
                    const int shift_p = bin(freq(idx[j]) - freq(q) + freq(qp));
                    acc += in[base_wo_pj + std::size_t(shift_p) * pj_stride +
                              std::size_t(q) * q_stride +
                              std::size_t(qp) * qp_stride];
                    // minus term: p'_j shifted to p'_j + q - q'
                    const int shift_pp =
                        bin(freq(idx[k + j]) + freq(q) - freq(qp));
                    acc -= in[base_wo_ppj + std::size_t(shift_pp) * ppj_stride +
                              std::size_t(q) * q_stride +
                              std::size_t(qp) * qp_stride];
                }
        }
        o[flat] = measure * acc;
    }

    for (int a = 0; a < k; ++a)
        fft::transform_axis(out_hat.data(), out_sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_position, gr.halfwidth());
    for (int a = k; a < 2 * k; ++a)
        fft::transform_axis(out_hat.data(), out_sh, a, fft::AxisKind::primed,
                            fft::Dir::to_position, gr.halfwidth());
    return out_hat;
}

double interaction_trace_mixture(const ProductMixture& mix, int k,
                                 Power power) {
    const int p = power == Power::cubic ? 4 : 6;
    double acc = 0.0;
    for (const auto& c : mix.components()) {
        const double mass = l2_norm_sq(c.field);
        acc += c.weight * std::pow(mass, k - 1) * lp_norm_pow(c.field, p);
    }
    return acc;
}

double interaction_trace_dense(const DenseKernel& upper, int k, Power power) {
    const int gap = level_gap(power);
    if (upper.order() != k + gap)
        throw std::invalid_argument(
            "interaction_trace_dense: upper level has order " +
            std::to_string(upper.order()) + ", expected " +
            std::to_string(k + gap));
    const Grid& gr = upper.grid();
    const int m = gr.points();
    const RestrictPlan plan = restriction_plan(upper, k, gap);
    TensorShape diag{k, m};
    const std::size_t nd = diag.size();
    const cplx* in = upper.data();
    double acc_re = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc_re)
    for (std::ptrdiff_t d = 0; d < std::ptrdiff_t(nd); ++d) {
        int idx[8];
        diag.decode(std::size_t(d), idx);
        std::size_t base = 0;
        for (int a = 0; a < k; ++a)
            base += std::size_t(idx[a]) *
                    (plan.out_stride_unprimed[a] + plan.out_stride_primed[a]);
        // extra pair(s) restricted to x_1
        acc_re += in[base + std::size_t(idx[0]) * plan.extra_stride].real();
    }
    double w = 1.0;
    for (int a = 0; a < k; ++a) w *= gr.spacing();
    return w * acc_re;
}

DenseKernel mixture_collision_kernel(const ProductMixture& mix, int k,
                                     Power power) {
    const int pw = power == Power::cubic ? 2 : 4;  // |phi|^2 or |phi|^4 weight
    DenseKernel out(k, mix.grid());
    const int m = mix.grid().points();
    const TensorShape out_sh = out.shape();
    const std::size_t n = out.size();
    for (const auto& c : mix.components()) {
        const cplx* f = c.field.data();
        std::vector<double> dens(m);
        for (int i = 0; i < m; ++i)
            dens[i] = pw == 2 ? std::norm(f[i]) : std::norm(f[i]) * std::norm(f[i]);
        cplx* o = out.data();
        const double w = c.weight;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
            int idx[2 * 8];
            out_sh.decode(std::size_t(flat), idx);
            cplx prod(w, 0.0);
            double bracket = 0.0;
            for (int a = 0; a < k; ++a) {
                prod *= f[idx[a]] * std::conj(f[idx[k + a]]);
                bracket += dens[idx[a]] - dens[idx[k + a]];
            }
            o[flat] += bracket * prod;
        }
    }
    return out;
}

}  // namespace gph
