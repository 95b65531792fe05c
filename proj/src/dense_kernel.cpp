#include "gph/dense_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gph/fft.hpp"

namespace gph {

DenseKernel::DenseKernel(int order, const Grid& grid)
    : order_(order), grid_(grid) {
    check_budget(order, grid);
    values_.assign(shape().size(), cplx(0.0, 0.0));
}

DenseKernel::DenseKernel(int order, const Grid& grid, std::vector<cplx> values)
    : order_(order), grid_(grid), values_(std::move(values)) {
    check_budget(order, grid);
    if (values_.size() != shape().size())
        throw std::invalid_argument("DenseKernel: value count mismatch");
}

void DenseKernel::check_budget(int order, const Grid& grid) {
    if (order < 1) throw std::invalid_argument("DenseKernel: order must be >= 1");
    if (order > 8)
        throw std::invalid_argument("DenseKernel: order capped at 8");
    if (grid.dim() != 1)
        throw std::invalid_argument("DenseKernel: dimension-1 grids only");
    const double entries = std::pow(double(grid.points()), 2.0 * order);
    if (entries > double(entry_budget()))
        throw std::invalid_argument(
            "DenseKernel: m^{2k} = " + std::to_string(std::size_t(entries)) +
            " entries exceed the budget of " + std::to_string(entry_budget()));
}

DenseKernel& DenseKernel::operator+=(const DenseKernel& o) {
    if (order_ != o.order_ || grid_ != o.grid_)
        throw std::invalid_argument("DenseKernel+: shape mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

DenseKernel& DenseKernel::operator-=(const DenseKernel& o) {
    if (order_ != o.order_ || grid_ != o.grid_)
        throw std::invalid_argument("DenseKernel-: shape mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

DenseKernel& DenseKernel::operator*=(cplx s) {
    for (cplx& v : values_) v *= s;
    return *this;
}

DenseKernel factorized_kernel(const Field& phi, int order) {
    if (phi.grid().dim() != 1)
        throw std::invalid_argument("factorized_kernel: dimension-1 only");
    DenseKernel out(order, phi.grid());
    const int m = phi.grid().points();
    const int k = order;
    const cplx* f = phi.data();
    cplx* g = out.data();
    const std::size_t n = out.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
        std::size_t rest = std::size_t(flat);
        cplx prod(1.0, 0.0);
        // primed indices are the fastest-varying block
        for (int a = 0; a < k; ++a) {
            prod *= std::conj(f[rest % m]);
            rest /= m;
        }
        for (int a = 0; a < k; ++a) {
            prod *= f[rest % m];
            rest /= m;
        }
        g[flat] = prod;
    }
    return out;
}

DenseKernel partial_trace(const DenseKernel& g) {
    if (g.order() < 2)
        throw std::invalid_argument("partial_trace: order must be >= 2");
    const int k = g.order() - 1;
    const int m = g.grid().points();
    const double h = g.grid().spacing();
    DenseKernel out(k, g.grid());
    const TensorShape in_sh = g.shape();
    // input axes: unprimed 0..k, primed k+1..2k+1; traced pair is (k, 2k+1)
    const std::size_t stride_u = in_sh.stride(k);
    const std::size_t stride_v = in_sh.stride(2 * k + 1);  // == 1
    const TensorShape out_sh = out.shape();
    const std::size_t n_out = out.size();
    const cplx* in = g.data();
    cplx* o = out.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n_out); ++flat) {
        // map output (x_1..x_k, x'_1..x'_k) to input with y inserted at both
        // block ends
        std::size_t rest = std::size_t(flat);
        std::size_t primed = 0, unprimed = 0;
        std::size_t scale = 1;
        for (int a = 0; a < k; ++a) {
            primed += (rest % m) * scale;
            rest /= m;
            scale *= m;
        }
        scale = 1;
        for (int a = 0; a < k; ++a) {
            unprimed += (rest % m) * scale;
            rest /= m;
            scale *= m;
        }
        const std::size_t base =
            unprimed * (stride_u * m) + primed * (stride_v * m);
        cplx acc(0.0, 0.0);
        for (int y = 0; y < m; ++y)
            acc += in[base + std::size_t(y) * stride_u + std::size_t(y) * stride_v];
        o[flat] = h * acc;
    }
    return out;
}

namespace {

// next permutation machinery over order k (k is small)
std::vector<std::vector<int>> all_permutations(int k) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

std::size_t permuted_index(const TensorShape& sh, const int* idx,
                           const std::vector<int>& perm, int k) {
    // simultaneous permutation of both blocks
    std::size_t flat = 0;
    for (int a = 0; a < k; ++a) flat = flat * sh.extent + idx[perm[a]];
    for (int a = 0; a < k; ++a) flat = flat * sh.extent + idx[k + perm[a]];
    return flat;
}

std::size_t swapped_blocks_index(const TensorShape& sh, const int* idx, int k) {
    std::size_t flat = 0;
    for (int a = 0; a < k; ++a) flat = flat * sh.extent + idx[k + a];
    for (int a = 0; a < k; ++a) flat = flat * sh.extent + idx[a];
    return flat;
}

}  // namespace

SymmetryReport symmetry_report(const DenseKernel& g) {
    const int k = g.order();
    const TensorShape sh = g.shape();
    const auto perms = all_permutations(k);
    SymmetryReport rep;
    const cplx* v = g.data();
    const std::size_t n = g.size();
    double herm = 0.0, perm = 0.0;
#pragma omp parallel for schedule(static) reduction(max : herm, perm)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
        int idx[2 * 8];
        sh.decode(std::size_t(flat), idx);
        herm = std::max(
            herm, std::abs(v[flat] - std::conj(v[swapped_blocks_index(sh, idx, k)])));
        for (const auto& p : perms) {
            const std::size_t q = permuted_index(sh, idx, p, k);
            perm = std::max(perm, std::abs(v[flat] - v[q]));
        }
    }
    rep.hermitian_defect = herm;
    rep.permutation_defect = perm;
    return rep;
}

double kernel_l2_norm(const DenseKernel& g) {
    double s = 0.0;
    const cplx* v = g.data();
    const std::ptrdiff_t n = std::ptrdiff_t(g.size());
#pragma omp parallel for schedule(static) reduction(+ : s)
    for (std::ptrdiff_t i = 0; i < n; ++i) s += std::norm(v[i]);
    double w = 1.0;
    for (int a = 0; a < 2 * g.order(); ++a) w *= g.grid().spacing();
    return std::sqrt(w * s);
}

cplx kernel_trace(const DenseKernel& g) {
    const int k = g.order();
    const int m = g.grid().points();
    const TensorShape sh = g.shape();
    cplx acc(0.0, 0.0);
    // diagonal x' = x
    TensorShape diag{k, m};
    int idx[2 * 8];
    const std::size_t nd = diag.size();
    for (std::size_t d = 0; d < nd; ++d) {
        diag.decode(d, idx);
        for (int a = 0; a < k; ++a) idx[k + a] = idx[a];
        acc += g.values()[sh.encode(idx)];
    }
    double w = 1.0;
    for (int a = 0; a < k; ++a) w *= g.grid().spacing();
    return w * acc;
}

DenseKernel free_propagate(const DenseKernel& g, double t) {
    DenseKernel out = g;
    const Grid& gr = g.grid();
    const TensorShape sh = out.shape();
    const int k = g.order();
    std::vector<cplx> unprimed_tab(gr.points()), primed_tab(gr.points());
    for (int j = 0; j < gr.points(); ++j) {
        const double p2 = gr.momentum(j) * gr.momentum(j);
        unprimed_tab[j] = std::polar(1.0, -t * p2);
        primed_tab[j] = std::polar(1.0, +t * p2);
    }
    for (int a = 0; a < k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_momentum, gr.halfwidth());
    for (int a = k; a < 2 * k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::primed,
                            fft::Dir::to_momentum, gr.halfwidth());
    for (int a = 0; a < k; ++a)
        fft::scale_axis(out.data(), sh, a, std::span<const cplx>(unprimed_tab));
    for (int a = k; a < 2 * k; ++a)
        fft::scale_axis(out.data(), sh, a, std::span<const cplx>(primed_tab));
    for (int a = 0; a < k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::unprimed,
                            fft::Dir::to_position, gr.halfwidth());
    for (int a = k; a < 2 * k; ++a)
        fft::transform_axis(out.data(), sh, a, fft::AxisKind::primed,
                            fft::Dir::to_position, gr.halfwidth());
    return out;
}

DenseKernel symmetrize(const DenseKernel& g) {
    const int k = g.order();
    const TensorShape sh = g.shape();
    DenseKernel herm(k, g.grid());
    const std::size_t n = g.size();
    {
        const cplx* v = g.data();
        cplx* o = herm.data();
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
            int idx[2 * 8];
            sh.decode(std::size_t(flat), idx);
            o[flat] =
                0.5 * (v[flat] + std::conj(v[swapped_blocks_index(sh, idx, k)]));
        }
    }
    const auto perms = all_permutations(k);
    DenseKernel out(k, g.grid());
    const cplx* v = herm.data();
    cplx* o = out.data();
    const double w = 1.0 / double(perms.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t flat = 0; flat < std::ptrdiff_t(n); ++flat) {
        int idx[2 * 8];
        sh.decode(std::size_t(flat), idx);
        cplx acc(0.0, 0.0);
        for (const auto& p : perms) acc += v[permuted_index(sh, idx, p, k)];
        o[flat] = w * acc;
    }
    return out;
}

DenseKernel random_symmetric_kernel(int order, const Grid& grid,
                                    std::uint64_t seed) {
    DenseKernel raw(order, grid);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    // build from a few smooth rank-one pieces plus noise so the kernel has
    // momentum content that the spectral ops resolve
    std::vector<Field> parts;
    for (int r = 0; r < 3; ++r)
        parts.push_back(random_smooth_field(grid, seed * 7919u + r + 1, 2.5));
    for (int r = 0; r < 3; ++r) {
        DenseKernel piece = factorized_kernel(parts[r], order);
        piece *= cplx(normal(rng), 0.0);
        raw += piece;
    }
    // small non-product perturbation
    DenseKernel noise(order, grid);
    Field a = random_smooth_field(grid, seed + 101, 2.0);
    Field b = random_smooth_field(grid, seed + 202, 2.0);
    const TensorShape sh = noise.shape();
    for (std::size_t flat = 0; flat < noise.size(); ++flat) {
        int idx[2 * 8];
        sh.decode(flat, idx);
        cplx prod(1.0, 0.0);
        for (int q = 0; q < order; ++q) prod *= a.values()[idx[q]];
        for (int q = 0; q < order; ++q)
            prod *= std::conj(b.values()[idx[order + q]]);
        noise.values()[flat] = prod;
    }
    noise *= cplx(0.3, 0.0);
    raw += noise;
    return symmetrize(raw);
}

}  // namespace gph
