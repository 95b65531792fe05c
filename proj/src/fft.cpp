#include "gph/fft.hpp"

#include <fftw3.h>
#include <omp.h>

#include <map>
#include <mutex>
#include <vector>

namespace gph {

std::size_t& entry_budget() {
    static std::size_t budget = std::size_t(1) << 26;
    return budget;
}

Grid::Grid(int dim, int points, double halfwidth)
    : dim_(dim), m_(points), L_(halfwidth) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("Grid: dim must be in [1, " +
                                    std::to_string(kMaxDim) + "], got " +
                                    std::to_string(dim));
    if (m_ < 2 || m_ % 2 != 0)
        throw std::invalid_argument("Grid: points must be even and >= 2, got " +
                                    std::to_string(m_));
    if (!(L_ > 0.0))
        throw std::invalid_argument("Grid: halfwidth must be positive");
    size_ = 1;
    for (int a = 0; a < dim_; ++a) {
        size_ *= std::size_t(m_);
        if (size_ > entry_budget())
            throw std::invalid_argument(
                "Grid: " + std::to_string(m_) + "^" + std::to_string(dim_) +
                " points exceed the entry budget of " +
                std::to_string(entry_budget()));
    }
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing();
    return v;
}

double Grid::momentum_measure() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v /= 2.0 * L_;
    return v;
}

}  // namespace gph

namespace gph::fft {

Backend& default_backend() {
    static Backend b = Backend::fft;
    return b;
}

namespace {

// Plans are reused across calls; creation is serialized, execution via
// fftw_execute_dft on thread-private buffers is safe.
class PlanCache {
public:
    fftw_plan get(int m, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(m, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> in(m), out(m);
        fftw_plan p = fftw_plan_dft_1d(
            m, reinterpret_cast<fftw_complex*>(in.data()),
            reinterpret_cast<fftw_complex*>(out.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

inline double bin_phase(int j) { return (j & 1) ? -1.0 : 1.0; }

struct LineSpec {
    // line l (0 <= l < count) starts at
    //   (l / inner) * block + (l % inner)
    // and strides by `inner` along the axis.
    std::size_t inner;
    std::size_t block;
    std::size_t count;
};

LineSpec line_spec(const TensorShape& shape, int axis) {
    LineSpec s;
    s.inner = shape.stride(axis);
    s.block = s.inner * std::size_t(shape.extent);
    s.count = shape.size() / std::size_t(shape.extent);
    return s;
}

// Definition-level O(m^2) transform of one gathered line, any backend checks
// against this.
void dft_line_direct(const cplx* in, cplx* out, int m, double L, AxisKind kind,
                     Dir dir) {
    const double h = 2.0 * L / m;
    // sign of the exponent e^{sign * i * p * x}
    double sign = (kind == AxisKind::unprimed) ? -1.0 : 1.0;
    if (dir == Dir::to_position) sign = -sign;
    for (int j = 0; j < m; ++j) {
        cplx acc = 0.0;
        if (dir == Dir::to_momentum) {
            const double p = (Grid::kPi / L) * (j <= m / 2 - 1 ? j : j - m);
            for (int i = 0; i < m; ++i) {
                const double x = -L + h * i;
                acc += in[i] * std::polar(1.0, sign * p * x);
            }
            out[j] = h * acc;
        } else {
            const double x = -L + h * j;
            for (int i = 0; i < m; ++i) {
                const double p = (Grid::kPi / L) * (i <= m / 2 - 1 ? i : i - m);
                acc += in[i] * std::polar(1.0, sign * p * x);
            }
            out[j] = acc / (2.0 * L);
        }
    }
}

void fft_line(fftw_plan plan, cplx* in, cplx* out, int m, double L,
              Dir dir) {
    const double h = 2.0 * L / m;
    if (dir == Dir::to_momentum) {
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
        for (int j = 0; j < m; ++j) out[j] *= h * bin_phase(j);
    } else {
        for (int j = 0; j < m; ++j) in[j] *= bin_phase(j) / (2.0 * L);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }
}

}  // namespace

void transform_axis(cplx* data, const TensorShape& shape, int axis,
                    AxisKind kind, Dir dir, double L, Backend backend) {
    const int m = shape.extent;
    const LineSpec ls = line_spec(shape, axis);

    fftw_plan plan = nullptr;
    if (backend != Backend::dft_direct) {
        // e^{-i...} axes map to FFTW_FORWARD in momentum direction; the
        // primed block and the inverse direction each flip the sign.
        int sign = (kind == AxisKind::unprimed) ? FFTW_FORWARD : FFTW_BACKWARD;
        if (dir == Dir::to_position) sign = -sign;
        plan = plan_cache().get(m, sign);
    }

    auto run_line = [&](std::size_t l, cplx* in, cplx* out) {
        const std::size_t base = (l / ls.inner) * ls.block + (l % ls.inner);
        for (int i = 0; i < m; ++i) in[i] = data[base + std::size_t(i) * ls.inner];
        if (backend == Backend::dft_direct)
            dft_line_direct(in, out, m, L, kind, dir);
        else
            fft_line(plan, in, out, m, L, dir);
        for (int j = 0; j < m; ++j) data[base + std::size_t(j) * ls.inner] = out[j];
    };

    if (backend == Backend::fft) {
#pragma omp parallel
        {
            std::vector<cplx> in(m), out(m);
#pragma omp for schedule(static)
            for (std::ptrdiff_t l = 0; l < std::ptrdiff_t(ls.count); ++l)
                run_line(std::size_t(l), in.data(), out.data());
        }
    } else {
        std::vector<cplx> in(m), out(m);
        for (std::size_t l = 0; l < ls.count; ++l)
            run_line(l, in.data(), out.data());
    }
}

void transform_axis(cplx* data, const TensorShape& shape, int axis,
                    AxisKind kind, Dir dir, double L) {
    transform_axis(data, shape, axis, kind, dir, L, default_backend());
}

template <class T>
static void scale_axis_impl(cplx* data, const TensorShape& shape, int axis,
                            std::span<const T> table) {
    const int m = shape.extent;
    const LineSpec ls = line_spec(shape, axis);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < std::ptrdiff_t(ls.count); ++l) {
        const std::size_t base =
            (std::size_t(l) / ls.inner) * ls.block + (std::size_t(l) % ls.inner);
        for (int j = 0; j < m; ++j)
            data[base + std::size_t(j) * ls.inner] *= table[j];
    }
}

void scale_axis(cplx* data, const TensorShape& shape, int axis,
                std::span<const cplx> table) {
    scale_axis_impl<cplx>(data, shape, axis, table);
}

void scale_axis(cplx* data, const TensorShape& shape, int axis,
                std::span<const double> table) {
    scale_axis_impl<double>(data, shape, axis, table);
}

void scale_pointwise(cplx* data, std::size_t n, const cplx* factors) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) data[i] *= factors[i];
}

void scale_pointwise_serial(cplx* data, std::size_t n, const cplx* factors) {
    for (std::size_t i = 0; i < n; ++i) data[i] *= factors[i];
}

}  // namespace gph::fft
