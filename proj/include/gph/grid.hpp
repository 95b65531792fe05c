#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gph {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 3;

// |phi|^2 phi vs |phi|^4 phi
enum class Power { cubic, quintic };

// nonlinearity degree sigma in |phi|^{2 sigma} phi; also the hierarchy level
// gap (cubic couples k to k+1, quintic to k+2)
inline int level_gap(Power p) { return p == Power::cubic ? 1 : 2; }

// Entry cap shared by fields and dense kernels (complex entries, not bytes).
std::size_t& entry_budget();

// Uniform periodic grid on the box [-L, L)^dim with m points per axis.
// Momentum lattice per axis: p = (pi/L) * {-m/2, ..., m/2 - 1}.
class Grid {
public:
    Grid(int dim, int points, double halfwidth);

    int dim() const { return dim_; }
    int points() const { return m_; }
    double halfwidth() const { return L_; }
    double spacing() const { return 2.0 * L_ / m_; }
    std::size_t size() const { return size_; }

    // position of index i in [0, m): x = -L + i*h
    double coord(int i) const { return -L_ + spacing() * i; }
    // signed frequency integer of FFT bin j: j <= m/2-1 ? j : j - m
    int freq_index(int j) const { return j <= m_ / 2 - 1 ? j : j - m_; }
    // momentum of FFT bin j
    double momentum(int j) const { return (kPi / L_) * freq_index(j); }

    // quadrature weight h^dim and momentum measure (2L)^-dim
    double cell_volume() const;
    double momentum_measure() const;

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && m_ == o.m_ && L_ == o.L_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    static constexpr double kPi = 3.14159265358979323846;

private:
    int dim_;
    int m_;
    double L_;
    std::size_t size_;
};

// Row-major multi-index helpers for rank-r tensors with equal extent m.
struct TensorShape {
    int rank = 0;
    int extent = 0;

    std::size_t size() const {
        std::size_t n = 1;
        for (int a = 0; a < rank; ++a) n *= std::size_t(extent);
        return n;
    }
    // stride of axis a (axis 0 slowest)
    std::size_t stride(int a) const {
        std::size_t s = 1;
        for (int b = a + 1; b < rank; ++b) s *= std::size_t(extent);
        return s;
    }
    void decode(std::size_t flat, int* idx) const {
        for (int a = rank - 1; a >= 0; --a) {
            idx[a] = int(flat % extent);
            flat /= extent;
        }
    }
    std::size_t encode(const int* idx) const {
        std::size_t flat = 0;
        for (int a = 0; a < rank; ++a) flat = flat * extent + idx[a];
        return flat;
    }
};

}  // namespace gph
