#pragma once

#include <cmath>
#include <cstddef>

#include "sumlab/panel.hpp"

namespace sumlab::kernels {

/// Arguments below this go through the scalar boundary path, which forms u
/// from the exact offset to the nearest integer.
inline constexpr double min_kernel_u = 1.0 / 64.0;

struct TableView {
    const double* coef;
    int n_uniform;
    double u_max;

    static TableView of(const weights::PanelFunction& p) {
        return {p.coefficients().data(), p.uniform_panels(), p.u_max()};
    }
};

/// Kahan-compensated sum of a[i] G(L - logn[i]) over i in [begin, end).
/// Every argument must lie in [min_kernel_u, u_max].
using WeightedSumFn = double (*)(const TableView&, const double* a, const double* logn,
                                 std::size_t begin, std::size_t end, double L);

double weighted_sum_scalar(const TableView&, const double* a, const double* logn, std::size_t begin,
                           std::size_t end, double L);
double weighted_sum_avx2(const TableView&, const double* a, const double* logn, std::size_t begin,
                         std::size_t end, double L);

bool avx2_supported();
/// AVX2 when the CPU has it and SUMLAB_SIMD is not set to "scalar".
WeightedSumFn select_weighted_sum();
const char* selected_kernel_name();

/// Panel evaluation shared by both kernels for u in [1/64, u_max].
inline double eval_table(const TableView& v, double u) {
    constexpr double H = weights::PanelFunction::H;
    constexpr int N = weights::PanelFunction::ncoef;
    int p;
    double t;
    if (u < H) {
        int e;
        const double m = 2.0 * std::frexp(u / H, &e); // u/H = m 2^{e-1}, m in [1, 2)
        p = -(e - 1) - 1;
        t = 2.0 * m - 3.0;
    } else {
        const double y = u / H;
        double fl = std::floor(y);
        if (fl > v.n_uniform) fl = v.n_uniform;
        p = weights::PanelFunction::graded_panels + static_cast<int>(fl) - 1;
        t = 2.0 * (y - fl) - 1.0;
    }
    return weights::clenshaw(v.coef + static_cast<std::size_t>(p) * N, t);
}

} // namespace sumlab::kernels
