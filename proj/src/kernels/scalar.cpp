#include <cstdlib>
#include <cstring>

#include "sumlab/kernels.hpp"

namespace sumlab::kernels {

double weighted_sum_scalar(const TableView& v, const double* a, const double* logn, std::size_t begin,
                           std::size_t end, double L) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double term = a[i] * eval_table(v, L - logn[i]) - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
bool use_avx2() {
    static const bool on = [] {
        const char* env = std::getenv("SUMLAB_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return false;
        return avx2_supported();
    }();
    return on;
}
} // namespace

WeightedSumFn select_weighted_sum() { return use_avx2() ? &weighted_sum_avx2 : &weighted_sum_scalar; }

const char* selected_kernel_name() { return use_avx2() ? "avx2" : "scalar"; }

} // namespace sumlab::kernels
