#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>

#include "doctest.h"
#include "sumlab/kernels.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/summatory.hpp"

using namespace sumlab;
using namespace sumlab::kernels;

namespace {

const LFunctionDescriptor& reg(const std::string& name) {
    static const lfunc::Registry r = lfunc::default_registry();
    return r.get(name);
}

struct Terms {
    std::vector<double> a, logn;
};

// Abscissae L - logn spread over [min_kernel_u, u_max], including panel edges.
Terms random_terms(std::size_t n, double L, double u_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-2, 2), lu(std::log(min_kernel_u), std::log(u_max));
    Terms t;
    for (std::size_t i = 0; i < n; ++i) {
        double u = std::exp(lu(rng));
        if (i % 17 == 0) u = weights::PanelFunction::H * std::ldexp(1.0, -int(i % 5));
        if (i % 23 == 0) u = std::min(u_max, std::floor(u / 0.25) * 0.25 + 0.25);
        u = std::clamp(u, min_kernel_u, u_max);
        t.a.push_back(coeff(rng));
        t.logn.push_back(L - u);
    }
    return t;
}

} // namespace

TEST_CASE("table evaluation matches the panel function") {
    const weights::WeightEvaluator ev(reg("CHI4"), 0.25, 2, weights::Backend::pipeline);
    const auto& table = ev.table(2);
    const auto view = TableView::of(table);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> lu(std::log(min_kernel_u), std::log(table.u_max()));
    for (int i = 0; i < 10000; ++i) {
        const double u = std::exp(lu(rng));
        CHECK(eval_table(view, u) == table(u));
    }
    CHECK(eval_table(view, table.u_max()) == table(table.u_max()));
}

TEST_CASE("scalar and AVX2 kernels agree") {
    if (!avx2_supported()) {
        MESSAGE("AVX2 not available on this CPU; only the scalar kernel is exercised");
        return;
    }
    for (const char* name : {"ZETA", "CHI4", "PRODUCT"})
        for (int k : {1, 2, 3}) {
            const weights::WeightEvaluator ev(reg(name), 0.3, k, weights::Backend::pipeline);
            const auto view = TableView::of(ev.table(k));
            for (std::size_t n : {1, 3, 4, 5, 64, 1001, 20000}) {
                const double L = 12.0;
                const auto t = random_terms(n, L, ev.table(k).u_max(), n * 31 + k);
                double mag = 0.0;
                for (std::size_t i = 0; i < n; ++i) mag += std::abs(t.a[i] * eval_table(view, L - t.logn[i]));
                for (std::size_t begin : {std::size_t{0}, std::size_t{1}, n / 3}) {
                    const double s = weighted_sum_scalar(view, t.a.data(), t.logn.data(), begin, n, L);
                    const double v = weighted_sum_avx2(view, t.a.data(), t.logn.data(), begin, n, L);
                    CHECK(std::abs(s - v) <= 1e-14 * (mag + 1e-300));
                }
            }
        }
}

TEST_CASE("summatory values agree across kernels") {
    if (!avx2_supported()) return;
    const summatory::SummatoryEvaluator ev(reg("CHI4"), 0.25, 2, 5000);
    const auto view = TableView::of(ev.weight().table(2));
    std::vector<double> a(5001), logn(5001);
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        a[n] = ev.scaled_coefficient(n);
        logn[n] = std::log(double(n));
    }
    for (double x : {100.5, 1234.25, 4999.9}) {
        const auto m = static_cast<std::size_t>(std::floor(x * 0.98));
        const double L = std::log(x);
        const double s = weighted_sum_scalar(view, a.data(), logn.data(), 1, m + 1, L);
        const double v = weighted_sum_avx2(view, a.data(), logn.data(), 1, m + 1, L);
        CHECK(std::abs(s - v) <= 1e-13 * (1 + std::abs(s)));
    }
}

TEST_CASE("dispatch honours the environment") {
    const char* env = std::getenv("SUMLAB_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) {
        CHECK(std::string(selected_kernel_name()) == "scalar");
        CHECK(select_weighted_sum() == &weighted_sum_scalar);
    } else {
        CHECK(std::string(selected_kernel_name()) == (avx2_supported() ? "avx2" : "scalar"));
    }
}
