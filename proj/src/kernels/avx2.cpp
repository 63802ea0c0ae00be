#include <immintrin.h>

#include "sumlab/kernels.hpp"

namespace sumlab::kernels {

double weighted_sum_avx2(const TableView& v, const double* a, const double* logn, std::size_t begin,
                         std::size_t end, double L) {
    constexpr int N = weights::PanelFunction::ncoef;
    constexpr int graded = weights::PanelFunction::graded_panels;
    const __m256d vL = _mm256_set1_pd(L);
    const __m256d inv_h = _mm256_set1_pd(1.0 / weights::PanelFunction::H);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d max_fl = _mm256_set1_pd(static_cast<double>(v.n_uniform));
    const __m256d graded_m1 = _mm256_set1_pd(static_cast<double>(graded - 1));
    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256i pick_low = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);

    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        const __m256d u = _mm256_sub_pd(vL, _mm256_loadu_pd(logn + i));
        const __m256d y = _mm256_mul_pd(u, inv_h);

        // dyadic panels: y = m 2^e with m in [1, 2), panel -e - 1, t = 2m - 3
        const __m256i bits = _mm256_castpd_si256(y);
        const __m256i e64 = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), bias);
        const __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(e64, pick_low));
        const __m256d e = _mm256_cvtepi32_pd(e32);
        const __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
        const __m256d p_g = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_add_pd(e, one));
        const __m256d t_g = _mm256_fmsub_pd(two, m, three);

        // uniform panels
        const __m256d fl = _mm256_min_pd(_mm256_floor_pd(y), max_fl);
        const __m256d p_u = _mm256_add_pd(graded_m1, fl);
        const __m256d t_u = _mm256_fmsub_pd(two, _mm256_sub_pd(y, fl), one);

        const __m256d is_graded = _mm256_cmp_pd(y, one, _CMP_LT_OQ);
        const __m256d p = _mm256_blendv_pd(p_u, p_g, is_graded);
        const __m256d t = _mm256_blendv_pd(t_u, t_g, is_graded);

        const __m128i idx = _mm_mullo_epi32(_mm256_cvttpd_epi32(p), _mm_set1_epi32(N));
        const __m256d t2 = _mm256_add_pd(t, t);
        __m256d b1 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
        __m256d g;
        const int first = _mm_cvtsi128_si32(idx);
        if (_mm_movemask_epi8(_mm_cmpeq_epi32(idx, _mm_set1_epi32(first))) == 0xffff) {
            const double* c = v.coef + first;
            for (int j = N - 1; j >= 1; --j) {
                const __m256d b0 = _mm256_add_pd(_mm256_fmsub_pd(t2, b1, b2), _mm256_broadcast_sd(c + j));
                b2 = b1;
                b1 = b0;
            }
            g = _mm256_add_pd(_mm256_fmsub_pd(t, b1, b2), _mm256_broadcast_sd(c));
        } else {
            for (int j = N - 1; j >= 1; --j) {
                const __m256d c = _mm256_i32gather_pd(v.coef + j, idx, 8);
                const __m256d b0 = _mm256_add_pd(_mm256_fmsub_pd(t2, b1, b2), c);
                b2 = b1;
                b1 = b0;
            }
            g = _mm256_add_pd(_mm256_fmsub_pd(t, b1, b2), _mm256_i32gather_pd(v.coef, idx, 8));
        }

        const __m256d term = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(a + i), g), comp);
        const __m256d next = _mm256_add_pd(sum, term);
        comp = _mm256_sub_pd(_mm256_sub_pd(next, sum), term);
        sum = next;
    }
    alignas(32) double lanes[4], lane_comp[4];
    _mm256_store_pd(lanes, sum);
    _mm256_store_pd(lane_comp, comp);
    double total = 0.0, c = 0.0;
    auto add = [&](double x) {
        const double term = x - c;
        const double next = total + term;
        c = (next - total) - term;
        total = next;
    };
    for (int l = 0; l < 4; ++l) {
        add(lanes[l]);
        add(-lane_comp[l]);
    }
    for (; i < end; ++i) add(a[i] * eval_table(v, L - logn[i]));
    return total;
}

} // namespace sumlab::kernels
