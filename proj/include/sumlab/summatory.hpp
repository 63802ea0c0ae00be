#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "sumlab/arith.hpp"
#include "sumlab/descriptor.hpp"
#include "sumlab/kernels.hpp"
#include "sumlab/weights.hpp"

namespace sumlab::summatory {

enum class Spacing { log, linear };

std::vector<double> grid_points(double x_lo, double x_hi, int points, Spacing spacing);

/// h^{<k>}_{f,omega} on [1, N]. Holds the weight tables for levels
/// first_level()..k and the coefficients q^{-omega} c(n) n^{-1/2}.
class SummatoryEvaluator {
public:
    SummatoryEvaluator(const LFunctionDescriptor& f, double omega, int k, std::uint64_t N,
                       weights::Backend backend = weights::Backend::pipeline);

    const LFunctionDescriptor& lfunction() const { return weight_->lfunction(); }
    double omega() const { return weight_->omega(); }
    int k() const { return weight_->k(); }
    int first_level() const { return weight_->first_level(); }
    std::uint64_t bound() const { return coeffs_.N; }
    const weights::WeightEvaluator& weight() const { return *weight_; }
    const arith::CoefficientTable& coeffs() const { return coeffs_; }

    /// h^{<level>}(x), level in first_level()..k
    double h_level(int level, double x) const;
    /// h^{<level>} at x = n0 + gap with 0 <= gap < 1 known exactly, summing
    /// only n <= n_max (n_max <= n0). No integer guard: the gap is exact.
    double h_offset(int level, std::uint64_t n0, double gap, std::uint64_t n_max) const;
    /// q^{-omega} c(n) n^{-1/2}
    double scaled_coefficient(std::uint64_t n) const { return a_.at(n); }
    /// The single summand of index n at x = n0 + gap.
    double term(int level, std::uint64_t n, std::uint64_t n0, double gap) const;

private:
    std::shared_ptr<const weights::WeightEvaluator> weight_;
    arith::CoefficientTable coeffs_;
    std::vector<double> a_;    // q^{-omega} c(n) n^{-1/2}
    std::vector<double> logn_; // log n
    kernels::WeightedSumFn sum_fn_;
};

/// q^{-omega} x^{-1/2} sum_{n <= x} c(n) g^{<k>}(n/x)
double h_direct(const SummatoryEvaluator& ev, double x);
/// int_1^x h^{<k-1>}(y) dy / y, piecewise over unit intervals.
double h_recurrence(const SummatoryEvaluator& ev, double x);
/// (x, h(x)) on the grid; threads <= 1 runs inline.
std::vector<std::pair<double, double>> h_grid(const SummatoryEvaluator& ev, double x_lo, double x_hi,
                                              int points, Spacing spacing, int threads = 1);
/// h at the given abscissae, distributed over threads.
std::vector<double> h_values(const SummatoryEvaluator& ev, const std::vector<double>& xs, int threads = 1);

/// u_max a weight table needs to serve h on [1, N].
double table_span(std::uint64_t N);

} // namespace sumlab::summatory
