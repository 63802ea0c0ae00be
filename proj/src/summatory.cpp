#include "sumlab/summatory.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sumlab/error.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/special.hpp"

namespace sumlab::summatory {

namespace {

constexpr double integer_guard = 1e-9;

// n <= x e^{-1/64} keeps u = log(x/n) inside the kernel range.
constexpr double kernel_ratio = 0.984;

} // namespace

double table_span(std::uint64_t N) {
    return std::max(18.0, std::log(static_cast<double>(std::max<std::uint64_t>(N, 1))) + 1.0);
}

std::vector<double> grid_points(double x_lo, double x_hi, int points, Spacing spacing) {
    if (points < 2) throw Error(Errc::domain_error, "a grid needs at least two points");
    if (!(x_lo < x_hi)) throw Error(Errc::domain_error, "grid needs x_lo < x_hi");
    if (spacing == Spacing::log && !(x_lo > 0.0)) throw Error(Errc::domain_error, "log grid needs x_lo > 0");
    std::vector<double> xs(static_cast<std::size_t>(points));
    const double a = spacing == Spacing::log ? std::log(x_lo) : x_lo;
    const double b = spacing == Spacing::log ? std::log(x_hi) : x_hi;
    for (int i = 0; i < points; ++i) {
        const double s = a + (b - a) * i / (points - 1);
        xs[static_cast<std::size_t>(i)] = spacing == Spacing::log ? std::exp(s) : s;
    }
    xs.front() = x_lo;
    xs.back() = x_hi;
    return xs;
}

SummatoryEvaluator::SummatoryEvaluator(const LFunctionDescriptor& f, double omega, int k,
                                       std::uint64_t N, weights::Backend backend) {
    require_omega(omega);
    if (N < 1) throw Error(Errc::table_too_small, "coefficient bound must be at least 1");
    const auto prepared = lfunc::prepare_local_data(f, N);
    weight_ = std::make_shared<weights::WeightEvaluator>(prepared, omega, k, backend, table_span(N));
    coeffs_ = arith::build_table(prepared, omega, N);
    const double qw = std::pow(static_cast<double>(prepared.conductor), -omega);
    a_.assign(N + 1, 0.0);
    logn_.assign(N + 1, 0.0);
    for (std::uint64_t n = 1; n <= N; ++n) {
        const double dn = static_cast<double>(n);
        a_[n] = qw * coeffs_.c[n] / std::sqrt(dn);
        logn_[n] = std::log(dn);
    }
    sum_fn_ = kernels::select_weighted_sum();
}

double SummatoryEvaluator::term(int level, std::uint64_t n, std::uint64_t n0, double gap) const {
    if (n > n0 || n < 1) return 0.0;
    const double dn = static_cast<double>(n);
    const double u = std::log1p((static_cast<double>(n0 - n) + gap) / dn);
    return a_[n] * weight_->table(level)(u);
}

double SummatoryEvaluator::h_offset(int level, std::uint64_t n0, double gap, std::uint64_t n_max) const {
    if (n0 < 1) return 0.0;
    if (n0 > coeffs_.N || (n0 == coeffs_.N && gap > 0.0))
        throw Error(Errc::table_too_small, "x = " + std::to_string(n0 + gap) + " exceeds the coefficient bound " +
                                               std::to_string(coeffs_.N));
    const auto& table = weight_->table(level);
    n_max = std::min(n_max, n0);
    const double x = static_cast<double>(n0) + gap;
    const auto n_kernel = std::min<std::uint64_t>(n_max, static_cast<std::uint64_t>(std::floor(x * kernel_ratio)));
    double sum = 0.0;
    if (n_kernel >= 1)
        sum = sum_fn_(kernels::TableView::of(table), a_.data(), logn_.data(), 1, n_kernel + 1, std::log(x));
    double comp = 0.0;
    for (std::uint64_t n = n_kernel + 1; n <= n_max; ++n) {
        const double dn = static_cast<double>(n);
        const double u = std::log1p((static_cast<double>(n0 - n) + gap) / dn);
        const double t = a_[n] * table(u) - comp;
        const double next = sum + t;
        comp = (next - sum) - t;
        sum = next;
    }
    return sum;
}

double SummatoryEvaluator::h_level(int level, double x) const {
    if (!(x >= 1.0)) {
        if (x > 0.0) return 0.0;
        throw Error(Errc::domain_error, "h is defined for x > 0");
    }
    const double fl = std::floor(x);
    if (fl > static_cast<double>(coeffs_.N))
        throw Error(Errc::table_too_small, "x = " + std::to_string(x) + " exceeds the coefficient bound " +
                                               std::to_string(coeffs_.N));
    const auto n0 = static_cast<std::uint64_t>(fl);
    const double gap = x - fl;
    if (level == 0 && std::min(gap, 1.0 - gap) < integer_guard)
        throw Error(Errc::integer_abscissa, "k = 0 weights are singular at integer x = " + std::to_string(x));
    return h_offset(level, n0, gap, n0);
}

double h_direct(const SummatoryEvaluator& ev, double x) { return ev.h_level(ev.k(), x); }

double h_recurrence(const SummatoryEvaluator& ev, double x) {
    const int level = ev.k() - 1;
    if (level < ev.first_level())
        throw Error(Errc::domain_error, "recurrence needs the level k - 1 weight table");
    if (!(x >= 1.0)) return 0.0;
    if (std::floor(x) > static_cast<double>(ev.bound()))
        throw Error(Errc::table_too_small, "x exceeds the coefficient bound");
    const double sigma = ev.weight().table(level).exponent();
    special::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-11;
    spec.sigma_left = std::min(sigma, 0.0);
    double total = 0.0;
    for (std::uint64_t m = 1; static_cast<double>(m) < x; ++m) {
        const double len = std::min(1.0, x - static_cast<double>(m));
        auto integrand = [&](double, double gap, double) {
            if (gap >= 1.0) return 0.0;
            const double y = static_cast<double>(m) + gap;
            return ev.h_offset(level, m, gap, m) / y;
        };
        total += special::integrate_gapped(integrand, 0.0, len, spec).value;
    }
    return total;
}

std::vector<double> h_values(const SummatoryEvaluator& ev, const std::vector<double>& xs, int threads) {
    std::vector<double> out(xs.size());
    const int nt = std::max(1, std::min<int>(threads, static_cast<int>(xs.size())));
    if (nt == 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = h_direct(ev, xs[i]);
        return out;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nt));
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = static_cast<std::size_t>(t); i < xs.size(); i += static_cast<std::size_t>(nt))
                    out[i] = h_direct(ev, xs[i]);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<std::pair<double, double>> h_grid(const SummatoryEvaluator& ev, double x_lo, double x_hi,
                                              int points, Spacing spacing, int threads) {
    if (!(x_lo >= 1.0)) throw Error(Errc::domain_error, "grids start at x >= 1");
    if (x_hi > static_cast<double>(ev.bound()))
        throw Error(Errc::table_too_small, "grid end " + std::to_string(x_hi) + " exceeds the coefficient bound " +
                                               std::to_string(ev.bound()));
    const auto xs = grid_points(x_lo, x_hi, points, spacing);
    const auto hs = h_values(ev, xs, threads);
    std::vector<std::pair<double, double>> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = {xs[i], hs[i]};
    return out;
}

} // namespace sumlab::summatory
