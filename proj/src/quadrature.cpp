#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "sumlab/error.hpp"
#include "sumlab/special.hpp"

namespace sumlab::special {

namespace {

// Gauss-Kronrod 10/21 nodes and weights (QUADPACK qk21).
constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067547503, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

constexpr double machine_eps = std::numeric_limits<double>::epsilon();
constexpr int max_intervals = 4000;

double magnitude(double v) { return std::abs(v); }
double magnitude(cplx v) { return std::abs(v); }

template <class T>
struct Segment {
    double lo, hi;
    T value;
    double error;
    int depth;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One 21-point Kronrod panel on [lo, hi] of a function of the (possibly
// transformed) variable.
template <class T, class F>
Segment<T> kronrod(const F& f, double lo, double hi, int depth, long& evals) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const T fc = f(centre);
    T resk = fc * wgk[10];
    T resg{};
    double resabs = std::abs(wgk[10]) * magnitude(fc);
    std::array<T, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * xgk[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        resk += wgk[j] * (f1[j] + f2[j]);
        resabs += wgk[j] * (magnitude(f1[j]) + magnitude(f2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * (f1[j] + f2[j]);
    }
    evals += 21;
    const T mean = resk * 0.5;
    double resasc = wgk[10] * magnitude(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += wgk[j] * (magnitude(f1[j] - mean) + magnitude(f2[j] - mean));
    resk *= half;
    resg *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = magnitude(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * machine_eps))
        err = std::max(50.0 * machine_eps * resabs, err);
    return {lo, hi, resk, err, depth};
}

template <class T, class F>
QuadResult<T> adapt(const F& f, double lo, double hi, const QuadratureSpec& spec,
                    double abs_share) {
    QuadResult<T> out;
    std::priority_queue<Segment<T>> heap;
    heap.push(kronrod<T>(f, lo, hi, 0, out.evaluations));
    T total = heap.top().value;
    double total_err = heap.top().error;
    std::vector<Segment<T>> frozen;
    while (!heap.empty()) {
        const double tol = std::max(abs_share, spec.rel_tol * magnitude(total));
        if (total_err <= tol) break;
        if (static_cast<int>(heap.size() + frozen.size()) >= max_intervals) {
            out.converged = false;
            break;
        }
        Segment<T> worst = heap.top();
        heap.pop();
        if (worst.depth >= spec.max_depth) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.lo + worst.hi);
        auto left = kronrod<T>(f, worst.lo, mid, worst.depth + 1, out.evaluations);
        auto right = kronrod<T>(f, mid, worst.hi, worst.depth + 1, out.evaluations);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    if (heap.empty() && !frozen.empty()) out.converged = false;
    // resum to shed drift from the incremental updates
    T sum{};
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    for (const auto& s : frozen) {
        sum += s.value;
        err += s.error;
    }
    out.value = sum;
    out.error = err;
    if (err > std::max(abs_share, spec.rel_tol * magnitude(sum))) out.converged = false;
    return out;
}

template <class T>
void accumulate(QuadResult<T>& into, const QuadResult<T>& part) {
    into.value += part.value;
    into.error += part.error;
    into.converged = into.converged && part.converged;
    into.evaluations += part.evaluations;
}

// Integrates g(x, left_gap, right_gap) over [a, b], peeling the declared
// endpoint singularities with power substitutions.
template <class T, class G>
QuadResult<T> integrate_impl(const G& g, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b)) {
        if (a == b) return {};
        throw Error(Errc::domain_error, "integration bounds must satisfy a < b");
    }
    const bool sing_l = spec.sigma_left != 0.0;
    const bool sing_r = spec.sigma_right != 0.0;
    const double len = b - a;

    if (!sing_l && !sing_r) {
        auto plain = [&](double x) -> T { return g(x, x - a, b - x); };
        return adapt<T>(plain, a, b, spec, spec.abs_tol);
    }

    // Left-singular piece over [a, a + h]: x - a = h t^beta.
    auto left_piece = [&](double h, double right_end, double share) {
        const double beta = 1.0 / (1.0 + spec.sigma_left);
        auto fn = [&, h, beta, right_end](double t) -> T {
            if (t <= 0.0) return T{};
            const double tb = std::pow(t, beta);
            const double gap = h * tb;
            if (gap <= 0.0) return T{};
            const double x = a + gap;
            const double rgap = right_end == b ? (b - a) - gap : b - x;
            const double jac = h * beta * tb / t;
            return g(x, gap, rgap) * jac;
        };
        return adapt<T>(fn, 0.0, 1.0, spec, share);
    };
    auto right_piece = [&](double h, double share) {
        const double beta = 1.0 / (1.0 + spec.sigma_right);
        auto fn = [&, h, beta](double t) -> T {
            if (t <= 0.0) return T{};
            const double tb = std::pow(t, beta);
            const double gap = h * tb;
            if (gap <= 0.0) return T{};
            const double x = b - gap;
            const double lgap = (b - a) - gap;
            const double jac = h * beta * tb / t;
            return g(x, lgap, gap) * jac;
        };
        return adapt<T>(fn, 0.0, 1.0, spec, share);
    };

    if (sing_l && sing_r) {
        QuadResult<T> out = left_piece(0.5 * len, a + 0.5 * len, 0.5 * spec.abs_tol);
        accumulate(out, right_piece(0.5 * len, 0.5 * spec.abs_tol));
        return out;
    }
    if (sing_l) return left_piece(len, b, spec.abs_tol);
    return right_piece(len, spec.abs_tol);
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw Error(Errc::domain_error, "quadrature tolerances must be positive");
    if (!(sigma_left > -1.0) || !(sigma_right > -1.0))
        throw Error(Errc::domain_error, "endpoint exponents must exceed -1");
    if (max_depth < 1) throw Error(Errc::domain_error, "max_depth must be positive");
}

QuadResult<double> integrate(const RealFn& fn, double a, double b, const QuadratureSpec& spec) {
    auto g = [&](double x, double, double) { return fn(x); };
    return integrate_impl<double>(g, a, b, spec);
}

QuadResult<double> integrate_gapped(const GappedFn& fn, double a, double b,
                                    const QuadratureSpec& spec) {
    return integrate_impl<double>(fn, a, b, spec);
}

QuadResult<cplx> integrate_complex_line(const ComplexFn& fn, double t_lo, double t_hi,
                                        const QuadratureSpec& spec) {
    auto g = [&](double t, double, double) { return fn(t); };
    return integrate_impl<cplx>(g, t_lo, t_hi, spec);
}

QuadResult<cplx> integrate_complex_gapped(const ComplexGappedFn& fn, double a, double b,
                                          const QuadratureSpec& spec) {
    return integrate_impl<cplx>(fn, a, b, spec);
}

} // namespace sumlab::special
