#include "sumlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "sumlab/arith.hpp"
#include "sumlab/error.hpp"
#include "sumlab/format.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/special.hpp"

namespace sumlab::verify {

namespace {

std::string describe(const LFunctionDescriptor& f, double omega, int k) {
    return f.name + " omega=" + fmt17(omega) + " k=" + std::to_string(k);
}

// Degree-20 Chebyshev interpolant on [a, b].
class LocalInterpolant {
public:
    static constexpr int n = 21;

    template <class F>
    LocalInterpolant(double a, double b, F&& f) : mid_(0.5 * (a + b)), half_(0.5 * (b - a)) {
        double vals[n];
        for (int m = 0; m < n; ++m) vals[m] = f(mid_ + half_ * std::cos(std::numbers::pi * (m + 0.5) / n));
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int m = 0; m < n; ++m) s += vals[m] * std::cos(std::numbers::pi * j * (m + 0.5) / n);
            c_[j] = (j == 0 ? 1.0 : 2.0) * s / n;
        }
    }

    double operator()(double x) const {
        const double t = (x - mid_) / half_;
        double b1 = 0.0, b2 = 0.0;
        for (int j = n - 1; j >= 1; --j) {
            const double b0 = 2.0 * t * b1 - b2 + c_[j];
            b2 = b1;
            b1 = b0;
        }
        return t * b1 - b2 + c_[0];
    }

private:
    double mid_, half_;
    double c_[n];
};

int sign_in_band(double h, double band) {
    if (h > band) return 1;
    if (h < -band) return -1;
    return 0;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

} // namespace

void IdentityReport::add(cplx point, cplx l, cplx r) {
    points.push_back(point);
    lhs.push_back(l);
    rhs.push_back(r);
}

void IdentityReport::finalize() {
    max_abs_gap = 0.0;
    max_rel_gap = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        const double gap = std::abs(lhs[i] - rhs[i]);
        if (!std::isfinite(gap)) finite = false;
        max_abs_gap = std::max(max_abs_gap, gap);
        const double scale = std::abs(rhs[i]);
        max_rel_gap = std::max(max_rel_gap, scale > 0.0 ? gap / scale : gap);
    }
    pass = finite && !lhs.empty() && max_rel_gap <= tolerance;
}

// ---------------------------------------------------------------------------
// Mellin identities
// ---------------------------------------------------------------------------

IdentityReport check_weight_mellin(const weights::WeightEvaluator& ev, int k,
                                   const std::vector<cplx>& s_points, double tolerance) {
    IdentityReport rep;
    rep.id = "weight_mellin";
    rep.config = describe(ev.lfunction(), ev.omega(), k);
    rep.tolerance = tolerance;
    for (const cplx& s : s_points) {
        if (!(s.real() > 1.0 + ev.omega()))
            throw Error(Errc::domain_error, "weight Mellin check needs Re s > 1 + omega");
        rep.add(s, weights::weight_mellin(ev, k, s),
                weights::weight_mellin_expected(ev.lfunction(), ev.omega(), k, s));
    }
    rep.finalize();
    return rep;
}

IdentityReport check_weight_mellin(const LFunctionDescriptor& f, double omega, int k,
                                   const std::vector<cplx>& s_points, double tolerance) {
    // the transform integrand decays like e^{(1 - omega - Re s) u}; u <= 40 leaves a negligible tail
    const weights::WeightEvaluator ev(lfunc::prepare_local_data(f, 64), omega, k, weights::Backend::pipeline, 40.0);
    return check_weight_mellin(ev, k, s_points, tolerance);
}

IdentityReport check_series_ratio(const LFunctionDescriptor& f, double omega, cplx s, std::uint64_t N,
                                  double tolerance) {
    const auto prepared = lfunc::prepare_local_data(f, N);
    const auto table = arith::build_table(prepared, omega, N);
    std::complex<long double> acc = 0.0L;
    for (std::uint64_t n = N; n >= 1; --n)
        acc += static_cast<long double>(table.c[n]) *
               std::complex<long double>(std::exp(-s * std::log(static_cast<double>(n))));
    IdentityReport rep;
    rep.id = "series_ratio";
    rep.config = describe(f, omega, 0) + " N=" + std::to_string(N);
    rep.tolerance = tolerance;
    const cplx rhs = lfunc::l_value(prepared, s - omega) / lfunc::l_value(prepared, s + omega);
    rep.add(s, cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag())), rhs);
    rep.finalize();
    return rep;
}

IdentityReport check_h_mellin(const summatory::SummatoryEvaluator& ev, const std::vector<cplx>& s_points,
                              double X, double tolerance) {
    if (!(X >= 1000.0)) throw Error(Errc::domain_error, "Mellin truncation needs X >= 1000");
    for (const cplx& s : s_points)
        if (s.real() < 3.0) throw Error(Errc::domain_error, "h-level Mellin check needs Re s >= 3");
    if (std::ceil(X) > static_cast<double>(ev.bound()))
        throw Error(Errc::table_too_small, "X exceeds the coefficient bound");
    const int k = ev.k();
    const auto& table = ev.weight().table(k);
    IdentityReport rep;
    rep.id = "h_mellin";
    rep.config = describe(ev.lfunction(), ev.omega(), k) + " X=" + fmt17(X);
    rep.tolerance = tolerance;

    special::QuadratureSpec smooth;
    smooth.abs_tol = 1e-300;
    smooth.rel_tol = 1e-13;
    special::QuadratureSpec single = smooth;
    single.sigma_left = std::min(table.exponent(), 0.0);
    bool converged = true;

    for (const cplx& s : s_points) {
        if (!(s.real() > 1.0 + ev.omega()))
            throw Error(Errc::domain_error, "h Mellin check needs Re s > 1 + omega");
        std::complex<long double> total = 0.0L;
        for (std::uint64_t m = 1; static_cast<double>(m) < X; ++m) {
            const double dm = static_cast<double>(m);
            const double len = std::min(1.0, X - dm);
            // terms n < m are smooth on [m, m + len]
            if (m >= 2) {
                auto fn = [&](double, double gap, double) {
                    const double x = dm + gap;
                    return ev.h_offset(k, m, gap, m - 1) * std::exp((-0.5 - s) * std::log(x));
                };
                auto r = special::integrate_complex_gapped(fn, 0.0, len, smooth);
                converged = converged && r.converged;
                total += std::complex<long double>(r.value);
            }
            // the term n = m starts at x = m; integrate it in u = log(x/m)
            const double a = ev.scaled_coefficient(m);
            if (a != 0.0) {
                auto fn = [&](double, double u, double) { return table(u) * std::exp((0.5 - s) * u); };
                auto r = special::integrate_complex_gapped(fn, 0.0, std::log1p(len / dm), single);
                converged = converged && r.converged;
                total += std::complex<long double>(a * std::exp((0.5 - s) * std::log(dm)) * r.value);
            }
        }
        const cplx rhs = lfunc::theta_ratio(ev.lfunction(), ev.omega(), s) / std::pow(s - 0.5, k);
        rep.add(s, cplx(static_cast<double>(total.real()), static_cast<double>(total.imag())), rhs);
        const double tail = std::pow(X, 0.5 - s.real()) / (s.real() - 0.5);
        rep.notes.push_back("tail scale X^{1/2-Re s}/(Re s - 1/2) = " + fmt17(tail) + " times sup|h| beyond X");
    }
    if (!converged) rep.notes.push_back("some unit-interval quadratures did not reach tolerance");
    rep.finalize();
    return rep;
}

IdentityReport check_h_mellin(const LFunctionDescriptor& f, double omega, int k,
                              const std::vector<cplx>& s_points, double X, double tolerance) {
    const summatory::SummatoryEvaluator ev(f, omega, k, static_cast<std::uint64_t>(std::ceil(X)));
    return check_h_mellin(ev, s_points, X, tolerance);
}

// ---------------------------------------------------------------------------
// Contour oracle
// ---------------------------------------------------------------------------

ContourResult contour_oracle(const LFunctionDescriptor& f, double omega, int k, double x, double c,
                             double T) {
    require_omega(omega);
    if (k < 1) throw Error(Errc::domain_error, "the contour formula needs k >= 1");
    if (!(x > 1.0)) throw Error(Errc::domain_error, "the contour formula needs x > 1");
    if (std::abs(x - std::round(x)) < 1e-9)
        throw Error(Errc::integer_abscissa, "x = " + fmt17(x) + " is an integer");
    if (T > lfunc::max_abs_imag)
        throw Error(Errc::accuracy_window_exceeded, "T = " + fmt17(T) + " exceeds 200");
    if (!(T > 0.0)) throw Error(Errc::domain_error, "T must be positive");
    if (!(c > 1.0 + omega)) throw Error(Errc::domain_error, "c must exceed 1 + omega");

    const double lx = std::log(x);
    auto integrand = [&](double t) {
        const cplx s{c, t};
        return lfunc::theta_ratio(f, omega, s) / std::pow(s - 0.5, k) * std::exp((s - 0.5) * lx);
    };
    special::QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-13 * std::exp((c - 0.5) * lx);
    // conjugate symmetry: the integrand at -t is the conjugate of that at t
    const auto r = special::integrate_complex_line(integrand, 0.0, T, spec);

    ContourResult out;
    out.value = r.value.real() / std::numbers::pi;
    out.quadrature_error = r.error / std::numbers::pi;
    out.converged = r.converged;

    const auto M = static_cast<std::uint64_t>(std::max(2.0 * x, 2000.0));
    const auto table = arith::build_table(lfunc::prepare_local_data(f, M), omega, M);
    const double qw = std::pow(static_cast<double>(f.conductor), -omega);
    double sum = 0.0;
    for (std::uint64_t n = M; n >= 1; --n) {
        const double dn = static_cast<double>(n);
        sum += qw * std::abs(table.c[n]) * std::pow(dn, -c) * (1.0 + 4.0 / std::abs(std::log(x / dn)));
    }
    const double dw = f.degree * omega;
    out.envelope = 2.0 * std::pow(2.0 * std::numbers::pi, dw) / std::numbers::pi *
                       std::exp((c - 0.5) * lx) * std::pow(T, -(k + dw)) * sum +
                   out.quadrature_error;
    return out;
}

// ---------------------------------------------------------------------------
// Sign scans
// ---------------------------------------------------------------------------

double ScanReport::band_at(double x) const {
    const double lx = x > 1.0 ? std::log(x) : 0.0;
    return zero_band * (1.0 + (k >= 1 ? std::pow(lx, k - 1) : 0.0));
}

ScanReport scan_samples(std::string lfunction, double omega, int k,
                        std::vector<std::pair<double, double>> grid, double zero_band,
                        const std::function<double(double)>& refine) {
    ScanReport rep;
    rep.lfunction = std::move(lfunction);
    rep.omega = omega;
    rep.k = k;
    rep.zero_band = zero_band;
    rep.grid = std::move(grid);
    std::optional<std::size_t> prev;
    int prev_sign = 0;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        const auto [x, h] = rep.grid[i];
        const int sg = sign_in_band(h, rep.band_at(x));
        if (sg == 0) continue;
        if (prev && sg != prev_sign) {
            double a = rep.grid[*prev].first, ha = rep.grid[*prev].second;
            double b = x, hb = h;
            if (refine) {
                try {
                    for (int it = 0; it < 200 && b - a > 1e-6 * b; ++it) {
                        const double mid = 0.5 * (a + b);
                        const double hm = refine(mid);
                        if ((hm > 0.0) == (ha > 0.0)) {
                            a = mid;
                            ha = hm;
                        } else {
                            b = mid;
                            hb = hm;
                        }
                    }
                } catch (const Error&) {
                    a = rep.grid[*prev].first;
                    ha = rep.grid[*prev].second;
                    b = x;
                    hb = h;
                }
            }
            rep.sign_changes.push_back(ha == hb ? a : a + (b - a) * ha / (ha - hb));
        }
        prev = i;
        prev_sign = sg;
    }
    std::sort(rep.sign_changes.begin(), rep.sign_changes.end());
    if (!rep.sign_changes.empty()) rep.last_change = rep.sign_changes.back();
    rep.terminal_sign = prev_sign;
    return rep;
}

ScanReport sign_scan(const summatory::SummatoryEvaluator& ev, double x_lo, double x_hi, int points,
                     double zero_band, int threads) {
    auto grid = summatory::h_grid(ev, x_lo, x_hi, points, summatory::Spacing::log, threads);
    return scan_samples(ev.lfunction().name, ev.omega(), ev.k(), std::move(grid), zero_band,
                        [&ev](double x) { return summatory::h_direct(ev, x); });
}

// ---------------------------------------------------------------------------
// Asymptotics and L^2
// ---------------------------------------------------------------------------

IdentityReport asymptotic_check(const std::function<double(double)>& h, int k, int sign,
                                const std::vector<double>& x_points, const std::string& config) {
    if (k < 2) throw Error(Errc::domain_error, "the asymptotic law is stated for k >= 2");
    if (x_points.size() < 2) throw Error(Errc::domain_error, "need at least two abscissae");
    IdentityReport rep;
    rep.id = "asymptotic";
    rep.config = config;
    rep.tolerance = 0.2;
    std::vector<double> inv_log, dev;
    for (std::size_t i = 0; i < x_points.size(); ++i) {
        const double x = x_points[i];
        if (i > 0 && !(x > x_points[i - 1])) throw Error(Errc::domain_error, "abscissae must increase");
        const double lx = std::log(x);
        const double ratio = h(x) / (sign * std::pow(lx, k - 1));
        rep.add(x, ratio, 1.0);
        inv_log.push_back(1.0 / lx);
        dev.push_back(std::abs(ratio - 1.0));
    }
    rep.finalize();
    const double slope = ls_slope(inv_log, dev);
    const double worst = *std::max_element(dev.begin(), dev.end());
    const bool trend = slope > 0.0 || worst <= 1e-9;
    rep.notes.push_back("slope of |ratio - 1| against 1/log x = " + fmt17(slope));
    rep.pass = trend && dev.back() <= rep.tolerance && std::isfinite(slope);
    return rep;
}

IdentityReport asymptotic_check(const summatory::SummatoryEvaluator& ev, const std::vector<double>& x_points) {
    return asymptotic_check([&ev](double x) { return summatory::h_direct(ev, x); }, ev.k(),
                            ev.lfunction().sign, x_points, describe(ev.lfunction(), ev.omega(), ev.k()));
}

std::vector<std::pair<double, double>> l2_statistic(const summatory::SummatoryEvaluator& ev,
                                                    const std::vector<double>& X_points) {
    if (ev.first_level() > 1 || ev.k() < 1)
        throw Error(Errc::domain_error, "the L2 statistic needs the level-1 weight");
    for (std::size_t i = 1; i < X_points.size(); ++i)
        if (!(X_points[i] > X_points[i - 1])) throw Error(Errc::domain_error, "X points must increase");
    if (!X_points.empty() && std::ceil(X_points.back()) > static_cast<double>(ev.bound()))
        throw Error(Errc::table_too_small, "X exceeds the coefficient bound");
    const auto& table = ev.weight().table(1);
    const double eps = ev.lfunction().sign;
    special::QuadratureSpec spec;
    spec.abs_tol = 1e-16;
    spec.rel_tol = 1e-10;

    std::vector<std::pair<double, double>> out;
    long double acc = 0.0L;
    double x = 1.0;
    for (double X : X_points) {
        if (X <= 1.0) {
            out.emplace_back(X, 0.0);
            continue;
        }
        while (x < X) {
            const auto m = static_cast<std::uint64_t>(std::floor(x));
            const double dm = static_cast<double>(m);
            const double start = x - dm;
            const double end = std::min(1.0, X - dm);
            // h = S + a G(log(x/m)): S is smooth here and is interpolated, the
            // singular single term is evaluated exactly
            const LocalInterpolant S(dm + start, dm + end, [&](double y) {
                return m >= 2 ? ev.h_offset(1, m, y - dm, m - 1) : 0.0;
            });
            const double a = ev.scaled_coefficient(m);
            auto fn = [&](double, double gap, double) {
                const double g = start + gap;
                const double y = dm + g;
                const double r = S(y) + a * table(std::log1p(g / dm)) - eps;
                return r * r / y;
            };
            acc += special::integrate_gapped(fn, 0.0, end - start, spec).value;
            x = dm + end;
        }
        out.emplace_back(X, static_cast<double>(acc));
    }
    return out;
}

bool l2_trend_ok(const std::vector<std::pair<double, double>>& masses) {
    double prev_mass = 0.0;
    double prev_inc = INFINITY;
    for (const auto& [X, mass] : masses) {
        const double inc = mass - prev_mass;
        if (!(inc < prev_inc)) return false;
        prev_inc = inc;
        prev_mass = mass;
    }
    return !masses.empty();
}

std::vector<double> weight_sign_changes(double omega, int points, double lo, double hi) {
    require_omega(omega);
    std::vector<double> out;
    double xp = lo, gp = weights::g_zeta_closed(omega, lo);
    for (int i = 1; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        const double g = weights::g_zeta_closed(omega, x);
        if (g == 0.0) continue;
        if (gp != 0.0 && (g > 0.0) != (gp > 0.0)) {
            double a = xp, b = x;
            const bool pos_a = gp > 0.0;
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                if ((weights::g_zeta_closed(omega, mid) > 0.0) == pos_a) a = mid;
                else b = mid;
            }
            out.push_back(0.5 * (a + b));
        }
        xp = x;
        gp = g;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialisation
// ---------------------------------------------------------------------------

std::string to_json(const IdentityReport& r) {
    nlohmann::json j;
    j["identity"] = r.id;
    j["config"] = r.config;
    j["tolerance"] = r.tolerance;
    auto& pts = j["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const double gap = std::abs(r.lhs[i] - r.rhs[i]);
        pts.push_back({{"s", cjson(r.points[i])},
                       {"lhs", cjson(r.lhs[i])},
                       {"rhs", cjson(r.rhs[i])},
                       {"abs_gap", gap},
                       {"rel_gap", std::abs(r.rhs[i]) > 0 ? gap / std::abs(r.rhs[i]) : gap}});
    }
    j["max_abs_gap"] = r.max_abs_gap;
    j["max_rel_gap"] = r.max_rel_gap;
    j["notes"] = r.notes;
    j["pass"] = r.pass;
    return j.dump(2);
}

std::string to_json(const ScanReport& r) {
    nlohmann::json j;
    j["lfunction"] = r.lfunction;
    j["omega"] = r.omega;
    j["k"] = r.k;
    j["points"] = r.grid.size();
    j["zero_band"] = r.zero_band;
    j["sign_changes"] = r.sign_changes;
    j["last_change"] = r.last_change ? nlohmann::json(*r.last_change) : nlohmann::json(nullptr);
    j["terminal_sign"] = r.terminal_sign;
    auto& grid = j["grid"] = nlohmann::json::array();
    for (const auto& [x, h] : r.grid) grid.push_back({x, h});
    return j.dump(2);
}

} // namespace sumlab::verify
