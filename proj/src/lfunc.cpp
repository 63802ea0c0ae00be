#include "sumlab/lfunc.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sumlab/error.hpp"
#include "sumlab/special.hpp"

namespace sumlab::lfunc {

namespace {

// B_{2j} / (2j)!, j = 1..6
constexpr std::array<double, 6> em_coeffs = {
    1.0 / 12.0,       -1.0 / 720.0,           1.0 / 30240.0,
    -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0,
};

constexpr double removable_eps = 1e-8;
constexpr double circle_radius = 1e-3;
constexpr int circle_points = 16;

void check_window(cplx s) {
    if (std::abs(s.imag()) > max_abs_imag)
        throw Error(Errc::accuracy_window_exceeded,
                    "|Im s| = " + std::to_string(std::abs(s.imag())) + " exceeds 200");
}

// Points where the factored evaluation of xi meets 0 * infinity.
bool near_removable(const LFunctionDescriptor& f, cplx s) {
    if (f.pole_order > 0 && (std::abs(s) < removable_eps || std::abs(s - 1.0) < removable_eps))
        return true;
    for (const cplx& k : f.kappas) {
        const cplx z = 0.5 * (s + k);
        const double m = std::round(z.real());
        if (m <= 0.0 && std::abs(z - m) < removable_eps) return true;
    }
    return false;
}

cplx cusp_series(const CuspCoefficients& cusp, cplx s) {
    cplx acc = 0.0;
    for (std::uint64_t n = cusp.bound(); n >= 1; --n)
        acc += cusp.lambda[n] * std::exp(-s * std::log(static_cast<double>(n)));
    return acc;
}

cplx xi_direct(const LFunctionDescriptor& f, cplx s) {
    const cplx rational = std::pow(s * (s - 1.0), f.pole_order);
    const cplx log_pref =
        0.5 * s * std::log(static_cast<double>(f.conductor)) + log_gamma_factor(f, s);
    return rational * std::exp(log_pref) * l_value(f, s);
}

} // namespace

namespace {

// zeta(s, a) - 1/(s - 1), finite at s = 1.
cplx hurwitz_regular(cplx s, double a) {
    if (!(a > 0.0 && a <= 1.0)) throw Error(Errc::domain_error, "Hurwitz shift must lie in (0, 1]");
    check_window(s);
    const int N = 20 + static_cast<int>(std::ceil(2.0 * std::abs(s)));
    cplx sum = 0.0;
    for (int n = N - 1; n >= 0; --n) sum += std::exp(-s * std::log(n + a));
    const double w = N + a;
    const double lw = std::log(w);
    const cplx w_s = std::exp(-s * lw);
    // (w^{1-s} - 1) / (s - 1) = -lw (e^z - 1) / z with z = (1 - s) lw
    const cplx z = (1.0 - s) * lw;
    const cplx phi = std::abs(z) < 1e-3 ? 1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0)))
                                        : (std::exp(z) - 1.0) / z;
    sum += -lw * phi + 0.5 * w_s;
    cplx term = s * w_s / w; // s w^{-s-1}
    for (std::size_t j = 0; j < em_coeffs.size(); ++j) {
        sum += em_coeffs[j] * term;
        const double jj = 2.0 * (j + 1);
        term *= (s + jj - 1.0) * (s + jj) / (w * w);
    }
    return sum;
}

} // namespace

cplx hurwitz_zeta(cplx s, double a) {
    if (std::abs(s - 1.0) < 1e-15) throw Error(Errc::pole_at_one, "zeta(s, a) has a pole at s = 1");
    return hurwitz_regular(s, a) + 1.0 / (s - 1.0);
}

cplx dirichlet_l(const DirichletCharacter& chi, cplx s) {
    const auto m = chi.modulus();
    if (m == 1) return chi.values[0] == 0 ? cplx{0.0} : hurwitz_zeta(s, 1.0);
    int total = 0;
    for (int v : chi.values) total += v;
    // The pole parts cancel when the character sums to zero.
    cplx acc = 0.0;
    for (std::uint64_t a = 1; a <= m; ++a) {
        const int v = chi(a);
        if (v != 0) acc += static_cast<double>(v) * hurwitz_regular(s, static_cast<double>(a) / m);
    }
    if (total != 0) {
        if (std::abs(s - 1.0) < 1e-15) throw Error(Errc::pole_at_one, "L(s, chi) has a pole at s = 1");
        acc += static_cast<double>(total) / (s - 1.0);
    }
    return acc * std::exp(-s * std::log(static_cast<double>(m)));
}

cplx l_value(const LFunctionDescriptor& f, cplx s) {
    check_window(s);
    switch (f.source) {
    case SatakeSource::characters: {
        cplx acc = 1.0;
        for (const auto& chi : f.root_characters) acc *= dirichlet_l(chi, s);
        return acc;
    }
    case SatakeSource::cusp_delta: {
        if (!f.cusp) throw Error(Errc::missing_local_data, f.name + ": cusp coefficients not loaded");
        if (s.real() >= 1.5) return cusp_series(*f.cusp, s);
        if (s.real() <= -0.5) {
            const cplx t = 1.0 - s;
            const double lq = std::log(static_cast<double>(f.conductor));
            const cplx log_ratio =
                0.5 * (t - s) * lq + log_gamma_factor(f, t) - log_gamma_factor(f, s);
            return static_cast<double>(f.sign) * std::exp(log_ratio) * cusp_series(*f.cusp, t);
        }
        throw Error(Errc::accuracy_window_exceeded,
                    f.name + ": cusp-form L-values are only available for Re s >= 3/2 or <= -1/2");
    }
    case SatakeSource::explicit_table:
        throw Error(Errc::accuracy_window_exceeded,
                    f.name + ": no analytic continuation for explicit Satake data");
    }
    return 0.0;
}

cplx log_gamma_factor(const LFunctionDescriptor& f, cplx s) {
    cplx acc = -0.5 * f.degree * s * std::log(std::numbers::pi);
    for (const cplx& k : f.kappas) {
        try {
            acc += special::log_gamma(0.5 * (s + k));
        } catch (const Error& e) {
            throw Error(Errc::gamma_pole, f.name + ": gamma factor pole at s = (" +
                                              std::to_string(s.real()) + ", " +
                                              std::to_string(s.imag()) + ")");
        }
    }
    return acc;
}

cplx gamma_factor(const LFunctionDescriptor& f, cplx s) { return std::exp(log_gamma_factor(f, s)); }

cplx xi_value(const LFunctionDescriptor& f, cplx s) {
    check_window(s);
    if (!near_removable(f, s)) return xi_direct(f, s);
    // entire: the mean over a small circle is the centre value
    cplx acc = 0.0;
    for (int j = 0; j < circle_points; ++j) {
        const double th = 2.0 * std::numbers::pi * (j + 0.5) / circle_points;
        acc += xi_direct(f, s + circle_radius * cplx{std::cos(th), std::sin(th)});
    }
    return acc / static_cast<double>(circle_points);
}

cplx pole_rational(int r, double omega, cplx s) {
    if (r == 0) return 1.0;
    const cplx num = (s - omega) * (s - omega - 1.0);
    const cplx den = (s + omega) * (s + omega - 1.0);
    return std::pow(num / den, r);
}

cplx theta_ratio(const LFunctionDescriptor& f, double omega, cplx s) {
    require_omega(omega);
    const cplx lo = s - omega;
    const cplx hi = s + omega;
    if (near_removable(f, lo) || near_removable(f, hi)) {
        const cplx den = xi_value(f, hi);
        if (std::abs(den) < 1e-13)
            throw Error(Errc::division_near_zero, f.name + ": xi(f, s + omega) vanishes");
        return xi_value(f, lo) / den;
    }
    const cplx l_hi = l_value(f, hi);
    if (std::abs(l_hi) < 1e-13)
        throw Error(Errc::division_near_zero, f.name + ": L(f, s + omega) vanishes");
    const double lq = std::log(static_cast<double>(f.conductor));
    const cplx log_gamma_part = -omega * lq + log_gamma_factor(f, lo) - log_gamma_factor(f, hi);
    return pole_rational(f.pole_order, omega, s) * std::exp(log_gamma_part) * l_value(f, lo) / l_hi;
}

cplx gamma_ratio_asymptotic(const LFunctionDescriptor& f, double omega, cplx s) {
    const double t = s.imag();
    const double dw = f.degree * omega;
    const double sgn = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
    const double mod = std::pow(2.0 * std::numbers::pi, dw) * std::pow(std::abs(t), -dw);
    return mod * std::exp(cplx{0.0, -0.5 * std::numbers::pi * dw * sgn});
}

} // namespace sumlab::lfunc
