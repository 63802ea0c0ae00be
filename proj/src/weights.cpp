#include "sumlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>

#include "special_detail.hpp"
#include "sumlab/error.hpp"
#include "sumlab/format.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/special.hpp"

namespace sumlab::weights {

namespace {

constexpr double rate_eps = 1e-13;
constexpr double max_fit_residual = 1e-9;

// pi^omega / Gamma(omega)
double norm_const(double omega) {
    return std::exp(omega * std::log(std::numbers::pi) - std::lgamma(omega));
}

double to_u(double x) {
    if (!(x > 0.0)) throw Error(Errc::domain_error, "weights are defined for x > 0");
    return -std::log(x);
}

special::QuadratureSpec conv_spec(double sigma_left, double sigma_right) {
    special::QuadratureSpec spec;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-13;
    // the power substitution only pays off for genuinely singular ends
    spec.sigma_left = std::min(sigma_left, 0.0);
    spec.sigma_right = std::min(sigma_right, 0.0);
    return spec;
}

template <class R>
void require_converged(const R& r, const char* what, double u) {
    if (!r.converged && r.error > 1e-10 * std::abs(r.value))
        throw Error(Errc::grid_resolution_insufficient,
                    std::string(what) + " quadrature did not converge at u = " + std::to_string(u));
}

PanelFunction checked(PanelFunction p, const char* what) {
    if (p.fit_residual() > max_fit_residual)
        throw Error(Errc::grid_resolution_insufficient,
                    std::string(what) + ": panel fit residual " + std::to_string(p.fit_residual()));
    return p;
}

// int_0^u (u-v)^m v^n e^{c v} dv as an exponential polynomial in u.
class ConvolutionMoments {
public:
    explicit ConvolutionMoments(double c) : c_(c) {}

    const ExpPoly& get(int m, int n) {
        auto key = std::make_pair(m, n);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        ExpPoly out;
        if (std::abs(c_) < rate_eps) {
            out.add(std::tgamma(m + 1.0) * std::tgamma(n + 1.0) / std::tgamma(m + n + 2.0), m + n + 1, 0.0);
        } else {
            if (m == 0) out.add(1.0 / c_, n, c_);
            if (n == 0) out.add(-1.0 / c_, m, 0.0);
            if (m > 0)
                for (const auto& t : get(m - 1, n).terms) out.add(m / c_ * t.coeff, t.power, t.rate);
            if (n > 0)
                for (const auto& t : get(m, n - 1).terms) out.add(-n / c_ * t.coeff, t.power, t.rate);
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    double c_;
    std::map<std::pair<int, int>, ExpPoly> memo_;
};

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Factor list for g_{f,omega,1} * ... * g_{f,omega,d}; a conjugate pair
// becomes one real factor.
std::vector<HatFunction> factor_list(const LFunctionDescriptor& f, double omega, double u_max) {
    std::vector<HatFunction> out;
    std::vector<bool> used(f.kappas.size(), false);
    for (std::size_t i = 0; i < f.kappas.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        const cplx k = f.kappas[i];
        if (k.imag() == 0.0) {
            const double kr = k.real();
            out.push_back({[kr, omega](double u) { return factor_hat(kr, omega, u).real(); }, omega - 1.0});
            continue;
        }
        for (std::size_t j = i + 1; j < f.kappas.size(); ++j)
            if (!used[j] && f.kappas[j] == std::conj(k)) {
                used[j] = true;
                break;
            }
        auto pair = [k, omega](double u) {
            if (!(u > 0.0)) return 0.0;
            auto g = [&](double, double lgap, double rgap) {
                return factor_hat(k, omega, rgap) * std::conj(factor_hat(k, omega, lgap));
            };
            auto r = special::integrate_complex_gapped(g, 0.0, u, conv_spec(omega - 1.0, omega - 1.0));
            require_converged(r, "conjugate pair", u);
            return r.value.real();
        };
        auto table = std::make_shared<PanelFunction>(
            checked(PanelFunction::sample(pair, u_max, 2.0 * omega - 1.0), "conjugate pair"));
        out.push_back({[table](double u) { return (*table)(u); }, 2.0 * omega - 1.0});
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

double zeta_closed_hat(double omega, double u) {
    require_omega(omega);
    if (!(u > 0.0)) return 0.0;
    const double z = std::exp(-2.0 * u);
    const double zc = -std::expm1(-2.0 * u);
    const double a = 4.0 * omega / (2.0 * omega - 1.0) * norm_const(omega);
    const double b1 = special::detail::beta_upper_split(z, zc, (3.0 - 2.0 * omega) / 2.0, omega);
    const double b2 = special::detail::beta_upper_split(z, zc, (5.0 - 2.0 * omega) / 4.0, omega);
    return a * (std::exp((0.5 - omega) * u) * b1 - (2.0 * omega + 1.0) / (4.0 * omega) * b2);
}

double chi_closed_hat(double omega, int delta, double u) {
    require_omega(omega);
    if (delta != 0 && delta != 1) throw Error(Errc::parameter_out_of_domain, "delta must be 0 or 1");
    const double p = (1.0 + 2.0 * delta - 2.0 * omega) / 4.0;
    if (!(p > 0.0))
        throw Error(Errc::parameter_out_of_domain, "first beta parameter must be positive");
    if (!(u > 0.0)) return 0.0;
    const double z = std::exp(-2.0 * u);
    const double zc = -std::expm1(-2.0 * u);
    return norm_const(omega) * special::detail::beta_upper_split(z, zc, p, omega);
}

double g_zeta_closed(double omega, double x) {
    require_omega(omega);
    if (x >= 1.0) return 0.0;
    return zeta_closed_hat(omega, to_u(x)) / std::sqrt(x);
}

double g_chi_closed(double omega, int delta, double x) {
    require_omega(omega);
    if (x >= 1.0) {
        chi_closed_hat(omega, delta, 0.0); // parameter checks
        return 0.0;
    }
    return chi_closed_hat(omega, delta, to_u(x)) / std::sqrt(x);
}

double g_factor(double kappa, double omega, double x) {
    require_omega(omega);
    if (!(kappa > -1.0)) throw Error(Errc::parameter_out_of_domain, "gamma shift needs kappa > -1");
    if (x >= 1.0) return 0.0;
    if (!(x > 0.0)) throw Error(Errc::domain_error, "weights are defined for x > 0");
    const double one_minus_x2 = (1.0 - x) * (1.0 + x);
    return 2.0 * norm_const(omega) * std::pow(x, kappa - omega) * std::pow(one_minus_x2, omega - 1.0);
}

cplx factor_hat(cplx kappa, double omega, double u) {
    if (!(u > 0.0)) return 0.0;
    const double c = 2.0 * norm_const(omega);
    return c * std::exp((omega - 0.5 - kappa) * u) * std::pow(-std::expm1(-2.0 * u), omega - 1.0);
}

// ---------------------------------------------------------------------------
// Exponential polynomials and p_r
// ---------------------------------------------------------------------------

double ExpPoly::operator()(double u) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        const double p = t.power == 0 ? 1.0 : std::pow(u, t.power);
        acc += t.coeff * p * std::exp(t.rate * u);
    }
    return acc;
}

void ExpPoly::add(double coeff, int power, double rate) {
    if (coeff == 0.0) return;
    for (auto& t : terms)
        if (t.power == power && std::abs(t.rate - rate) < rate_eps) {
            t.coeff += coeff;
            return;
        }
    terms.push_back({coeff, power, rate});
}

ExpPoly convolve(const ExpPoly& a, const ExpPoly& b) {
    ExpPoly out;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            // e^{ra u} int_0^u (u-v)^m v^n e^{(rb - ra) v} dv
            ConvolutionMoments mom(tb.rate - ta.rate);
            for (const auto& t : mom.get(ta.power, tb.power).terms)
                out.add(ta.coeff * tb.coeff * t.coeff, t.power, t.rate + ta.rate);
        }
    return out;
}

double AtomicMeasure::density(double x) const {
    if (x >= 1.0) return 0.0;
    const double u = to_u(x);
    return std::exp(0.5 * u) * density_hat(u);
}

AtomicMeasure p_measure(int r, double omega) {
    require_omega(omega);
    if (r < 0) throw Error(Errc::domain_error, "pole order must be nonnegative");
    AtomicMeasure out;
    if (r == 0) return out;
    ExpPoly rho;
    rho.add(-2.0 * omega * (1.0 - 2.0 * omega), 0, 0.5 - omega);
    rho.add(-2.0 * omega * (1.0 + 2.0 * omega), 0, -(0.5 + omega));
    ExpPoly power = rho;
    for (int j = 1; j <= r; ++j) {
        if (j > 1) power = convolve(power, rho);
        for (const auto& t : power.terms) out.density_hat.add(binom(r, j) * t.coeff, t.power, t.rate);
    }
    out.sigma_left = omega - 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

PanelFunction mult_convolve(const HatFunction& a, const HatFunction& b, double u_max) {
    const double e = a.exponent + b.exponent + 1.0;
    auto fn = [&](double u) {
        auto g = [&](double, double lgap, double rgap) { return a.fn(rgap) * b.fn(lgap); };
        auto r = special::integrate_gapped(g, 0.0, u, conv_spec(b.exponent, a.exponent));
        require_converged(r, "convolution", u);
        return r.value;
    };
    return checked(PanelFunction::sample(fn, u_max, e), "convolution");
}

PanelFunction mult_convolve(const AtomicMeasure& mu, const PanelFunction& g) {
    // e^{a u} u^m convolved with G: binomial expansion of (u - v)^m against the
    // moments int_0^u v^j e^{-a v} G(v) dv.
    struct Moment {
        double coeff;
        int upow;
        double rate;
        std::shared_ptr<PanelFunction> table;
    };
    std::vector<Moment> parts;
    for (const auto& t : mu.density_hat.terms) {
        for (int j = 0; j <= t.power; ++j) {
            const double a = t.rate;
            auto integrand = [&g, a, j](double v) {
                return std::pow(v, j) * std::exp(-a * v) * g(v);
            };
            auto tab = std::make_shared<PanelFunction>(
                checked(PanelFunction::sample(integrand, g.u_max(), g.exponent() + j), "p_r moment")
                    .antiderivative());
            const double c = t.coeff * binom(t.power, j) * (j % 2 ? -1.0 : 1.0);
            parts.push_back({c, t.power - j, a, std::move(tab)});
        }
    }
    const double atom = mu.atom_at_one;
    auto fn = [&](double u) {
        double acc = atom * g(u);
        for (const auto& p : parts)
            acc += p.coeff * std::pow(u, p.upow) * std::exp(p.rate * u) * (*p.table)(u);
        return acc;
    };
    const double e = atom != 0.0 ? g.exponent() : g.exponent() + 1.0;
    return checked(PanelFunction::sample(fn, g.u_max(), e), "p_r convolution");
}

PanelFunction g0_pipeline(const LFunctionDescriptor& f, double omega, double u_max) {
    require_omega(omega);
    f.validate();
    auto factors = factor_list(f, omega, u_max);
    PanelFunction phi = checked(PanelFunction::sample(factors[0].fn, u_max, factors[0].exponent), "factor weight");
    for (std::size_t i = 1; i < factors.size(); ++i) {
        auto prev = std::make_shared<PanelFunction>(std::move(phi));
        HatFunction acc{[prev](double u) { return (*prev)(u); }, prev->exponent()};
        phi = mult_convolve(acc, factors[i], u_max);
    }
    if (f.pole_order > 0) phi = mult_convolve(p_measure(f.pole_order, omega), phi);
    return phi;
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

bool has_closed_form(const LFunctionDescriptor& f) {
    if (f.degree != 1 || f.source != SatakeSource::characters || f.root_characters.size() != 1)
        return false;
    const cplx k = f.kappas[0];
    const auto& chi = f.root_characters[0];
    if (chi.is_principal_mod_one()) return f.pole_order == 1 && k == cplx{0.0} && f.conductor == 1;
    return f.pole_order == 0 && k.imag() == 0.0 && (k.real() == 0.0 || k.real() == 1.0) &&
           chi.parity() == static_cast<int>(k.real());
}

WeightEvaluator::WeightEvaluator(const LFunctionDescriptor& f, double omega, int k, Backend backend,
                                 double u_max)
    : f_(f), omega_(omega), k_(k), backend_(backend) {
    require_omega(omega);
    f.validate();
    if (k < 0) throw Error(Errc::domain_error, "k must be nonnegative");
    if (backend == Backend::closed_form) {
        if (!has_closed_form(f))
            throw Error(Errc::domain_error, f.name + " has no closed-form weight");
        if (k < 1) throw Error(Errc::domain_error, "closed-form weights start at k = 1");
        first_level_ = 1;
        PanelFunction g1;
        if (f.pole_order == 1)
            g1 = PanelFunction::sample([omega](double u) { return zeta_closed_hat(omega, u); }, u_max, omega);
        else {
            const int delta = static_cast<int>(f.kappas[0].real());
            g1 = PanelFunction::sample([omega, delta](double u) { return chi_closed_hat(omega, delta, u); },
                                       u_max, omega);
        }
        levels_.push_back(checked(std::move(g1), "closed-form weight"));
    } else {
        first_level_ = 0;
        levels_.push_back(g0_pipeline(f, omega, u_max));
    }
    while (static_cast<int>(levels_.size()) + first_level_ <= k) levels_.push_back(levels_.back().antiderivative());
}

const PanelFunction& WeightEvaluator::table(int level) const {
    if (level < first_level_ || level > k_)
        throw Error(Errc::domain_error, "weight level " + std::to_string(level) + " not tabulated");
    return levels_[static_cast<std::size_t>(level - first_level_)];
}

double WeightEvaluator::at_level(int level, double x) const {
    const auto& t = table(level);
    if (x >= 1.0) return 0.0;
    return t(to_u(x)) / std::sqrt(x);
}

void WeightEvaluator::export_csv(std::ostream& out, int points, double x_lo) const {
    if (points < 2) throw Error(Errc::domain_error, "need at least two points");
    if (!(x_lo > 0.0 && x_lo < 1.0)) throw Error(Errc::domain_error, "x_lo must lie in (0, 1)");
    out << "x,g_value\n";
    const double l0 = std::log(x_lo);
    for (int i = 0; i < points; ++i) {
        const double x = std::exp(l0 * (1.0 - static_cast<double>(i) / points));
        out << fmt17(x) << ',' << fmt17((*this)(x)) << '\n';
    }
}

double g_k_direct(const WeightEvaluator& level0, int k, double x) {
    if (level0.first_level() != 0) throw Error(Errc::domain_error, "g_k_direct needs the k = 0 table");
    if (k < 1) throw Error(Errc::domain_error, "g_k_direct needs k >= 1");
    if (x >= 1.0) return 0.0;
    to_u(x);
    const auto& g0 = level0.table(0);
    const double fact = std::tgamma(static_cast<double>(k));
    const double sign = (k - 1) % 2 ? -1.0 : 1.0;
    auto integrand = [&](double y, double, double rgap) {
        // y in (x, 1); -log y from the exact distance to 1
        const double uy = -std::log1p(-rgap);
        const double g0y = g0(uy) * std::exp(0.5 * uy);
        const double lg = std::log(x / y);
        return sign / fact * std::sqrt(y / x) * std::pow(lg, k - 1) * g0y / y;
    };
    auto r = special::integrate_gapped(integrand, x, 1.0, conv_spec(0.0, g0.exponent()));
    return r.value;
}

double g_step(const WeightEvaluator& ev, int level, double x) {
    if (level < ev.first_level() + 1) throw Error(Errc::domain_error, "g_step needs level k - 1 tabulated");
    if (x >= 1.0) return 0.0;
    to_u(x);
    const auto& prev = ev.table(level - 1);
    auto integrand = [&](double y, double, double rgap) {
        const double uy = -std::log1p(-rgap);
        return std::sqrt(y / x) * prev(uy) * std::exp(0.5 * uy) / y;
    };
    return special::integrate_gapped(integrand, x, 1.0, conv_spec(0.0, prev.exponent())).value;
}

cplx weight_mellin(const WeightEvaluator& ev, int level, cplx s) {
    const auto& t = ev.table(level);
    auto integrand = [&](double, double u, double) { return t(u) * std::exp((0.5 - s) * u); };
    special::QuadratureSpec spec = conv_spec(t.exponent(), 0.0);
    spec.abs_tol = 1e-15;
    auto r = special::integrate_complex_gapped(integrand, 0.0, t.u_max(), spec);
    return r.value;
}

cplx weight_mellin_expected(const LFunctionDescriptor& f, double omega, int k, cplx s) {
    const cplx lg = lfunc::log_gamma_factor(f, s - omega) - lfunc::log_gamma_factor(f, s + omega);
    return std::pow(s - 0.5, -k) * lfunc::pole_rational(f.pole_order, omega, s) * std::exp(lg);
}

} // namespace sumlab::weights
