#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "sumlab/descriptor.hpp"
#include "sumlab/panel.hpp"

namespace sumlab::weights {

// Closed forms on the x side. All vanish for x >= 1.
double g_zeta_closed(double omega, double x);
double g_chi_closed(double omega, int delta, double x);
/// (2 pi^omega / Gamma(omega)) x^{kappa - omega} (1 - x^2)^{omega - 1}
double g_factor(double kappa, double omega, double x);

// The same weights as hat functions G(u) = sqrt(x) g(x) with x = e^{-u};
// 1 - x^2 is formed as -expm1(-2u) so nothing is lost near x = 1.
double zeta_closed_hat(double omega, double u);
double chi_closed_hat(double omega, int delta, double u);

/// sum_i coeff_i u^{power_i} e^{rate_i u}
struct ExpPoly {
    struct Term {
        double coeff;
        int power;
        double rate;
    };
    std::vector<Term> terms;

    double operator()(double u) const;
    void add(double coeff, int power, double rate);
    bool empty() const { return terms.empty(); }
};

/// Additive convolution on [0, u]: (A * B)(u) = int_0^u A(u - v) B(v) dv.
ExpPoly convolve(const ExpPoly& a, const ExpPoly& b);

/// Point mass at x = 1 plus a density on (0, 1). The density is held in hat
/// form, e^{-u/2} density(e^{-u}), as an exponential polynomial.
struct AtomicMeasure {
    double atom_at_one = 1.0;
    ExpPoly density_hat;
    /// Exponent of the density at x -> 0 with respect to dx.
    double sigma_left = 0.0;

    double density(double x) const;
};

AtomicMeasure p_measure(int r, double omega);

/// A function of u with known leading power u^exponent at the origin.
struct HatFunction {
    std::function<double(double)> fn;
    double exponent = 0.0;
};

/// Factor weight g_{f,omega,j} in hat form; complex kappa gives a complex hat.
cplx factor_hat(cplx kappa, double omega, double u);

/// Multiplicative convolution in hat form, fitted on panels up to u_max.
PanelFunction mult_convolve(const HatFunction& a, const HatFunction& b, double u_max);
/// mu * G for a measure with an atom; G must be a fitted table.
PanelFunction mult_convolve(const AtomicMeasure& mu, const PanelFunction& g);

enum class Backend { closed_form, pipeline };

/// g^{<k>}_{f,omega}. Tables are built once at construction for levels
/// first_level()..k and are read-only afterwards.
class WeightEvaluator {
public:
    WeightEvaluator(const LFunctionDescriptor& f, double omega, int k, Backend backend,
                    double u_max = 18.0);

    /// g^{<k>}(x)
    double operator()(double x) const { return at_level(k_, x); }
    double at_level(int level, double x) const;
    /// G_k(u) = sqrt(x) g^{<k>}(x), x = e^{-u}
    double hat(double u) const { return table(k_)(u); }
    const PanelFunction& table(int level) const;

    int k() const { return k_; }
    int first_level() const { return first_level_; }
    double omega() const { return omega_; }
    Backend backend() const { return backend_; }
    const LFunctionDescriptor& lfunction() const { return f_; }
    double u_max() const { return levels_.back().u_max(); }

    /// CSV with columns x,g_value on points log-spaced in (x_lo, 1).
    void export_csv(std::ostream& out, int points, double x_lo = 1e-4) const;

private:
    LFunctionDescriptor f_;
    double omega_;
    int k_;
    Backend backend_;
    int first_level_ = 0;
    std::vector<PanelFunction> levels_;
};

/// True when f has a closed-form g^{<1>} (zeta, or a real character).
bool has_closed_form(const LFunctionDescriptor& f);

/// G_0 = (p_r * g_1 * ... * g_d) in hat form.
PanelFunction g0_pipeline(const LFunctionDescriptor& f, double omega, double u_max = 18.0);

/// g^{<k>}(x) by the single integral ((-1)^{k-1}/(k-1)!) int_x^1 sqrt(y/x) (log(x/y))^{k-1} g0(y) dy/y.
double g_k_direct(const WeightEvaluator& level0, int k, double x);
/// One recursion step int_x^1 sqrt(y/x) g^{<k-1>}(y) dy/y from the level k-1 table.
double g_step(const WeightEvaluator& ev, int level, double x);

/// int_0^1 g^{<level>}(x) x^{s} dx / x.
cplx weight_mellin(const WeightEvaluator& ev, int level, cplx s);
/// Right side: (s - 1/2)^{-k} [rational]^r gamma(f, s - omega) / gamma(f, s + omega).
cplx weight_mellin_expected(const LFunctionDescriptor& f, double omega, int k, cplx s);

} // namespace sumlab::weights
