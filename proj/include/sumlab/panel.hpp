#pragma once

#include <functional>
#include <vector>

namespace sumlab::weights {

/// Piecewise Chebyshev representation of a function of u = -log x on (0, u_max].
///
/// Uniform panels of width H cover [H, u_max]; below H the panels are dyadic,
/// [H 2^{-j-1}, H 2^{-j}) for j < graded_panels, so every panel sees the
/// origin singularity u^e at the same relative distance. Below the last
/// dyadic panel the function is continued by a pure power law u^e.
class PanelFunction {
public:
    static constexpr int degree = 16;
    static constexpr int ncoef = degree + 1;
    static constexpr double H = 0.25;
    static constexpr int graded_panels = 48;

    PanelFunction() = default;

    /// Fit fn on every panel. exponent is the leading power at u -> 0.
    static PanelFunction sample(const std::function<double(double)>& fn, double u_max,
                                double exponent);

    double operator()(double u) const;
    double u_max() const { return u_max_; }
    double u_floor() const;
    double exponent() const { return exponent_; }
    bool empty() const { return coef_.empty(); }

    /// U(u) = int_0^u F(v) dv; the exponent goes up by one.
    PanelFunction antiderivative() const;

    /// Largest trailing Chebyshev coefficient relative to the panel scale.
    double fit_residual() const { return residual_; }

    int uniform_panels() const { return n_uniform_; }
    /// Panel p < graded_panels is dyadic panel j = p; later ones are uniform.
    const std::vector<double>& coefficients() const { return coef_; }
    double floor_value() const { return floor_value_; }

private:
    double u_max_ = 0.0;
    int n_uniform_ = 0;
    double exponent_ = 0.0;
    double floor_value_ = 0.0;
    double residual_ = 0.0;
    std::vector<double> coef_;
};

/// Clenshaw evaluation of c_0 + sum c_j T_j(t).
inline double clenshaw(const double* c, double t) {
    double b1 = 0.0, b2 = 0.0;
    const double t2 = 2.0 * t;
    for (int j = PanelFunction::degree; j >= 1; --j) {
        const double b0 = t2 * b1 - b2 + c[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

} // namespace sumlab::weights
