#pragma once

#include <complex>
#include <functional>

namespace sumlab::special {

using cplx = std::complex<double>;

/// Principal branch of log Gamma (continuous off the negative real axis).
/// Recurrence shift to Re(s) >= 10 followed by the Stirling series.
cplx log_gamma(cplx s);
cplx gamma(cplx s);

double beta_complete(double p, double q);

/// B(z; p, q) = int_0^z x^{p-1} (1-x)^{q-1} dx.
double beta_lower(double z, double p, double q);

/// beta(z; p, q) = int_z^1 x^{p-1} (1-x)^{q-1} dx, the upper tail.
double beta_upper(double z, double p, double q);

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature.
//
// Endpoint behaviour (x-a)^{sigma_left}, (b-x)^{sigma_right} is removed by the
// power substitution x - a = h t^{1/(1+sigma)}, so the rule only ever sees a
// bounded integrand. The integrand may ask for the distances to both endpoints
// (the "gaps"), which the substitution produces without cancellation.
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 48;
    double sigma_left = 0.0;
    double sigma_right = 0.0;

    void validate() const;
};

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;
using GappedFn = std::function<double(double x, double left_gap, double right_gap)>;
using ComplexGappedFn = std::function<cplx(double x, double left_gap, double right_gap)>;

QuadResult<double> integrate(const RealFn& fn, double a, double b, const QuadratureSpec& spec);
QuadResult<double> integrate_gapped(const GappedFn& fn, double a, double b,
                                    const QuadratureSpec& spec);
QuadResult<cplx> integrate_complex_line(const ComplexFn& fn, double t_lo, double t_hi,
                                        const QuadratureSpec& spec);
QuadResult<cplx> integrate_complex_gapped(const ComplexGappedFn& fn, double a, double b,
                                          const QuadratureSpec& spec);

} // namespace sumlab::special
