#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/descriptor.hpp"
#include "sumlab/summatory.hpp"
#include "sumlab/weights.hpp"

namespace sumlab::verify {

struct IdentityReport {
    std::string id;
    std::string config;
    double tolerance = 0.0;
    std::vector<cplx> points;
    std::vector<cplx> lhs;
    std::vector<cplx> rhs;
    std::vector<std::string> notes;
    double max_abs_gap = 0.0;
    double max_rel_gap = 0.0;
    bool pass = false;

    void add(cplx point, cplx l, cplx r);
    /// Recomputes the gaps and sets pass = max_rel_gap <= tolerance.
    void finalize();
};

IdentityReport check_weight_mellin(const LFunctionDescriptor& f, double omega, int k,
                                   const std::vector<cplx>& s_points, double tolerance = 1e-6);
/// Same check on an existing evaluator, at level k.
IdentityReport check_weight_mellin(const weights::WeightEvaluator& ev, int k,
                                   const std::vector<cplx>& s_points, double tolerance = 1e-6);

IdentityReport check_series_ratio(const LFunctionDescriptor& f, double omega, cplx s, std::uint64_t N,
                                  double tolerance);

/// lhs = int_1^X h^{<k>}(x) x^{1/2-s} dx/x, rhs = Theta(s) / (s - 1/2)^k.
IdentityReport check_h_mellin(const summatory::SummatoryEvaluator& ev, const std::vector<cplx>& s_points,
                              double X, double tolerance = 1e-4);
IdentityReport check_h_mellin(const LFunctionDescriptor& f, double omega, int k,
                              const std::vector<cplx>& s_points, double X, double tolerance = 1e-4);

struct ContourResult {
    double value = 0.0;
    double quadrature_error = 0.0;
    /// Size of the truncation terms of the contour formula, instantiated with
    /// psi(n) = |c(n)|.
    double envelope = 0.0;
    bool converged = true;
};

/// (1/2 pi) int_{-T}^{T} Theta(c+it) (c-1/2+it)^{-k} x^{c-1/2+it} dt
ContourResult contour_oracle(const LFunctionDescriptor& f, double omega, int k, double x, double c,
                             double T);

struct ScanReport {
    std::string lfunction;
    double omega = 0.0;
    int k = 0;
    std::vector<std::pair<double, double>> grid;
    std::vector<double> sign_changes;
    std::optional<double> last_change;
    int terminal_sign = 0; // 0: undetermined
    double zero_band = 0.0;

    double band_at(double x) const;
};

/// Sign analysis of precomputed samples. refine, when given, evaluates the
/// function for bisection of each bracketed crossing.
ScanReport scan_samples(std::string lfunction, double omega, int k,
                        std::vector<std::pair<double, double>> grid, double zero_band,
                        const std::function<double(double)>& refine = {});

ScanReport sign_scan(const summatory::SummatoryEvaluator& ev, double x_lo, double x_hi, int points,
                     double zero_band = 1e-9, int threads = 1);

/// Ratios h(x) / (eps (log x)^{k-1}); pass when |ratio - 1| trends down in
/// 1/log x and the last ratio is within 0.2 of 1.
IdentityReport asymptotic_check(const std::function<double(double)>& h, int k, int sign,
                                const std::vector<double>& x_points, const std::string& config = {});
IdentityReport asymptotic_check(const summatory::SummatoryEvaluator& ev, const std::vector<double>& x_points);

/// Cumulative int_1^X (h^{<1>}(x) - eps)^2 dx/x at each X.
std::vector<std::pair<double, double>> l2_statistic(const summatory::SummatoryEvaluator& ev,
                                                    const std::vector<double>& X_points);
/// Successive increments (starting from X = 1) strictly decreasing.
bool l2_trend_ok(const std::vector<std::pair<double, double>>& masses);

/// Sign changes of g_zeta_closed on (lo, hi), bisected to 1e-12.
std::vector<double> weight_sign_changes(double omega, int points = 10000, double lo = 0.001, double hi = 0.999);

std::string to_json(const IdentityReport& r);
std::string to_json(const ScanReport& r);

} // namespace sumlab::verify
