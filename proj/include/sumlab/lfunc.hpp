#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sumlab/descriptor.hpp"

namespace sumlab::lfunc {

/// Evaluation is supported for |Im s| up to this bound.
inline constexpr double max_abs_imag = 200.0;

/// Hurwitz zeta(s, a) for 0 < a <= 1 by Euler-Maclaurin summation.
cplx hurwitz_zeta(cplx s, double a);
/// L(s, chi) = m^{-s} sum_{a=1}^{m} chi(a) zeta(s, a/m); zeta itself for the
/// principal character modulo 1.
cplx dirichlet_l(const DirichletCharacter& chi, cplx s);

cplx l_value(const LFunctionDescriptor& f, cplx s);
/// log of pi^{-ds/2} prod_j Gamma((s + kappa_j)/2).
cplx log_gamma_factor(const LFunctionDescriptor& f, cplx s);
cplx gamma_factor(const LFunctionDescriptor& f, cplx s);
/// xi(f, s) = s^r (s-1)^r q^{s/2} gamma(f, s) L(f, s); entire.
cplx xi_value(const LFunctionDescriptor& f, cplx s);
/// Theta_{f,omega}(s) = xi(f, s - omega) / xi(f, s + omega), evaluated in factored
/// form (rational x gamma ratio x L ratio).
cplx theta_ratio(const LFunctionDescriptor& f, double omega, cplx s);
/// Leading Stirling behaviour of gamma(f, s - omega) / gamma(f, s + omega).
cplx gamma_ratio_asymptotic(const LFunctionDescriptor& f, double omega, cplx s);
/// [(s-omega)(s-omega-1) / ((s+omega)(s+omega-1))]^r
cplx pole_rational(int r, double omega, cplx s);

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

class Registry {
public:
    const LFunctionDescriptor& get(const std::string& name) const;
    bool contains(const std::string& name) const;
    void add(LFunctionDescriptor f);
    const std::vector<LFunctionDescriptor>& entries() const { return entries_; }

private:
    std::vector<LFunctionDescriptor> entries_;
};

/// Plain-text registry: one [NAME] section per entry with key = value lines.
Registry parse_registry(std::istream& in);
std::string serialize_registry(const Registry& reg);
/// ZETA, CHI3, CHI4, CHI8, PRODUCT and DELTA.
Registry default_registry();
/// The file named by SUMLAB_REGISTRY when set, the shipped registry otherwise.
Registry load_registry();

/// Exact tau(n) for the weight-12 cusp form, normalised by n^{11/2}, n <= N.
std::vector<double> delta_coefficients(std::uint64_t N);
void write_coefficient_cache(const std::string& path, const std::vector<double>& lambda);
std::vector<double> read_coefficient_cache(const std::string& path);

/// Copy of f with whatever local data coefficient bound N requires attached
/// (the cusp-form table for DELTA, read from or written to its cache file).
LFunctionDescriptor prepare_local_data(const LFunctionDescriptor& f, std::uint64_t N);

} // namespace sumlab::lfunc
