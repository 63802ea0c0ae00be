#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sumlab {

using cplx = std::complex<double>;

/// Values chi(0), ..., chi(m-1) of a Dirichlet character modulo m.
struct DirichletCharacter {
    std::vector<int> values;

    std::uint64_t modulus() const { return values.size(); }
    int operator()(std::uint64_t n) const { return values[n % values.size()]; }
    /// 0 for even characters, 1 for odd ones.
    int parity() const;
    bool is_principal_mod_one() const { return values.size() == 1 && values[0] == 1; }
};

/// Local roots alpha_{f,1}(p), ..., alpha_{f,d}(p) of the Euler factor at p.
struct SatakeLocal {
    std::uint64_t prime = 0;
    std::vector<cplx> alphas;

    void validate(std::uint64_t conductor) const;
};

enum class SatakeSource {
    characters,     // alpha_i(p) = chi_i(p) for a list of root characters
    cusp_delta,     // Hecke eigenvalues of the weight-12 level-1 cusp form
    explicit_table, // per-prime data supplied directly
};

/// Normalised Hecke eigenvalues lambda(n) = tau(n) / n^{11/2}, index 0 unused.
struct CuspCoefficients {
    std::vector<double> lambda;
    std::uint64_t bound() const { return lambda.empty() ? 0 : lambda.size() - 1; }
};

struct LFunctionDescriptor {
    std::string name;
    int degree = 1;
    std::vector<cplx> kappas;
    std::uint64_t conductor = 1;
    int pole_order = 0;
    int sign = 1;

    SatakeSource source = SatakeSource::characters;
    std::vector<DirichletCharacter> root_characters;
    std::optional<DirichletCharacter> character;
    std::map<std::uint64_t, SatakeLocal> local_data;
    std::string coefficient_cache;
    std::shared_ptr<const CuspCoefficients> cusp;

    /// Throws MissingLocalData when p is not covered.
    SatakeLocal satake(std::uint64_t p) const;
    /// Checks the structural invariants; throws DomainError.
    void validate() const;
    /// True when every kappa is real.
    bool real_shifts() const;
};

} // namespace sumlab
