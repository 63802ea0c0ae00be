#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumlab/descriptor.hpp"

namespace sumlab::arith {

struct PrimePower {
    std::uint64_t prime;
    int exponent;
    bool operator==(const PrimePower&) const = default;
};

struct Factorization {
    std::uint64_t n = 1;
    std::vector<PrimePower> factors; // primes strictly increasing
};

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);
/// Trial division for small factors, Pollard rho (Brent) beyond.
Factorization factorize(std::uint64_t n);
int moebius(std::uint64_t n);

/// Local coefficients at one prime: lambda(p^a) for a = 0..max_exponent and
/// mu(p^a) (zero for a > degree), from the power series of the local factor.
struct LocalSeries {
    std::vector<double> lambda;
    std::vector<double> mu;
};
LocalSeries local_series(const SatakeLocal& local, int max_exponent);

double lambda_coeff(const LFunctionDescriptor& f, std::uint64_t n);
double mu_coeff(const LFunctionDescriptor& f, std::uint64_t n);
double c_coeff(const LFunctionDescriptor& f, double omega, std::uint64_t n);

/// lambda_f, mu_f and c_{f,omega} on 1..N, index 0 unused. Immutable once built.
struct CoefficientTable {
    std::uint64_t N = 0;
    double omega = 0.0;
    std::vector<double> lambda;
    std::vector<double> mu;
    std::vector<double> c;
};

CoefficientTable build_table(const LFunctionDescriptor& f, double omega, std::uint64_t N);

/// Dirichlet convolution (a * b)(n) on 1..N, index 0 unused.
std::vector<double> dirichlet_convolve(std::span<const double> a, std::span<const double> b);

} // namespace sumlab::arith
