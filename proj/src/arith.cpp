#include "sumlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sumlab/error.hpp"

namespace sumlab::arith {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 block = 128;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(block, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += block;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    split(d, primes);
    split(n / d, primes);
}

void check_imaginary(cplx v, const char* what, u64 p) {
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
        throw Error(Errc::imaginary_residue, std::string(what) + " at p = " + std::to_string(p) +
                                                 " has imaginary part " +
                                                 std::to_string(v.imag()));
}

// Largest a with p^a <= n.
int max_exponent(u64 p, u64 n) {
    int a = 0;
    u64 v = 1;
    while (v <= n / p) {
        v *= p;
        ++a;
    }
    return a;
}

template <class Local>
double multiplicative_eval(const LFunctionDescriptor& f, u64 n, Local local_value) {
    if (n == 0) throw Error(Errc::domain_error, "coefficients are indexed from 1");
    double result = 1.0;
    for (const auto& pp : factorize(n).factors) {
        const auto series = local_series(f.satake(pp.prime), pp.exponent);
        result *= local_value(series, pp.prime, pp.exponent);
    }
    return result;
}

} // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Factorization factorize(u64 n) {
    if (n == 0) throw Error(Errc::domain_error, "factorize requires n >= 1");
    Factorization out;
    out.n = n;
    std::vector<u64> primes;
    for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    split(n, primes);
    std::sort(primes.begin(), primes.end());
    for (u64 p : primes) {
        if (!out.factors.empty() && out.factors.back().prime == p)
            ++out.factors.back().exponent;
        else
            out.factors.push_back({p, 1});
    }
    return out;
}

int moebius(u64 n) {
    const auto fz = factorize(n);
    for (const auto& pp : fz.factors)
        if (pp.exponent > 1) return 0;
    return fz.factors.size() % 2 == 0 ? 1 : -1;
}

LocalSeries local_series(const SatakeLocal& local, int max_exponent) {
    const auto d = local.alphas.size();
    // coefficients of prod_i (1 - alpha_i X)
    std::vector<cplx> poly{1.0};
    for (const cplx& a : local.alphas) {
        poly.push_back(0.0);
        for (std::size_t j = poly.size() - 1; j > 0; --j) poly[j] -= a * poly[j - 1];
    }
    LocalSeries out;
    out.lambda.resize(max_exponent + 1);
    out.mu.resize(max_exponent + 1);
    std::vector<cplx> h(max_exponent + 1);
    h[0] = 1.0;
    for (int a = 1; a <= max_exponent; ++a) {
        cplx acc = 0.0;
        for (std::size_t j = 1; j <= std::min<std::size_t>(a, d); ++j) acc -= poly[j] * h[a - j];
        h[a] = acc;
    }
    for (int a = 0; a <= max_exponent; ++a) {
        check_imaginary(h[a], "lambda", local.prime);
        out.lambda[a] = h[a].real();
        if (static_cast<std::size_t>(a) <= d) {
            check_imaginary(poly[a], "mu", local.prime);
            out.mu[a] = poly[a].real();
        } else {
            out.mu[a] = 0.0;
        }
    }
    return out;
}

double lambda_coeff(const LFunctionDescriptor& f, u64 n) {
    return multiplicative_eval(f, n, [](const LocalSeries& s, u64, int a) { return s.lambda[a]; });
}

double mu_coeff(const LFunctionDescriptor& f, u64 n) {
    return multiplicative_eval(f, n, [](const LocalSeries& s, u64, int a) { return s.mu[a]; });
}

namespace {

double local_c(const LocalSeries& s, u64 p, int a, double omega) {
    const double lp = std::log(static_cast<double>(p));
    double acc = 0.0;
    for (int j = 0; j <= a; ++j) acc += s.mu[j] * s.lambda[a - j] * std::exp(-2.0 * omega * j * lp);
    return std::exp(omega * a * lp) * acc;
}

} // namespace

double c_coeff(const LFunctionDescriptor& f, double omega, u64 n) {
    require_omega(omega);
    return multiplicative_eval(
        f, n, [omega](const LocalSeries& s, u64 p, int a) { return local_c(s, p, a, omega); });
}

CoefficientTable build_table(const LFunctionDescriptor& f, double omega, u64 N) {
    require_omega(omega);
    if (N < 1) throw Error(Errc::domain_error, "table bound must be at least 1");
    CoefficientTable t;
    t.N = N;
    t.omega = omega;
    t.lambda.assign(N + 1, 0.0);
    t.mu.assign(N + 1, 0.0);
    t.c.assign(N + 1, 0.0);
    t.lambda[1] = t.mu[1] = t.c[1] = 1.0;

    std::vector<std::uint32_t> spf(N + 1, 0);
    for (u64 i = 2; i <= N; ++i) {
        if (spf[i] != 0) continue;
        spf[i] = static_cast<std::uint32_t>(i);
        if (i <= N / i)
            for (u64 j = i * i; j <= N; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        // prime i: fill its powers from the local series
        const int amax = max_exponent(i, N);
        const auto series = local_series(f.satake(i), amax);
        u64 pa = 1;
        for (int a = 1; a <= amax; ++a) {
            pa *= i;
            t.lambda[pa] = series.lambda[a];
            t.mu[pa] = series.mu[a];
            t.c[pa] = local_c(series, i, a, omega);
        }
    }
    for (u64 n = 2; n <= N; ++n) {
        const u64 p = spf[n];
        u64 m = n, pa = 1;
        while (m % p == 0) {
            m /= p;
            pa *= p;
        }
        if (m == 1) continue; // prime power, already set
        t.lambda[n] = t.lambda[pa] * t.lambda[m];
        t.mu[n] = t.mu[pa] * t.mu[m];
        t.c[n] = t.c[pa] * t.c[m];
    }
    return t;
}

std::vector<double> dirichlet_convolve(std::span<const double> a, std::span<const double> b) {
    const std::size_t N = std::min(a.size(), b.size()) - 1;
    std::vector<double> out(N + 1, 0.0);
    for (std::size_t d = 1; d <= N; ++d)
        for (std::size_t m = 1; d * m <= N; ++m) out[d * m] += a[d] * b[m];
    return out;
}

} // namespace sumlab::arith
