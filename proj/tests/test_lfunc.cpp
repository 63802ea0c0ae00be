#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sumlab/arith.hpp"
#include "sumlab/error.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/special.hpp"

using namespace sumlab;
using namespace sumlab::lfunc;
using std::numbers::pi;

namespace {

const LFunctionDescriptor& reg(const std::string& name) {
    static const Registry r = default_registry();
    return r.get(name);
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::io_error;
}

double hardy_z(double t) {
    const cplx s(0.5, t);
    const cplx th = special::log_gamma(cplx(0.25, t / 2)).imag() - t / 2 * std::log(pi);
    return (std::exp(cplx(0, th.real())) * l_value(reg("ZETA"), s)).real();
}

} // namespace

TEST_CASE("l_value classical values") {
    CHECK(std::abs(l_value(reg("ZETA"), 2.0) - pi * pi / 6) < 1e-13);
    CHECK(std::abs(l_value(reg("CHI4"), 1.0) - pi / 4) < 1e-13);
    CHECK(std::abs(l_value(reg("ZETA"), -1.0) + 1.0 / 12) < 1e-13);
    CHECK(std::abs(l_value(reg("ZETA"), 0.0) + 0.5) < 1e-13);
    CHECK(code_of([] { l_value(reg("ZETA"), 1.0); }) == Errc::pole_at_one);
    CHECK(code_of([] { l_value(reg("ZETA"), cplx(0.5, 250)); }) == Errc::accuracy_window_exceeded);
    CHECK(code_of([] { l_value(prepare_local_data(reg("DELTA"), 100), cplx(0.5, 3)); }) ==
          Errc::accuracy_window_exceeded);
    CHECK(code_of([] { l_value(reg("DELTA"), cplx(3, 3)); }) == Errc::missing_local_data);
    CHECK(std::abs(l_value(reg("CHI3"), 1.0) - pi / std::sqrt(27.0)) < 1e-13);
}

TEST_CASE("first zeta zero") {
    double a = 14.0, b = 14.3;
    double za = hardy_z(a);
    REQUIRE(za * hardy_z(b) < 0);
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (a + b);
        const double zm = hardy_z(m);
        if ((zm > 0) == (za > 0)) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    CHECK(std::abs(l_value(reg("ZETA"), cplx(0.5, 0.5 * (a + b)))) <= 1e-10);
    CHECK(std::abs(l_value(reg("ZETA"), cplx(0.5, 14.134725))) <= 1e-6);
}

TEST_CASE("gamma factor") {
    CHECK(std::abs(gamma_factor(reg("ZETA"), 2.0) - 1.0 / pi) < 1e-15);
    for (cplx s : {cplx(2.0), cplx(0.3, 4.0), cplx(-0.5, 20.0)}) {
        const cplx expect = std::exp(-s / 2.0 * std::log(pi)) * special::gamma((s + 1.0) / 2.0);
        CHECK(std::abs(gamma_factor(reg("CHI4"), s) / expect - 1.0) < 1e-11);
    }
    CHECK(code_of([] { gamma_factor(reg("ZETA"), -2.0); }) == Errc::gamma_pole);
    const auto& f = reg("ZETA");
    for (double t : {50.0, -50.0}) {
        const cplx s(0.7, t);
        const cplx z = (s + f.kappas[0]) / 2.0;
        const double at = std::abs(z.imag());
        const cplx stirling = std::sqrt(2 * pi) *
                              std::exp(cplx(z.real() - 0.5, z.imag()) * std::log(at) - pi / 2 * at -
                                       cplx(0, z.imag()) + cplx(0, (t > 0 ? 1 : -1) * pi / 2 * (z.real() - 0.5)));
        const cplx approx = std::exp(-s / 2.0 * std::log(pi)) * stirling;
        CHECK(std::abs(gamma_factor(f, s) / approx - 1.0) < 2.0 / at);
    }
}

TEST_CASE("xi functional equation and entirety") {
    const auto& z = reg("ZETA");
    for (cplx s : {cplx(0.3, 2.0), cplx(2.0, 10.0), cplx(-0.7, 33.0)})
        CHECK(std::abs(xi_value(z, s) - xi_value(z, 1.0 - s)) <= 1e-9 * std::abs(xi_value(z, s)));
    const cplx x0 = xi_value(z, 0.0), x1 = xi_value(z, 1.0);
    CHECK(std::isfinite(x0.real()));
    CHECK(std::abs(x0 - x1) <= 1e-9 * std::abs(x0));
    CHECK(std::abs(x0 - 1.0) <= 1e-9);
    const cplx c = xi_value(reg("CHI4"), 0.5);
    CHECK(std::abs(c.imag()) <= 1e-10);
    CHECK(c.real() > 0);
    for (double t : {3.0, 17.0, 40.0}) CHECK(std::abs(xi_value(reg("CHI4"), cplx(0.5, t)).imag()) <= 1e-10);
}

TEST_CASE("functional equation residual on random points") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> sig(-1, 2), im(-50, 50);
    for (const char* name : {"ZETA", "CHI3", "CHI4", "CHI8", "PRODUCT"}) {
        const auto& f = reg(name);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const cplx s(sig(rng), im(rng));
            const cplx a = xi_value(f, s), b = double(f.sign) * xi_value(f, 1.0 - s);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
        CHECK_MESSAGE(worst <= 1e-8, name, " residual ", worst);
    }
}

TEST_CASE("cusp form reflection across the strip") {
    const auto f = prepare_local_data(reg("DELTA"), 2000);
    for (cplx s : {cplx(1.6, 0.0), cplx(2.0, 5.0), cplx(3.0, -12.0), cplx(1.8, 30.0)}) {
        const cplx a = xi_value(f, s), b = xi_value(f, 1.0 - s);
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    }
    CHECK(std::abs(l_value(f, cplx(-1.0, 2.0))) > 0.0);
}

TEST_CASE("theta ratio") {
    for (const char* name : {"ZETA", "CHI3", "CHI4", "CHI8", "PRODUCT"})
        for (double w : {0.1, 0.25, 0.4}) {
            const cplx v = theta_ratio(reg(name), w, 0.5);
            CHECK(std::abs(v - double(reg(name).sign)) < 1e-9);
        }
    const cplx th = theta_ratio(reg("ZETA"), 0.25, cplx(0.5, 5.0));
    CHECK(std::abs(std::abs(th) - 1.0) < 1e-8);
    const auto& z = reg("ZETA");
    const cplx ref = xi_value(z, 3.0 - 0.25) / xi_value(z, 3.0 + 0.25);
    CHECK(std::abs(theta_ratio(z, 0.25, 3.0) - ref) < 1e-13 * std::abs(ref));
    CHECK(code_of([] { theta_ratio(reg("ZETA"), 0.6, 2.0); }) == Errc::omega_out_of_range);
    const cplx rho(0.5, 14.134725141734693);
    CHECK(code_of([&] { theta_ratio(reg("ZETA"), 0.25, rho - 0.25); }) == Errc::division_near_zero);
}

TEST_CASE("theta is unimodular on the critical line") {
    for (const char* name : {"ZETA", "CHI4", "CHI3", "CHI8", "PRODUCT"})
        for (double w : {0.1, 0.25, 0.4}) {
            double worst = 0.0;
            for (int i = 0; i < 200; ++i) {
                const double t = 0.1 + (50.0 - 0.1) * i / 199.0;
                worst = std::max(worst, std::abs(std::abs(theta_ratio(reg(name), w, cplx(0.5, t))) - 1.0));
            }
            CHECK_MESSAGE(worst <= 1e-8, name, " omega ", w, " ", worst);
        }
}

TEST_CASE("theta contracts inside the right half plane") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> sig(0.5, 2.0), im(-50, 50);
    for (const char* name : {"ZETA", "CHI4"})
        for (double w : {0.1, 0.25, 0.4}) {
            int inside = 0;
            for (int i = 0; i < 200; ++i) {
                double s = sig(rng);
                if (s == 0.5) s = 0.75;
                inside += std::abs(theta_ratio(reg(name), w, cplx(s, im(rng)))) < 1.0;
            }
            CHECK(inside == 200);
        }
}

TEST_CASE("gamma ratio asymptotic") {
    for (const char* name : {"ZETA", "CHI4", "PRODUCT"}) {
        const auto& f = reg(name);
        const double w = 0.25;
        for (double t : {100.0, -100.0}) {
            const cplx s(2.0, t);
            const cplx ratio = gamma_factor(f, s - w) / gamma_factor(f, s + w);
            CHECK(std::abs(ratio / gamma_ratio_asymptotic(f, w, s) - 1.0) <= 2.0 / std::abs(t));
        }
    }
    CHECK(std::abs(gamma_ratio_asymptotic(reg("ZETA"), 1e-12, cplx(1, 30)) - 1.0) < 1e-10);
    const double w = 0.3;
    CHECK(std::abs(std::abs(gamma_ratio_asymptotic(reg("ZETA"), w, cplx(1, 50))) - std::pow(2 * pi / 50, w)) < 1e-14);
    CHECK(std::abs(std::abs(gamma_ratio_asymptotic(reg("PRODUCT"), w, cplx(1, -50))) - std::pow(2 * pi / 50, 2 * w)) <
          1e-14);
}

TEST_CASE("Dirichlet series matches the Euler product") {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= 10000; ++p)
        if (arith::is_prime(p)) primes.push_back(p);
    for (const char* name : {"ZETA", "CHI3", "CHI4", "CHI8", "PRODUCT"}) {
        const auto& f = reg(name);
        for (cplx s : {cplx(3.0), cplx(3.0, 7.0)}) {
            cplx euler = 1.0;
            for (auto p : primes) {
                const auto loc = f.satake(p);
                for (const cplx& a : loc.alphas) euler /= 1.0 - a * std::exp(-s * std::log(double(p)));
            }
            const cplx L = l_value(f, s);
            CHECK(std::abs(L - euler) <= 1e-8 * std::abs(L));
        }
    }
    const auto t = arith::build_table(reg("CHI8"), 0.25, 20000);
    cplx series = 0.0;
    for (std::uint64_t n = t.N; n >= 1; --n) series += t.lambda[n] * std::pow(double(n), -3.0);
    CHECK(std::abs(series - l_value(reg("CHI8"), 3.0)) < 1e-9);
}

TEST_CASE("Ramanujan tau values") {
    const auto lam = delta_coefficients(30);
    auto tau = [&](int n) { return lam[n] * std::pow(double(n), 5.5); };
    CHECK(tau(1) == doctest::Approx(1.0));
    CHECK(tau(2) == doctest::Approx(-24.0).epsilon(1e-13));
    CHECK(tau(3) == doctest::Approx(252.0).epsilon(1e-13));
    CHECK(tau(5) == doctest::Approx(4830.0).epsilon(1e-13));
    CHECK(tau(6) == doctest::Approx(-6048.0).epsilon(1e-13));
    CHECK(tau(23) == doctest::Approx(18643272.0).epsilon(1e-13));
    CHECK(tau(4) == doctest::Approx(-1472.0).epsilon(1e-13));
    for (int n = 1; n <= 30; ++n) CHECK(std::abs(lam[n]) <= double(arith::factorize(n).factors.size() + 1) * std::sqrt(double(n)));
}

TEST_CASE("registry round trip") {
    const auto r = default_registry();
    const std::string text = serialize_registry(r);
    std::istringstream in(text);
    const auto back = parse_registry(in);
    CHECK(serialize_registry(back) == text);
    for (const char* name : {"ZETA", "CHI3", "CHI4", "CHI8", "PRODUCT", "DELTA"}) CHECK(back.contains(name));
    CHECK(back.get("DELTA").kappas.size() == 2);
    CHECK(back.get("DELTA").kappas[0].real() == 5.5);
    CHECK(back.get("PRODUCT").root_characters.size() == 2);
    CHECK(code_of([] { reg("NOPE"); }) != Errc::io_error);
}

TEST_CASE("registry parse errors cite the line") {
    std::istringstream bad("[ZETA]\ndegree = 1\nkappa = zero\n");
    try {
        parse_registry(bad);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::config_parse_error);
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    std::istringstream bad2("degree = 1\n");
    CHECK_THROWS_AS(parse_registry(bad2), Error);
}

TEST_CASE("registry file override") {
    const auto path = std::filesystem::temp_directory_path() / "sumlab_test_registry.txt";
    {
        std::ofstream out(path);
        out << "# custom registry\n[MYZETA]\ndegree = 1\nkappa = 0\nconductor = 1\npole_order = 1\nsign = 1\n"
               "satake = characters\nroot_characters = 1\n";
    }
    ::setenv("SUMLAB_REGISTRY", path.c_str(), 1);
    const auto r = load_registry();
    ::unsetenv("SUMLAB_REGISTRY");
    REQUIRE(r.contains("MYZETA"));
    CHECK(std::abs(l_value(r.get("MYZETA"), 2.0) - pi * pi / 6) < 1e-13);
    std::filesystem::remove(path);
}

TEST_CASE("coefficient cache round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "sumlab_test_cache";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "lam.bin").string();
    const auto lam = delta_coefficients(500);
    write_coefficient_cache(path, lam);
    CHECK(std::filesystem::file_size(path) == 8 * lam.size());
    const auto back = read_coefficient_cache(path);
    REQUIRE(back.size() == lam.size());
    bool same = true;
    for (std::size_t i = 1; i < lam.size(); ++i) same = same && back[i] == lam[i];
    CHECK(same);
    ::setenv("SUMLAB_CACHE_DIR", dir.c_str(), 1);
    const auto f = prepare_local_data(reg("DELTA"), 300);
    ::unsetenv("SUMLAB_CACHE_DIR");
    REQUIRE(f.cusp);
    CHECK(f.cusp->bound() >= 300);
    CHECK(f.cusp->lambda[7] == lam[7]);
    std::filesystem::remove_all(dir);
}
