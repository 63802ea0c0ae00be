#include <cmath>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "sumlab/error.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/verify.hpp"

using namespace sumlab;
using namespace sumlab::verify;

namespace {

const LFunctionDescriptor& reg(const std::string& name) {
    static const lfunc::Registry r = lfunc::default_registry();
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

} // namespace

TEST_CASE("weight Mellin reports") {
    const auto z = check_weight_mellin(reg("ZETA"), 0.25, 0, {3.0});
    CHECK(z.pass);
    CHECK(z.max_rel_gap <= 1e-6);
    CHECK(z.points.size() == 1);
    const auto c = check_weight_mellin(reg("CHI4"), 0.25, 1, {2.5});
    CHECK(c.pass);
    const auto strict = check_weight_mellin(reg("CHI4"), 0.25, 1, {2.5}, 1e-300);
    CHECK_FALSE(strict.pass);
}

TEST_CASE("Dirichlet series ratio") {
    const auto z = check_series_ratio(reg("ZETA"), 0.25, 4.0, 10000, 1e-8);
    CHECK(z.pass);
    const auto c = check_series_ratio(reg("CHI4"), 0.1, 3.0, 10000, 1e-7);
    CHECK(c.pass);
    const auto one = check_series_ratio(reg("ZETA"), 0.25, 4.0, 1, 1.0);
    CHECK(one.lhs[0] == cplx(1.0));
    CHECK(std::abs(one.rhs[0] - 1.0) <= 1.5 * std::pow(2.0, 0.25 - 4.0));
    double prev = 1.0;
    for (std::uint64_t N : {10, 100, 1000, 10000}) {
        const auto r = check_series_ratio(reg("ZETA"), 0.25, 4.0, N, 1.0);
        CHECK(r.max_rel_gap < prev);
        prev = r.max_rel_gap;
    }
}

TEST_CASE("Mellin transform of h") {
    const std::vector<cplx> s = {3.0};
    const auto k1 = check_h_mellin(reg("ZETA"), 0.25, 1, s, 1000.0, 1e-3);
    const auto k2 = check_h_mellin(reg("ZETA"), 0.25, 2, s, 1000.0, 1e-3);
    CHECK(std::abs(k2.rhs[0] - k1.rhs[0] / 2.5) <= 1e-15 * std::abs(k1.rhs[0]));
    CHECK(k1.pass);
    CHECK(k2.pass);
    CHECK_THROWS_AS(check_h_mellin(reg("ZETA"), 0.25, 1, s, 100.0), Error);
    CHECK_THROWS_AS(check_h_mellin(reg("ZETA"), 0.25, 1, {2.0}, 1000.0), Error);
}

TEST_CASE("contour oracle") {
    const auto& z = reg("ZETA");
    const summatory::SummatoryEvaluator ev(z, 0.25, 2, 200);
    const double h = summatory::h_direct(ev, 50.5);
    const auto r150 = contour_oracle(z, 0.25, 2, 50.5, 3.0, 150.0);
    CHECK(std::abs(r150.value - h) <= r150.envelope);
    CHECK(r150.quadrature_error < 1e-6 * std::abs(r150.value));
    const auto r100 = contour_oracle(z, 0.25, 2, 50.5, 3.0, 100.0);
    const auto r200 = contour_oracle(z, 0.25, 2, 50.5, 3.0, 200.0);
    CHECK(std::abs(r200.value - h) < std::abs(r100.value - h));
    CHECK(r200.envelope < r100.envelope);
    CHECK(code_of([&] { contour_oracle(z, 0.25, 2, 50.0, 3.0, 150.0); }) == Errc::integer_abscissa);
    CHECK(code_of([&] { contour_oracle(z, 0.25, 2, 50.5, 3.0, 250.0); }) == Errc::accuracy_window_exceeded);
}

TEST_CASE("sign scan determinism") {
    const summatory::SummatoryEvaluator ev(reg("CHI4"), 0.25, 1, 2000);
    const auto a = sign_scan(ev, 1.0, 2000.0, 800, 1e-9, 1);
    const auto b = sign_scan(ev, 1.0, 2000.0, 800, 1e-9, 4);
    CHECK(to_json(a) == to_json(b));
    CHECK(a.grid == b.grid);
    CHECK(a.sign_changes == b.sign_changes);
    CHECK(std::is_sorted(a.sign_changes.begin(), a.sign_changes.end()));
}

TEST_CASE("zero band discipline") {
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < 2000; ++i) {
        const double x = 1.0 + i * 0.01;
        grid.emplace_back(x, std::sin(7.0 * x) * std::exp(-x) + 3e-9 * std::cos(53.0 * x));
    }
    auto fn = [](double x) { return std::sin(7.0 * x) * std::exp(-x) + 3e-9 * std::cos(53.0 * x); };
    for (double zb : {1e-3, 1e-5, 1e-7, 1e-8}) {
        const auto wide = scan_samples("SYN", 0.25, 1, grid, zb, fn);
        const auto narrow = scan_samples("SYN", 0.25, 1, grid, zb / 10, fn);
        CHECK(narrow.sign_changes.size() >= wide.sign_changes.size());
        for (double c : wide.sign_changes) {
            std::size_t lo = 0, hi = grid.size() - 1;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (grid[i].first <= c && std::abs(grid[i].second) > wide.band_at(grid[i].first)) lo = i;
                if (grid[i].first >= c && std::abs(grid[i].second) > wide.band_at(grid[i].first)) {
                    hi = i;
                    break;
                }
            }
            bool found = false;
            for (double d : narrow.sign_changes) found = found || (d >= grid[lo].first && d <= grid[hi].first);
            CHECK(found);
        }
    }
}

TEST_CASE("synthetic constant sign") {
    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < 500; ++i) {
        const double x = 1.0 + i;
        double s = 0.0;
        for (int n = 1; n <= x; ++n) s += std::sqrt(1.0 - n / (x + 1.0));
        grid.emplace_back(x, s / std::sqrt(x));
    }
    const auto rep = scan_samples("POSITIVE", 0.25, 1, grid, 1e-9);
    CHECK(rep.sign_changes.empty());
    CHECK_FALSE(rep.last_change.has_value());
    CHECK(rep.terminal_sign == 1);
    std::vector<std::pair<double, double>> zeros = {{1.0, 0.0}, {2.0, 1e-12}, {3.0, -1e-12}};
    CHECK(scan_samples("ZERO", 0.25, 1, zeros, 1e-9).terminal_sign == 0);
}

TEST_CASE("early zeta scan has no sign change") {
    const double w = 0.25;
    const double top = 1.0 / weight_sign_changes(w).at(0);
    const summatory::SummatoryEvaluator ev(reg("ZETA"), w, 1, 10);
    const auto rep = sign_scan(ev, 1.0, top * (1 - 1e-9), 500);
    CHECK(rep.sign_changes.empty());
    CHECK(rep.terminal_sign == 1);
}

TEST_CASE("asymptotic check") {
    const auto toy = asymptotic_check([](double x) { return std::log(x); }, 2, 1, {10, 100, 1000, 10000}, "toy");
    CHECK(toy.pass);
    for (const auto& r : toy.lhs) CHECK(std::abs(r - 1.0) < 1e-15);
    const auto flipped = asymptotic_check([](double x) { return -std::log(x); }, 2, 1, {10, 100, 1000}, "toy");
    CHECK_FALSE(flipped.pass);
    const auto drifting =
        asymptotic_check([](double x) { return std::log(x) * (1 + 0.01 * std::log(x)); }, 2, 1, {10, 100, 1000}, "drift");
    CHECK_FALSE(drifting.pass);
    const summatory::SummatoryEvaluator ev(reg("ZETA"), 0.25, 2, 10000);
    const auto rep = asymptotic_check(ev, {1e2, 1e3, 1e4});
    CHECK(rep.pass);
    CHECK(std::abs(rep.lhs.back() - 1.0) < 0.2);
    CHECK_THROWS_AS(asymptotic_check([](double x) { return x; }, 1, 1, {10, 100}), Error);
}

TEST_CASE("L2 statistic") {
    const summatory::SummatoryEvaluator ev(reg("ZETA"), 0.4, 1, 1000);
    const auto at_one = l2_statistic(ev, {1.0});
    CHECK(at_one.at(0).second == 0.0);
    for (double w : {0.1, 0.4}) {
        const summatory::SummatoryEvaluator e(reg("ZETA"), w, 1, 10000);
        const auto m = l2_statistic(e, {1e2, 1e3, 1e4});
        CHECK(l2_trend_ok(m));
        CHECK(std::isfinite(m.back().second));
    }
    CHECK_FALSE(l2_trend_ok({{10.0, 1.0}, {100.0, 3.0}}));
    CHECK(l2_trend_ok({{10.0, 1.0}, {100.0, 1.5}, {1000.0, 1.7}}));
}

TEST_CASE("reports serialise to JSON") {
    const auto r = check_series_ratio(reg("ZETA"), 0.25, 4.0, 100, 1e-3);
    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j.at("identity") == "series_ratio");
    CHECK(j.at("pass") == r.pass);
    CHECK(j.contains("max_rel_gap"));
    const summatory::SummatoryEvaluator ev(reg("ZETA"), 0.25, 2, 100);
    const auto s = nlohmann::json::parse(to_json(sign_scan(ev, 1.0, 100.0, 50)));
    CHECK(s.at("terminal_sign") == 1);
    CHECK(s.at("lfunction") == "ZETA");
    CHECK(s.at("grid").size() == 50);
}
