// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "sumlab/error.hpp"
#include "sumlab/format.hpp"
#include "sumlab/kernels.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/verify.hpp"
#include "sumlab/weights.hpp"

using namespace sumlab;
using clk = std::chrono::steady_clock;

namespace {

const lfunc::Registry& registry() {
    static const lfunc::Registry r = lfunc::default_registry();
    return r;
}

const LFunctionDescriptor& reg(const std::string& name) { return registry().get(name); }

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Runs one criterion; a library error or a blown runtime budget is a failure.
bool criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = clk::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clk::now() - t0).count();
    const bool in_time = secs <= budget_s;
    const bool ok = o.pass && in_time;
    std::printf("criterion %d: %s  %s; %s [%.2f s of %.0f s]\n", id, ok ? "PASS" : "FAIL", title, o.detail.c_str(), secs,
                budget_s);
    std::fflush(stdout);
    return ok;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

} // namespace

int main() {
    std::printf("weighted-sum kernel: %s\n", kernels::selected_kernel_name());
    int failed = 0;

    failed += !criterion(1, "closed-form equivalence of the level-one pipeline", 60, [] {
        Outcome o;
        double worst = 0.0;
        for (const char* name : {"ZETA", "CHI4"})
            for (double w : {0.1, 0.25, 0.4}) {
                const weights::WeightEvaluator ev(reg(name), w, 1, weights::Backend::pipeline);
                for (int i = 0; i < 50; ++i) {
                    const double x = 0.02 * std::pow(0.98 / 0.02, i / 49.0);
                    const double closed = std::string(name) == "ZETA" ? weights::g_zeta_closed(w, x)
                                                                       : weights::g_chi_closed(w, 1, x);
                    worst = std::max(worst, std::abs(ev(x) - closed));
                }
            }
        o.pass = worst <= 1e-7;
        o.detail = "max |pipeline - closed| = " + sci(worst) + " (limit 1e-7)";
        return o;
    });

    failed += !criterion(2, "Mellin chain of the weights", 60, [] {
        Outcome o;
        double worst = 0.0;
        for (const char* name : {"ZETA", "CHI4"})
            for (double w : {0.1, 0.25, 0.4})
                for (int k : {0, 1, 2}) {
                    const auto rep = verify::check_weight_mellin(reg(name), w, k, {2.5, 3.0, 4.0}, 1e-6);
                    o.pass = o.pass && rep.pass;
                    worst = std::max(worst, rep.max_rel_gap);
                }
        o.detail = "max relative gap " + sci(worst) + " over s in {2.5,3,4}, k in {0,1,2} (limit 1e-6)";
        return o;
    });

    failed += !criterion(3, "Dirichlet series ratio", 10, [] {
        Outcome o;
        const auto z = verify::check_series_ratio(reg("ZETA"), 0.25, 4.0, 10000, 1e-8);
        double chi = 0.0;
        bool chi_ok = true;
        for (double w : {0.1, 0.25}) {
            const auto c = verify::check_series_ratio(reg("CHI4"), w, 3.0, 10000, 1e-7);
            chi_ok = chi_ok && c.pass;
            chi = std::max(chi, c.max_rel_gap);
        }
        o.pass = z.pass && chi_ok;
        o.detail = "ZETA s=4 gap " + sci(z.max_rel_gap) + " (limit 1e-8), CHI4 s=3 gap " + sci(chi) + " (limit 1e-7)";
        return o;
    });

    failed += !criterion(4, "Mellin transform of h", 300, [] {
        Outcome o;
        const summatory::SummatoryEvaluator ev(reg("ZETA"), 0.25, 1, 20000);
        const auto a = verify::check_h_mellin(ev, {3.0}, 1e4, 1e-4);
        const auto b = verify::check_h_mellin(ev, {3.0}, 2e4, 1e-4);
        const double ratio = a.max_rel_gap / b.max_rel_gap;
        o.pass = a.pass && ratio >= 2.0;
        o.detail = "gap " + sci(a.max_rel_gap) + " at X=1e4 (limit 1e-4), " + sci(b.max_rel_gap) +
                   " at X=2e4, reduction " + sci(ratio) + "x (need >= 2)";
        return o;
    });

    failed += !criterion(5, "contour oracle against the direct sum", 600, [] {
        Outcome o;
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> dist(10.0, 100.0);
        double worst = 0.0;
        for (const char* name : {"ZETA", "CHI4"}) {
            const summatory::SummatoryEvaluator ev(reg(name), 0.25, 2, 100);
            for (int i = 0; i < 10; ++i) {
                double x = dist(rng);
                if (std::abs(x - std::round(x)) < 1e-3) x += 0.25;
                const auto c = verify::contour_oracle(reg(name), 0.25, 2, x, 3.0, 150.0);
                const double gap = std::abs(c.value - summatory::h_direct(ev, x));
                o.pass = o.pass && gap <= c.envelope;
                worst = std::max(worst, gap / c.envelope);
            }
        }
        o.detail = "max |oracle - h| / envelope = " + sci(worst) + " over 20 abscissae (limit 1)";
        return o;
    });

    failed += !criterion(6, "Theta is inner on the right half plane", 120, [] {
        Outcome o;
        double worst_line = 0.0, max_inside = 0.0;
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> sig(0.5, 2.0), im(-50.0, 50.0);
        for (const char* name : {"ZETA", "CHI4"})
            for (double w : {0.1, 0.25, 0.4}) {
                for (int i = 0; i < 200; ++i) {
                    const double t = 0.1 + (50.0 - 0.1) * i / 199.0;
                    const double m = std::abs(lfunc::theta_ratio(reg(name), w, cplx(0.5, t)));
                    worst_line = std::max(worst_line, std::abs(m - 1.0));
                }
                for (int i = 0; i < 200; ++i) {
                    double s = sig(rng);
                    if (s <= 0.5) s = 0.5 + 1e-3;
                    max_inside = std::max(max_inside, std::abs(lfunc::theta_ratio(reg(name), w, cplx(s, im(rng)))));
                }
            }
        o.pass = worst_line <= 1e-8 && max_inside < 1.0;
        o.detail = "max ||Theta| - 1| on the line " + sci(worst_line) + " (limit 1e-8), max interior |Theta| " +
                   fmt17(max_inside);
        return o;
    });

    failed += !criterion(7, "eventual sign constancy of h<2>", 600, [] {
        Outcome o;
        std::ostringstream det;
        for (const char* name : {"ZETA", "CHI4"}) {
            const int eps = reg(name).sign;
            for (double w : {0.1, 0.25, 0.4}) {
                const summatory::SummatoryEvaluator ev(reg(name), w, 2, 10000);
                const auto rep = verify::sign_scan(ev, 1.0, 1e4, 4000);
                const double last = rep.last_change.value_or(1.0);
                const bool ok = rep.terminal_sign == eps && last < 1e3;
                o.pass = o.pass && ok;
                det << name << " w=" << w << ": sign " << rep.terminal_sign << ", " << rep.sign_changes.size()
                    << " changes, last " << (rep.last_change ? fmt17(last) : std::string("none")) << "; ";
            }
        }
        o.detail = det.str();
        return o;
    });

    failed += !criterion(8, "asymptotic law h<2>(x) ~ log x", 300, [] {
        Outcome o;
        const summatory::SummatoryEvaluator ev(reg("ZETA"), 0.25, 2, 10000);
        const auto rep = verify::asymptotic_check(ev, {1e2, 1e3, 1e4});
        o.pass = rep.pass;
        std::ostringstream det;
        det << "ratios";
        for (const auto& r : rep.lhs) det << ' ' << fmt17(r.real());
        o.detail = det.str();
        return o;
    });

    failed += !criterion(9, "L2 mass of h<1> - eps", 300, [] {
        Outcome o;
        const summatory::SummatoryEvaluator ev(reg("CHI4"), 0.25, 1, 10000);
        const auto m = verify::l2_statistic(ev, {1e2, 1e3, 1e4});
        o.pass = verify::l2_trend_ok(m);
        std::ostringstream det;
        double prev = 0.0;
        det << "decade increments";
        for (const auto& [X, mass] : m) {
            det << ' ' << sci(mass - prev);
            prev = mass;
        }
        o.detail = det.str();
        return o;
    });

    failed += !criterion(10, "single zero of the zeta weight", 10, [] {
        Outcome o;
        std::ostringstream det;
        double prev = 1.0;
        for (double w : {0.4, 0.25, 0.1, 0.05}) {
            const auto zeros = verify::weight_sign_changes(w);
            const bool ok = zeros.size() == 1 && zeros[0] < prev;
            o.pass = o.pass && ok;
            det << "w=" << w << ": " << zeros.size() << " zero";
            if (!zeros.empty()) {
                det << " at " << fmt17(zeros[0]);
                prev = zeros[0];
            }
            det << "; ";
        }
        o.detail = det.str();
        return o;
    });

    std::printf("acceptance: %d of 10 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
