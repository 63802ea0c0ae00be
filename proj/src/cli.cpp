#include "sumlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "sumlab/error.hpp"
#include "sumlab/format.hpp"
#include "sumlab/lfunc.hpp"
#include "sumlab/verify.hpp"

namespace sumlab::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw Error(Errc::config_parse_error, "field '" + field + "': " + why);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& field, const std::string& v) {
    double out = 0.0;
    auto t = trim(v);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size()) bad(field, "not a number: '" + v + "'");
    return out;
}

long long to_int(const std::string& field, const std::string& v) {
    long long out = 0;
    auto t = trim(v);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || p != t.data() + t.size()) bad(field, "not an integer: '" + v + "'");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt17(v[i]);
    return out;
}

std::string tag(double omega) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, omega);
    return std::string(buf, res.ptr);
}

struct Element {
    double omega;
    int k;
};

class Runner {
public:
    Runner(const RunConfig& cfg, std::ostream& log)
        : cfg_(cfg), log_(log), f_(lfunc::load_registry().get(cfg.lfunction)) {}

    int run();

private:
    const RunConfig& cfg_;
    std::ostream& log_;
    LFunctionDescriptor f_;
    std::mutex log_mu_;

    std::filesystem::path path(const std::string& stem, const Element& e, const std::string& ext) const {
        return std::filesystem::path(cfg_.out_dir) /
               (stem + "_" + f_.name + "_w" + tag(e.omega) + "_k" + std::to_string(e.k) + ext);
    }

    void header(std::ostream& out, const Element& e) const {
        for (const auto& line : cfg_.echo()) out << "# " << line << '\n';
        out << "# element omega=" << fmt17(e.omega) << " k=" << e.k << '\n';
    }

    void say(const std::string& msg) {
        std::lock_guard lock(log_mu_);
        log_ << msg << '\n';
    }

    weights::Backend backend_for(int k) const {
        if (cfg_.backend == "pipeline") return weights::Backend::pipeline;
        if (cfg_.backend == "closed_form") return weights::Backend::closed_form;
        return weights::has_closed_form(f_) && k >= 1 ? weights::Backend::closed_form : weights::Backend::pipeline;
    }

    std::uint64_t bound() const { return static_cast<std::uint64_t>(std::ceil(cfg_.x_hi)); }

    std::vector<double> decades() const {
        std::vector<double> xs;
        for (double x = 100.0; x <= cfg_.x_hi * (1 + 1e-12); x *= 10.0) xs.push_back(x);
        return xs;
    }

    void write_report(const std::filesystem::path& p, const std::string& body) const {
        std::ofstream out(p);
        if (!out) throw Error(Errc::io_error, "cannot write " + p.string());
        out << body << '\n';
    }

    bool element(const Element& e, int inner_threads);
};

bool Runner::element(const Element& e, int inner_threads) {
    const std::string& cmd = cfg_.command;
    if (cmd == "scan") {
        summatory::SummatoryEvaluator ev(f_, e.omega, e.k, bound(), backend_for(e.k));
        const auto grid = summatory::h_grid(ev, cfg_.x_lo, cfg_.x_hi, cfg_.points, cfg_.spacing, inner_threads);
        std::ofstream out(path("scan", e, ".csv"));
        if (!out) throw Error(Errc::io_error, "cannot write scan CSV");
        header(out, e);
        out << "x,h,k,omega,lfunction\n";
        for (const auto& [x, h] : grid)
            out << fmt17(x) << ',' << fmt17(h) << ',' << e.k << ',' << fmt17(e.omega) << ',' << f_.name << '\n';
        const auto rep = verify::scan_samples(f_.name, e.omega, e.k, grid, cfg_.tolerance("zero_band", 1e-9),
                                              [&ev](double x) { return summatory::h_direct(ev, x); });
        write_report(path("scan", e, "_report.json"), verify::to_json(rep));
        say("scan " + f_.name + " omega=" + fmt17(e.omega) + " k=" + std::to_string(e.k) + ": " +
            std::to_string(rep.sign_changes.size()) + " sign changes, terminal sign " +
            std::to_string(rep.terminal_sign));
        return true;
    }
    if (cmd == "mellin-check") {
        std::vector<cplx> s;
        for (double v : cfg_.s_points.empty() ? std::vector<double>{2.5, 3.0, 4.0} : cfg_.s_points) s.emplace_back(v);
        const auto rep = verify::check_weight_mellin(f_, e.omega, e.k, s, cfg_.tolerance("weight_mellin", 1e-6));
        write_report(path("mellin", e, ".json"), verify::to_json(rep));
        say("mellin-check " + rep.config + ": max rel gap " + fmt17(rep.max_rel_gap) + (rep.pass ? " PASS" : " FAIL"));
        return rep.pass;
    }
    if (cmd == "series-check") {
        const double s = cfg_.s_points.empty() ? 4.0 : cfg_.s_points.front();
        const auto rep = verify::check_series_ratio(f_, e.omega, s, bound(), cfg_.tolerance("series_ratio", 1e-8));
        write_report(path("series", e, ".json"), verify::to_json(rep));
        say("series-check " + rep.config + ": rel gap " + fmt17(rep.max_rel_gap) + (rep.pass ? " PASS" : " FAIL"));
        return rep.pass;
    }
    if (cmd == "theta-map") {
        std::ofstream out(path("theta", e, ".csv"));
        if (!out) throw Error(Errc::io_error, "cannot write theta map");
        header(out, e);
        out << "sigma,t,abs_theta\n";
        const auto sig = summatory::grid_points(cfg_.sigma_lo, cfg_.sigma_hi, cfg_.sigma_points, summatory::Spacing::linear);
        const auto ts = summatory::grid_points(cfg_.t_lo, cfg_.t_hi, cfg_.points, summatory::Spacing::linear);
        const auto prepared = lfunc::prepare_local_data(f_, 64);
        for (double sg : sig)
            for (double t : ts)
                out << fmt17(sg) << ',' << fmt17(t) << ','
                    << fmt17(std::abs(lfunc::theta_ratio(prepared, e.omega, cplx{sg, t}))) << '\n';
        return true;
    }
    if (cmd == "weights-dump") {
        const weights::WeightEvaluator ev(lfunc::prepare_local_data(f_, 64), e.omega, e.k, backend_for(e.k));
        std::ofstream out(path("weights", e, ".csv"));
        if (!out) throw Error(Errc::io_error, "cannot write weight CSV");
        header(out, e);
        ev.export_csv(out, cfg_.points);
        return true;
    }
    if (cmd == "oracle-compare") {
        summatory::SummatoryEvaluator ev(f_, e.omega, e.k, bound(), backend_for(e.k));
        std::mt19937_64 rng(cfg_.seed);
        std::uniform_real_distribution<double> dist(cfg_.x_lo, cfg_.x_hi);
        verify::IdentityReport rep;
        rep.id = "contour_oracle";
        rep.config = f_.name + " omega=" + fmt17(e.omega) + " k=" + std::to_string(e.k) + " c=" + fmt17(cfg_.c) +
                     " T=" + fmt17(cfg_.T);
        rep.notes.push_back("envelope instantiates the majorant psi(n) = |c(n)|");
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            double x = dist(rng);
            if (std::abs(x - std::round(x)) < 1e-6) x += 0.5;
            const auto o = verify::contour_oracle(f_, e.omega, e.k, x, cfg_.c, cfg_.T);
            const double h = summatory::h_direct(ev, x);
            rep.add(x, o.value, h);
            ok = ok && std::abs(o.value - h) <= o.envelope;
            worst = std::max(worst, std::abs(o.value - h) / o.envelope);
        }
        rep.tolerance = 1.0;
        rep.finalize();
        rep.notes.push_back("max |oracle - h| / envelope = " + fmt17(worst));
        rep.pass = ok;
        write_report(path("oracle", e, ".json"), verify::to_json(rep));
        say("oracle-compare " + rep.config + ": worst gap/envelope " + fmt17(worst) + (ok ? " PASS" : " FAIL"));
        return ok;
    }
    if (cmd == "l2") {
        summatory::SummatoryEvaluator ev(f_, e.omega, std::max(1, e.k), bound(), backend_for(1));
        const auto masses = verify::l2_statistic(ev, decades());
        std::ofstream out(path("l2", e, ".csv"));
        if (!out) throw Error(Errc::io_error, "cannot write L2 CSV");
        header(out, e);
        out << "X,mass\n";
        for (const auto& [X, m] : masses) out << fmt17(X) << ',' << fmt17(m) << '\n';
        const bool ok = verify::l2_trend_ok(masses);
        say("l2 " + f_.name + " omega=" + fmt17(e.omega) + ": decade increments " + (ok ? "decreasing PASS" : "FAIL"));
        return ok;
    }
    if (cmd == "asymptotic") {
        summatory::SummatoryEvaluator ev(f_, e.omega, e.k, bound(), backend_for(e.k));
        const auto rep = verify::asymptotic_check(ev, decades());
        write_report(path("asymptotic", e, ".json"), verify::to_json(rep));
        say("asymptotic " + rep.config + (rep.pass ? " PASS" : " FAIL"));
        return rep.pass;
    }
    throw Error(Errc::config_parse_error, "unknown command '" + cmd + "'");
}

int Runner::run() {
    std::filesystem::create_directories(cfg_.out_dir);
    std::vector<Element> elems;
    for (double w : cfg_.omegas)
        for (int k : cfg_.ks) elems.push_back({w, k});
    const int workers = std::max(1, std::min<int>(cfg_.threads, static_cast<int>(elems.size())));
    const int inner = elems.size() == 1 ? cfg_.threads : 1;
    std::vector<int> ok(elems.size(), 0);
    std::vector<std::string> errors(elems.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < elems.size();) {
            try {
                ok[i] = element(elems[i], inner) ? 1 : 0;
            } catch (const std::exception& ex) {
                errors[i] = std::string(ex.what()) + " [lfunction=" + f_.name + " omega=" + fmt17(elems[i].omega) +
                            " k=" + std::to_string(elems[i].k) + "]";
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    int status = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (!errors[i].empty()) {
            log_ << "error: " << errors[i] << '\n';
            status = std::max(status, 3);
        } else if (!ok[i]) {
            status = std::max(status, 1);
        }
    }
    return status;
}

} // namespace

void RunConfig::validate() const {
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
        bad("command", "unknown command '" + command + "'");
    if (omegas.empty()) bad("omega", "at least one value required");
    for (double w : omegas) require_omega(w);
    if (ks.empty()) bad("k", "at least one value required");
    for (int k : ks)
        if (k < 0) bad("k", "must be nonnegative");
    if (!(x_lo > 0.0) || !(x_lo < x_hi)) bad("x-lo", "need 0 < x-lo < x-hi");
    if (x_hi > 1e6) bad("x-hi", "coefficient tables stop at 1e6");
    if (points < 2) bad("points", "need at least two points");
    if (threads < 1) bad("threads", "need at least one thread");
    if (backend != "auto" && backend != "pipeline" && backend != "closed_form")
        bad("backend", "expected auto, pipeline or closed_form");
    if (sigma_points < 2) bad("sigma-points", "need at least two points");
    if (command == "scan" && x_lo < 1.0) bad("x-lo", "scans start at x >= 1");
    if (command == "asymptotic")
        for (int k : ks)
            if (k < 2) bad("k", "the asymptotic law is stated for k >= 2");
    if (command == "oracle-compare")
        for (int k : ks)
            if (k < 1) bad("k", "the contour formula needs k >= 1");
}

std::vector<std::string> RunConfig::echo() const {
    std::vector<std::string> out;
    out.push_back("command=" + command);
    out.push_back("lfunction=" + lfunction);
    out.push_back("omega=" + join(omegas));
    std::string kstr;
    for (std::size_t i = 0; i < ks.size(); ++i) kstr += (i ? "," : "") + std::to_string(ks[i]);
    out.push_back("k=" + kstr);
    out.push_back("x-lo=" + fmt17(x_lo));
    out.push_back("x-hi=" + fmt17(x_hi));
    out.push_back("points=" + std::to_string(points));
    out.push_back(std::string("spacing=") + (spacing == summatory::Spacing::log ? "log" : "linear"));
    out.push_back("backend=" + backend);
    out.push_back("s=" + join(s_points));
    out.push_back("c=" + fmt17(c));
    out.push_back("T=" + fmt17(T));
    out.push_back("seed=" + std::to_string(seed));
    out.push_back("sigma-lo=" + fmt17(sigma_lo));
    out.push_back("sigma-hi=" + fmt17(sigma_hi));
    out.push_back("sigma-points=" + std::to_string(sigma_points));
    out.push_back("t-lo=" + fmt17(t_lo));
    out.push_back("t-hi=" + fmt17(t_hi));
    for (const auto& [key, v] : tolerances) out.push_back("tol-override=" + key + "=" + fmt17(v));
    return out;
}

double RunConfig::tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "command") cfg.command = value;
    else if (key == "lfunction") cfg.lfunction = value;
    else if (key == "omega") {
        cfg.omegas.clear();
        for (const auto& v : split(value, ',')) cfg.omegas.push_back(to_double(key, v));
    } else if (key == "k") {
        cfg.ks.clear();
        for (const auto& v : split(value, ',')) cfg.ks.push_back(static_cast<int>(to_int(key, v)));
    } else if (key == "x-lo") cfg.x_lo = to_double(key, value);
    else if (key == "x-hi") cfg.x_hi = to_double(key, value);
    else if (key == "points") cfg.points = static_cast<int>(to_int(key, value));
    else if (key == "spacing") {
        if (value == "log") cfg.spacing = summatory::Spacing::log;
        else if (value == "linear") cfg.spacing = summatory::Spacing::linear;
        else bad(key, "expected log or linear");
    } else if (key == "out") cfg.out_dir = value;
    else if (key == "threads") cfg.threads = static_cast<int>(to_int(key, value));
    else if (key == "backend") cfg.backend = value;
    else if (key == "s") {
        cfg.s_points.clear();
        for (const auto& v : split(value, ',')) cfg.s_points.push_back(to_double(key, v));
    } else if (key == "c") cfg.c = to_double(key, value);
    else if (key == "T") cfg.T = to_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "sigma-lo") cfg.sigma_lo = to_double(key, value);
    else if (key == "sigma-hi") cfg.sigma_hi = to_double(key, value);
    else if (key == "sigma-points") cfg.sigma_points = static_cast<int>(to_int(key, value));
    else if (key == "t-lo") cfg.t_lo = to_double(key, value);
    else if (key == "t-hi") cfg.t_hi = to_double(key, value);
    else if (key == "tol-override") {
        const auto eq = value.find('=');
        if (eq == std::string::npos) bad(key, "expected KEY=VAL");
        cfg.tolerances[trim(value.substr(0, eq))] = to_double(key, value.substr(eq + 1));
    } else bad(key, "unknown setting");
}

void apply_config_file(RunConfig& cfg, std::istream& in, const std::string& origin) {
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::config_parse_error, origin + ":" + std::to_string(line) + ": expected key=value");
        try {
            apply_setting(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error(Errc::config_parse_error, origin + ":" + std::to_string(line) + ": " + e.what());
        }
    }
}

int run(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    Runner r(cfg, log);
    return r.run();
}

} // namespace sumlab::cli
