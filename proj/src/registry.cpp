#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sumlab/error.hpp"
#include "sumlab/lfunc.hpp"

namespace sumlab::lfunc {

namespace {

constexpr const char* shipped_registry = R"([ZETA]
degree = 1
kappa = 0
conductor = 1
pole_order = 1
sign = 1
satake = characters
root_characters = 1

[CHI3]
degree = 1
kappa = 1
conductor = 3
pole_order = 0
sign = 1
satake = characters
character = 0,1,-1
root_characters = 0,1,-1

[CHI4]
degree = 1
kappa = 1
conductor = 4
pole_order = 0
sign = 1
satake = characters
character = 0,1,0,-1
root_characters = 0,1,0,-1

[CHI8]
degree = 1
kappa = 0
conductor = 8
pole_order = 0
sign = 1
satake = characters
character = 0,1,0,-1,0,-1,0,1
root_characters = 0,1,0,-1,0,-1,0,1

[PRODUCT]
degree = 2
kappa = 0, 1
conductor = 4
pole_order = 1
sign = 1
satake = characters
root_characters = 1 | 0,1,0,-1

[DELTA]
degree = 2
kappa = 5.5, 6.5
conductor = 1
pole_order = 0
sign = 1
satake = cusp_delta
coefficient_cache = delta_lambda.bin
)";

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_fail(int line, const std::string& why) {
    throw Error(Errc::config_parse_error, "registry line " + std::to_string(line) + ": " + why);
}

// Split on sep, ignoring separators inside parentheses.
std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& s, int line) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v;
    if (!(is >> v) || !(is >> std::ws).eof()) parse_fail(line, "bad number '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, int line) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        parse_fail(line, "bad integer '" + s + "'");
    }
    if (pos != s.size()) parse_fail(line, "bad integer '" + s + "'");
    return v;
}

cplx parse_complex(const std::string& s, int line) {
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') parse_fail(line, "unbalanced '" + s + "'");
        auto parts = split_top(std::string_view(s).substr(1, s.size() - 2), ',');
        if (parts.size() != 2) parse_fail(line, "complex values are written (re,im)");
        return {parse_double(parts[0], line), parse_double(parts[1], line)};
    }
    return {parse_double(s, line), 0.0};
}

DirichletCharacter parse_character(const std::string& s, int line) {
    DirichletCharacter chi;
    for (const auto& v : split_top(s, ',')) chi.values.push_back(static_cast<int>(parse_int(v, line)));
    return chi;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

std::string format_character(const DirichletCharacter& chi) {
    std::string out;
    for (std::size_t i = 0; i < chi.values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(chi.values[i]);
    }
    return out;
}

std::string format_complex(cplx z) {
    if (z.imag() == 0.0) return format_double(z.real());
    return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")";
}

void apply_key(LFunctionDescriptor& f, const std::string& key, const std::string& value, int line) {
    if (key == "degree") {
        f.degree = static_cast<int>(parse_int(value, line));
    } else if (key == "kappa") {
        f.kappas.clear();
        for (const auto& t : split_top(value, ',')) f.kappas.push_back(parse_complex(t, line));
    } else if (key == "conductor") {
        const auto q = parse_int(value, line);
        if (q < 1) parse_fail(line, "conductor must be positive");
        f.conductor = static_cast<std::uint64_t>(q);
    } else if (key == "pole_order") {
        f.pole_order = static_cast<int>(parse_int(value, line));
    } else if (key == "sign") {
        f.sign = static_cast<int>(parse_int(value, line));
    } else if (key == "satake") {
        if (value == "characters") f.source = SatakeSource::characters;
        else if (value == "cusp_delta") f.source = SatakeSource::cusp_delta;
        else if (value == "explicit") f.source = SatakeSource::explicit_table;
        else parse_fail(line, "unknown satake source '" + value + "'");
    } else if (key == "character") {
        f.character = parse_character(value, line);
    } else if (key == "root_characters") {
        f.root_characters.clear();
        for (const auto& t : split_top(value, '|')) f.root_characters.push_back(parse_character(t, line));
    } else if (key == "coefficient_cache") {
        f.coefficient_cache = value;
    } else if (key.rfind("local.", 0) == 0) {
        const auto p = parse_int(key.substr(6), line);
        if (p < 2) parse_fail(line, "local data needs a prime index");
        SatakeLocal loc;
        loc.prime = static_cast<std::uint64_t>(p);
        for (const auto& t : split_top(value, ',')) loc.alphas.push_back(parse_complex(t, line));
        f.local_data[loc.prime] = std::move(loc);
    } else {
        parse_fail(line, "unknown key '" + key + "'");
    }
}

std::filesystem::path cache_dir() {
    if (const char* env = std::getenv("SUMLAB_CACHE_DIR"); env && *env) return env;
    return std::filesystem::temp_directory_path() / "sumlab";
}

} // namespace

const LFunctionDescriptor& Registry::get(const std::string& name) const {
    for (const auto& f : entries_)
        if (f.name == name) return f;
    throw Error(Errc::domain_error, "unknown L-function '" + name + "'");
}

bool Registry::contains(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& f) { return f.name == name; });
}

void Registry::add(LFunctionDescriptor f) {
    f.validate();
    for (auto& e : entries_)
        if (e.name == f.name) {
            e = std::move(f);
            return;
        }
    entries_.push_back(std::move(f));
}

Registry parse_registry(std::istream& in) {
    Registry reg;
    std::optional<LFunctionDescriptor> cur;
    int section_line = 0;
    auto flush = [&] {
        if (!cur) return;
        try {
            reg.add(std::move(*cur));
        } catch (const Error& e) {
            parse_fail(section_line, e.what());
        }
        cur.reset();
    };
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') parse_fail(line, "unterminated section header");
            flush();
            cur.emplace();
            cur->name = trim(std::string_view(s).substr(1, s.size() - 2));
            if (cur->name.empty()) parse_fail(line, "empty section name");
            section_line = line;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) parse_fail(line, "expected key = value");
        if (!cur) parse_fail(line, "key outside a section");
        apply_key(*cur, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line);
    }
    flush();
    return reg;
}

std::string serialize_registry(const Registry& reg) {
    std::ostringstream os;
    bool first = true;
    for (const auto& f : reg.entries()) {
        if (!first) os << '\n';
        first = false;
        os << '[' << f.name << "]\n";
        os << "degree = " << f.degree << '\n';
        os << "kappa = ";
        for (std::size_t i = 0; i < f.kappas.size(); ++i)
            os << (i ? ", " : "") << format_complex(f.kappas[i]);
        os << '\n';
        os << "conductor = " << f.conductor << '\n';
        os << "pole_order = " << f.pole_order << '\n';
        os << "sign = " << f.sign << '\n';
        switch (f.source) {
        case SatakeSource::characters: os << "satake = characters\n"; break;
        case SatakeSource::cusp_delta: os << "satake = cusp_delta\n"; break;
        case SatakeSource::explicit_table: os << "satake = explicit\n"; break;
        }
        if (f.character) os << "character = " << format_character(*f.character) << '\n';
        if (!f.root_characters.empty()) {
            os << "root_characters = ";
            for (std::size_t i = 0; i < f.root_characters.size(); ++i)
                os << (i ? " | " : "") << format_character(f.root_characters[i]);
            os << '\n';
        }
        if (!f.coefficient_cache.empty()) os << "coefficient_cache = " << f.coefficient_cache << '\n';
        for (const auto& [p, loc] : f.local_data) {
            os << "local." << p << " = ";
            for (std::size_t i = 0; i < loc.alphas.size(); ++i)
                os << (i ? ", " : "") << format_complex(loc.alphas[i]);
            os << '\n';
        }
    }
    return os.str();
}

Registry default_registry() {
    std::istringstream in(shipped_registry);
    return parse_registry(in);
}

Registry load_registry() {
    const char* env = std::getenv("SUMLAB_REGISTRY");
    if (!env || !*env) return default_registry();
    std::ifstream in(env);
    if (!in) throw Error(Errc::io_error, std::string("cannot open registry file ") + env);
    return parse_registry(in);
}

std::vector<double> delta_coefficients(std::uint64_t N) {
    std::vector<double> lambda(N + 1, 0.0);
    if (N == 0) return lambda;
    const std::size_t len = N; // coefficients of q^0 .. q^{N-1}
    // prod (1 - q^n)^3 = sum_m (-1)^m (2m+1) q^{m(m+1)/2}
    std::vector<std::pair<std::size_t, __int128>> jacobi;
    for (std::size_t m = 0; m * (m + 1) / 2 < len; ++m)
        jacobi.emplace_back(m * (m + 1) / 2, (m % 2 ? -1 : 1) * static_cast<__int128>(2 * m + 1));
    std::vector<__int128> acc(len, 0), next(len);
    for (const auto& [e, c] : jacobi) acc[e] = c;
    for (int power = 2; power <= 8; ++power) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t i = 0; i < len; ++i) {
            if (acc[i] == 0) continue;
            for (const auto& [e, c] : jacobi) {
                if (i + e >= len) break;
                next[i + e] += acc[i] * c;
            }
        }
        acc.swap(next);
    }
    for (std::uint64_t n = 1; n <= N; ++n) {
        const auto tau = static_cast<long double>(acc[n - 1]);
        lambda[n] = static_cast<double>(tau / std::pow(static_cast<long double>(n), 5.5L));
    }
    return lambda;
}

void write_coefficient_cache(const std::string& path, const std::vector<double>& lambda) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write coefficient cache " + tmp);
        for (double v : lambda) {
            auto bits = std::bit_cast<std::uint64_t>(v);
            char bytes[8];
            for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
            out.write(bytes, 8);
        }
        if (!out) throw Error(Errc::io_error, "short write to " + tmp);
    }
    std::filesystem::rename(tmp, p);
}

std::vector<double> read_coefficient_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open coefficient cache " + path);
    std::vector<double> out;
    char bytes[8];
    while (in.read(bytes, 8)) {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
        out.push_back(std::bit_cast<double>(bits));
    }
    if (in.gcount() != 0) throw Error(Errc::io_error, "truncated coefficient cache " + path);
    return out;
}

LFunctionDescriptor prepare_local_data(const LFunctionDescriptor& f, std::uint64_t N) {
    LFunctionDescriptor out = f;
    if (f.source != SatakeSource::cusp_delta) return out;
    if (f.cusp && f.cusp->bound() >= N) return out;
    const std::uint64_t want = std::max<std::uint64_t>(N, 64);
    std::vector<double> lambda;
    std::filesystem::path path;
    if (!f.coefficient_cache.empty()) {
        path = f.coefficient_cache;
        if (path.is_relative()) path = cache_dir() / path;
        std::error_code ec;
        if (std::filesystem::exists(path, ec)) {
            try {
                lambda = read_coefficient_cache(path.string());
            } catch (const Error&) {
                lambda.clear();
            }
        }
    }
    if (lambda.size() < want + 1) {
        lambda = delta_coefficients(want);
        if (!path.empty()) {
            try {
                write_coefficient_cache(path.string(), lambda);
            } catch (const std::exception&) {
                // caching is best effort
            }
        }
    }
    auto cusp = std::make_shared<CuspCoefficients>();
    cusp->lambda = std::move(lambda);
    out.cusp = std::move(cusp);
    return out;
}

} // namespace sumlab::lfunc
