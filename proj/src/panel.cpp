#include "sumlab/panel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sumlab/error.hpp"

namespace sumlab::weights {

namespace {

constexpr int N = PanelFunction::ncoef;

struct Nodes {
    std::array<double, N> t;
    std::array<std::array<double, N>, N> cosines; // cos(pi j (m + 1/2) / N)
};

const Nodes& nodes() {
    static const Nodes n = [] {
        Nodes out;
        for (int m = 0; m < N; ++m) {
            out.t[m] = std::cos(std::numbers::pi * (m + 0.5) / N);
            for (int j = 0; j < N; ++j) out.cosines[j][m] = std::cos(std::numbers::pi * j * (m + 0.5) / N);
        }
        return out;
    }();
    return n;
}

struct Span {
    double lo, hi;
};

Span panel_span(int p) {
    if (p < PanelFunction::graded_panels) {
        const double lo = std::ldexp(PanelFunction::H, -p - 1);
        return {lo, 2.0 * lo};
    }
    const int i = p - PanelFunction::graded_panels;
    return {PanelFunction::H * (i + 1), PanelFunction::H * (i + 2)};
}

} // namespace

double PanelFunction::u_floor() const { return std::ldexp(H, -graded_panels); }

PanelFunction PanelFunction::sample(const std::function<double(double)>& fn, double u_max,
                                    double exponent) {
    if (!(u_max > H)) throw Error(Errc::domain_error, "panel table needs u_max > 1/4");
    PanelFunction out;
    out.n_uniform_ = static_cast<int>(std::ceil(u_max / H)) - 1;
    out.u_max_ = H * (out.n_uniform_ + 1);
    out.exponent_ = exponent;
    const int panels = graded_panels + out.n_uniform_;
    out.coef_.assign(static_cast<std::size_t>(panels) * N, 0.0);
    const auto& nd = nodes();
    std::array<double, N> vals;
    for (int p = 0; p < panels; ++p) {
        const auto [lo, hi] = panel_span(p);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double scale = 0.0;
        for (int m = 0; m < N; ++m) {
            vals[m] = fn(mid + half * nd.t[m]);
            if (!std::isfinite(vals[m]))
                throw Error(Errc::grid_resolution_insufficient,
                            "non-finite weight sample at u = " + std::to_string(mid + half * nd.t[m]));
            scale = std::max(scale, std::abs(vals[m]));
        }
        double* c = &out.coef_[static_cast<std::size_t>(p) * N];
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int m = 0; m < N; ++m) s += vals[m] * nd.cosines[j][m];
            c[j] = (j == 0 ? 1.0 : 2.0) * s / N;
        }
        if (scale > 0.0)
            out.residual_ = std::max(out.residual_, (std::abs(c[N - 1]) + std::abs(c[N - 2])) / scale);
    }
    out.floor_value_ = fn(out.u_floor());
    return out;
}

double PanelFunction::operator()(double u) const {
    if (u <= 0.0) return exponent_ > 0.0 ? 0.0 : (exponent_ == 0.0 ? floor_value_ : INFINITY);
    const double uf = u_floor();
    if (u < uf) return floor_value_ * std::pow(u / uf, exponent_);
    if (u > u_max_) {
        if (u > u_max_ * (1.0 + 1e-14))
            throw Error(Errc::table_too_small,
                        "weight table covers u <= " + std::to_string(u_max_) + ", asked for " +
                            std::to_string(u));
        u = u_max_;
    }
    int p;
    double t;
    if (u < H) {
        const int e = std::ilogb(u / H); // in [-graded, -1]
        p = -e - 1;
        t = 2.0 * std::scalbn(u / H, -e) - 3.0;
    } else {
        const double y = u / H;
        const double fl = std::min(std::floor(y), static_cast<double>(n_uniform_));
        p = graded_panels + static_cast<int>(fl) - 1;
        t = 2.0 * (y - fl) - 1.0;
    }
    return clenshaw(&coef_[static_cast<std::size_t>(p) * N], t);
}

PanelFunction PanelFunction::antiderivative() const {
    PanelFunction out;
    out.u_max_ = u_max_;
    out.n_uniform_ = n_uniform_;
    out.exponent_ = exponent_ + 1.0;
    if (!(out.exponent_ > 0.0))
        throw Error(Errc::domain_error, "antiderivative of a non-integrable table");
    out.coef_.assign(coef_.size(), 0.0);
    const double uf = u_floor();
    out.floor_value_ = floor_value_ * uf / out.exponent_;
    double offset = out.floor_value_;
    const int panels = graded_panels + n_uniform_;
    // walk panels in increasing u
    auto visit = [&](int p) {
        const auto [lo, hi] = panel_span(p);
        const double half = 0.5 * (hi - lo);
        const double* c = &coef_[static_cast<std::size_t>(p) * N];
        double* C = &out.coef_[static_cast<std::size_t>(p) * N];
        auto cj = [&](int j) { return j < N ? c[j] : 0.0; };
        C[1] = cj(0) - 0.5 * cj(2);
        for (int j = 2; j < N; ++j) C[j] = (cj(j - 1) - cj(j + 1)) / (2.0 * j);
        double at_left = 0.0;
        for (int j = 1; j < N; ++j) at_left += (j % 2 ? -C[j] : C[j]);
        C[0] = -at_left;
        for (int j = 0; j < N; ++j) C[j] *= half;
        C[0] += offset;
        double at_right = 0.0;
        for (int j = 0; j < N; ++j) at_right += C[j];
        offset = at_right;
    };
    for (int p = graded_panels - 1; p >= 0; --p) visit(p);
    for (int p = graded_panels; p < panels; ++p) visit(p);
    return out;
}

} // namespace sumlab::weights
