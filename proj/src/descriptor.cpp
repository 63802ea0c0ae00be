#include <algorithm>
#include <cmath>

#include "sumlab/descriptor.hpp"
#include "sumlab/error.hpp"

namespace sumlab {

int DirichletCharacter::parity() const {
    if (values.size() <= 1) return 0;
    return values.back() == -1 ? 1 : 0;
}

void SatakeLocal::validate(std::uint64_t conductor) const {
    const double p = static_cast<double>(prime);
    for (const cplx& a : alphas) {
        if (!(std::abs(a) < p))
            throw Error(Errc::domain_error,
                        "Satake parameter at p = " + std::to_string(prime) + " violates |alpha| < p");
        if (conductor % prime != 0 && a == cplx{0.0, 0.0})
            throw Error(Errc::domain_error, "Satake parameter vanishes at unramified p = " +
                                                std::to_string(prime));
    }
}

SatakeLocal LFunctionDescriptor::satake(std::uint64_t p) const {
    SatakeLocal out;
    out.prime = p;
    switch (source) {
    case SatakeSource::characters:
        for (const auto& chi : root_characters) out.alphas.emplace_back(chi(p), 0.0);
        return out;
    case SatakeSource::cusp_delta: {
        if (!cusp || cusp->bound() < p)
            throw Error(Errc::missing_local_data,
                        name + ": no Hecke eigenvalue for p = " + std::to_string(p));
        const double lam = cusp->lambda[p];
        const double disc = lam * lam - 4.0;
        if (disc <= 0.0) {
            const double im = 0.5 * std::sqrt(-disc);
            out.alphas = {{0.5 * lam, im}, {0.5 * lam, -im}};
        } else {
            const double root = 0.5 * std::sqrt(disc);
            out.alphas = {{0.5 * lam + root, 0.0}, {0.5 * lam - root, 0.0}};
        }
        return out;
    }
    case SatakeSource::explicit_table: {
        auto it = local_data.find(p);
        if (it == local_data.end())
            throw Error(Errc::missing_local_data,
                        name + ": no Satake entry for p = " + std::to_string(p));
        return it->second;
    }
    }
    throw Error(Errc::missing_local_data, name + ": unknown Satake source");
}

bool LFunctionDescriptor::real_shifts() const {
    return std::all_of(kappas.begin(), kappas.end(), [](cplx k) { return k.imag() == 0.0; });
}

void LFunctionDescriptor::validate() const {
    auto fail = [this](const std::string& why) {
        throw Error(Errc::domain_error, "descriptor " + name + ": " + why);
    };
    if (degree < 1) fail("degree must be positive");
    if (static_cast<int>(kappas.size()) != degree) fail("need one gamma shift per degree");
    for (const cplx& k : kappas) {
        if (!(k.real() > -1.0)) fail("gamma shifts need Re(kappa) > -1");
        if (k.imag() != 0.0) {
            const bool paired = std::any_of(kappas.begin(), kappas.end(),
                                            [k](cplx o) { return o == std::conj(k); });
            if (!paired) fail("complex gamma shifts must come in conjugate pairs");
        }
    }
    if (conductor < 1) fail("conductor must be at least 1");
    if (pole_order < 0) fail("pole order must be nonnegative");
    if (sign != 1 && sign != -1) fail("sign must be +1 or -1");
    if (source == SatakeSource::characters) {
        if (static_cast<int>(root_characters.size()) != degree)
            fail("need one root character per degree");
        for (const auto& chi : root_characters) {
            if (chi.values.empty()) fail("empty character table");
            for (int v : chi.values)
                if (v < -1 || v > 1) fail("characters must be real");
        }
    }
    if (character) {
        if (character->modulus() != conductor) fail("character modulus differs from conductor");
        for (int v : character->values)
            if (v < -1 || v > 1) fail("characters must be real");
    }
    for (const auto& [p, local] : local_data) {
        if (static_cast<int>(local.alphas.size()) != degree) fail("Satake data of wrong length");
        local.validate(conductor);
    }
}

} // namespace sumlab
