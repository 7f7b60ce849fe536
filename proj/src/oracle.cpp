#include "bql/oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "bql/errors.hpp"

namespace bql::oracle {

namespace {

constexpr double kPrune = 1e-15;

// Jordan-Wigner parity of the modes a creator/annihilator on `mode` passes.
int parity_sign(std::uint32_t occupation, std::size_t mode, SignConvention conv) {
    const std::uint32_t below = (std::uint32_t{1} << mode) - 1u;
    const std::uint32_t passed =
        conv == SignConvention::lower_modes ? (occupation & below) : (occupation & ~below & ~(std::uint32_t{1} << mode));
    return (std::popcount(passed) % 2 == 0) ? 1 : -1;
}

void check_budget(std::size_t d, std::size_t n) {
    if (d > kMaxModes || n > kMaxBosons) {
        throw ResourceLimit("oracle budget is d <= " + std::to_string(kMaxModes) + ", n <= " +
                            std::to_string(kMaxBosons));
    }
}

void check_modes(const PairFockVector& v, const SchmidtSpectrum& spectrum) {
    if (v.d() != spectrum.d()) {
        throw InvalidArgument("vector and spectrum disagree on the number of modes");
    }
}

}  // namespace

PairFockVector::PairFockVector(std::size_t d) : d_(d) {
    if (d > 32) {
        throw ResourceLimit("occupation masks hold at most 32 modes");
    }
}

PairFockVector PairFockVector::vacuum(std::size_t d) {
    PairFockVector v(d);
    v.add({0u, 0u}, 1.0);
    return v;
}

void PairFockVector::add(PairKey key, std::complex<double> amp) { amps_[key] += amp; }

void PairFockVector::prune() {
    std::erase_if(amps_, [](const auto& kv) { return std::abs(kv.second) < kPrune; });
}

double PairFockVector::norm_sq() const noexcept {
    double acc = 0.0;
    for (const auto& [key, amp] : amps_) {
        acc += std::norm(amp);
    }
    return acc;
}

std::complex<double> PairFockVector::inner(const PairFockVector& other) const {
    std::complex<double> acc = 0.0;
    for (const auto& [key, amp] : amps_) {
        if (auto it = other.amps_.find(key); it != other.amps_.end()) {
            acc += std::conj(amp) * it->second;
        }
    }
    return acc;
}

PairFockVector& PairFockVector::operator+=(const PairFockVector& other) {
    for (const auto& [key, amp] : other.amps_) {
        amps_[key] += amp;
    }
    return *this;
}

PairFockVector& PairFockVector::operator-=(const PairFockVector& other) {
    for (const auto& [key, amp] : other.amps_) {
        amps_[key] -= amp;
    }
    return *this;
}

PairFockVector& PairFockVector::operator*=(std::complex<double> s) {
    for (auto& [key, amp] : amps_) {
        amp *= s;
    }
    return *this;
}

PairFockVector apply_pair_creation(const PairFockVector& v, const SchmidtSpectrum& spectrum,
                                   SignConvention conv) {
    check_modes(v, spectrum);
    PairFockVector out(v.d());
    const auto lambdas = spectrum.lambdas();
    for (const auto& [key, amp] : v.amplitudes()) {
        const auto [occ_a, occ_b] = key;
        for (std::size_t k = 0; k < v.d(); ++k) {
            const std::uint32_t bit = std::uint32_t{1} << k;
            if ((occ_a & bit) || (occ_b & bit) || lambdas[k] == 0.0) {
                continue;
            }
            // a_k^† b_k^†: b^† acts first; species commute with each other.
            const int sign = parity_sign(occ_b, k, conv) * parity_sign(occ_a, k, conv);
            out.add({occ_a | bit, occ_b | bit}, amp * (sign * std::sqrt(lambdas[k])));
        }
    }
    out.prune();
    return out;
}

PairFockVector apply_pair_annihilation(const PairFockVector& v, const SchmidtSpectrum& spectrum,
                                       SignConvention conv) {
    check_modes(v, spectrum);
    PairFockVector out(v.d());
    const auto lambdas = spectrum.lambdas();
    for (const auto& [key, amp] : v.amplitudes()) {
        const auto [occ_a, occ_b] = key;
        for (std::size_t k = 0; k < v.d(); ++k) {
            const std::uint32_t bit = std::uint32_t{1} << k;
            if (!(occ_a & bit) || !(occ_b & bit) || lambdas[k] == 0.0) {
                continue;
            }
            // b_k a_k: a acts first.
            const int sign = parity_sign(occ_a, k, conv) * parity_sign(occ_b, k, conv);
            out.add({occ_a & ~bit, occ_b & ~bit}, amp * (sign * std::sqrt(lambdas[k])));
        }
    }
    out.prune();
    return out;
}

PairFockVector apply_delta(const PairFockVector& v, const SchmidtSpectrum& spectrum) {
    check_modes(v, spectrum);
    PairFockVector out(v.d());
    const auto lambdas = spectrum.lambdas();
    for (const auto& [key, amp] : v.amplitudes()) {
        double weight = 0.0;
        for (std::size_t k = 0; k < v.d(); ++k) {
            const std::uint32_t bit = std::uint32_t{1} << k;
            weight += lambdas[k] * (((key.first & bit) ? 1.0 : 0.0) + ((key.second & bit) ? 1.0 : 0.0));
        }
        out.add(key, amp * weight);
    }
    out.prune();
    return out;
}

PairFockVector coboson_state(const SchmidtSpectrum& spectrum, std::size_t n, SignConvention conv) {
    auto v = PairFockVector::vacuum(spectrum.d());
    for (std::size_t i = 0; i < n; ++i) {
        v = apply_pair_creation(v, spectrum, conv);
    }
    const double nrm = v.norm_sq();
    if (nrm > 0.0) {
        v *= 1.0 / std::sqrt(nrm);
    }
    return v;
}

CobosonTable oracle_coboson_table(const SchmidtSpectrum& spectrum, std::size_t n_max,
                                  SignConvention conv) {
    check_budget(spectrum.d(), n_max);
    if (n_max < 1) {
        throw InvalidArgument("coboson table needs n_max >= 1");
    }
    if (n_max + 1 > spectrum.rank()) {
        throw PauliBlocked("n_max + 1 exceeds the Schmidt rank");
    }

    // Unnormalized c^{†n}|0> and the normalized |n>.
    std::vector<PairFockVector> raw;
    std::vector<PairFockVector> kets;
    raw.push_back(PairFockVector::vacuum(spectrum.d()));
    for (std::size_t n = 1; n <= n_max + 1; ++n) {
        raw.push_back(apply_pair_creation(raw.back(), spectrum, conv));
    }

    CobosonTable t;
    double factorial = 1.0;
    for (std::size_t n = 0; n <= n_max + 1; ++n) {
        if (n > 0) {
            factorial *= static_cast<double>(n);
        }
        const double nrm = raw[n].norm_sq();
        t.chi.push_back(nrm / factorial);
        PairFockVector ket = raw[n];
        ket *= 1.0 / std::sqrt(nrm);
        kets.push_back(std::move(ket));
    }

    for (std::size_t n = 1; n <= n_max + 1; ++n) {
        const auto lowered = apply_pair_annihilation(kets[n], spectrum, conv);
        const auto overlap = kets[n - 1].inner(lowered);
        t.alpha_sq.push_back(std::norm(overlap) / static_cast<double>(n));
        if (n <= n_max) {
            PairFockVector eps = lowered;
            PairFockVector along = kets[n - 1];
            along *= overlap;
            eps -= along;
            t.eps_norm_sq.push_back(eps.norm_sq());
            t.delta_diag.push_back(kets[n].inner(apply_delta(kets[n], spectrum)).real());
        }
    }

    // Tr(rho_A^2) of the single-pair state, tracing out species B.
    std::map<std::uint32_t, std::map<std::uint32_t, std::complex<double>>> by_b;
    for (const auto& [key, amp] : kets[1].amplitudes()) {
        by_b[key.second][key.first] += amp;
    }
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::complex<double>> rho_a;
    for (const auto& [b, column] : by_b) {
        for (const auto& [a1, x] : column) {
            for (const auto& [a2, y] : column) {
                rho_a[{a1, a2}] += x * std::conj(y);
            }
        }
    }
    double purity = 0.0;
    for (const auto& [key, val] : rho_a) {
        purity += std::norm(val);
    }
    t.purity = purity;
    return t;
}

double oracle_commutator_check(const SchmidtSpectrum& spectrum, std::size_t n,
                               SignConvention conv) {
    check_budget(spectrum.d(), n);
    if (n > spectrum.rank()) {
        throw PauliBlocked("no " + std::to_string(n) + "-coboson state at this Schmidt rank");
    }
    const auto ket = coboson_state(spectrum, n, conv);
    auto residual = apply_pair_annihilation(apply_pair_creation(ket, spectrum, conv), spectrum, conv);
    residual -= apply_pair_creation(apply_pair_annihilation(ket, spectrum, conv), spectrum, conv);
    residual -= ket;
    residual += apply_delta(ket, spectrum);
    return std::sqrt(residual.norm_sq());
}

}  // namespace bql::oracle
