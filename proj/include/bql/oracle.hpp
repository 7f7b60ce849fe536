#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>

#include "bql/coboson.hpp"

namespace bql::oracle {

inline constexpr std::size_t kMaxModes = 12;
inline constexpr std::size_t kMaxBosons = 4;

/// Which modes a creator on mode k anticommutes past within its own species.
enum class SignConvention { lower_modes, higher_modes };

/// Occupation bitmasks of species A and B.
using PairKey = std::pair<std::uint32_t, std::uint32_t>;

/// Sparse vector in the two-species fermionic Fock space over d modes.
class PairFockVector {
public:
    explicit PairFockVector(std::size_t d);
    static PairFockVector vacuum(std::size_t d);

    std::size_t d() const noexcept { return d_; }
    const std::map<PairKey, std::complex<double>>& amplitudes() const noexcept { return amps_; }

    void add(PairKey key, std::complex<double> amp);
    /// Drops entries with |amp| < 1e-15.
    void prune();

    double norm_sq() const noexcept;
    std::complex<double> inner(const PairFockVector& other) const;  // <this|other>

    PairFockVector& operator+=(const PairFockVector& other);
    PairFockVector& operator-=(const PairFockVector& other);
    PairFockVector& operator*=(std::complex<double> s);

private:
    std::size_t d_;
    std::map<PairKey, std::complex<double>> amps_;
};

/// c^† = sum_k sqrt(lambda_k) a_k^† b_k^†.
PairFockVector apply_pair_creation(const PairFockVector& v, const SchmidtSpectrum& spectrum,
                                   SignConvention conv = SignConvention::lower_modes);

/// c = sum_k sqrt(lambda_k) b_k a_k.
PairFockVector apply_pair_annihilation(const PairFockVector& v, const SchmidtSpectrum& spectrum,
                                       SignConvention conv = SignConvention::lower_modes);

/// Delta = sum_k lambda_k (n^A_k + n^B_k), diagonal in occupations.
PairFockVector apply_delta(const PairFockVector& v, const SchmidtSpectrum& spectrum);

/// Normalized |n>. Zero vector when n exceeds the Schmidt rank.
PairFockVector coboson_state(const SchmidtSpectrum& spectrum, std::size_t n,
                             SignConvention conv = SignConvention::lower_modes);

/// Table computed by explicit construction of c^{†n}|0>.
/// Throws ResourceLimit beyond d = 12 or n_max = 4, PauliBlocked past the rank.
CobosonTable oracle_coboson_table(const SchmidtSpectrum& spectrum, std::size_t n_max,
                                  SignConvention conv = SignConvention::lower_modes);

/// ‖([c, c^†] - (1 - Delta)) |n>‖
double oracle_commutator_check(const SchmidtSpectrum& spectrum, std::size_t n,
                               SignConvention conv = SignConvention::lower_modes);

}  // namespace bql::oracle
