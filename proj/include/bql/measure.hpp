#pragma once

#include <cstddef>
#include <optional>

#include "bql/channels.hpp"
#include "bql/fock.hpp"

namespace bql {

/// Outcome of one addition-then-subtraction experiment read out by the
/// vacuum detector.
struct MeasureReport {
    double p0_initial;
    double p0_as;
    double m_raw;     ///< p0_initial - p0_as
    double m_script;  ///< 2 - 3 p0_as
    double add_success;
    double sub_success;
    bool calibrated;  ///< initial state was {2/3, 1/3}
    LadderChannel channel_descriptor;
};

/// Conditions on both heralds. `sub` defaults to add.conjugate().
MeasureReport run_as_pipeline(const NumberDistribution& initial, const LadderChannel& add,
                              const std::optional<LadderChannel>& sub = std::nullopt);

/// p0 = (n_max+1)/(n_max+2) on |0>, the rest on |n_max>.
NumberDistribution optimal_initial_distribution(std::size_t n_max);

/// n_max/(n_max+2)
double boson_m_max(std::size_t n_max);

/// M = p0 (1 - 1/(p0 + (1-p0)(f1/f0)^4)) for a two-point state {p0, 1-p0}.
double general_m_closed_form(double p0, double f0, double f1);

/// Stationary point of general_m_closed_form in p0: 1/(1 + (f0/f1)^2).
/// A maximum when f1 > f0; for f1 < f0 the measure is non-positive and this
/// is its minimum.
double channel_optimal_p0(double f0, double f1);

/// 2 - 3 p0_as
constexpr double script_measure(double p0_as) noexcept { return 2.0 - 3.0 * p0_as; }

}  // namespace bql
