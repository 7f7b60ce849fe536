#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bql/fock.hpp"

namespace bql {

enum class Direction { addition, subtraction };

enum class ChannelKind { optimal, distinguishable, pdc, bs, feshbach, custom };

std::string_view to_string(ChannelKind kind) noexcept;
ChannelKind channel_kind_from_string(std::string_view name);

/// Heralded Kraus element of a single-particle ladder.
///
/// Coefficient f[n] is the amplitude of |n+1><n| for addition. A subtraction
/// channel carries the same coefficients on |n><n+1|. The failure branch is
/// never stored: it is whatever probability the herald does not claim.
class LadderChannel {
public:
    using Params = std::map<std::string, double>;

    /// Throws InvalidArgument unless every |f[n]| <= 1 and some f[n] > 0.
    explicit LadderChannel(std::vector<double> f, Direction direction = Direction::addition,
                  ChannelKind kind = ChannelKind::custom, Params params = {});

    std::span<const double> f() const noexcept { return f_; }
    double operator[](std::size_t n) const noexcept { return f_[n]; }
    std::size_t n_max() const noexcept { return f_.size() - 1; }
    Direction direction() const noexcept { return direction_; }
    ChannelKind kind() const noexcept { return kind_; }
    const Params& params() const noexcept { return params_; }

    /// Same coefficients, opposite direction.
    LadderChannel conjugate() const;

    /// Every coefficient multiplied by s, 0 < s <= 1.
    LadderChannel scaled(double s) const;

private:
    std::vector<double> f_;
    Direction direction_;
    ChannelKind kind_;
    Params params_;
};

/// f_n = sqrt(n+1)/sqrt(n_max+1): constant g(N) on the truncated support.
LadderChannel optimal_channel(std::size_t n_max);

/// f_n = 1: the distinguishable-particle shift.
LadderChannel distinguishable_channel(std::size_t n_max);

/// Parametric down-conversion: f_n = sin(gamma_t sqrt(n+1)).
/// Requires gamma_t > 0 and gamma_t sqrt(n_max+1) <= pi/2.
LadderChannel pdc_channel(double gamma_t, std::size_t n_max);

/// Low-reflectivity beam splitter subtraction: f_n = sqrt((1-r) r (n+1)).
LadderChannel bs_subtraction_channel(double reflectivity, std::size_t n_max);

/// |<n+1, 0, 0| exp(-i H_F t) |n, 1, 1>| for H_F = gamma (b^† a1 a2 + h.c.),
/// with the molecule mode truncated at n_max+1 and one atom per atom mode.
/// Computed by exponentiating the full truncated Hamiltonian. Zero for gamma_t = 0.
std::vector<double> feshbach_amplitudes(double gamma_t, std::size_t n_max);

/// feshbach_amplitudes wrapped as a ladder; same preconditions as pdc_channel.
LadderChannel feshbach_ladder(double gamma_t, std::size_t n_max);

/// Divides by the largest entry when it exceeds 1; ratios are untouched.
/// The applied divisor is recorded in params()["rescale"] when != 1.
LadderChannel rescale_to_valid(std::span<const double> raw,
                               Direction direction = Direction::addition);

/// Adds one particle. Throws HeraldNeverFires when success probability is 0.
HeraldedOutcome<NumberDistribution> apply_addition(const NumberDistribution& state,
                                                   const LadderChannel& ch);

/// Removes one particle. Throws HeraldNeverFires when success probability is 0.
HeraldedOutcome<NumberDistribution> apply_subtraction(const NumberDistribution& state,
                                                      const LadderChannel& ch);

/// Diagonal of [subtraction, addition]: f_n^2 - f_{n-1}^2 with f_{-1} = 0.
std::vector<double> commutator_diag(std::span<const double> f);
std::vector<double> commutator_diag(const LadderChannel& ch);

/// alpha |0_A 1_B> + beta |1_A 0_B>, real non-negative amplitudes.
class TwoModeState {
public:
    TwoModeState(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double concurrence() const noexcept { return 2.0 * alpha_ * beta_; }

private:
    double alpha_;
    double beta_;
};

struct ConcurrenceChange {
    TwoModeState post;
    double c_before;
    double c_after;
};

/// Unheralded (deterministic) a a^† on mode A and the resulting concurrence.
ConcurrenceChange local_as_concurrence(const TwoModeState& psi);

}  // namespace bql
