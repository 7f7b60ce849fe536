#include "bql/measure.hpp"

#include <cmath>

#include "bql/errors.hpp"

namespace bql {

namespace {

bool is_calibration_state(const NumberDistribution& d) {
    if (d.n_max() < 1) {
        return false;
    }
    for (std::size_t n = 2; n <= d.n_max(); ++n) {
        if (d[n] > kProbTol) {
            return false;
        }
    }
    return std::abs(d[0] - 2.0 / 3.0) <= 1e-6 && std::abs(d[1] - 1.0 / 3.0) <= 1e-6;
}

void require_positive_ladder(double f0, double f1) {
    if (!(f0 > 0.0 && f1 > 0.0)) {
        throw InvalidArgument("ladder amplitudes f0 and f1 must be positive");
    }
}

}  // namespace

MeasureReport run_as_pipeline(const NumberDistribution& initial, const LadderChannel& add,
                              const std::optional<LadderChannel>& sub) {
    const LadderChannel down = sub ? *sub : add.conjugate();
    const auto added = apply_addition(initial, add);
    const auto back = apply_subtraction(added.post_state, down);

    const double p0 = vacuum_probability(initial);
    const double p0_as = vacuum_probability(back.post_state);
    return MeasureReport{
        .p0_initial = p0,
        .p0_as = p0_as,
        .m_raw = p0 - p0_as,
        .m_script = script_measure(p0_as),
        .add_success = added.success_probability,
        .sub_success = back.success_probability,
        .calibrated = is_calibration_state(initial),
        .channel_descriptor = add,
    };
}

NumberDistribution optimal_initial_distribution(std::size_t n_max) {
    if (n_max < 1) {
        throw InvalidArgument("optimal initial state needs n_max >= 1");
    }
    const double denom = static_cast<double>(n_max + 2);
    std::vector<double> p(n_max + 1, 0.0);
    p[0] = static_cast<double>(n_max + 1) / denom;
    p[n_max] = 1.0 / denom;
    return NumberDistribution(std::move(p));
}

double boson_m_max(std::size_t n_max) {
    if (n_max < 1) {
        throw InvalidArgument("boson_m_max needs n_max >= 1");
    }
    return static_cast<double>(n_max) / static_cast<double>(n_max + 2);
}

double general_m_closed_form(double p0, double f0, double f1) {
    require_positive_ladder(f0, f1);
    const double ratio_sq = (f1 / f0) * (f1 / f0);
    return p0 * (1.0 - 1.0 / (p0 + (1.0 - p0) * ratio_sq * ratio_sq));
}

double channel_optimal_p0(double f0, double f1) {
    require_positive_ladder(f0, f1);
    const double r = f0 / f1;
    return 1.0 / (1.0 + r * r);
}

}  // namespace bql
