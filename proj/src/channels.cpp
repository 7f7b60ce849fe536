#include "bql/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "bql/errors.hpp"

namespace bql {

namespace {

constexpr double kKrausSlack = 1e-14;

constexpr std::array<std::pair<ChannelKind, std::string_view>, 6> kKindNames{{
    {ChannelKind::optimal, "optimal"},
    {ChannelKind::distinguishable, "distinguishable"},
    {ChannelKind::pdc, "pdc"},
    {ChannelKind::bs, "bs"},
    {ChannelKind::feshbach, "feshbach"},
    {ChannelKind::custom, "custom"},
}};

void require_truncation(std::size_t n_max) {
    if (n_max < 1) {
        throw InvalidArgument("channel truncation needs n_max >= 1");
    }
}

void require_monotone_regime(double gamma_t, std::size_t n_max) {
    if (!std::isfinite(gamma_t) || !(gamma_t > 0.0)) {
        throw InvalidArgument("gamma_t must be positive");
    }
    if (gamma_t * std::sqrt(static_cast<double>(n_max + 1)) > (std::numbers::pi / 2.0) * (1.0 + 1e-12)) {
        throw InvalidArgument("gamma_t * sqrt(n_max + 1) exceeds pi/2; ladder would not be ordered");
    }
}

}  // namespace

std::string_view to_string(ChannelKind kind) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "custom";
}

ChannelKind channel_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown channel type '" + std::string(name) + "'");
}

LadderChannel::LadderChannel(std::vector<double> f, Direction direction, ChannelKind kind,
                             Params params)
    : f_(std::move(f)), direction_(direction), kind_(kind), params_(std::move(params)) {
    if (f_.empty()) {
        throw InvalidArgument("ladder needs at least one coefficient");
    }
    bool any_positive = false;
    for (double x : f_) {
        if (!std::isfinite(x) || std::abs(x) > 1.0 + kKrausSlack) {
            throw InvalidArgument("ladder coefficient violates the Kraus bound |f_n| <= 1");
        }
        any_positive = any_positive || x > 0.0;
    }
    if (!any_positive) {
        throw InvalidArgument("ladder has no positive coefficient");
    }
}

LadderChannel LadderChannel::conjugate() const {
    const auto flipped =
        direction_ == Direction::addition ? Direction::subtraction : Direction::addition;
    return LadderChannel(f_, flipped, kind_, params_);
}

LadderChannel LadderChannel::scaled(double s) const {
    if (!(s > 0.0 && s <= 1.0)) {
        throw InvalidArgument("ladder scale must lie in (0, 1]");
    }
    auto f = f_;
    for (auto& x : f) {
        x *= s;
    }
    auto params = params_;
    params["scale"] = s * (params_.contains("scale") ? params_.at("scale") : 1.0);
    return LadderChannel(std::move(f), direction_, kind_, std::move(params));
}

LadderChannel optimal_channel(std::size_t n_max) {
    require_truncation(n_max);
    const double top = std::sqrt(static_cast<double>(n_max + 1));
    std::vector<double> f(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        f[n] = std::sqrt(static_cast<double>(n + 1)) / top;
    }
    return LadderChannel(std::move(f), Direction::addition, ChannelKind::optimal);
}

LadderChannel distinguishable_channel(std::size_t n_max) {
    require_truncation(n_max);
    return LadderChannel(std::vector<double>(n_max + 1, 1.0), Direction::addition,
                         ChannelKind::distinguishable);
}

LadderChannel pdc_channel(double gamma_t, std::size_t n_max) {
    require_truncation(n_max);
    require_monotone_regime(gamma_t, n_max);
    std::vector<double> f(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        f[n] = std::sin(gamma_t * std::sqrt(static_cast<double>(n + 1)));
    }
    return LadderChannel(std::move(f), Direction::addition, ChannelKind::pdc,
                         {{"gamma_t", gamma_t}});
}

LadderChannel bs_subtraction_channel(double reflectivity, std::size_t n_max) {
    require_truncation(n_max);
    const double r = reflectivity;
    if (!(r > 0.0 && r < 1.0)) {
        throw InvalidArgument("reflectivity must lie in (0, 1)");
    }
    const double base = (1.0 - r) * r;
    if (base * static_cast<double>(n_max + 1) > 1.0) {
        throw InvalidArgument("beam-splitter ladder exceeds the Kraus bound at this n_max");
    }
    std::vector<double> f(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        f[n] = std::sqrt(base * static_cast<double>(n + 1));
    }
    return LadderChannel(std::move(f), Direction::subtraction, ChannelKind::bs,
                         {{"reflectivity", r}});
}

std::vector<double> feshbach_amplitudes(double gamma_t, std::size_t n_max) {
    if (!std::isfinite(gamma_t) || gamma_t < 0.0) {
        throw InvalidArgument("gamma_t must be non-negative");
    }
    // Basis |m, a1, a2>: molecules m = 0..n_max+1, one slot per atom species.
    const auto levels = static_cast<Eigen::Index>(n_max + 2);
    const Eigen::Index dim = levels * 4;
    auto index = [](Eigen::Index m, int a1, int a2) { return m * 4 + a1 * 2 + a2; };

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index m = 0; m + 1 < levels; ++m) {
        // b^† a1 a2 |m,1,1> = sqrt(m+1) |m+1,0,0>
        const double coupling = gamma_t * std::sqrt(static_cast<double>(m + 1));
        h(index(m + 1, 0, 0), index(m, 1, 1)) = coupling;
        h(index(m, 1, 1), index(m + 1, 0, 0)) = coupling;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -1.0))
            .array()
            .exp();
    const ComplexMatrix v = es.eigenvectors().cast<std::complex<double>>();
    const ComplexMatrix u = v * phases.asDiagonal() * v.adjoint();

    std::vector<double> f(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const auto m = static_cast<Eigen::Index>(n);
        f[n] = std::abs(u(index(m + 1, 0, 0), index(m, 1, 1)));
    }
    return f;
}

LadderChannel feshbach_ladder(double gamma_t, std::size_t n_max) {
    require_truncation(n_max);
    require_monotone_regime(gamma_t, n_max);
    return LadderChannel(feshbach_amplitudes(gamma_t, n_max), Direction::addition,
                         ChannelKind::feshbach, {{"gamma_t", gamma_t}});
}

LadderChannel rescale_to_valid(std::span<const double> raw, Direction direction) {
    if (raw.empty()) {
        throw InvalidArgument("empty ladder");
    }
    double top = 0.0;
    for (double x : raw) {
        if (!std::isfinite(x) || x < 0.0) {
            throw InvalidArgument("raw ladder entries must be finite and non-negative");
        }
        top = std::max(top, x);
    }
    if (top == 0.0) {
        throw InvalidArgument("raw ladder is identically zero");
    }
    std::vector<double> f(raw.begin(), raw.end());
    LadderChannel::Params params;
    if (top > 1.0) {
        for (auto& x : f) {
            x /= top;
        }
        params["rescale"] = top;
    }
    return LadderChannel(std::move(f), direction, ChannelKind::custom, std::move(params));
}

HeraldedOutcome<NumberDistribution> apply_addition(const NumberDistribution& state,
                                                   const LadderChannel& ch) {
    if (ch.direction() != Direction::addition) {
        throw InvalidArgument("apply_addition needs an addition-direction ladder");
    }
    if (state.n_max() > ch.n_max()) {
        throw InvalidArgument("state support exceeds ladder truncation");
    }
    std::vector<double> post(state.n_max() + 2, 0.0);
    double success = 0.0;
    for (std::size_t n = 0; n <= state.n_max(); ++n) {
        const double w = ch[n] * ch[n] * state[n];
        post[n + 1] = w;
        success += w;
    }
    if (!(success > 0.0)) {
        throw HeraldNeverFires("addition herald never fires on this state");
    }
    for (auto& x : post) {
        x /= success;
    }
    return {success, NumberDistribution(std::move(post))};
}

HeraldedOutcome<NumberDistribution> apply_subtraction(const NumberDistribution& state,
                                                      const LadderChannel& ch) {
    if (ch.direction() != Direction::subtraction) {
        throw InvalidArgument("apply_subtraction needs a subtraction-direction ladder");
    }
    if (state.n_max() == 0) {
        throw HeraldNeverFires("subtraction herald never fires on the vacuum");
    }
    if (state.n_max() - 1 > ch.n_max()) {
        throw InvalidArgument("state support exceeds ladder truncation");
    }
    std::vector<double> post(state.n_max(), 0.0);
    double success = 0.0;
    for (std::size_t n = 0; n < state.n_max(); ++n) {
        const double w = ch[n] * ch[n] * state[n + 1];
        post[n] = w;
        success += w;
    }
    if (!(success > 0.0)) {
        throw HeraldNeverFires("subtraction herald never fires on this state");
    }
    for (auto& x : post) {
        x /= success;
    }
    return {success, NumberDistribution(std::move(post))};
}

std::vector<double> commutator_diag(std::span<const double> f) {
    std::vector<double> out(f.size());
    double prev = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double cur = f[n] * f[n];
        out[n] = cur - prev;
        prev = cur;
    }
    return out;
}

std::vector<double> commutator_diag(const LadderChannel& ch) { return commutator_diag(ch.f()); }

TwoModeState::TwoModeState(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha >= 0.0 && beta >= 0.0)) {
        throw InvalidArgument("two-mode amplitudes must be non-negative");
    }
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
        throw InvalidArgument("two-mode state is not normalized");
    }
}

ConcurrenceChange local_as_concurrence(const TwoModeState& psi) {
    const double a = psi.alpha();
    const double b = psi.beta();
    // a a^† on mode A weights |0_A> by 1 and |1_A> by 2.
    const double norm = std::sqrt(a * a + 4.0 * b * b);
    const TwoModeState post(a / norm, 2.0 * b / norm);
    return {post, psi.concurrence(), 4.0 * a * b / (a * a + 4.0 * b * b)};
}

}  // namespace bql
