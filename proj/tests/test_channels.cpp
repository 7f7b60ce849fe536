#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bql/channels.hpp"
#include "bql/errors.hpp"

using namespace bql;
using doctest::Approx;

namespace {

void check_kraus(const LadderChannel& ch) {
    for (double x : ch.f()) {
        CHECK(std::abs(x) <= 1.0);
    }
}

}  // namespace

TEST_CASE("optimal channel") {
    const auto c1 = optimal_channel(1);
    CHECK(c1[0] == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(c1[1] == 1.0);

    const auto c3 = optimal_channel(3);
    CHECK(c3[0] == Approx(0.5).epsilon(1e-15));
    CHECK(c3[1] == Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
    CHECK(c3[2] == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(c3[3] == 1.0);

    for (std::size_t n_max = 1; n_max <= 12; ++n_max) {
        const auto c = optimal_channel(n_max);
        CHECK(c[n_max] == 1.0);
        for (std::size_t n = 1; n <= n_max; ++n) {
            CHECK(c[n] / c[n - 1] == Approx(std::sqrt((n + 1.0) / n)).epsilon(1e-14));
        }
        check_kraus(c);
    }
    CHECK_THROWS_AS(optimal_channel(0), InvalidArgument);
}

TEST_CASE("distinguishable channel is flat and leaves distributions unchanged under AS") {
    const auto c = distinguishable_channel(2);
    CHECK(c.f().size() == 3);
    for (double x : c.f()) {
        CHECK(x == 1.0);
    }
    const NumberDistribution p({0.2, 0.5, 0.3});
    const auto added = apply_addition(p, c);
    CHECK(added.success_probability == Approx(1.0));
    const auto back = apply_subtraction(added.post_state, c.conjugate());
    CHECK(back.success_probability == Approx(1.0));
    for (std::size_t n = 0; n <= 2; ++n) {
        CHECK(back.post_state[n] == Approx(p[n]).epsilon(1e-15));
    }
}

TEST_CASE("PDC channel") {
    const auto c = pdc_channel(0.2, 2);
    CHECK(c[0] == Approx(0.19867).epsilon(1e-4));
    CHECK(c[1] == Approx(0.27908).epsilon(1e-4));
    CHECK(c[2] == Approx(0.33952).epsilon(1e-4));
    CHECK(c.params().at("gamma_t") == 0.2);

    const auto small = pdc_channel(0.01, 1);
    const double rel = std::abs(small[1] / small[0] - std::sqrt(2.0)) / std::sqrt(2.0);
    CHECK(rel <= 2e-5);

    const auto tiny = pdc_channel(1e-6, 4);
    for (std::size_t n = 0; n <= 4; ++n) {
        CHECK(tiny[n] / tiny[0] == Approx(std::sqrt(n + 1.0)).epsilon(1e-9));
    }

    CHECK_THROWS_AS(pdc_channel(0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(pdc_channel(-0.1, 1), InvalidArgument);
    CHECK_THROWS_AS(pdc_channel(1.2, 1), InvalidArgument);  // 1.2 * sqrt(2) > pi/2
    CHECK_NOTHROW(pdc_channel(std::numbers::pi / 2.0 / std::sqrt(2.0) * (1 - 1e-12), 1));
}

TEST_CASE("beam-splitter subtraction channel") {
    const auto c = bs_subtraction_channel(0.05, 1);
    CHECK(c.direction() == Direction::subtraction);
    CHECK(c[0] == Approx(0.21794).epsilon(1e-4));
    CHECK(c[1] == Approx(0.30822).epsilon(1e-4));

    const auto half = bs_subtraction_channel(0.5, 1);
    CHECK(half[0] == Approx(0.5).epsilon(1e-15));
    CHECK(half[1] == Approx(std::sqrt(0.5)).epsilon(1e-15));

    CHECK_THROWS_AS(bs_subtraction_channel(0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(bs_subtraction_channel(1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(bs_subtraction_channel(0.5, 4), InvalidArgument);  // 0.25 * 5 > 1
}

TEST_CASE("property: beam-splitter ratios do not depend on r") {
    const auto ref = bs_subtraction_channel(0.01, 6);
    for (double r : {0.02, 0.05, 0.1, 0.11, 0.9, 0.99}) {
        const auto c = bs_subtraction_channel(r, 6);
        for (std::size_t n = 0; n <= 6; ++n) {
            CHECK(std::abs(c[n] / c[0] - ref[n] / ref[0]) < 1e-12);
            if (n > 0) {
                CHECK(c[n] / c[n - 1] == Approx(std::sqrt((n + 1.0) / n)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("Feshbach ladder from the full propagator") {
    // 2x2 block {|n,1,1>, |n+1,0,0>} with coupling g: transfer amplitude sin(g).
    CHECK(feshbach_ladder(0.1, 1)[0] == Approx(std::sin(0.1)).epsilon(1e-12));
    CHECK(feshbach_ladder(0.1, 1)[0] == Approx(0.09983).epsilon(1e-4));

    for (std::size_t n_max : {1u, 3u, 6u}) {
        for (int i = 1; i <= 10; ++i) {
            const double g = (std::numbers::pi / 2.0) / std::sqrt(n_max + 1.0) * i / 10.0;
            const auto fes = feshbach_ladder(g, n_max);
            const auto pdc = pdc_channel(g, n_max);
            for (std::size_t n = 0; n <= n_max; ++n) {
                CHECK(std::abs(fes[n] - std::sin(g * std::sqrt(n + 1.0))) < 1e-8);
                CHECK(std::abs(fes[n] - pdc[n]) < 1e-8);
            }
        }
    }

    const auto zero = feshbach_amplitudes(0.0, 3);
    for (double x : zero) {
        CHECK(x == Approx(0.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(feshbach_ladder(0.0, 3), InvalidArgument);
    CHECK_THROWS_AS(feshbach_ladder(2.0, 1), InvalidArgument);
}

TEST_CASE("rescale_to_valid") {
    const std::vector<double> big{1.2, 0.6};
    const auto a = rescale_to_valid(big);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == Approx(0.5).epsilon(1e-15));
    CHECK(a.params().at("rescale") == 1.2);

    const std::vector<double> ok{0.3, 0.9};
    const auto b = rescale_to_valid(ok);
    CHECK(b[0] == 0.3);
    CHECK(b[1] == 0.9);
    CHECK_FALSE(b.params().contains("rescale"));

    CHECK_THROWS_AS(rescale_to_valid(std::vector<double>{0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(rescale_to_valid(std::vector<double>{-0.1, 0.5}), InvalidArgument);
}

TEST_CASE("ladder validation") {
    CHECK_THROWS_AS(LadderChannel({1.5, 0.2}), InvalidArgument);
    CHECK_THROWS_AS(LadderChannel({0.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(LadderChannel(std::vector<double>{}), InvalidArgument);
    const LadderChannel c({0.4, 0.8});
    CHECK(c.conjugate().direction() == Direction::subtraction);
    CHECK(c.conjugate().conjugate().direction() == Direction::addition);
    CHECK(c.scaled(0.5)[1] == Approx(0.4));
    CHECK_THROWS_AS(c.scaled(1.5), InvalidArgument);
    CHECK_THROWS_AS(c.scaled(0.0), InvalidArgument);
}

TEST_CASE("apply_addition") {
    const NumberDistribution p({2.0 / 3.0, 1.0 / 3.0});
    const auto out = apply_addition(p, optimal_channel(1));
    CHECK(out.success_probability == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(out.post_state.n_max() == 2);
    CHECK(out.post_state[0] == 0.0);
    CHECK(out.post_state[1] == Approx(0.5).epsilon(1e-15));
    CHECK(out.post_state[2] == Approx(0.5).epsilon(1e-15));

    const auto vac = apply_addition(NumberDistribution::fock(0, 1), optimal_channel(1));
    CHECK(vac.success_probability == Approx(0.5).epsilon(1e-15));
    CHECK(vac.post_state[1] == 1.0);

    const NumberDistribution shifted({0.1, 0.6, 0.3});
    const auto flat = apply_addition(shifted, distinguishable_channel(2));
    CHECK(flat.success_probability == Approx(1.0));
    CHECK(flat.post_state[1] == Approx(0.1));
    CHECK(flat.post_state[3] == Approx(0.3));

    CHECK_THROWS_AS(apply_addition(p, optimal_channel(1).conjugate()), InvalidArgument);
    CHECK_THROWS_AS(apply_addition(NumberDistribution({0.2, 0.3, 0.5}), optimal_channel(1)),
                    InvalidArgument);
    CHECK_THROWS_AS(apply_addition(NumberDistribution::fock(0, 1), LadderChannel({0.0, 1.0})),
                    HeraldNeverFires);
}

TEST_CASE("apply_subtraction") {
    const auto sub = optimal_channel(1).conjugate();
    const NumberDistribution p({0.0, 0.5, 0.5});
    const auto out = apply_subtraction(p, sub);
    CHECK(out.success_probability == Approx(0.75).epsilon(1e-15));
    CHECK(out.post_state[0] == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(out.post_state[1] == Approx(2.0 / 3.0).epsilon(1e-15));

    const LadderChannel ladder({0.3, 0.7, 0.9}, Direction::subtraction);
    const auto one = apply_subtraction(NumberDistribution::fock(1, 1), ladder);
    CHECK(one.success_probability == Approx(0.09));
    CHECK(one.post_state.n_max() == 0);
    CHECK(one.post_state[0] == 1.0);

    CHECK_THROWS_AS(apply_subtraction(NumberDistribution({1.0}), sub), HeraldNeverFires);
    CHECK_THROWS_AS(apply_subtraction(NumberDistribution::fock(0, 2), sub), HeraldNeverFires);
    CHECK_THROWS_AS(apply_subtraction(p, optimal_channel(1)), InvalidArgument);
}

TEST_CASE("AS on a Fock state returns it with probability f_n^4") {
    const auto ch = optimal_channel(4);
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto up = apply_addition(NumberDistribution::fock(n, n), ch);
        const auto down = apply_subtraction(up.post_state, ch.conjugate());
        CHECK(down.post_state[n] == 1.0);
        CHECK(up.success_probability * down.success_probability ==
              Approx(std::pow(ch[n], 4)).epsilon(1e-14));
    }
}

TEST_CASE("property: AS keeps the support and succeeds with sum f^4 p") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_max = 1 + trial % 6;
        std::vector<double> p(n_max + 1), f(n_max + 1);
        double s = 0.0;
        for (std::size_t n = 0; n <= n_max; ++n) {
            p[n] = u(rng) < 0.3 ? 0.0 : u(rng);
            s += p[n];
            f[n] = 0.05 + 0.95 * u(rng);
        }
        if (s == 0.0) {
            continue;
        }
        for (auto& x : p) {
            x /= s;
        }
        const NumberDistribution dist(p);
        const LadderChannel ch(f);
        const auto up = apply_addition(dist, ch);
        const auto down = apply_subtraction(up.post_state, ch.conjugate());
        double expect = 0.0;
        for (std::size_t n = 0; n <= n_max; ++n) {
            expect += std::pow(f[n], 4) * p[n];
            CHECK((down.post_state[n] > 0.0) == (p[n] > 0.0));
        }
        CHECK(up.success_probability * down.success_probability == Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("commutator diagonal") {
    const auto d = commutator_diag(distinguishable_channel(3));
    CHECK(d == std::vector<double>{1.0, 0.0, 0.0, 0.0});

    std::vector<double> ideal;
    for (int n = 0; n < 6; ++n) {
        ideal.push_back(std::sqrt(n + 1.0));
    }
    for (double x : commutator_diag(ideal)) {
        CHECK(x == Approx(1.0).epsilon(1e-14));
    }

    for (std::size_t n_max = 1; n_max <= 8; ++n_max) {
        for (double x : commutator_diag(optimal_channel(n_max))) {
            CHECK(x == Approx(1.0 / (n_max + 1.0)).epsilon(1e-14));
        }
    }
}

TEST_CASE("local AS concurrence") {
    const double a = 0.9;
    const double b = std::sqrt(1.0 - a * a);
    const auto r = local_as_concurrence(TwoModeState(a, b));
    CHECK(r.c_before == Approx(0.78460).epsilon(1e-5));
    CHECK(r.c_after == Approx(0.99949).epsilon(1e-5));
    CHECK(r.post.concurrence() == Approx(r.c_after).epsilon(1e-14));
    CHECK(r.post.beta() / r.post.alpha() == Approx(2.0 * b / a).epsilon(1e-14));

    const auto product = local_as_concurrence(TwoModeState(1.0, 0.0));
    CHECK(product.c_before == 0.0);
    CHECK(product.c_after == 0.0);

    const double ab = std::sqrt(2.0 / 3.0);
    const auto edge = local_as_concurrence(TwoModeState(ab, std::sqrt(1.0 - ab * ab)));
    CHECK(edge.c_after == Approx(edge.c_before).epsilon(1e-14));

    CHECK_THROWS_AS(TwoModeState(0.9, 0.9), InvalidArgument);
    CHECK_THROWS_AS(TwoModeState(-1.0, 0.0), InvalidArgument);
}

TEST_CASE("property: concurrence grows exactly when alpha^2 >= 2 beta^2") {
    for (int i = 1; i < 400; ++i) {
        const double theta = (std::numbers::pi / 2.0) * i / 400.0;
        const double a = std::cos(theta);
        const double b = std::sin(theta);
        const auto r = local_as_concurrence(TwoModeState(a, b));
        const bool grows = r.c_after >= r.c_before - 1e-15;
        CHECK(grows == (a * a >= 2.0 * b * b - 1e-15));
    }
}

TEST_CASE("channel kind names") {
    for (auto k : {ChannelKind::optimal, ChannelKind::distinguishable, ChannelKind::pdc, ChannelKind::bs,
                   ChannelKind::feshbach, ChannelKind::custom}) {
        CHECK(channel_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(channel_kind_from_string("laser"), InvalidArgument);
}
