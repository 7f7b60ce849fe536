#include "bql/coboson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bql/errors.hpp"

namespace bql {

SchmidtSpectrum::SchmidtSpectrum(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
    if (lambdas_.empty()) {
        throw InvalidArgument("Schmidt spectrum is empty");
    }
    long double total = 0.0L;
    for (double x : lambdas_) {
        if (!std::isfinite(x) || x < 0.0) {
            throw InvalidArgument("Schmidt coefficients must be finite and non-negative");
        }
        total += x;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) {
        throw InvalidArgument("Schmidt coefficients sum to " +
                              std::to_string(static_cast<double>(total)));
    }
}

SchmidtSpectrum SchmidtSpectrum::uniform(std::size_t d) {
    if (d == 0) {
        throw InvalidArgument("uniform spectrum needs d >= 1");
    }
    return SchmidtSpectrum(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

SchmidtSpectrum SchmidtSpectrum::from_weights(std::vector<double> weights) {
    long double total = 0.0L;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidArgument("Schmidt weights must be finite and non-negative");
        }
        total += w;
    }
    if (!(total > 0.0L)) {
        throw InvalidArgument("Schmidt weights are all zero");
    }
    for (auto& w : weights) {
        w = static_cast<double>(w / total);
    }
    return SchmidtSpectrum(std::move(weights));
}

SchmidtSpectrum SchmidtSpectrum::random(std::size_t d, std::mt19937_64& rng) {
    if (d == 0) {
        throw InvalidArgument("random spectrum needs d >= 1");
    }
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(d);
    for (auto& x : w) {
        x = expo(rng);
    }
    return from_weights(std::move(w));
}

std::size_t SchmidtSpectrum::rank() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(lambdas_.begin(), lambdas_.end(), [](double x) { return x > 0.0; }));
}

double SchmidtSpectrum::purity() const noexcept {
    return std::inner_product(lambdas_.begin(), lambdas_.end(), lambdas_.begin(), 0.0);
}

CobosonTable CobosonTable::from_chi(std::vector<double> chi, double purity) {
    if (chi.size() < 3) {
        throw InvalidArgument("chi sequence needs chi_0, chi_1 and chi_2 at least");
    }
    if (std::abs(chi[0] - 1.0) > 1e-12 || std::abs(chi[1] - 1.0) > 1e-12) {
        throw InvalidArgument("chi_0 and chi_1 must equal 1");
    }
    const std::size_t top = chi.size() - 1;  // n_max + 1
    for (std::size_t n = 0; n < top; ++n) {
        if (!(chi[n] > 0.0)) {
            throw PauliBlocked("chi_" + std::to_string(n) + " vanishes below the requested n_max");
        }
    }
    if (!(chi[top] >= 0.0)) {
        throw InvalidArgument("chi entries must be non-negative");
    }

    CobosonTable t;
    t.purity = purity;
    t.alpha_sq.resize(top);
    for (std::size_t n = 1; n <= top; ++n) {
        t.alpha_sq[n - 1] = chi[n] / chi[n - 1];
    }
    t.eps_norm_sq.resize(top - 1);
    t.delta_diag.resize(top - 1);
    for (std::size_t n = 1; n < top; ++n) {
        const double down = chi[n] / chi[n - 1];
        const double up = chi[n + 1] / chi[n];
        const auto nd = static_cast<double>(n);
        t.eps_norm_sq[n - 1] = 1.0 - nd * down + (nd - 1.0) * up;
        // <n|c c^†|n> = (n+1) up and <n|c^† c|n> = n down + eps give <n|Delta|n> = 2(1 - up).
        t.delta_diag[n - 1] = 2.0 * (1.0 - up);
    }
    t.chi = std::move(chi);
    return t;
}

std::vector<double> elementary_symmetric(std::span<const double> lambdas, std::size_t order) {
    std::vector<double> e(order + 1, 0.0);
    e[0] = 1.0;
    std::size_t seen = 0;
    for (double x : lambdas) {
        ++seen;
        for (std::size_t j = std::min(order, seen); j >= 1; --j) {
            e[j] += x * e[j - 1];
        }
    }
    return e;
}

CobosonTable build_coboson_table(const SchmidtSpectrum& spectrum, std::size_t n_max) {
    if (n_max < 1) {
        throw InvalidArgument("coboson table needs n_max >= 1");
    }
    if (n_max + 1 > spectrum.rank()) {
        throw PauliBlocked("n_max + 1 = " + std::to_string(n_max + 1) +
                           " exceeds the Schmidt rank " + std::to_string(spectrum.rank()));
    }
    // Fixed summation order makes the table independent of the input ordering.
    std::vector<double> sorted(spectrum.lambdas().begin(), spectrum.lambdas().end());
    std::sort(sorted.begin(), sorted.end());

    const auto e = elementary_symmetric(sorted, n_max + 1);
    std::vector<double> chi(n_max + 2);
    double factorial = 1.0;
    for (std::size_t n = 0; n <= n_max + 1; ++n) {
        if (n > 0) {
            factorial *= static_cast<double>(n);
        }
        chi[n] = factorial * e[n];
    }
    chi[0] = 1.0;
    chi[1] = 1.0;
    return CobosonTable::from_chi(std::move(chi),
                                  std::inner_product(sorted.begin(), sorted.end(),
                                                     sorted.begin(), 0.0));
}

CobosonTable max_entangled_table(std::size_t d, std::size_t n_max) {
    if (n_max < 1) {
        throw InvalidArgument("coboson table needs n_max >= 1");
    }
    if (n_max + 1 > d) {
        throw PauliBlocked("n_max + 1 exceeds d for the maximally entangled pair");
    }
    const auto dd = static_cast<double>(d);
    CobosonTable t;
    t.purity = 1.0 / dd;
    t.chi.resize(n_max + 2);
    t.chi[0] = 1.0;
    for (std::size_t n = 1; n <= n_max + 1; ++n) {
        t.chi[n] = t.chi[n - 1] * static_cast<double>(d - n + 1) / dd;
    }
    for (std::size_t n = 1; n <= n_max + 1; ++n) {
        t.alpha_sq.push_back(static_cast<double>(d - n + 1) / dd);
    }
    for (std::size_t n = 1; n <= n_max; ++n) {
        // d - n(d-n+1) + (n-1)(d-n), evaluated in integers.
        const auto di = static_cast<long long>(d);
        const auto ni = static_cast<long long>(n);
        const long long numer = di - ni * (di - ni + 1) + (ni - 1) * (di - ni);
        t.eps_norm_sq.push_back(static_cast<double>(numer) / dd);
        t.delta_diag.push_back(2.0 * static_cast<double>(n) / dd);
    }
    return t;
}

LadderChannel coboson_channel(const CobosonTable& table, std::size_t n_max) {
    if (n_max < 1 || n_max > table.n_max()) {
        throw InvalidArgument("coboson ladder truncation must lie in 1..table.n_max()");
    }
    const double top_sq = static_cast<double>(n_max + 1) * table.alpha_sq_at(n_max + 1);
    if (!(top_sq > 0.0)) {
        throw PauliBlocked("alpha_{n_max+1} vanishes; no coboson ladder at this n_max");
    }
    std::vector<double> raw(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        raw[n] = std::sqrt(static_cast<double>(n + 1) * table.alpha_sq_at(n + 1) / top_sq);
    }
    const LadderChannel valid = rescale_to_valid(raw);
    auto params = valid.params();
    params["chi2"] = table.chi2();
    return LadderChannel(std::vector<double>(valid.f().begin(), valid.f().end()),
                         Direction::addition, ChannelKind::custom, std::move(params));
}

double coboson_measure_closed_form(double chi2) {
    if (!(chi2 >= 0.0 && chi2 <= 1.0)) {
        throw InvalidArgument("chi_2 must lie in [0, 1]");
    }
    return 2.0 - 3.0 / (1.0 + 2.0 * chi2 * chi2);
}

double reference_max_entangled_measure(std::size_t d) {
    if (d < 2) {
        throw InvalidArgument("d must be at least 2");
    }
    const auto x = static_cast<double>(d);
    return 1.0 - (2.0 * x - 1.0) / (3.0 * x * x - 2.0 * x + 1.0);
}

double chi_ratio_from_measure(double m_script, double p0, std::size_t n) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw InvalidArgument("p0 must lie in (0, 1)");
    }
    if (n < 1) {
        throw InvalidArgument("n must be at least 1");
    }
    const double p0_as = (2.0 - m_script) / 3.0;
    if (!std::isfinite(m_script) || !(p0_as > 0.0 && p0_as <= 1.0)) {
        throw InconsistentMeasurement("measure " + std::to_string(m_script) +
                                      " is outside the attainable range (-1, 2)");
    }
    // p0_as = p0 / (p0 + (1 - p0) R) with R = (f_n/f_0)^4 = (n+1)^2 (chi_{n+1}/chi_n)^2.
    const double r = p0 * (1.0 - p0_as) / ((1.0 - p0) * p0_as);
    const double ratio = std::sqrt(r) / static_cast<double>(n + 1);
    if (ratio > 1.0 + 1e-9) {
        throw InconsistentMeasurement("implied chi ratio " + std::to_string(ratio) +
                                      " exceeds 1; no two-fermion composite produces it");
    }
    return std::min(ratio, 1.0);
}

}  // namespace bql
