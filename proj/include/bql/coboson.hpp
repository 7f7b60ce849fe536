#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "bql/channels.hpp"

namespace bql {

/// Schmidt coefficients lambda_k of a two-fermion pair state
/// sum_k sqrt(lambda_k) a_k^† b_k^† |0>.
class SchmidtSpectrum {
public:
    /// Validates non-negativity and unit sum (1e-12).
    explicit SchmidtSpectrum(std::vector<double> lambdas);

    static SchmidtSpectrum uniform(std::size_t d);
    /// Normalizes arbitrary non-negative weights.
    static SchmidtSpectrum from_weights(std::vector<double> weights);
    /// Uniform on the probability simplex.
    static SchmidtSpectrum random(std::size_t d, std::mt19937_64& rng);

    std::size_t d() const noexcept { return lambdas_.size(); }
    std::span<const double> lambdas() const noexcept { return lambdas_; }
    /// Number of strictly positive coefficients.
    std::size_t rank() const noexcept;
    double purity() const noexcept;

private:
    std::vector<double> lambdas_;
};

/// Normalization data of the n-coboson states |n> = chi_n^{-1/2} c^{†n}/sqrt(n!) |0>.
///
/// `chi` holds chi_0..chi_{n_max+1}. The remaining vectors start at n = 1:
/// alpha_sq[i] is alpha_{i+1}^2 (length n_max+1), eps_norm_sq[i] and
/// delta_diag[i] belong to n = i+1 (length n_max).
struct CobosonTable {
    std::vector<double> chi;
    std::vector<double> alpha_sq;
    std::vector<double> eps_norm_sq;
    std::vector<double> delta_diag;
    double purity = 0.0;

    std::size_t n_max() const noexcept { return chi.size() - 2; }
    double chi2() const noexcept { return chi[2]; }
    double alpha_sq_at(std::size_t n) const { return alpha_sq.at(n - 1); }
    double eps_norm_sq_at(std::size_t n) const { return eps_norm_sq.at(n - 1); }
    double delta_at(std::size_t n) const { return delta_diag.at(n - 1); }

    /// Derives alpha, eps and delta from a supplied chi sequence (length >= 3,
    /// chi_0 = chi_1 = 1). Any composite whose chi is known can be loaded this way.
    static CobosonTable from_chi(std::vector<double> chi, double purity);
};

/// e_0..e_order of lambda via e_j <- e_j + lambda_k e_{j-1}.
std::vector<double> elementary_symmetric(std::span<const double> lambdas, std::size_t order);

/// chi_n = n! e_n(lambda). Throws PauliBlocked when n_max+1 exceeds the rank.
CobosonTable build_coboson_table(const SchmidtSpectrum& spectrum, std::size_t n_max);

/// chi_n = d!/(d^n (d-n)!), alpha_n^2 = (d-n+1)/d for lambda_k = 1/d.
CobosonTable max_entangled_table(std::size_t d, std::size_t n_max);

/// f_n = g alpha_{n+1} sqrt(n+1) with g = 1/(alpha_{n_max+1} sqrt(n_max+1)),
/// rescaled into the Kraus bound when some f_n > 1.
LadderChannel coboson_channel(const CobosonTable& table, std::size_t n_max);

/// 2 - 3/(1 + 2 chi_2^2): the calibrated measure of the coboson ladder.
double coboson_measure_closed_form(double chi2);

/// 1 - (2d-1)/(3d^2-2d+1), evaluated verbatim. Disagrees with
/// coboson_measure_closed_form at chi_2 = (d-1)/d for finite d.
double reference_max_entangled_measure(std::size_t d);

/// Recovers chi_{n+1}/chi_n from the calibrated measure obtained with the
/// coboson ladder on p0|0><0| + (1-p0)|n><n|.
double chi_ratio_from_measure(double m_script, double p0, std::size_t n);

}  // namespace bql
