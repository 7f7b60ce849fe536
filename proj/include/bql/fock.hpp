#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bql {

inline constexpr double kProbTol = 1e-12;

/// Probabilities p_0..p_{n_max} over particle number in a single mode.
class NumberDistribution {
public:
    /// Validates non-negativity and unit sum (tolerance kProbTol).
    explicit NumberDistribution(std::vector<double> probs);

    /// Point mass on |n>, truncated at n_max.
    static NumberDistribution fock(std::size_t n, std::size_t n_max);

    /// p0 on |0> and 1 - p0 on |n>.
    static NumberDistribution two_point(double p0, std::size_t n);

    std::size_t n_max() const noexcept { return probs_.size() - 1; }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](std::size_t n) const noexcept { return probs_[n]; }

    /// <(N+1)^2>
    double mean_shifted_square() const noexcept;

private:
    std::vector<double> probs_;
};

using ComplexMatrix = Eigen::MatrixXcd;

/// Density matrix in the number basis |0>..|n_max>.
class FockDensityMatrix {
public:
    /// Validates hermiticity, unit trace and positivity.
    explicit FockDensityMatrix(ComplexMatrix elements);

    static FockDensityMatrix diagonal(const NumberDistribution& dist);

    std::size_t n_max() const noexcept { return static_cast<std::size_t>(rho_.rows()) - 1; }
    const ComplexMatrix& elements() const noexcept { return rho_; }

    /// Diagonal as a distribution (the photon-number statistics).
    NumberDistribution populations() const;

    bool is_diagonal(double tol = kProbTol) const;

private:
    ComplexMatrix rho_;
};

/// Success probability plus the normalized state conditioned on the herald.
template <typename State>
struct HeraldedOutcome {
    double success_probability;
    State post_state;
};

/// Geometric thermal populations n̄^n/(1+n̄)^(n+1), renormalized over 0..n_max.
NumberDistribution thermal_distribution(double mean_occupation, std::size_t n_max);

/// Probability that the on/off detector {|0><0|, 1-|0><0|} reports vacuum.
double vacuum_probability(const NumberDistribution& state) noexcept;
double vacuum_probability(const FockDensityMatrix& state) noexcept;

struct AsSaResult {
    FockDensityMatrix rho_as;
    FockDensityMatrix rho_sa;
};

/// Addition-then-subtraction (a a^†) and subtraction-then-addition (a^† a)
/// applied with the bare bosonic ladder, both renormalized. Addition runs in a
/// basis extended by one level so nothing is clipped at n_max.
/// Throws SaUndefined when rho is the vacuum.
AsSaResult as_sa_transform(const FockDensityMatrix& rho);

/// ½ ‖a − b‖₁
double trace_distance(const FockDensityMatrix& a, const FockDensityMatrix& b);

/// Bosonic ladder matrices: creation maps dim → dim+1, annihilation dim+1 → dim.
ComplexMatrix creation_matrix(std::size_t dim);
ComplexMatrix annihilation_matrix(std::size_t dim);

}  // namespace bql
