#include "bql/fock.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bql/errors.hpp"

namespace bql {

NumberDistribution::NumberDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw InvalidArgument("number distribution needs at least the vacuum entry");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw InvalidArgument("number distribution has a negative or non-finite entry");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kProbTol) {
        throw InvalidArgument("number distribution sums to " + std::to_string(total));
    }
}

NumberDistribution NumberDistribution::fock(std::size_t n, std::size_t n_max) {
    if (n > n_max) {
        throw InvalidArgument("Fock level above truncation");
    }
    std::vector<double> p(n_max + 1, 0.0);
    p[n] = 1.0;
    return NumberDistribution(std::move(p));
}

NumberDistribution NumberDistribution::two_point(double p0, std::size_t n) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw InvalidArgument("p0 must lie in [0, 1]");
    }
    if (n == 0) {
        throw InvalidArgument("two-point state needs n >= 1");
    }
    std::vector<double> p(n + 1, 0.0);
    p[0] = p0;
    p[n] = 1.0 - p0;
    return NumberDistribution(std::move(p));
}

double NumberDistribution::mean_shifted_square() const noexcept {
    double acc = 0.0;
    for (std::size_t n = 0; n < probs_.size(); ++n) {
        const double k = static_cast<double>(n + 1);
        acc += k * k * probs_[n];
    }
    return acc;
}

FockDensityMatrix::FockDensityMatrix(ComplexMatrix elements) : rho_(std::move(elements)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
        throw InvalidArgument("density matrix must be square and non-empty");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kProbTol) {
        throw InvalidArgument("density matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - std::complex<double>(1.0, 0.0)) > kProbTol) {
        throw InvalidArgument("density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw InvalidArgument("density matrix has a negative eigenvalue");
    }
}

FockDensityMatrix FockDensityMatrix::diagonal(const NumberDistribution& dist) {
    const auto dim = static_cast<Eigen::Index>(dist.n_max() + 1);
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        rho(n, n) = dist[static_cast<std::size_t>(n)];
    }
    return FockDensityMatrix(std::move(rho));
}

NumberDistribution FockDensityMatrix::populations() const {
    std::vector<double> p(static_cast<std::size_t>(rho_.rows()));
    for (Eigen::Index n = 0; n < rho_.rows(); ++n) {
        p[static_cast<std::size_t>(n)] = std::max(0.0, rho_(n, n).real());
    }
    return NumberDistribution(std::move(p));
}

bool FockDensityMatrix::is_diagonal(double tol) const {
    ComplexMatrix off = rho_;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tol;
}

NumberDistribution thermal_distribution(double mean_occupation, std::size_t n_max) {
    if (!(mean_occupation > 0.0) || !std::isfinite(mean_occupation)) {
        throw InvalidArgument("thermal mean occupation must be positive");
    }
    if (n_max == 0) {
        throw InvalidArgument("thermal truncation needs n_max >= 1");
    }
    // p_n ∝ q^n with q = n̄/(1+n̄); the 1/(1+n̄) prefactor cancels on renormalization.
    const double q = mean_occupation / (1.0 + mean_occupation);
    std::vector<double> p(n_max + 1);
    double w = 1.0;
    for (auto& x : p) {
        x = w;
        w *= q;
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) {
        x /= total;
    }
    return NumberDistribution(std::move(p));
}

double vacuum_probability(const NumberDistribution& state) noexcept { return state[0]; }

double vacuum_probability(const FockDensityMatrix& state) noexcept {
    return state.elements()(0, 0).real();
}

ComplexMatrix creation_matrix(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix m = ComplexMatrix::Zero(d + 1, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        m(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
    }
    return m;
}

ComplexMatrix annihilation_matrix(std::size_t dim) { return creation_matrix(dim).adjoint(); }

namespace {

FockDensityMatrix sandwich_normalized(const ComplexMatrix& k, const ComplexMatrix& rho) {
    ComplexMatrix out = k * rho * k.adjoint();
    const double tr = out.trace().real();
    if (!(tr > 0.0)) {
        throw SaUndefined("subtraction herald never fires on the vacuum");
    }
    out /= tr;
    // Restore exact hermiticity lost to rounding.
    out = 0.5 * (out + out.adjoint()).eval();
    return FockDensityMatrix(std::move(out));
}

}  // namespace

AsSaResult as_sa_transform(const FockDensityMatrix& rho) {
    const std::size_t dim = rho.n_max() + 1;

    // a a^†: climb into dim+1 levels, then come back down.
    const ComplexMatrix k_as = annihilation_matrix(dim) * creation_matrix(dim);

    // a^† a within the original dim levels; the top rung of a^† never gets used
    // because a lowers first.
    const ComplexMatrix lower = annihilation_matrix(dim - 1);  // dim -> dim-1
    ComplexMatrix k_sa = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                             static_cast<Eigen::Index>(dim));
    if (dim > 1) {
        k_sa = creation_matrix(dim - 1) * lower;
    }

    return AsSaResult{sandwich_normalized(k_as, rho.elements()),
                      sandwich_normalized(k_sa, rho.elements())};
}

double trace_distance(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    if (a.n_max() != b.n_max()) {
        throw InvalidArgument("trace distance needs equal truncations");
    }
    const ComplexMatrix diff = a.elements() - b.elements();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace bql
