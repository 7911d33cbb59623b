#include "jcsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jcsim/errors.hpp"

namespace jcsim {

Complex expectation(const Matrix& rho, const Matrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols() || rho.rows() != rho.cols()) {
        throw std::invalid_argument("expectation: dimension mismatch");
    }
    // Tr(rho O) = sum_ij rho_ij O_ji
    return rho.cwiseProduct(op.transpose()).sum();
}

Complex fluctuation_correlator(const Matrix& rho, const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.rows() != rho.rows()) {
        throw std::invalid_argument("fluctuation_correlator: dimension mismatch");
    }
    return expectation(rho, a * b) - expectation(rho, a) * expectation(rho, b);
}

namespace {

double entropy_of_spectrum(const Eigen::VectorXd& lambda) {
    double s = 0.0;
    for (int i = 0; i < lambda.size(); ++i) {
        const double lam = std::clamp(lambda(i), 0.0, 1.0);
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

}  // namespace

double von_neumann_entropy(const Matrix& rho) {
    const Eigen::VectorXd lambda = hermitian_eigenvalues(rho);
    if (lambda(0) < -1e-6) {
        throw numerical_error("von_neumann_entropy: eigenvalue " + std::to_string(lambda(0)) +
                              " below -1e-6");
    }
    return entropy_of_spectrum(lambda);
}

double meanfield_entropy(const Matrix& rho, const HilbertDims& dims) {
    return von_neumann_entropy(partial_trace(rho, dims, Subsystem::qubit)) +
           von_neumann_entropy(partial_trace(rho, dims, Subsystem::photon));
}

double meanfield_entropy_mb(const MBState& s) {
    const double r2 = s.bloch_norm2();
    if (r2 > 1.0 + 1e-6) {
        throw std::domain_error("meanfield_entropy_mb: Bloch norm " + std::to_string(r2) +
                                " exceeds 1");
    }
    const double r = std::min(std::sqrt(std::max(r2, 0.0)), 1.0);
    Eigen::VectorXd lambda(2);
    lambda << 0.5 * (1.0 - r), 0.5 * (1.0 + r);
    return entropy_of_spectrum(lambda);
}

double entanglement_gap(const Matrix& rho, const HilbertDims& dims) {
    return meanfield_entropy(rho, dims) - von_neumann_entropy(rho);
}

void validate_record(const ObservableRecord& rec, const HilbertDims& dims) {
    const double s_max = std::log(static_cast<double>(dims.total())) + 1e-9;
    if (rec.n_q < -1e-9 || rec.n_q > 1.0 + 1e-9) {
        throw numerical_error("ObservableRecord: n_q out of [0, 1]: " + std::to_string(rec.n_q));
    }
    if (rec.n_ph < -1e-8) {
        throw numerical_error("ObservableRecord: n_ph negative: " + std::to_string(rec.n_ph));
    }
    if (rec.entropy < -1e-10 || rec.entropy > s_max) {
        throw numerical_error("ObservableRecord: entropy out of range: " +
                              std::to_string(rec.entropy));
    }
    if (rec.entropy_mf < -1e-10 || rec.entropy_mf > s_max) {
        throw numerical_error("ObservableRecord: mean-field entropy out of range: " +
                              std::to_string(rec.entropy_mf));
    }
}

}  // namespace jcsim
