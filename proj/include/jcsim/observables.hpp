#pragma once

#include "jcsim/hilbert.hpp"
#include "jcsim/meanfield.hpp"

namespace jcsim {

// Tr(rho O). Real to numerical precision when O is Hermitian.
Complex expectation(const Matrix& rho, const Matrix& op);

// <A B> - <A><B>, operator order exactly A then B. Vanishes identically on
// product states when A acts on one factor and B on the other.
Complex fluctuation_correlator(const Matrix& rho, const Matrix& a, const Matrix& b);

// S = -Tr rho ln rho in nats, eigenvalues clamped to [0, 1] with 0 ln 0 := 0.
// Throws numerical_error if an eigenvalue is below -1e-6.
double von_neumann_entropy(const Matrix& rho);

// Entropy of the product of rho's own reductions: S(rho_q) + S(rho_ph).
double meanfield_entropy(const Matrix& rho, const HilbertDims& dims);

// Mean-field-side entropy: the qubit density matrix reconstructed from the
// Bloch vector (2 Re<sp>, 2 Im<sp>, sz). The cavity, driven classically with
// linear vacuum damping, stays in a coherent (pure) state, so its entropy
// contribution is zero. Throws std::domain_error if the Bloch norm exceeds
// 1 + 1e-6.
double meanfield_entropy_mb(const MBState& s);

// Mutual information of the two sectors, S(rho_q) + S(rho_ph) - S(rho);
// nonnegative (up to numerical noise), zero exactly on product states.
double entanglement_gap(const Matrix& rho, const HilbertDims& dims);

enum class Source { lindblad, meanfield };

// One row of any result table: x is time (us) or drive amplitude (rad/us).
struct ObservableRecord {
    double x = 0.0;
    double n_ph = 0.0;
    double n_q = 0.0;
    Complex corr_a_sp{0.0, 0.0};
    Complex corr_a_sz{0.0, 0.0};
    double entropy = 0.0;
    double entropy_mf = 0.0;
    Source source = Source::lindblad;
};

// Throws numerical_error when a record violates its range invariants.
void validate_record(const ObservableRecord& rec, const HilbertDims& dims);

}  // namespace jcsim
