#pragma once

#include <complex>

#include <Eigen/Dense>

namespace jcsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex I_UNIT{0.0, 1.0};

// Truncated joint Hilbert space: qubit (x) Fock.
//
// Conventions, fixed globally:
//   * factor order is qubit (x) Fock, so the qubit index is the slow one;
//   * qubit basis is ordered (excited, ground), i.e. level 0 = |e>, level 1 = |g>;
//   * basis index of |s, n> is s * n_fock + n.
struct HilbertDims {
    int n_fock = 40;  // Fock states |0> .. |n_fock - 1>

    int total() const { return 2 * n_fock; }
    void validate() const;  // throws std::invalid_argument if n_fock < 2
};

// 2x2 qubit operators in the (e, g) ordering:
//   sm = |g><e|,  sp = |e><g|,  sz = diag(+1, -1),  sx = sp + sm.
// With these, sp*sm projects onto the excited state and n_q = (<sz> + 1) / 2.
struct QubitOps {
    Matrix sm, sp, sz, sx;
};

// Annihilation operator on the Fock factor alone: <n-1|a|n> = sqrt(n).
Matrix fock_annihilation(const HilbertDims& dims);

QubitOps qubit_ops();

// Kronecker product op_qubit (x) op_fock on the joint space. Pass identities to
// embed a single-subsystem operator; embed_qubit / embed_fock do that for you.
Matrix embed(const Matrix& op_qubit, const Matrix& op_fock, const HilbertDims& dims);
Matrix embed_qubit(const Matrix& op_qubit, const HilbertDims& dims);
Matrix embed_fock(const Matrix& op_fock, const HilbertDims& dims);

enum class Subsystem { qubit, photon };

// Reduced density matrix of the kept subsystem.
Matrix partial_trace(const Matrix& rho, const HilbertDims& dims, Subsystem keep);

// All eigenvalues of a Hermitian matrix, ascending.
// Throws numerical_error if max |M - M^dag| exceeds 1e-10.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

// Density-matrix diagnostics.
double trace_error(const Matrix& rho);        // |Tr rho - 1|
double hermiticity_error(const Matrix& m);    // max_ij |M - M^dag|
double min_eigenvalue(const Matrix& rho);

struct DensityTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-8;
    double positivity = 1e-8;  // eigenvalues must exceed -positivity
};

// Throws std::invalid_argument naming the violated invariant.
void check_density(const Matrix& rho, const DensityTolerances& tol = {});

// |s, n> basis vector on the joint space; qubit_level 0 = excited, 1 = ground.
Vector basis_vector(const HilbertDims& dims, int qubit_level, int n);

// rho = |g, 0><g, 0|
Matrix ground_state_density(const HilbertDims& dims);

}  // namespace jcsim
