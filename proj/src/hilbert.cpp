#include "jcsim/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "jcsim/errors.hpp"

namespace jcsim {

void HilbertDims::validate() const {
    if (n_fock < 2) {
        throw std::invalid_argument("HilbertDims: n_fock must be >= 2, got " +
                                    std::to_string(n_fock));
    }
}

Matrix fock_annihilation(const HilbertDims& dims) {
    dims.validate();
    Matrix a = Matrix::Zero(dims.n_fock, dims.n_fock);
    for (int n = 1; n < dims.n_fock; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

QubitOps qubit_ops() {
    QubitOps q;
    q.sm = Matrix::Zero(2, 2);
    q.sm(1, 0) = 1.0;  // |g><e|
    q.sp = q.sm.adjoint();
    q.sz = Matrix::Zero(2, 2);
    q.sz(0, 0) = 1.0;
    q.sz(1, 1) = -1.0;
    q.sx = q.sp + q.sm;
    return q;
}

Matrix embed(const Matrix& op_qubit, const Matrix& op_fock, const HilbertDims& dims) {
    dims.validate();
    if (op_qubit.rows() != 2 || op_qubit.cols() != 2) {
        throw std::invalid_argument("embed: qubit factor must be 2x2");
    }
    if (op_fock.rows() != dims.n_fock || op_fock.cols() != dims.n_fock) {
        throw std::invalid_argument("embed: Fock factor must be n_fock x n_fock");
    }
    return Eigen::kroneckerProduct(op_qubit, op_fock);
}

Matrix embed_qubit(const Matrix& op_qubit, const HilbertDims& dims) {
    return embed(op_qubit, Matrix::Identity(dims.n_fock, dims.n_fock), dims);
}

Matrix embed_fock(const Matrix& op_fock, const HilbertDims& dims) {
    return embed(Matrix::Identity(2, 2), op_fock, dims);
}

Matrix partial_trace(const Matrix& rho, const HilbertDims& dims, Subsystem keep) {
    dims.validate();
    const int nf = dims.n_fock;
    const int d = dims.total();
    if (rho.rows() != d || rho.cols() != d) {
        throw std::invalid_argument("partial_trace: state dim does not match HilbertDims");
    }
    if (keep == Subsystem::qubit) {
        Matrix out = Matrix::Zero(2, 2);
        for (int s = 0; s < 2; ++s) {
            for (int t = 0; t < 2; ++t) {
                Complex acc = 0.0;
                for (int n = 0; n < nf; ++n) acc += rho(s * nf + n, t * nf + n);
                out(s, t) = acc;
            }
        }
        return out;
    }
    Matrix out = Matrix::Zero(nf, nf);
    for (int m = 0; m < nf; ++m) {
        for (int n = 0; n < nf; ++n) {
            out(m, n) = rho(0 * nf + m, 0 * nf + n) + rho(1 * nf + m, 1 * nf + n);
        }
    }
    return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
    }
    const double herm = hermiticity_error(m);
    if (herm > 1e-10) {
        throw numerical_error("hermitian_eigenvalues: input not Hermitian, deviation " +
                              std::to_string(herm));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();  // ascending
}

double trace_error(const Matrix& rho) { return std::abs(rho.trace() - Complex(1.0)); }

double hermiticity_error(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& rho) {
    return hermitian_eigenvalues(rho)(0);
}

void check_density(const Matrix& rho, const DensityTolerances& tol) {
    if (rho.rows() != rho.cols()) {
        throw std::invalid_argument("DensityMatrix: must be square");
    }
    const double herm = hermiticity_error(rho);
    if (herm > tol.hermiticity) {
        throw std::invalid_argument("DensityMatrix: Hermiticity deviation " +
                                    std::to_string(herm));
    }
    const double tr = trace_error(rho);
    if (tr > tol.trace) {
        throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                    std::to_string(tr));
    }
    const double lam = min_eigenvalue(rho);
    if (lam < -tol.positivity) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(lam));
    }
}

Vector basis_vector(const HilbertDims& dims, int qubit_level, int n) {
    dims.validate();
    if (qubit_level < 0 || qubit_level > 1 || n < 0 || n >= dims.n_fock) {
        throw std::invalid_argument("basis_vector: index out of range");
    }
    Vector v = Vector::Zero(dims.total());
    v(qubit_level * dims.n_fock + n) = 1.0;
    return v;
}

Matrix ground_state_density(const HilbertDims& dims) {
    Vector g = basis_vector(dims, 1, 0);
    return g * g.adjoint();
}

}  // namespace jcsim
