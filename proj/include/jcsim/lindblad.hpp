#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "jcsim/params.hpp"
#include "jcsim/rk45.hpp"

namespace jcsim {

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

// Embedded joint-space operators for one Hilbert-space size, built once and
// shared by the hot paths. Immutable after construction.
struct JointOps {
    HilbertDims dims;
    SparseCMatrix a, a_dag, num;  // cavity: a, a^dag, a^dag a
    SparseCMatrix sm, sp, pe;     // qubit: sigma^-, sigma^+, sigma^+ sigma^-
    SparseCMatrix sx;
    SparseCMatrix h_jc;           // g-independent shape: a sigma^+ + a^dag sigma^-

    explicit JointOps(const HilbertDims& dims);
};

// H = delta * sp*sm + g (a sp + a^dag sm) + (f_now / 2) sx, all embedded.
Matrix build_hamiltonian(const SystemParams& p, double f_now);

// Gamma[rho] = (kappa/2)(2 a rho a^dag - num rho - rho num)
//            + (gamma1/2)(2 sm rho sp - pe rho - rho pe)
Matrix dissipator(const Matrix& rho, const SystemParams& p);

// d rho / dt = -i [H, rho] + Gamma[rho]
Matrix lindblad_rhs(const Matrix& rho, const SystemParams& p, double f_now);

struct Trajectory {
    std::vector<double> times;
    std::vector<Matrix> states;
    double max_trace_drift = 0.0;       // max |Tr rho - 1| before renormalization
    double max_hermiticity_error = 0.0; // max over sampled states
    int renormalizations = 0;           // times the trace was reset (drift > 1e-8)
};

// Adaptive integration of the master equation, sampling onto t_grid. The
// integration is split at the drive switching time, so a step drive is exact.
Trajectory evolve(const Matrix& rho0, const SystemParams& p, const DriveProtocol& drive,
                  const std::vector<double>& t_grid, const IntegratorOptions& opt = {});

// Generator in matrix form under column-stacking vectorization
// (vec(rho)[i + j*d] = rho(i, j)): vec(d rho/dt) = L vec(rho).
SparseCMatrix liouvillian_sparse(const SystemParams& p, double f_now);
Matrix liouvillian(const SystemParams& p, double f_now);

struct SteadyStateResult {
    Matrix rho;
    double residual = 0.0;   // ||L vec(rho)||_2 / ||L||_F
    double null_gap = 0.0;   // smallest-singular-value estimate of the bordered system;
                             // large compared with degeneracy_tol * ||L||_F certifies a
                             // one-dimensional null space
    double norm_l = 0.0;     // ||L||_F
};

// Trace-one Hermitian null vector of the Liouvillian. Small systems go through
// a full SVD (smallest singular vector); large ones through a sparse LU of the
// trace-bordered system, verified against the same residual bound
// ||L vec(rho)|| < 1e-10 ||L||. Degenerate null spaces raise numerical_error.
Matrix steady_state_nullspace(const SystemParams& p, double f_now);
SteadyStateResult steady_state_nullspace_info(const SystemParams& p, double f_now);

struct MarchResult {
    Matrix rho;
    double t_final = 0.0;
    double rhs_norm = 0.0;  // max-entry norm of d rho/dt at t_final
    bool stationary = false;
};

// Long-time marching from |g,0><g,0| under a constant drive. The base horizon
// is 50 * max(1/kappa, 1/gamma1); it is extended (up to 8x) until
// ||d rho/dt||_max < 1e-9.
MarchResult steady_state_marching(const SystemParams& p, double f_now,
                                  const IntegratorOptions& opt = {});

namespace detail {
Matrix steady_state_svd(const SystemParams& p, double f_now, SteadyStateResult* info);
Matrix steady_state_bordered(const SystemParams& p, double f_now, SteadyStateResult* info);
}  // namespace detail

}  // namespace jcsim
