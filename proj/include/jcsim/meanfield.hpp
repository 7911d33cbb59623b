#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "jcsim/params.hpp"
#include "jcsim/rk45.hpp"

namespace jcsim {

// Mean-field state: <a>, <sigma^+> and the real inversion <sigma^z>.
// <sigma^-> and <a^+> are the conjugates by construction.
struct MBState {
    Complex a{0.0, 0.0};
    Complex sp{0.0, 0.0};
    double sz = -1.0;

    static MBState ground() { return {}; }
    double n_q() const { return 0.5 * (sz + 1.0); }
    double n_ph() const { return std::norm(a); }
    double bloch_norm2() const { return 4.0 * std::norm(sp) + sz * sz; }
};

// Coupled derivatives of (<a>, <sigma^+>, <sigma^z>). dsz is analytically
// real; it is kept complex so the contract |Im dsz| < 1e-14 can be checked.
struct MBDeriv {
    Complex da, dsp, dsz;
};

MBDeriv mb_rhs(const MBState& s, const SystemParams& p, double f_now);

struct MBTrajectory {
    std::vector<double> times;
    std::vector<MBState> states;
    std::vector<double> n_ph, n_q;
    double max_bloch_excess = 0.0;  // max over samples of bloch_norm2 - 1 (clamped at 0)
};

MBTrajectory mb_evolve(const MBState& s0, const SystemParams& p, const DriveProtocol& drive,
                       const std::vector<double>& t_grid, const IntegratorOptions& opt = {});

// Stationary amplitudes at a given qubit occupation:
//   <sigma^+> =  i f (2 n_q - 1) kappa / (4 g^2 (2 n_q - 1) - gamma1 kappa)
//   <a>       = -2 f g (2 n_q - 1)       / (4 g^2 (2 n_q - 1) - gamma1 kappa)
// Returns (sp, a); throws numerical_error when the shared denominator vanishes.
std::pair<Complex, Complex> steady_amplitudes(double n_q, const SystemParams& p, double f);

// f(n_q) = |gamma1 kappa - 4 g^2 (2 n_q - 1)| / kappa * sqrt(n_q / (1 - 2 n_q)),
// defined for 0 <= n_q < 1/2.
double drive_of_nq(double n_q, const SystemParams& p);

struct SteadyBranch {
    double n_q = 0.0;
    double n_ph = 0.0;  // -4 n_q (2 n_q - 1) g^2 / kappa^2
    Complex a{0.0, 0.0};
    Complex sp{0.0, 0.0};
    bool stable = true;
};

// All stationary branches at drive f: real roots in [0, 1/2) of the cubic
// f^2 kappa^2 (1 - 2 n_q) = n_q (gamma1 kappa - 4 g^2 (2 n_q - 1))^2,
// found through the companion matrix, Newton-polished, and validated against
// the unsquared drive relation (relative residual 1e-8). Sorted by n_q.
std::vector<SteadyBranch> steady_branches(double f, const SystemParams& p);

// Fold points of the inverse drive-response relation, (3 +/- sqrt(1 - 2
// gamma1 kappa / g^2)) / 8, descending; nullopt below the bistability
// threshold.
std::optional<std::pair<double, double>> nq_extrema(const SystemParams& p);

// Strict inequality g > sqrt(2 gamma1 kappa).
bool bistable(const SystemParams& p);

// Linear stability of a stationary branch: eigenvalues of the analytic 5x5
// Jacobian in (Re a, Im a, Re sp, Im sp, sz); stable iff all real parts are
// below -1e-12. Throws if the fixed-point residual exceeds 1e-8.
bool classify_stability(const SteadyBranch& branch, const SystemParams& p, double f);

Eigen::Matrix<double, 5, 5> mb_jacobian(const MBState& s, const SystemParams& p, double f);

struct HysteresisCurves {
    std::vector<double> f;
    std::vector<double> n_ph_fwd, n_q_fwd;
    std::vector<double> n_ph_bwd, n_q_bwd;
    std::vector<MBState> state_fwd, state_bwd;
};

// Warm-started quasi-static sweep: each grid point is settled by time
// integration seeded with the previous point's state (ground at the start of
// each pass); the backward pass runs the grid reversed. Throws
// numerical_error if a point does not settle.
HysteresisCurves hysteresis_sweep(const SystemParams& p, const std::vector<double>& f_grid);

// Settle under a constant drive until ||mb_rhs||_inf < rhs_tol (capped).
MBState mb_settle(const MBState& s0, const SystemParams& p, double f_now,
                  double rhs_tol = 1e-11, double t_cap = 20000.0);

// <delta a delta sigma^+> estimated from the stationary mean-field solution:
//   2 i kappa g (2 n_q - 1)(2 g n_ph + f a) / ((2 kappa + gamma1) gamma1)
//   - 2 i g n_q / (2 kappa + gamma1)
Complex perturbative_correlator(double n_q, double n_ph, Complex a, const SystemParams& p,
                                double f);

struct StrongDriveLimits {
    double n_ph_inf;     // (g / kappa)^2
    double sigma_mag;    // |<sigma^{+-}>| = 1/2 in the f >> f* qubit ground state
    double f_star;       // max(gamma1, g^2 / kappa)
};

StrongDriveLimits strong_drive_limits(const SystemParams& p);

}  // namespace jcsim
