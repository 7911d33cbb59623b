#include "jcsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "jcsim/errors.hpp"

namespace jcsim {

void SystemParams::validate() const {
    dims.validate();
    if (!(kappa >= 0.0) || !(gamma1 >= 0.0)) {
        throw std::invalid_argument("SystemParams: kappa and gamma1 must be >= 0");
    }
    if (!(g >= 0.0)) throw std::invalid_argument("SystemParams: g must be >= 0");
    if (!(f >= 0.0)) throw std::invalid_argument("SystemParams: f must be >= 0");
    if (!std::isfinite(delta)) throw std::invalid_argument("SystemParams: delta must be finite");
}

JointOps::JointOps(const HilbertDims& d) : dims(d) {
    const QubitOps q = qubit_ops();
    const Matrix af = fock_annihilation(d);
    a = embed_fock(af, d).sparseView();
    a_dag = embed_fock(af.adjoint(), d).sparseView();
    num = embed_fock((af.adjoint() * af).eval(), d).sparseView();
    sm = embed_qubit(q.sm, d).sparseView();
    sp = embed_qubit(q.sp, d).sparseView();
    pe = embed_qubit((q.sp * q.sm).eval(), d).sparseView();
    sx = embed_qubit(q.sx, d).sparseView();
    h_jc = (embed(q.sp, af, d) + embed(q.sm, af.adjoint(), d)).sparseView();
}

namespace {

// Hot-path generator: operators prebuilt, Hamiltonian assembled per drive value.
struct Generator {
    const SystemParams& p;
    JointOps ops;
    SparseCMatrix h;  // for the current drive value

    Generator(const SystemParams& params, double f_now) : p(params), ops(params.dims) {
        set_drive(f_now);
    }

    void set_drive(double f_now) {
        h = (p.delta * ops.pe + p.g * ops.h_jc + (0.5 * f_now) * ops.sx).pruned();
    }

    Matrix rhs(const Matrix& rho) const {
        Matrix out = Complex(0, -1) * (h * rho - rho * h);
        if (p.kappa != 0.0) {
            out += (0.5 * p.kappa) *
                   (2.0 * (ops.a * rho * ops.a_dag) - ops.num * rho - rho * ops.num);
        }
        if (p.gamma1 != 0.0) {
            out += (0.5 * p.gamma1) *
                   (2.0 * (ops.sm * rho * ops.sp) - ops.pe * rho - rho * ops.pe);
        }
        return out;
    }
};

Matrix unvec(const Vector& v, int d) {
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

}  // namespace

Matrix build_hamiltonian(const SystemParams& p, double f_now) {
    p.validate();
    const QubitOps q = qubit_ops();
    const Matrix af = fock_annihilation(p.dims);
    return p.delta * embed_qubit((q.sp * q.sm).eval(), p.dims) +
           p.g * (embed(q.sp, af, p.dims) + embed(q.sm, af.adjoint(), p.dims)) +
           (0.5 * f_now) * embed_qubit(q.sx, p.dims);
}

Matrix dissipator(const Matrix& rho, const SystemParams& p) {
    p.validate();
    SystemParams pd = p;
    pd.delta = 0.0;
    pd.g = 0.0;
    Generator gen(pd, 0.0);  // Hamiltonian part vanishes
    return gen.rhs(rho);
}

Matrix lindblad_rhs(const Matrix& rho, const SystemParams& p, double f_now) {
    p.validate();
    Generator gen(p, f_now);
    return gen.rhs(rho);
}

Trajectory evolve(const Matrix& rho0, const SystemParams& p, const DriveProtocol& drive,
                  const std::vector<double>& t_grid, const IntegratorOptions& opt) {
    p.validate();
    check_density(rho0);
    if (t_grid.empty()) throw std::invalid_argument("evolve: empty time grid");
    if (rho0.rows() != p.dims.total()) {
        throw std::invalid_argument("evolve: initial state dim does not match params");
    }

    Trajectory traj;
    traj.times = t_grid;
    traj.states.reserve(t_grid.size());

    // Split integration at the drive discontinuity so each segment sees a
    // smooth (constant) envelope.
    std::vector<double> grid = t_grid;
    bool ton_inserted = false;
    if (drive.kind == DriveProtocol::Kind::step && drive.t_on > t_grid.front() &&
        drive.t_on < t_grid.back()) {
        auto it = std::lower_bound(grid.begin(), grid.end(), drive.t_on);
        if (it == grid.end() || *it != drive.t_on) {
            grid.insert(it, drive.t_on);
            ton_inserted = true;
        }
    }

    Generator gen(p, 0.0);
    Matrix rho = rho0;
    double f_prev = std::numeric_limits<double>::quiet_NaN();

    double t_prev = grid.front();
    auto record = [&](Matrix& state) {
        const double drift = trace_error(state);
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        traj.max_hermiticity_error =
            std::max(traj.max_hermiticity_error, hermiticity_error(state));
        if (drift > 1e-8) {  // reset the propagating state so drift cannot compound
            state /= state.trace().real();
            ++traj.renormalizations;
        }
        traj.states.push_back(state);
    };
    record(rho);  // first sample is the initial state

    for (std::size_t gi = 1; gi < grid.size(); ++gi) {
        const double t0 = t_prev, t1 = grid[gi];
        const double f_seg = drive.at(0.5 * (t0 + t1));
        if (f_seg != f_prev) {
            gen.set_drive(f_seg);
            f_prev = f_seg;
        }
        integrate_rk45(
            [&](double, const Matrix& y) { return gen.rhs(y); }, std::move(rho),
            std::vector<double>{t0, t1}, opt,
            [&](std::size_t k, double, const Matrix& y) {
                if (k == 1) rho = y;
            });
        t_prev = t1;
        const bool silent = ton_inserted && t1 == drive.t_on &&
                            !std::binary_search(t_grid.begin(), t_grid.end(), t1);
        if (!silent) record(rho);
    }
    if (traj.states.size() != t_grid.size()) {
        throw numerical_error("evolve: internal sampling mismatch");
    }
    if (traj.max_hermiticity_error > 1e-7) {
        throw numerical_error("evolve: Hermiticity drift " +
                              std::to_string(traj.max_hermiticity_error));
    }
    return traj;
}

SparseCMatrix liouvillian_sparse(const SystemParams& p, double f_now) {
    p.validate();
    const int d = p.dims.total();
    JointOps ops(p.dims);
    const SparseCMatrix h =
        (p.delta * ops.pe + p.g * ops.h_jc + (0.5 * f_now) * ops.sx).pruned();

    SparseCMatrix id(d, d);
    id.setIdentity();

    // vec(A X B) = (B^T kron A) vec(X) under column stacking
    const SparseCMatrix h_t = h.transpose();
    const SparseCMatrix a_dag_t = ops.a_dag.transpose();
    const SparseCMatrix num_t = ops.num.transpose();
    const SparseCMatrix sp_t = ops.sp.transpose();
    const SparseCMatrix pe_t = ops.pe.transpose();

    SparseCMatrix L =
        Complex(0, -1) * Eigen::kroneckerProduct(id, h).eval() +
        Complex(0, 1) * Eigen::kroneckerProduct(h_t, id).eval();
    if (p.kappa != 0.0) {
        L += (0.5 * p.kappa) *
             (2.0 * Eigen::kroneckerProduct(a_dag_t, ops.a).eval() -
              Eigen::kroneckerProduct(id, ops.num).eval() -
              Eigen::kroneckerProduct(num_t, id).eval());
    }
    if (p.gamma1 != 0.0) {
        L += (0.5 * p.gamma1) *
             (2.0 * Eigen::kroneckerProduct(sp_t, ops.sm).eval() -
              Eigen::kroneckerProduct(id, ops.pe).eval() -
              Eigen::kroneckerProduct(pe_t, id).eval());
    }
    L.makeCompressed();
    return L;
}

Matrix liouvillian(const SystemParams& p, double f_now) {
    return Matrix(liouvillian_sparse(p, f_now));
}

namespace detail {

namespace {

void finalize_steady_state(Matrix& rho, const SparseCMatrix& l_sparse,
                           SteadyStateResult* info, double null_gap) {
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12) {
        throw numerical_error("steady state: vanishing trace after symmetrization");
    }
    rho /= tr;

    const double norm_l = l_sparse.norm();
    const double residual =
        (l_sparse * Eigen::Map<const Vector>(rho.data(), rho.size())).norm() / norm_l;
    if (residual > 1e-10) {
        throw numerical_error("steady state: residual " + std::to_string(residual) +
                              " exceeds 1e-10 * ||L||");
    }
    if (info) {
        info->rho = rho;
        info->residual = residual;
        info->null_gap = null_gap;
        info->norm_l = norm_l;
    }
}

}  // namespace

Matrix steady_state_svd(const SystemParams& p, double f_now, SteadyStateResult* info) {
    const int d = p.dims.total();
    const Matrix l_dense = liouvillian(p, f_now);
    Eigen::BDCSVD<Matrix> svd(l_dense, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();  // descending
    const int n = static_cast<int>(sv.size());
    const double scale = sv(0);
    if (sv(n - 2) < 1e-10 * scale) {
        throw numerical_error("steady state: degenerate null space (second singular value " +
                              std::to_string(sv(n - 2)) + ")");
    }
    Vector v = svd.matrixV().col(n - 1);
    Matrix rho = unvec(v, d);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-10) {
        throw numerical_error("steady state: traceless null vector");
    }
    rho /= tr;  // fixes both phase and normalization
    finalize_steady_state(rho, liouvillian_sparse(p, f_now), info, sv(n - 2));
    return rho;
}

Matrix steady_state_bordered(const SystemParams& p, double f_now, SteadyStateResult* info) {
    const int d = p.dims.total();
    const int dd = d * d;
    const SparseCMatrix L = liouvillian_sparse(p, f_now);

    // Replace the rho_00 row by the trace functional. The trace is a left null
    // vector of L, so the dropped row is linearly dependent on the rest; the
    // bordered system is nonsingular exactly when the null space is simple.
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<std::size_t>(L.nonZeros()) + static_cast<std::size_t>(d));
    for (int k = 0; k < L.outerSize(); ++k) {
        for (SparseCMatrix::InnerIterator it(L, k); it; ++it) {
            if (it.row() != 0) trips.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int j = 0; j < d; ++j) trips.emplace_back(0, j * (d + 1), Complex(1.0));
    SparseCMatrix M(dd, dd);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();

    Eigen::SparseLU<SparseCMatrix> lu;
    lu.analyzePattern(M);
    lu.factorize(M);
    if (lu.info() != Eigen::Success) {
        throw numerical_error("steady state: bordered system is singular (degenerate null space?)");
    }

    Vector b = Vector::Zero(dd);
    b(0) = 1.0;
    Vector x = lu.solve(b);
    for (int it = 0; it < 3; ++it) {  // iterative refinement
        Vector r = b - M * x;
        if (r.norm() < 1e-14 * x.norm()) break;
        x += lu.solve(r);
    }

    // Smallest singular value of M via inverse power iteration on (M^H M)^-1;
    // it certifies that the null space is one-dimensional.
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector z(dd);
    for (int i = 0; i < dd; ++i) z(i) = Complex(gauss(rng), gauss(rng));
    z.normalize();
    double sigma_min = 0.0;
    for (int it = 0; it < 6; ++it) {
        Vector w = lu.adjoint().solve(z);
        Vector y = lu.solve(w);
        const double growth = y.norm();
        sigma_min = 1.0 / std::sqrt(growth);
        z = y / growth;
    }
    if (sigma_min < 1e-10 * L.norm()) {
        throw numerical_error("steady state: degenerate null space (sigma_min(M) ~ " +
                              std::to_string(sigma_min) + ")");
    }

    Matrix rho = unvec(x, d);
    finalize_steady_state(rho, L, info, sigma_min);
    return rho;
}

}  // namespace detail

Matrix steady_state_nullspace(const SystemParams& p, double f_now) {
    return steady_state_nullspace_info(p, f_now).rho;
}

SteadyStateResult steady_state_nullspace_info(const SystemParams& p, double f_now) {
    p.validate();
    if (!(p.kappa > 0.0) || !(p.gamma1 > 0.0)) {
        throw std::invalid_argument("steady_state_nullspace: kappa and gamma1 must be > 0");
    }
    SteadyStateResult info;
    const int dd = p.dims.total() * p.dims.total();
    if (dd <= 400) {
        detail::steady_state_svd(p, f_now, &info);
    } else {
        detail::steady_state_bordered(p, f_now, &info);
    }
    return info;
}

MarchResult steady_state_marching(const SystemParams& p, double f_now,
                                  const IntegratorOptions& opt) {
    p.validate();
    if (!(p.kappa > 0.0) || !(p.gamma1 > 0.0)) {
        throw std::invalid_argument("steady_state_marching: kappa and gamma1 must be > 0");
    }
    const double horizon = 50.0 * std::max(1.0 / p.kappa, 1.0 / p.gamma1);
    MarchResult res;
    res.rho = ground_state_density(p.dims);
    double t = 0.0;
    res.rhs_norm = lindblad_rhs(res.rho, p, f_now).cwiseAbs().maxCoeff();
    if (res.rhs_norm < 1e-9) {
        res.stationary = true;
        return res;
    }
    // The residual plateaus near the integration noise floor, so the
    // stationarity target needs a tolerance below it.
    IntegratorOptions tight = opt;
    tight.atol = std::min(opt.atol, 1e-12);
    tight.rtol = std::min(opt.rtol, 1e-10);
    const DriveProtocol drive = DriveProtocol::constant_drive(f_now);
    // 1x, then extend to 2x, 4x, 8x of the base horizon if not yet stationary
    for (int round = 0; round < 4; ++round) {
        const double t_next = (round == 0) ? horizon : 2.0 * t;
        Trajectory seg = evolve(res.rho, p, drive, {t, t_next}, tight);
        res.rho = seg.states.back();
        t = t_next;
        res.rhs_norm = lindblad_rhs(res.rho, p, f_now).cwiseAbs().maxCoeff();
        if (res.rhs_norm < 1e-9) {
            res.stationary = true;
            break;
        }
    }
    res.t_final = t;
    return res;
}

}  // namespace jcsim
