#include "jcsim/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "jcsim/errors.hpp"

namespace jcsim {

namespace {

using Vector3c = Eigen::Vector3cd;

Vector3c pack(const MBState& s) { return Vector3c(s.a, s.sp, Complex(s.sz, 0.0)); }

MBState unpack(const Vector3c& v) { return {v(0), v(1), v(2).real()}; }

MBDeriv rhs_impl(const MBState& s, const SystemParams& p, double f) {
    const Complex sm = std::conj(s.sp);
    const Complex ap = std::conj(s.a);
    MBDeriv d;
    d.da = -0.5 * p.kappa * s.a - I_UNIT * p.g * sm;
    d.dsp = (I_UNIT * p.delta - 0.5 * p.gamma1) * s.sp -
            I_UNIT * (0.5 * f + p.g * ap) * s.sz;
    d.dsz = -p.gamma1 * (s.sz + 1.0) + 2.0 * I_UNIT * p.g * (ap * sm - s.a * s.sp) +
            I_UNIT * f * (sm - s.sp);
    return d;
}

// Real roots of a polynomial sum_k c[k] x^k (c.back() leading) through the
// companion matrix, with near-zero leading coefficients deflated first.
std::vector<double> real_poly_roots(std::vector<double> c, double imag_tol) {
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {};
    while (c.size() > 1 && std::abs(c.back()) < 1e-14 * scale) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};
    if (deg == 1) return {-c[0] / c[1]};

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
    std::vector<double> roots;
    for (int i = 0; i < deg; ++i) {
        const Complex z = solver.eigenvalues()(i);
        if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) {
            roots.push_back(z.real());
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

MBDeriv mb_rhs(const MBState& s, const SystemParams& p, double f_now) {
    if (!std::isfinite(s.sz) || !std::isfinite(std::abs(s.a)) || !std::isfinite(std::abs(s.sp))) {
        throw std::invalid_argument("mb_rhs: non-finite state");
    }
    return rhs_impl(s, p, f_now);
}

MBTrajectory mb_evolve(const MBState& s0, const SystemParams& p, const DriveProtocol& drive,
                       const std::vector<double>& t_grid, const IntegratorOptions& opt) {
    p.validate();
    MBTrajectory traj;
    traj.times = t_grid;
    traj.states.reserve(t_grid.size());

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

    Vector3c y = pack(s0);
    auto record = [&](const Vector3c& v) {
        MBState s = unpack(v);
        traj.states.push_back(s);
        traj.n_ph.push_back(s.n_ph());
        traj.n_q.push_back(s.n_q());
        traj.max_bloch_excess =
            std::max(traj.max_bloch_excess, std::max(0.0, s.bloch_norm2() - 1.0));
    };
    record(y);

    double t_prev = grid.front();
    for (std::size_t gi = 1; gi < grid.size(); ++gi) {
        const double t0 = t_prev, t1 = grid[gi];
        const double f_seg = drive.at(0.5 * (t0 + t1));
        const SystemParams& pp = p;
        integrate_rk45(
            [&pp, f_seg](double, const Vector3c& v) -> Vector3c {
                const MBDeriv d = rhs_impl(unpack(v), pp, f_seg);
                return Vector3c(d.da, d.dsp, Complex(d.dsz.real(), 0.0));
            },
            std::move(y), std::vector<double>{t0, t1}, opt,
            [&](std::size_t k, double, const Vector3c& v) {
                if (k == 1) y = v;
            });
        t_prev = t1;
        const bool silent = ton_inserted && t1 == drive.t_on &&
                            !std::binary_search(t_grid.begin(), t_grid.end(), t1);
        if (!silent) record(y);
    }
    return traj;
}

std::pair<Complex, Complex> steady_amplitudes(double n_q, const SystemParams& p, double f) {
    const double w = 2.0 * n_q - 1.0;
    const double den = 4.0 * p.g * p.g * w - p.gamma1 * p.kappa;
    const double scale = 4.0 * p.g * p.g + p.gamma1 * p.kappa;
    if (std::abs(den) < 1e-14 * std::max(scale, 1.0)) {
        throw numerical_error("steady_amplitudes: singular denominator at n_q = " +
                              std::to_string(n_q));
    }
    const Complex sp = I_UNIT * f * w * p.kappa / den;
    const Complex a = Complex(-2.0 * f * p.g * w / den, 0.0);
    return {sp, a};
}

double drive_of_nq(double n_q, const SystemParams& p) {
    if (!(n_q >= 0.0) || !(n_q < 0.5)) {
        throw std::domain_error("drive_of_nq: n_q must lie in [0, 1/2)");
    }
    const double w = 2.0 * n_q - 1.0;
    return std::abs(p.gamma1 * p.kappa - 4.0 * p.g * p.g * w) / p.kappa *
           std::sqrt(n_q / (1.0 - 2.0 * n_q));
}

std::vector<SteadyBranch> steady_branches(double f, const SystemParams& p) {
    if (!(f >= 0.0)) throw std::invalid_argument("steady_branches: f must be >= 0");
    // Squaring the drive relation gives
    //   B^2 n^3 - 2AB n^2 + (A^2 + 2 f^2 kappa^2) n - f^2 kappa^2 = 0
    // with A = gamma1 kappa + 4 g^2, B = 8 g^2.
    const double A = p.gamma1 * p.kappa + 4.0 * p.g * p.g;
    const double B = 8.0 * p.g * p.g;
    const double fk2 = f * f * p.kappa * p.kappa;
    std::vector<double> coeffs = {-fk2, A * A + 2.0 * fk2, -2.0 * A * B, B * B};
    std::vector<double> roots = real_poly_roots(coeffs, 1e-9);

    auto poly = [&](double n) {
        return ((B * B * n - 2.0 * A * B) * n + (A * A + 2.0 * fk2)) * n - fk2;
    };
    auto dpoly = [&](double n) {
        return (3.0 * B * B * n - 4.0 * A * B) * n + (A * A + 2.0 * fk2);
    };

    std::vector<SteadyBranch> out;
    for (double r : roots) {
        for (int it = 0; it < 3; ++it) {  // polish
            const double dp = dpoly(r);
            if (dp == 0.0) break;
            r -= poly(r) / dp;
        }
        if (r < -1e-12 || r >= 0.5) continue;
        const double nq = std::max(r, 0.0);
        // reject roots introduced by squaring / companion noise
        const double f_back = drive_of_nq(nq, p);
        if (std::abs(f_back - f) > 1e-8 * std::max(f, 1e-30) && std::abs(f_back - f) > 1e-12) {
            continue;
        }
        SteadyBranch b;
        b.n_q = nq;
        b.n_ph = -4.0 * nq * (2.0 * nq - 1.0) * p.g * p.g / (p.kappa * p.kappa);
        std::tie(b.sp, b.a) = steady_amplitudes(nq, p, f);
        b.stable = classify_stability(b, p, f);
        out.push_back(b);
    }
    std::sort(out.begin(), out.end(),
              [](const SteadyBranch& x, const SteadyBranch& y) { return x.n_q < y.n_q; });
    return out;
}

std::optional<std::pair<double, double>> nq_extrema(const SystemParams& p) {
    if (p.g <= 0.0) return std::nullopt;
    const double disc = 1.0 - 2.0 * p.gamma1 * p.kappa / (p.g * p.g);
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    return std::make_pair((3.0 + s) / 8.0, (3.0 - s) / 8.0);
}

bool bistable(const SystemParams& p) {
    return p.g > std::sqrt(2.0 * p.gamma1 * p.kappa);
}

Eigen::Matrix<double, 5, 5> mb_jacobian(const MBState& s, const SystemParams& p, double f) {
    const double ar = s.a.real(), ai = s.a.imag();
    const double sr = s.sp.real(), si = s.sp.imag();
    const double z = s.sz;
    const double g = p.g, k = p.kappa, G = p.gamma1, D = p.delta;

    Eigen::Matrix<double, 5, 5> J;
    J << -0.5 * k, 0.0, 0.0, -g, 0.0,
         0.0, -0.5 * k, -g, 0.0, 0.0,
         0.0, -g * z, -0.5 * G, -D, -g * ai,
         -g * z, 0.0, D, -0.5 * G, -(0.5 * f + g * ar),
         4.0 * g * si, 4.0 * g * sr, 4.0 * g * ai, 4.0 * g * ar + 2.0 * f, -G;
    return J;
}

bool classify_stability(const SteadyBranch& branch, const SystemParams& p, double f) {
    const MBState s{branch.a, branch.sp, 2.0 * branch.n_q - 1.0};
    const MBDeriv d = rhs_impl(s, p, f);
    const double residual =
        std::max({std::abs(d.da), std::abs(d.dsp), std::abs(d.dsz)});
    if (residual > 1e-8) {
        throw numerical_error("classify_stability: fixed-point residual " +
                              std::to_string(residual));
    }
    Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>> solver(mb_jacobian(s, p, f));
    return solver.eigenvalues().real().maxCoeff() < -1e-12;
}

namespace {

double rhs_norm(const MBState& s, const SystemParams& p, double f) {
    const MBDeriv d = rhs_impl(s, p, f);
    return std::max({std::abs(d.da), std::abs(d.dsp), std::abs(d.dsz)});
}

}  // namespace

MBState mb_settle(const MBState& s0, const SystemParams& p, double f_now, double rhs_tol,
                  double t_cap) {
    MBState s = s0;
    // Phase 1: march into the basin of the branch the dynamics selects. The
    // loose target sits above the integrator noise floor.
    const double march_tol = std::max(1e-7, rhs_tol);
    const DriveProtocol drive = DriveProtocol::constant_drive(f_now);
    double t = 0.0;
    double chunk = 200.0;
    while (rhs_norm(s, p, f_now) >= march_tol) {
        if (t >= t_cap) {
            throw numerical_error("mb_settle: no stationary state reached by t = " +
                                  std::to_string(t_cap) + " at f = " + std::to_string(f_now));
        }
        const double t1 = std::min(t + chunk, t_cap);
        MBTrajectory seg = mb_evolve(s, p, drive, {t, t1});
        s = seg.states.back();
        t = t1;
        chunk = std::min(2.0 * chunk, 3200.0);
    }
    // Phase 2: Newton-polish onto the fixed point itself.
    for (int it = 0; it < 20 && rhs_norm(s, p, f_now) >= rhs_tol; ++it) {
        const MBDeriv d = rhs_impl(s, p, f_now);
        Eigen::Matrix<double, 5, 1> fval;
        fval << d.da.real(), d.da.imag(), d.dsp.real(), d.dsp.imag(), d.dsz.real();
        const Eigen::Matrix<double, 5, 1> delta =
            mb_jacobian(s, p, f_now).partialPivLu().solve(fval);
        s.a -= Complex(delta(0), delta(1));
        s.sp -= Complex(delta(2), delta(3));
        s.sz -= delta(4);
    }
    if (rhs_norm(s, p, f_now) >= rhs_tol) {
        throw numerical_error("mb_settle: Newton polish stalled at f = " +
                              std::to_string(f_now));
    }
    return s;
}

HysteresisCurves hysteresis_sweep(const SystemParams& p, const std::vector<double>& f_grid) {
    for (std::size_t i = 1; i < f_grid.size(); ++i) {
        if (!(f_grid[i] > f_grid[i - 1])) {
            throw std::invalid_argument("hysteresis_sweep: f_grid must be ascending");
        }
    }
    HysteresisCurves curves;
    curves.f = f_grid;
    const std::size_t n = f_grid.size();
    curves.n_ph_fwd.resize(n);
    curves.n_q_fwd.resize(n);
    curves.n_ph_bwd.resize(n);
    curves.n_q_bwd.resize(n);
    curves.state_fwd.resize(n);
    curves.state_bwd.resize(n);

    MBState s = MBState::ground();
    for (std::size_t i = 0; i < n; ++i) {
        s = mb_settle(s, p, f_grid[i]);
        curves.state_fwd[i] = s;
        curves.n_ph_fwd[i] = s.n_ph();
        curves.n_q_fwd[i] = s.n_q();
    }
    s = MBState::ground();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = n - 1 - j;
        s = mb_settle(s, p, f_grid[i]);
        curves.state_bwd[i] = s;
        curves.n_ph_bwd[i] = s.n_ph();
        curves.n_q_bwd[i] = s.n_q();
    }
    return curves;
}

Complex perturbative_correlator(double n_q, double n_ph, Complex a, const SystemParams& p,
                                double f) {
    const double w = 2.0 * n_q - 1.0;
    return 2.0 * I_UNIT * p.kappa * p.g * w * (2.0 * p.g * n_ph + f * a) /
               ((2.0 * p.kappa + p.gamma1) * p.gamma1) -
           2.0 * I_UNIT * p.g * n_q / (2.0 * p.kappa + p.gamma1);
}

StrongDriveLimits strong_drive_limits(const SystemParams& p) {
    StrongDriveLimits lim;
    lim.n_ph_inf = (p.kappa > 0.0) ? (p.g / p.kappa) * (p.g / p.kappa) : 0.0;
    lim.sigma_mag = 0.5;
    lim.f_star = std::max(p.gamma1, (p.kappa > 0.0) ? p.g * p.g / p.kappa : p.gamma1);
    return lim;
}

}  // namespace jcsim
