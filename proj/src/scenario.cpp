#include "jcsim/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "jcsim/errors.hpp"

namespace jcsim {

namespace {

constexpr double kTruncationTol = 1e-4;  // n_ph / n_q stability under n_fock -> 1.5 n_fock
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer");
    }
    return static_cast<int>(v);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Dense embedded operators needed by the observable extraction.
struct ObsOps {
    Matrix a, num, sp, sz, pe;
    Matrix a_sp, a_sz;  // precomputed products for the correlators

    explicit ObsOps(const HilbertDims& dims) {
        const QubitOps q = qubit_ops();
        const Matrix af = fock_annihilation(dims);
        a = embed_fock(af, dims);
        num = embed_fock((af.adjoint() * af).eval(), dims);
        sp = embed_qubit(q.sp, dims);
        sz = embed_qubit(q.sz, dims);
        pe = embed_qubit((q.sp * q.sm).eval(), dims);
        a_sp = a * sp;
        a_sz = a * sz;
    }
};

struct LindbladPoint {
    double n_ph = 0.0, n_q = 0.0, entropy = 0.0;
    Complex corr_a_sp{0.0, 0.0}, corr_a_sz{0.0, 0.0};
};

LindbladPoint extract_point(const Matrix& rho, const ObsOps& ops) {
    LindbladPoint pt;
    pt.n_ph = expectation(rho, ops.num).real();
    pt.n_q = expectation(rho, ops.pe).real();
    pt.entropy = von_neumann_entropy(rho);
    const Complex ea = expectation(rho, ops.a);
    pt.corr_a_sp = expectation(rho, ops.a_sp) - ea * expectation(rho, ops.sp);
    pt.corr_a_sz = expectation(rho, ops.a_sz) - ea * expectation(rho, ops.sz);
    return pt;
}

void echo_params(ResultTable& table, const ScenarioConfig& cfg, int n_fock_used) {
    table.metadata.emplace_back("scenario", cfg.scenario);
    table.metadata.emplace_back("delta", fmt(cfg.delta));
    table.metadata.emplace_back("g", fmt(cfg.g));
    table.metadata.emplace_back("kappa", fmt(cfg.kappa));
    table.metadata.emplace_back("gamma1", fmt(cfg.gamma1));
    table.metadata.emplace_back("tol", fmt(cfg.tol));
    table.metadata.emplace_back("n_fock", std::to_string(n_fock_used));
}

int check_n_fock(int n_fock) { return static_cast<int>(std::ceil(1.5 * n_fock)); }

// Worst |small - big| over the listed columns; both tables must agree on shape.
void finish_convergence(ResultTable& published, const ResultTable& small_run, int n_fock,
                        const std::vector<std::size_t>& cols) {
    if (small_run.rows.size() != published.rows.size()) {
        throw numerical_error("convergence check: row count mismatch between Fock runs");
    }
    double worst = 0.0;
    std::size_t worst_r = 0, worst_c = 0;
    for (std::size_t r = 0; r < small_run.rows.size(); ++r) {
        for (std::size_t c : cols) {
            const double a = small_run.rows[r][c], b = published.rows[r][c];
            if (std::isnan(a) && std::isnan(b)) continue;
            if (std::abs(a - b) > worst) {
                worst = std::abs(a - b);
                worst_r = r;
                worst_c = c;
            }
        }
    }
    published.max_truncation_diff = worst;
    published.converged = worst < kTruncationTol;
    published.metadata.emplace_back("n_fock_check", std::to_string(n_fock));
    published.metadata.emplace_back("max_truncation_diff", fmt(worst));
    if (worst > 0.0) {
        // both Fock results at the worst point, for the non-convergence report
        const std::string col_name = worst_c < published.columns.size()
                                         ? published.columns[worst_c]
                                         : (worst_c == published.columns.size() ? "n_ph" : "n_q");
        published.metadata.emplace_back("worst_truncation_column", col_name);
        published.metadata.emplace_back("worst_truncation_at", fmt(published.rows[worst_r][0]));
        published.metadata.emplace_back("value_at_n_fock", fmt(small_run.rows[worst_r][worst_c]));
        published.metadata.emplace_back("value_at_n_fock_check",
                                        fmt(published.rows[worst_r][worst_c]));
    }
    published.metadata.emplace_back("converged", published.converged ? "yes" : "no");
}

IntegratorOptions integrator_options(const ScenarioConfig& cfg) {
    IntegratorOptions opt;
    opt.atol = cfg.tol;
    opt.rtol = std::max(100.0 * cfg.tol, 1e-12);
    return opt;
}

}  // namespace

SystemParams ScenarioConfig::params(int n_fock_override) const {
    SystemParams p;
    p.delta = delta;
    p.g = g;
    p.kappa = kappa;
    p.gamma1 = gamma1;
    p.f = f;
    p.dims = HilbertDims{n_fock_override > 0 ? n_fock_override : n_fock};
    p.validate();
    return p;
}

void ScenarioConfig::validate() const {
    params();
    if (scenario != "steady-sweep" && scenario != "evolve" && scenario != "mf-branches" &&
        scenario != "entropy-dynamics") {
        throw std::invalid_argument("config: unknown scenario '" + scenario + "'");
    }
    if (t_samples < 2) throw std::invalid_argument("config: t_samples must be >= 2");
    if (!(t_max > 0)) throw std::invalid_argument("config: t_max must be > 0");
    if (!(tol > 0)) throw std::invalid_argument("config: tol must be > 0");
    for (std::size_t i = 1; i < f_grid.size(); ++i) {
        if (!(f_grid[i] > f_grid[i - 1])) {
            throw std::invalid_argument("config: f_grid must be strictly ascending");
        }
    }
    for (double v : f_grid) {
        if (!(v >= 0)) throw std::invalid_argument("config: f_grid values must be >= 0");
    }
    for (double v : f_list) {
        if (!(v >= 0)) throw std::invalid_argument("config: f_list values must be >= 0");
    }
}

std::vector<double> parse_grid_spec(const std::string& text) {
    std::vector<double> out;
    if (text.rfind("lin:", 0) == 0) {
        const std::string body = text.substr(4);
        std::istringstream ss(body);
        std::string tok;
        std::vector<double> parts;
        while (std::getline(ss, tok, ':')) parts.push_back(parse_double("grid", trim(tok)));
        if (parts.size() != 3 || parts[2] < 2 || parts[2] != std::floor(parts[2])) {
            throw std::invalid_argument("config: grid spec must be lin:start:stop:count");
        }
        return linspace(parts[0], parts[1], static_cast<int>(parts[2]));
    }
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(parse_double("grid", tok));
    }
    if (out.empty()) throw std::invalid_argument("config: empty grid spec");
    return out;
}

void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "g") cfg.g = parse_double(key, value);
    else if (key == "kappa") cfg.kappa = parse_double(key, value);
    else if (key == "gamma1") cfg.gamma1 = parse_double(key, value);
    else if (key == "f") cfg.f = parse_double(key, value);
    else if (key == "f_grid") cfg.f_grid = parse_grid_spec(value);
    else if (key == "f_list") cfg.f_list = parse_grid_spec(value);
    else if (key == "t_max") cfg.t_max = parse_double(key, value);
    else if (key == "t_samples") cfg.t_samples = parse_int(key, value);
    else if (key == "n_fock") cfg.n_fock = parse_int(key, value);
    else if (key == "tol") cfg.tol = parse_double(key, value);
    else if (key == "out") cfg.out_path = value;
    else if (key == "threads") cfg.threads = parse_int(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key = value");
        }
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void apply_env(ScenarioConfig& cfg, bool n_fock_from_flag) {
    if (n_fock_from_flag) return;
    if (const char* env = std::getenv("SIM_FOCK_DIM")) {
        cfg.n_fock = parse_int("SIM_FOCK_DIM", env);
    }
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t workers =
        std::min<std::size_t>(n, threads > 0 ? static_cast<std::size_t>(threads) : hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_csv(const ResultTable& table, std::ostream& os) {
    for (const auto& [k, v] : table.metadata) os << "# " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    }
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << fmt(row[c]) << (c + 1 < row.size() ? "," : "\n");
        }
    }
}

void write_csv_file(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    write_csv(table, out);
}

namespace {

// ---------- steady-sweep ----------

ResultTable steady_sweep_core(const ScenarioConfig& cfg, int n_fock) {
    const SystemParams p = cfg.params(n_fock);
    const std::vector<double>& grid = cfg.f_grid;
    const ObsOps ops(p.dims);
    const IntegratorOptions opt = integrator_options(cfg);

    HysteresisCurves hyst = hysteresis_sweep(p, grid);

    std::vector<LindbladPoint> points(grid.size());
    std::vector<int> branch_counts(grid.size(), 0);
    std::vector<double> crosscheck_dist(grid.size(), kNan);
    std::atomic<int> crosscheck_skipped{0};

    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const double f = grid[i];
        const Matrix rho = steady_state_nullspace(p, f);
        points[i] = extract_point(rho, ops);
        branch_counts[i] = static_cast<int>(steady_branches(f, p).size());
        if (i % 10 == 0) {
            // cross-method check: long-time marching must land on the null vector
            MarchResult march = steady_state_marching(p, f, opt);
            if (march.stationary) {
                const double dist = (march.rho - rho).cwiseAbs().maxCoeff();
                crosscheck_dist[i] = dist;
                if (dist > 1e-6) {
                    throw numerical_error(
                        "steady-sweep: marching disagrees with null space at f = " +
                        std::to_string(f) + " (max-entry distance " + std::to_string(dist) + ")");
                }
            } else {
                // slow relaxation (e.g. metastable window): the march never
                // reached the limit, so there is nothing to compare against
                crosscheck_skipped.fetch_add(1);
            }
        }
    });

    ResultTable table;
    table.columns = {"f",          "n_ph_lindblad", "n_q_lindblad", "n_ph_mf_fwd",
                     "n_ph_mf_bwd", "n_q_mf_fwd",    "n_q_mf_bwd",   "corr_asp_re",
                     "corr_asp_im", "corr_asz_re",   "corr_asz_im",  "S_lindblad",
                     "S_mf",        "n_branches"};
    double knee_f = kNan, knee_slope = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const LindbladPoint& pt = points[i];
        const double s_mf = meanfield_entropy_mb(hyst.state_fwd[i]);

        ObservableRecord rec;
        rec.x = grid[i];
        rec.n_ph = pt.n_ph;
        rec.n_q = pt.n_q;
        rec.corr_a_sp = pt.corr_a_sp;
        rec.corr_a_sz = pt.corr_a_sz;
        rec.entropy = pt.entropy;
        rec.entropy_mf = s_mf;
        validate_record(rec, p.dims);
        ObservableRecord rec_mf;
        rec_mf.x = grid[i];
        rec_mf.n_ph = hyst.n_ph_fwd[i];
        rec_mf.n_q = hyst.n_q_fwd[i];
        rec_mf.entropy_mf = s_mf;
        rec_mf.source = Source::meanfield;
        validate_record(rec_mf, p.dims);

        table.rows.push_back({grid[i], pt.n_ph, pt.n_q, hyst.n_ph_fwd[i], hyst.n_ph_bwd[i],
                              hyst.n_q_fwd[i], hyst.n_q_bwd[i], pt.corr_a_sp.real(),
                              pt.corr_a_sp.imag(), pt.corr_a_sz.real(), pt.corr_a_sz.imag(),
                              pt.entropy, s_mf, static_cast<double>(branch_counts[i])});
        if (i > 0) {
            const double df = grid[i] - grid[i - 1];
            const double slope = std::abs(points[i].n_ph - points[i - 1].n_ph) / df;
            if (slope > knee_slope) {
                knee_slope = slope;
                knee_f = 0.5 * (grid[i] + grid[i - 1]);
            }
        }
    }

    echo_params(table, cfg, n_fock);
    const StrongDriveLimits lim = strong_drive_limits(p);
    table.metadata.emplace_back("bistable", bistable(p) ? "yes" : "no");
    table.metadata.emplace_back("f_star_formula", fmt(lim.f_star));
    if (grid.size() >= 3) table.metadata.emplace_back("f_star_knee_lindblad", fmt(knee_f));
    double cc_max = 0.0;
    int cc_count = 0;
    for (double d : crosscheck_dist) {
        if (!std::isnan(d)) {
            cc_max = std::max(cc_max, d);
            ++cc_count;
        }
    }
    table.metadata.emplace_back("crosscheck_points", std::to_string(cc_count));
    table.metadata.emplace_back("crosscheck_max_dist", fmt(cc_max));
    table.metadata.emplace_back("crosscheck_skipped", std::to_string(crosscheck_skipped.load()));
    return table;
}

// ---------- evolve ----------

ResultTable evolve_core(const ScenarioConfig& cfg, int n_fock) {
    const SystemParams p = cfg.params(n_fock);
    const std::vector<double> grid = linspace(0.0, cfg.t_max, cfg.t_samples);
    const DriveProtocol drive = DriveProtocol::step_drive(cfg.f, 0.0);
    const ObsOps ops(p.dims);
    const IntegratorOptions opt = integrator_options(cfg);

    Trajectory traj = evolve(ground_state_density(p.dims), p, drive, grid, opt);
    MBTrajectory mb = mb_evolve(MBState::ground(), p, drive, grid, opt);

    ResultTable table;
    table.columns = {"t",           "n_ph_lindblad", "n_q_lindblad", "n_ph_mf",
                     "n_q_mf",      "corr_asp_re",   "corr_asp_im",  "corr_asz_re",
                     "corr_asz_im", "S_lindblad",    "S_mf",         "dn_q"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const LindbladPoint pt = extract_point(traj.states[i], ops);
        const double s_mf = meanfield_entropy_mb(mb.states[i]);
        ObservableRecord rec;
        rec.x = grid[i];
        rec.n_ph = pt.n_ph;
        rec.n_q = pt.n_q;
        rec.corr_a_sp = pt.corr_a_sp;
        rec.corr_a_sz = pt.corr_a_sz;
        rec.entropy = pt.entropy;
        rec.entropy_mf = s_mf;
        validate_record(rec, p.dims);
        table.rows.push_back({grid[i], pt.n_ph, pt.n_q, mb.n_ph[i], mb.n_q[i],
                              pt.corr_a_sp.real(), pt.corr_a_sp.imag(), pt.corr_a_sz.real(),
                              pt.corr_a_sz.imag(), pt.entropy, s_mf, pt.n_q - mb.n_q[i]});
    }
    echo_params(table, cfg, n_fock);
    table.metadata.emplace_back("f", fmt(cfg.f));
    table.metadata.emplace_back("t_max", fmt(cfg.t_max));
    table.metadata.emplace_back("t_samples", std::to_string(cfg.t_samples));
    table.metadata.emplace_back("max_trace_drift", fmt(traj.max_trace_drift));
    table.metadata.emplace_back("max_hermiticity_error", fmt(traj.max_hermiticity_error));
    return table;
}

// ---------- entropy-dynamics ----------

ResultTable entropy_core(const ScenarioConfig& cfg, int n_fock) {
    const SystemParams p = cfg.params(n_fock);
    const std::vector<double> grid = linspace(0.0, cfg.t_max, cfg.t_samples);
    const std::vector<double>& fs = cfg.f_list;
    const ObsOps ops(p.dims);
    const IntegratorOptions opt = integrator_options(cfg);

    struct PerDrive {
        std::vector<double> s_lindblad, s_mf, n_ph, n_q, gap;
    };
    std::vector<PerDrive> results(fs.size());

    parallel_for(fs.size(), cfg.threads, [&](std::size_t k) {
        const DriveProtocol drive = DriveProtocol::step_drive(fs[k], 0.0);
        Trajectory traj = evolve(ground_state_density(p.dims), p, drive, grid, opt);
        MBTrajectory mb = mb_evolve(MBState::ground(), p, drive, grid, opt);
        PerDrive& out = results[k];
        out.s_lindblad.reserve(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Matrix& rho = traj.states[i];
            out.s_lindblad.push_back(von_neumann_entropy(rho));
            out.s_mf.push_back(meanfield_entropy_mb(mb.states[i]));
            out.n_ph.push_back(expectation(rho, ops.num).real());
            out.n_q.push_back(expectation(rho, ops.pe).real());
            out.gap.push_back(entanglement_gap(rho, p.dims));
        }
    });

    ResultTable table;
    table.columns = {"f", "t", "S_lindblad", "S_mf"};
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const PerDrive& r = results[k];
        double gap_min = std::numeric_limits<double>::infinity();
        for (double gv : r.gap) gap_min = std::min(gap_min, gv);
        if (gap_min < -1e-8) {
            throw numerical_error("entropy-dynamics: subadditivity violated (gap " +
                                  std::to_string(gap_min) + ") at f = " + std::to_string(fs[k]));
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            table.rows.push_back({fs[k], grid[i], r.s_lindblad[i], r.s_mf[i]});
        }
        // interior maximum of S(t), when present
        std::size_t peak = 0;
        for (std::size_t i = 1; i < r.s_lindblad.size(); ++i) {
            if (r.s_lindblad[i] > r.s_lindblad[peak]) peak = i;
        }
        if (peak > 0 && peak + 1 < r.s_lindblad.size()) {
            table.metadata.emplace_back("peak_t[f=" + fmt(fs[k]) + "]", fmt(grid[peak]));
            table.metadata.emplace_back("peak_S[f=" + fmt(fs[k]) + "]",
                                        fmt(r.s_lindblad[peak]));
        }
        table.metadata.emplace_back("gap_min[f=" + fmt(fs[k]) + "]", fmt(gap_min));
    }
    echo_params(table, cfg, n_fock);
    table.metadata.emplace_back("t_max", fmt(cfg.t_max));
    table.metadata.emplace_back("t_samples", std::to_string(cfg.t_samples));

    // stash the occupation series for the truncation comparison
    for (std::size_t k = 0; k < fs.size(); ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::size_t row = k * grid.size() + i;
            table.rows[row].push_back(results[k].n_ph[i]);
            table.rows[row].push_back(results[k].n_q[i]);
        }
    }
    return table;
}

void strip_hidden_columns(ResultTable& table) {
    for (auto& row : table.rows) row.resize(table.columns.size());
}

}  // namespace

ResultTable run_steady_sweep(const ScenarioConfig& cfg) {
    Timer timer;
    cfg.validate();
    if (cfg.f_grid.empty()) {
        throw std::invalid_argument("steady-sweep: f_grid is required");
    }
    ResultTable small_run = steady_sweep_core(cfg, cfg.n_fock);
    ResultTable published = steady_sweep_core(cfg, check_n_fock(cfg.n_fock));
    finish_convergence(published, small_run, cfg.n_fock, {1, 2, 3, 4, 5, 6});
    published.metadata.emplace_back("wall_time_s", fmt(timer.seconds()));
    return published;
}

ResultTable run_evolve(const ScenarioConfig& cfg) {
    Timer timer;
    cfg.validate();
    ResultTable small_run = evolve_core(cfg, cfg.n_fock);
    ResultTable published = evolve_core(cfg, check_n_fock(cfg.n_fock));
    finish_convergence(published, small_run, cfg.n_fock, {1, 2, 3, 4});
    published.metadata.emplace_back("wall_time_s", fmt(timer.seconds()));
    return published;
}

ResultTable run_entropy_dynamics(const ScenarioConfig& cfg) {
    Timer timer;
    cfg.validate();
    if (cfg.f_list.empty()) {
        throw std::invalid_argument("entropy-dynamics: f_list is required");
    }
    ResultTable small_run = entropy_core(cfg, cfg.n_fock);
    ResultTable published = entropy_core(cfg, check_n_fock(cfg.n_fock));
    finish_convergence(published, small_run, cfg.n_fock, {4, 5});  // hidden n_ph / n_q
    strip_hidden_columns(published);
    published.metadata.emplace_back("wall_time_s", fmt(timer.seconds()));
    return published;
}

ResultTable run_mf_branches(const ScenarioConfig& cfg) {
    Timer timer;
    cfg.validate();
    if (cfg.f_grid.empty()) {
        throw std::invalid_argument("mf-branches: f_grid is required");
    }
    const SystemParams p = cfg.params();
    ResultTable table;
    table.columns = {"f",    "n_roots", "nq_1",     "nph_1", "stable_1", "nq_2",
                     "nph_2", "stable_2", "nq_3",    "nph_3", "stable_3"};
    for (double f : cfg.f_grid) {
        const std::vector<SteadyBranch> branches = steady_branches(f, p);
        std::vector<double> row = {f, static_cast<double>(branches.size())};
        for (std::size_t k = 0; k < 3; ++k) {
            if (k < branches.size()) {
                row.push_back(branches[k].n_q);
                row.push_back(branches[k].n_ph);
                row.push_back(branches[k].stable ? 1.0 : 0.0);
            } else {
                row.insert(row.end(), {kNan, kNan, kNan});
            }
        }
        table.rows.push_back(std::move(row));
    }
    echo_params(table, cfg, cfg.n_fock);
    const StrongDriveLimits lim = strong_drive_limits(p);
    table.metadata.emplace_back("bistable", bistable(p) ? "yes" : "no");
    table.metadata.emplace_back("f_star_formula", fmt(lim.f_star));
    table.metadata.emplace_back("n_ph_inf", fmt(lim.n_ph_inf));
    if (auto ext = nq_extrema(p)) {
        table.metadata.emplace_back("nq_extremum_hi", fmt(ext->first));
        table.metadata.emplace_back("nq_extremum_lo", fmt(ext->second));
        table.metadata.emplace_back("window_f_min", fmt(drive_of_nq(ext->first, p)));
        table.metadata.emplace_back("window_f_max", fmt(drive_of_nq(ext->second, p)));
    }
    // no Fock-space dependence anywhere above
    table.metadata.emplace_back("max_truncation_diff", "0");
    table.metadata.emplace_back("converged", "yes");
    table.metadata.emplace_back("wall_time_s", fmt(timer.seconds()));
    return table;
}

ResultTable run_scenario(const ScenarioConfig& cfg) {
    if (cfg.scenario == "steady-sweep") return run_steady_sweep(cfg);
    if (cfg.scenario == "evolve") return run_evolve(cfg);
    if (cfg.scenario == "entropy-dynamics") return run_entropy_dynamics(cfg);
    if (cfg.scenario == "mf-branches") return run_mf_branches(cfg);
    throw std::invalid_argument("unknown scenario '" + cfg.scenario + "'");
}

}  // namespace jcsim
