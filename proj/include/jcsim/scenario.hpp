#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "jcsim/lindblad.hpp"
#include "jcsim/meanfield.hpp"
#include "jcsim/observables.hpp"

namespace jcsim {

// Flat key = value configuration ('#' starts a comment). Keys mirror the CLI
// flags one to one; SIM_FOCK_DIM overrides n_fock between config and flag
// (flag wins, then env, then config).
struct ScenarioConfig {
    std::string scenario;  // steady-sweep | evolve | mf-branches | entropy-dynamics
    double delta = 0.0;
    double g = 1.0;
    double kappa = 0.4;
    double gamma1 = 0.5;
    double f = 1.0;                 // single-drive scenarios (evolve)
    std::vector<double> f_grid;     // sweeps; "lin:a:b:n" or a comma list
    std::vector<double> f_list;     // entropy-dynamics
    double t_max = 20.0;
    int t_samples = 400;
    int n_fock = 40;
    double tol = 1e-9;              // absolute integrator tolerance
    std::string out_path;
    int threads = 0;                // 0 = machine parallelism

    SystemParams params(int n_fock_override = 0) const;
    void validate() const;
};

ScenarioConfig parse_config_file(const std::string& path);
// Applies one key=value pair (same keys as the config file). Unknown key throws.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);
// SIM_FOCK_DIM, if set and no --n_fock flag was given.
void apply_env(ScenarioConfig& cfg, bool n_fock_from_flag);

std::vector<double> parse_grid_spec(const std::string& text);

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // insertion-ordered key/value metadata, echoed as '# key = value' lines
    std::vector<std::pair<std::string, std::string>> metadata;
    bool converged = true;
    double max_truncation_diff = 0.0;
};

// CSV with a '#'-prefixed metadata block; complex columns are split into
// _re/_im pairs by the runners. Numbers are printed with %.12g.
void write_csv(const ResultTable& table, std::ostream& os);
void write_csv_file(const ResultTable& table, const std::string& path);

// Scenario runners. Each one executes the underlying computation at n_fock
// and ceil(1.5 n_fock), publishes the larger run, and records the worst
// n_ph / n_q discrepancy; `converged` is false when it reaches 1e-4.
ResultTable run_steady_sweep(const ScenarioConfig& cfg);
ResultTable run_evolve(const ScenarioConfig& cfg);
ResultTable run_entropy_dynamics(const ScenarioConfig& cfg);
ResultTable run_mf_branches(const ScenarioConfig& cfg);

ResultTable run_scenario(const ScenarioConfig& cfg);  // dispatch on cfg.scenario

// Index-parallel helper used by the sweeps: runs fn(0..n-1) on `threads`
// workers (0 = hardware concurrency). Exceptions are rethrown on the caller.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace jcsim
