#pragma once

#include "graspsim/learner.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <vector>

namespace graspsim {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Attempt counts for one run.
struct RunStats {
    int env_success = 0;
    int env_fail = 0;
    int suck_success = 0;
    int suck_fail = 0;
    int es_full = 0;
    int es_semi = 0;
    int es_fail = 0;
    int objects_picked = 0;
    int actions_executed = 0;

    void record(ActionKind kind, const Outcome& outcome);
    RunStats& operator+=(const RunStats& o);

    int es_actions() const { return es_full + es_semi + es_fail; }
    /// ES counts as a success when at least one object was picked.
    int successful_actions() const { return env_success + suck_success + es_full + es_semi; }
    int successful_actions_strict() const { return env_success + suck_success + es_full; }
    /// objects_picked and actions_executed agree with the per-kind counts.
    bool consistent() const;
};

double success_rate(const RunStats& s);
double success_rate_strict(const RunStats& s);
double grasping_efficiency(const RunStats& s);

/// Best-case efficiency when a share pe of the objects must be enveloped.
double theoretical_efficiency(double pe);

struct TheoryExpectations {
    double e_eta = 0.0;  // mean efficiency over pe in [0, 1]
    double e_e = 0.0;    // expected share of enveloping actions
    double e_s = 0.0;
    double e_es = 0.0;
};

TheoryExpectations theoretical_expectations();

/// Fewest actions that clear the scene under perfect outcomes, by exhaustive
/// search over pairings. Throws EvalError above 12 objects.
int optimal_action_count_oracle(const Scene& scene);

/// The default 11-point grid 0, 0.1, ..., 1.
std::vector<double> default_pe_grid();

struct SweepConfig {
    std::vector<double> pe_values = default_pe_grid();
    int actions_per_group = 200;
    int repetitions = 3;
    int objects_per_scene = 10;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency, capped by GRASPSIM_THREADS
};

struct SweepRow {
    double pe = 0.0;
    int rep = 0;
    RunStats stats;
};

struct SweepPoint {
    double pe = 0.0;
    double zeta_mean = 0.0, zeta_std = 0.0;
    double eta_mean = 0.0, eta_std = 0.0;
    double es_actions_mean = 0.0;
    double env_actions_mean = 0.0;
    double suck_actions_mean = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // pe-major, then rep
    std::vector<SweepPoint> points;
};

/// Builds a fresh policy for one (pe, rep) group.
using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Rolls out every (pe, rep) group in parallel. Each group plays whole
/// episodes until at least actions_per_group actions were executed.
SweepResult run_sweep(const PolicyFactory& factory, const SweepConfig& config, const EnvConfig& env,
                      const SceneParams& scene_params = {},
                      const std::vector<ObjectTemplate>& catalog = default_catalog());

/// Plays one episode to termination and returns its stats.
RunStats play_episode(Policy& policy, Scene scene, const EnvConfig& env, std::uint64_t seed,
                      int action_budget = -1);

std::vector<SweepPoint> summarize(const std::vector<SweepRow>& rows);

/// Worker count: `requested` (or hardware concurrency when 0), capped by the
/// GRASPSIM_THREADS environment variable.
int worker_count(int requested);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_theory_csv(std::ostream& os, const std::vector<double>& pe_values);

}  // namespace graspsim
