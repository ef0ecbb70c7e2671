#include "graspsim/eval.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace graspsim {

void RunStats::record(ActionKind kind, const Outcome& outcome) {
    const bool e = outcome.envelope_success.value_or(false);
    const bool s = outcome.suck_success.value_or(false);
    switch (kind) {
        case ActionKind::enveloping: ++(e ? env_success : env_fail); break;
        case ActionKind::sucking: ++(s ? suck_success : suck_fail); break;
        case ActionKind::enveloping_then_sucking:
            ++(e && s ? es_full : (e || s) ? es_semi : es_fail);
            break;
    }
    objects_picked += outcome.objects_picked();
    ++actions_executed;
}

RunStats& RunStats::operator+=(const RunStats& o) {
    env_success += o.env_success;
    env_fail += o.env_fail;
    suck_success += o.suck_success;
    suck_fail += o.suck_fail;
    es_full += o.es_full;
    es_semi += o.es_semi;
    es_fail += o.es_fail;
    objects_picked += o.objects_picked;
    actions_executed += o.actions_executed;
    return *this;
}

bool RunStats::consistent() const {
    return objects_picked == env_success + suck_success + 2 * es_full + es_semi &&
           actions_executed == env_success + env_fail + suck_success + suck_fail + es_actions();
}

namespace {

void require_actions(const RunStats& s) {
    if (s.actions_executed <= 0) throw EvalError("metrics need at least one executed action");
}

}  // namespace

double success_rate(const RunStats& s) {
    require_actions(s);
    return static_cast<double>(s.successful_actions()) / s.actions_executed;
}

double success_rate_strict(const RunStats& s) {
    require_actions(s);
    return static_cast<double>(s.successful_actions_strict()) / s.actions_executed;
}

double grasping_efficiency(const RunStats& s) {
    require_actions(s);
    return static_cast<double>(s.objects_picked) / s.actions_executed;
}

double theoretical_efficiency(double pe) {
    if (!(pe >= 0.0 && pe <= 1.0)) throw EvalError("pe must lie in [0, 1]");
    return pe < 0.5 ? 1.0 / (1.0 - pe) : 1.0 / pe;
}

TheoryExpectations theoretical_expectations() {
    return {2.0 * std::log(2.0), 0.25, 0.25, 0.5};
}

int optimal_action_count_oracle(const Scene& scene) {
    const std::size_t n = scene.objects.size();
    if (n > 12) throw EvalError("optimal_action_count_oracle supports at most 12 objects");
    const std::uint32_t full = (1u << n) - 1u;
    // best[mask]: fewest actions clearing the objects in mask.
    std::vector<int> best(full + 1u, 0);
    constexpr int kInf = 1 << 20;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const int i = std::countr_zero(mask);
        const std::uint32_t rest = mask & ~(1u << i);
        const Affinity ai = scene.objects[static_cast<std::size_t>(i)].affinity;
        int b = kInf;
        if (can_envelope(ai) || can_suck(ai)) b = best[rest] + 1;
        for (std::uint32_t m = rest; m; m &= m - 1) {
            const int j = std::countr_zero(m);
            const Affinity aj = scene.objects[static_cast<std::size_t>(j)].affinity;
            if ((can_envelope(ai) && can_suck(aj)) || (can_suck(ai) && can_envelope(aj)))
                b = std::min(b, best[rest & ~(1u << j)] + 1);
        }
        best[mask] = b;
    }
    if (best[full] >= kInf) throw EvalError("scene contains an ungraspable object");
    return best[full];
}

std::vector<double> default_pe_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 10; ++k) g.push_back(k / 10.0);
    return g;
}

int worker_count(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("GRASPSIM_THREADS")) {
        const int c = std::atoi(cap);
        if (c >= 1) n = std::min(n, c);
    }
    return n;
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

EnvConfig with_planner(EnvConfig env, const PlannerOptions& p) {
    const double xi = env.planner.xi;
    const double depth = env.planner.min_envelope_depth;
    env.planner = p;
    env.planner.xi = xi;
    env.planner.min_envelope_depth = depth;
    return env;
}

}  // namespace

RunStats play_episode(Policy& policy, Scene scene, const EnvConfig& env, std::uint64_t seed, int action_budget) {
    RunStats stats;
    Episode ep(std::move(scene), with_planner(env, policy.planner_options()), seed);
    StateViews views = ep.views();
    while (!ep.terminal() && (action_budget < 0 || stats.actions_executed < action_budget)) {
        const ActionChoice choice = policy.decide(ep.scene(), views);
        const int first = views.ids.at(choice.first);
        const int second = choice.kind == ActionKind::enveloping_then_sucking ? views.ids.at(choice.second) : -1;
        StepResult res = ep.step(ep.make_action(choice.kind, first, second));
        stats.record(choice.kind, res.outcome);
        policy.observe(views, choice, res.outcome, res.views, ep.scene().objects.empty());
        views = std::move(res.views);
    }
    return stats;
}

std::vector<SweepPoint> summarize(const std::vector<SweepRow>& rows) {
    std::vector<SweepPoint> points;
    for (std::size_t a = 0; a < rows.size();) {
        std::size_t b = a;
        while (b < rows.size() && rows[b].pe == rows[a].pe) ++b;
        const double n = static_cast<double>(b - a);
        SweepPoint p;
        p.pe = rows[a].pe;
        for (std::size_t k = a; k < b; ++k) {
            const RunStats& s = rows[k].stats;
            p.zeta_mean += success_rate(s) / n;
            p.eta_mean += grasping_efficiency(s) / n;
            p.es_actions_mean += s.es_actions() / n;
            p.env_actions_mean += (s.env_success + s.env_fail) / n;
            p.suck_actions_mean += (s.suck_success + s.suck_fail) / n;
        }
        for (std::size_t k = a; k < b; ++k) {
            p.zeta_std += std::pow(success_rate(rows[k].stats) - p.zeta_mean, 2.0);
            p.eta_std += std::pow(grasping_efficiency(rows[k].stats) - p.eta_mean, 2.0);
        }
        p.zeta_std = n > 1 ? std::sqrt(p.zeta_std / (n - 1)) : 0.0;
        p.eta_std = n > 1 ? std::sqrt(p.eta_std / (n - 1)) : 0.0;
        points.push_back(p);
        a = b;
    }
    return points;
}

SweepResult run_sweep(const PolicyFactory& factory, const SweepConfig& config, const EnvConfig& env,
                      const SceneParams& scene_params, const std::vector<ObjectTemplate>& catalog) {
    if (config.pe_values.empty()) throw EvalError("sweep: empty pe grid");
    if (config.actions_per_group < 1 || config.repetitions < 1 || config.objects_per_scene < 1)
        throw EvalError("sweep: actions, repetitions and objects per scene must be positive");
    for (double pe : config.pe_values)
        if (!(pe >= 0.0 && pe <= 1.0)) throw EvalError("sweep: pe values must lie in [0, 1]");

    const std::size_t groups = config.pe_values.size() * static_cast<std::size_t>(config.repetitions);
    SweepResult result;
    result.rows.resize(groups);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t g = next++; g < groups; g = next++) {
            try {
                const std::size_t pi = g / static_cast<std::size_t>(config.repetitions);
                const int rep = static_cast<int>(g % static_cast<std::size_t>(config.repetitions));
                const double pe = config.pe_values[pi];
                std::unique_ptr<Policy> policy = factory();
                RunStats stats;
                for (std::uint64_t episode = 0; stats.actions_executed < config.actions_per_group; ++episode) {
                    const std::uint64_t s = mix(mix(mix(config.seed, pi), static_cast<std::uint64_t>(rep)), episode);
                    Scene scene = spawn_scene_retrying(pe, config.objects_per_scene, catalog, s, scene_params);
                    stats += play_episode(*policy, std::move(scene), env, mix(s, 99));
                }
                if (!stats.consistent()) throw EvalError("sweep: inconsistent run statistics");
                result.rows[g] = {pe, rep, stats};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = groups;
            }
        }
    };

    const int n_threads = std::min<int>(worker_count(config.threads), static_cast<int>(groups));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    result.points = summarize(result.rows);
    return result;
}

namespace {

std::string fmt(double v, const char* f = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
    os << "pe,rep,zeta,eta,n_env_s,n_env_f,n_suck_s,n_suck_f,n_es_full,n_es_semi,n_es_fail,zeta_strict\n";
    for (const auto& row : r.rows) {
        const RunStats& s = row.stats;
        os << fmt(row.pe, "%.2f") << ',' << row.rep << ',' << fmt(success_rate(s)) << ','
           << fmt(grasping_efficiency(s)) << ',' << s.env_success << ',' << s.env_fail << ',' << s.suck_success
           << ',' << s.suck_fail << ',' << s.es_full << ',' << s.es_semi << ',' << s.es_fail << ','
           << fmt(success_rate_strict(s)) << '\n';
    }
}

void write_theory_csv(std::ostream& os, const std::vector<double>& pe_values) {
    os << "pe,eta_theory\n";
    for (double pe : pe_values) os << fmt(pe, "%.2f") << ',' << fmt(theoretical_efficiency(pe)) << '\n';
}

}  // namespace graspsim
