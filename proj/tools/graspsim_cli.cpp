// graspsim: command-line front end for training, sweeps and planner dumps.

#include "graspsim/config.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace graspsim;

namespace {

struct Options {
    std::string config_path;
    std::string out = "out";
    std::string name;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy;
    std::optional<std::string> pe;
    std::optional<int> episodes;
    std::optional<double> p_fail;
    std::optional<int> resolution;
    std::optional<std::string> checkpoint;
    std::vector<std::string> set;
    std::string scene_path;
};

ExperimentConfig resolve(const Options& o) {
    ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (o.seed) c.seed = *o.seed;
    if (o.policy) c.policy = *o.policy;
    if (o.pe) c.sweep.pe_values = parse_double_list(*o.pe);
    if (o.episodes) c.sweep.repetitions = *o.episodes;
    if (o.p_fail) c.env.p_fail = *o.p_fail;
    if (o.resolution) c.env.resolution = *o.resolution;
    if (o.checkpoint) c.checkpoint = *o.checkpoint;
    for (const auto& kv : o.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + kv + "'");
        set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    c.validate();
    return c;
}

fs::path prepare_dir(const Options& o, const std::string& command, const ExperimentConfig& c) {
    const fs::path dir = fs::path(o.out) / command / (o.name.empty() ? "seed" + std::to_string(c.seed) : o.name);
    fs::create_directories(dir);
    std::ofstream cfg(dir / "config.cfg");
    save_config(cfg, c);
    return dir;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

SceneFactory factory_of(const ExperimentConfig& c) {
    return training_scenes(c.learner.train_pe, c.scene, catalog_of(c));
}

QNetworks trained_nets(const ExperimentConfig& c, PolicyKind kind, const fs::path& dir) {
    if (!c.checkpoint.empty()) {
        std::ifstream in(c.checkpoint, std::ios::binary);
        if (!in) throw std::runtime_error("checkpoint not found: " + c.checkpoint);
        return load_checkpoint(in);
    }
    const TrainResult r = train(kind, factory_of(c), c.learner, c.env, c.seed);
    auto log = open_out(dir / "train_log.csv");
    write_train_log(log, r.log);
    auto ck = open_out(dir / "checkpoint.bin");
    save_checkpoint(ck, r.nets);
    return r.nets;
}

int cmd_train(const Options& o) {
    const ExperimentConfig c = resolve(o);
    const PolicyKind kind = policy_from_string(c.policy);
    if (kind == PolicyKind::oracle) throw std::runtime_error("the oracle policy is not trainable");
    const fs::path dir = prepare_dir(o, "train", c);
    const TrainResult r = train(kind, factory_of(c), c.learner, c.env, c.seed);
    auto log = open_out(dir / "train_log.csv");
    write_train_log(log, r.log);
    auto ck = open_out(dir / "checkpoint.bin");
    save_checkpoint(ck, r.nets);
    std::cout << "trained " << c.policy << " for " << r.log.size() << " steps -> " << dir.string() << '\n';
    return 0;
}

int cmd_sweep(const Options& o) {
    const ExperimentConfig c = resolve(o);
    const PolicyKind kind = policy_from_string(c.policy);
    const fs::path dir = prepare_dir(o, "sweep", c);
    PolicyFactory factory;
    if (kind == PolicyKind::oracle) {
        factory = [] { return std::make_unique<OraclePolicy>(); };
    } else {
        const QNetworks nets = trained_nets(c, kind, dir);
        factory = [&c, kind, nets] {
            return std::make_unique<LearnedPolicy>(kind, c.learner, c.env, nets, c.learner.continual_eval);
        };
    }
    SweepConfig sc = c.sweep;
    sc.seed = c.seed;
    const SweepResult r = run_sweep(factory, sc, c.env, c.scene, catalog_of(c));
    auto sweep = open_out(dir / "sweep.csv");
    write_sweep_csv(sweep, r);
    auto theory = open_out(dir / "theory.csv");
    write_theory_csv(theory, c.sweep.pe_values);
    std::printf("%-6s %-9s %-9s %-9s %-8s\n", "pe", "zeta", "eta", "theory", "ES");
    for (const auto& p : r.points)
        std::printf("%-6.2f %-9.4f %-9.4f %-9.4f %-8.1f\n", p.pe, p.zeta_mean, p.eta_mean,
                    theoretical_efficiency(p.pe), p.es_actions_mean);
    std::cout << "-> " << dir.string() << '\n';
    return 0;
}

int cmd_plan(const Options& o) {
    const ExperimentConfig c = resolve(o);
    std::ifstream in(o.scene_path);
    if (!in) throw std::runtime_error("scene file not found: " + o.scene_path);
    const Scene scene = read_scene(in);
    const fs::path dir = prepare_dir(o, "plan", c);
    auto csv = open_out(dir / "plan.csv");
    csv << "id,kind,alpha,gamma,opening_d,sucker_index,x,y,z,error\n";
    char buf[256];
    for (const auto& obj : scene.objects) {
        try {
            if (can_envelope(obj.affinity)) {
                const EnvelopePlan p = plan_envelope(scene, obj.id, c.env.gripper, c.env.planner);
                std::snprintf(buf, sizeof buf, "%d,envelope,%.6f,%.6f,%.6f,,%.6f,%.6f,%.6f,\n", obj.id, p.alpha_e,
                              p.gamma_e, p.opening_d, p.target.x(), p.target.y(), p.target.z());
            } else {
                const SuckPlan p = plan_suck(scene, obj.id, c.env.gripper, c.env.planner);
                std::snprintf(buf, sizeof buf, "%d,suck,%.6f,%.6f,,%d,%.6f,%.6f,%.6f,\n", obj.id, p.alpha_s, p.gamma_s,
                              p.sucker_index, p.target.x(), p.target.y(), p.target.z());
            }
            csv << buf;
        } catch (const PlanningError& e) {
            csv << obj.id << ',' << (can_envelope(obj.affinity) ? "envelope" : "suck") << ",,,,,,,," << e.what()
                << '\n';
        }
    }
    std::cout << "planned " << scene.objects.size() << " objects -> " << dir.string() << '\n';
    return 0;
}

int cmd_theory(const Options& o) {
    const ExperimentConfig c = resolve(o);
    const fs::path dir = prepare_dir(o, "theory", c);
    auto csv = open_out(dir / "theory.csv");
    write_theory_csv(csv, c.sweep.pe_values);
    const TheoryExpectations e = theoretical_expectations();
    auto ex = open_out(dir / "expectations.csv");
    char buf[128];
    std::snprintf(buf, sizeof buf, "E_eta,E_e,E_s,E_es\n%.12f,%.12f,%.12f,%.12f\n", e.e_eta, e.e_e, e.e_s, e.e_es);
    ex << buf;
    for (double pe : c.sweep.pe_values) std::printf("%.2f  %6.1f%%\n", pe, 100.0 * theoretical_efficiency(pe));
    std::printf("E_eta = %.6f (2 ln 2)\n", e.e_eta);
    return 0;
}

// Fast invariant checks over the whole pipeline; prints one line per check.
int cmd_selftest(const Options& o) {
    const ExperimentConfig c = resolve(o);
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
        failures += !ok;
    };

    bool sym = true;
    for (int k = 0; k <= 100; ++k)
        sym = sym && std::abs(theoretical_efficiency(k / 100.0) - theoretical_efficiency(1.0 - k / 100.0)) < 1e-12;
    check("theory symmetric about pe = 0.5", sym && theoretical_efficiency(0.5) == 2.0);

    bool round_trip = true;
    for (int k = 1; k <= 20; ++k) {
        const double d = c.env.gripper.d_max * k / 21.0;
        round_trip = round_trip && std::abs(opening_distance(c.env.gripper, solve_bend_for_opening(c.env.gripper, d)) - d) <= 1e-6;
    }
    check("opening distance round trip", round_trip);

    bool branches = true;
    for (int a = 0; a < 360; ++a) {
        const SuckerChoice s = sucker_for_orientation(a);
        branches = branches && s.gamma_s > -45.0 && s.gamma_s <= 45.0;
        if (a < 180) branches = branches && std::abs(envelope_rotation(a)) <= 45.0;
    }
    check("orientation branch ranges", branches);

    EnvConfig perfect = c.env;
    perfect.p_fail = 0.0;
    perfect.ideal_outcomes = true;
    OraclePolicy oracle;
    bool optimal = true, consistent = true;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const int n = 1 + static_cast<int>(s % 10);
        const Scene scene = spawn_scene_retrying((s % 11) / 10.0, n, catalog_of(c), c.seed + s, c.scene);
        const RunStats st = play_episode(oracle, scene, perfect, s);
        optimal = optimal && st.actions_executed == optimal_action_count_oracle(scene) && st.objects_picked == n;
        consistent = consistent && st.consistent();
    }
    check("oracle reaches the optimal action count", optimal);
    check("run statistics bookkeeping", consistent);

    bool rewards = true;
    Episode ep(spawn_scene_retrying(0.5, 8, catalog_of(c), c.seed, c.scene), c.env, c.seed);
    std::mt19937_64 rng(c.seed);
    while (!ep.terminal()) {
        const StateViews v = ep.views();
        const ActionChoice a = random_action(v.ids.size(), true, rng);
        const int second = a.kind == ActionKind::enveloping_then_sucking ? v.ids[a.second] : -1;
        const double r = ep.step(ep.make_action(a.kind, v.ids[a.first], second)).outcome.reward;
        rewards = rewards && (r == 0.0 || r == 0.5 || r == 1.0 || r == 2.5);
    }
    check("reward set closure on a random rollout", rewards);

    std::cout << (failures ? "selftest failed" : "selftest passed") << '\n';
    return failures ? 1 : 0;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "Config file (key = value with [sections])");
    cmd->add_option("--out", o.out, "Output root directory")->capture_default_str();
    cmd->add_option("--name", o.name, "Run directory name (default seed<N>)");
    cmd->add_option("--seed", o.seed, "Master seed (run.seed)");
    cmd->add_option("--policy", o.policy, "eses_drl|es_drl|eses_reactive|es_reactive|ablation_1|ablation_2|oracle");
    cmd->add_option("--pe", o.pe, "Comma-separated P_e grid (sweep.pe)");
    cmd->add_option("--episodes", o.episodes, "Repetitions per P_e point (sweep.repetitions)");
    cmd->add_option("--p-fail", o.p_fail, "Random failure probability (env.p_fail)");
    cmd->add_option("--resolution", o.resolution, "Heightmap resolution (env.resolution)");
    cmd->add_option("--checkpoint", o.checkpoint, "Load networks instead of training (run.checkpoint)");
    cmd->add_option("--set", o.set, "Override any config entry: section.key=value");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graspsim: multimodal grasping simulator and learner"};
    app.require_subcommand(1);
    Options o;
    auto* train_cmd = app.add_subcommand("train", "Train one policy and write its checkpoint and log");
    auto* sweep_cmd = app.add_subcommand("sweep", "Train (or load) a policy and run the P_e sweep");
    auto* plan_cmd = app.add_subcommand("plan", "Dump planner output for every object of a scene file");
    auto* theory_cmd = app.add_subcommand("theory", "Write the closed-form efficiency table");
    auto* selftest_cmd = app.add_subcommand("selftest", "Run quick invariant checks");
    for (auto* c : {train_cmd, sweep_cmd, plan_cmd, theory_cmd, selftest_cmd}) add_common(c, o);
    plan_cmd->add_option("scene", o.scene_path, "Scene file")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*train_cmd) return cmd_train(o);
        if (*sweep_cmd) return cmd_sweep(o);
        if (*plan_cmd) return cmd_plan(o);
        if (*theory_cmd) return cmd_theory(o);
        return cmd_selftest(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
