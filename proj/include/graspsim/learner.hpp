#pragma once

#include "graspsim/env.hpp"
#include "graspsim/nn.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace graspsim {

class LearnerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Q-values and action selection

/// Q_e and Q_s per object, Q_es over unordered pairs i < j (row-major strict
/// upper triangle). q_es is empty for a single object or when the scheme has
/// no pair network.
struct QBundle {
    std::vector<double> q_e;
    std::vector<double> q_s;
    std::vector<double> q_es;

    std::size_t size() const { return q_e.size(); }
    bool has_pairs() const { return !q_es.empty(); }
};

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t k, std::size_t n);

/// Object positions refer to the order of StateViews::ids.
struct ActionChoice {
    double q = 0.0;
    ActionKind kind = ActionKind::enveloping;
    std::size_t first = 0;   // enveloped object, or the single target
    std::size_t second = 0;  // sucked object for enveloping_then_sucking
};

/// Action selection over the three Q-value sets; ties go to the lowest index.
ActionChoice select_action(const QBundle& bundle);

/// Q-value of a concrete action inside a bundle.
double q_of(const QBundle& bundle, const ActionChoice& a);

/// Double-Q target: argmax from the online bundle, value from the target
/// bundle. A terminal next state contributes nothing.
double td_target(double reward, bool terminal, const QBundle& next_online, const QBundle& next_target,
                 double gamma);

// ---------------------------------------------------------------------------
// State encoding

inline constexpr int kFeatureSide = 16;
inline constexpr int kFeatureCells = kFeatureSide * kFeatureSide;
inline constexpr double kHeightScale = 0.04;  // m, depth normalization
inline constexpr double kLocalSide = 0.125;  // m, object-centered window of the local maps

using FeatureMap = std::array<double, kFeatureCells>;

/// Max-pooled, normalized depth maps in StateViews order: one global map of
/// the workspace, and per object its masked depth in a window centered on
/// the object.
struct EncodedState {
    FeatureMap global{};
    std::vector<FeatureMap> objects;

    std::size_t size() const { return objects.size(); }
    /// local map followed by the global map.
    std::vector<double> single_input(std::size_t i) const;
    /// The enveloped object's map in the left half and the sucked object's in
    /// the right half (each pooled 2:1 along x), followed by the global map.
    std::vector<double> pair_input(std::size_t envelope, std::size_t suck) const;
};

EncodedState encode_state(const StateViews& views);

// ---------------------------------------------------------------------------
// Networks

struct QNetworks {
    nn::Mlp envelope;  // Omega_e
    nn::Mlp suck;      // Omega_s
    std::optional<nn::Mlp> pair;  // Omega_es

    static QNetworks make(bool with_pair, int hidden, std::uint64_t seed);
    bool same_architecture(const QNetworks& o) const;
};

QBundle evaluate_bundle(const QNetworks& nets, const EncodedState& state);

/// Versioned binary checkpoint: header, per-net architecture, little-endian
/// float64 parameters.
void save_checkpoint(std::ostream& os, const QNetworks& nets);
QNetworks load_checkpoint(std::istream& is);

// ---------------------------------------------------------------------------
// Training

enum class PolicyKind { eses_drl, es_drl, eses_reactive, es_reactive, ablation_1, ablation_2, oracle };

const char* to_string(PolicyKind k);
PolicyKind policy_from_string(const std::string& s);

struct SchemeTraits {
    bool use_pairs = true;
    bool reactive = false;  // gamma 0, success labels
    PlannerOptions planner;
};

SchemeTraits traits_of(PolicyKind kind);

struct LearnerConfig {
    double gamma = 0.5;
    double learning_rate = 1e-4;
    double eps_start = 0.6;
    double eps_end = 0.1;
    int eps_anneal_steps = 20000;
    int train_steps = 20000;
    int sync_period = 100;
    bool replay = false;
    int replay_capacity = 2048;
    int replay_batch = 8;
    int hidden = 64;
    double train_pe = 0.5;
    bool continual_eval = true;
    double divergence_limit = 1e6;

    void validate() const;
    double epsilon_at(int step) const;
};

/// One logged training step.
struct TrainLogRow {
    int step = 0;
    double epsilon = 0.0;
    double loss = 0.0;
    double reward = 0.0;
    ActionKind kind = ActionKind::enveloping;
    std::optional<bool> envelope_success;
    std::optional<bool> suck_success;
    bool explored = false;
};

void write_train_log(std::ostream& os, const std::vector<TrainLogRow>& rows);

/// Scenes are stored instead of encodings and re-rendered when sampled.
struct Transition {
    Scene state;
    ActionChoice action;
    double reward = 0.0;
    Scene next;
    bool terminal = false;
};

/// Fixed-capacity ring of transitions with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}
    void push(Transition t);
    std::size_t size() const { return items_.size(); }
    const Transition& sample(std::mt19937_64& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

/// Online + target networks, their optimizers and the update rule.
class QLearner {
public:
    QLearner(PolicyKind kind, const LearnerConfig& config, const EnvConfig& env, std::uint64_t seed);
    QLearner(PolicyKind kind, const LearnerConfig& config, const EnvConfig& env, QNetworks nets);

    PolicyKind kind() const { return kind_; }
    const SchemeTraits& traits() const { return traits_; }
    const QNetworks& online() const { return online_; }
    const QNetworks& target() const { return target_; }

    QBundle bundle(const EncodedState& s) const { return evaluate_bundle(online_, s); }

    /// Reward as seen by this scheme: the env reward, or a 0/1 success label
    /// for reactive schemes.
    double label(ActionKind kind, const Outcome& outcome) const;

    /// One gradient step on the executed action; returns the Huber loss.
    double update(const EncodedState& s, const ActionChoice& a, double reward, const EncodedState& next,
                  bool terminal);

    void sync_target() { target_ = online_; }
    void set_learning_rate(double lr);

private:
    PolicyKind kind_;
    SchemeTraits traits_;
    LearnerConfig config_;
    EnvConfig env_;
    QNetworks online_;
    QNetworks target_;
    nn::Adam adam_e_, adam_s_, adam_es_;
};

struct TrainResult {
    QNetworks nets;
    std::vector<TrainLogRow> log;
};

/// Returns a fresh scene for each new training episode.
using SceneFactory = std::function<Scene(std::uint64_t episode_seed)>;

/// Training scenes: object count uniform in [min_objects, max_objects], a
/// share pe of them envelope-type.
SceneFactory training_scenes(double pe, const SceneParams& params = {},
                             std::vector<ObjectTemplate> catalog = default_catalog());

/// Epsilon-greedy rollouts with one update per step and periodic target sync.
/// Throws LearnerError if the loss exceeds the divergence limit.
TrainResult train(PolicyKind kind, const SceneFactory& factory, const LearnerConfig& config,
                  const EnvConfig& env, std::uint64_t seed);

/// Exploration move: a uniformly random legal kind, then random targets.
ActionChoice random_action(std::size_t n_objects, bool use_pairs, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Policies used for evaluation

class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyKind kind() const = 0;
    virtual PlannerOptions planner_options() const { return {}; }
    virtual ActionChoice decide(const Scene& scene, const StateViews& views) = 0;
    /// Called after each executed step.
    virtual void observe(const StateViews& /*before*/, const ActionChoice& /*a*/,
                         const Outcome& /*outcome*/, const StateViews& /*after*/, bool /*terminal*/) {}
};

/// Greedy on a trained scheme; optionally keeps learning at test time.
class LearnedPolicy : public Policy {
public:
    LearnedPolicy(PolicyKind kind, const LearnerConfig& config, const EnvConfig& env, QNetworks nets,
                  bool continual);
    PolicyKind kind() const override { return learner_.kind(); }
    PlannerOptions planner_options() const override { return learner_.traits().planner; }
    ActionChoice decide(const Scene& scene, const StateViews& views) override;
    void observe(const StateViews& before, const ActionChoice& a, const Outcome& outcome,
                 const StateViews& after, bool terminal) override;

private:
    QLearner learner_;
    bool continual_;
    int updates_ = 0;
    int sync_period_;
};

/// Non-learning planner that knows object affinities: pairs enveloping and
/// sucking targets until one type runs out.
class OraclePolicy : public Policy {
public:
    PolicyKind kind() const override { return PolicyKind::oracle; }
    ActionChoice decide(const Scene& scene, const StateViews& views) override;
};

}  // namespace graspsim
