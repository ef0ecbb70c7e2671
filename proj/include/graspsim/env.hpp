#pragma once

#include "graspsim/planner.hpp"
#include "graspsim/scene.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace graspsim {

class EnvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ActionKind { enveloping, sucking, enveloping_then_sucking };

const char* to_string(ActionKind k);

struct RewardConfig {
    double single_success = 1.0;
    double es_full = 2.5;
    double es_semi = 0.5;

    /// Requires es_full > 2*single, es_full > single + gamma*single and
    /// es_semi < single. Throws EnvError naming the violated relation.
    void validate(double gamma) const;
};

struct EnvConfig {
    GripperParams gripper;
    PlannerOptions planner;
    RewardConfig rewards;
    double p_fail = 0.08;
    double clearance = 0.4;      // minimum F_o along the sucking direction
    double finger_width = 0.01;  // annulus width swept by the fingers, m
    int max_steps_factor = 3;    // max_steps = factor * initial object count
    int resolution = 64;
    double depth_noise = 0.0;    // +- amplitude, m
    bool ideal_outcomes = false; // keep only affinity, size and flat-area rules
};

struct GraspAction {
    ActionKind kind = ActionKind::enveloping;
    int envelope_id = -1;
    int suck_id = -1;
    std::optional<EnvelopePlan> envelope;  // empty when planning failed
    std::optional<SuckPlan> suck;
    std::string planning_error;

    /// The target of a single-primitive action.
    int target() const { return kind == ActionKind::sucking ? suck_id : envelope_id; }
};

struct Outcome {
    std::optional<bool> envelope_success;
    std::optional<bool> suck_success;
    double reward = 0.0;

    int objects_picked() const {
        return (envelope_success.value_or(false) ? 1 : 0) + (suck_success.value_or(false) ? 1 : 0);
    }
};

double reward_of(ActionKind kind, const Outcome& outcome, const RewardConfig& rewards = {});

struct StateViews {
    Heightmap depth;
    std::vector<Mask> masks;  // parallel to ids
    std::vector<ObjectDescriptor> descriptors;
    std::vector<int> ids;
};

StateViews make_views(const Scene& scene, int resolution, double depth_noise = 0.0,
                      std::uint64_t noise_seed = 0);

/// Plans the geometry of an action. Planning failures (e.g. sucking a target
/// with no flat top) leave the plan empty; that half then fails on execution.
GraspAction make_action(const Scene& scene, const EnvConfig& config, ActionKind kind,
                        int first_id, int second_id = -1);

/// Deterministic geometric checks for each half of an action.
bool envelope_feasible(const Scene& scene, const EnvelopePlan& plan, const EnvConfig& config);
bool suck_feasible(const Scene& scene, const SuckPlan& plan, const EnvConfig& config,
                   bool check_blocked_sucker);

struct StepResult {
    Outcome outcome;
    StateViews views;
    bool terminal = false;
};

class Episode {
public:
    Episode(Scene scene, EnvConfig config, std::uint64_t seed);

    const Scene& scene() const { return scene_; }
    const EnvConfig& config() const { return config_; }
    int step_count() const { return step_count_; }
    int max_steps() const { return max_steps_; }
    bool terminal() const;

    GraspAction make_action(ActionKind kind, int first_id, int second_id = -1) const;

    /// Geometric rules followed by independent Bernoulli failures. Advances
    /// the episode's noise stream but not the scene.
    Outcome attempt_outcome(const GraspAction& action);

    /// Executes the action, removes picked objects and returns fresh views.
    StepResult step(const GraspAction& action);

    StateViews views() const;

private:
    Scene scene_;
    EnvConfig config_;
    int step_count_ = 0;
    int max_steps_ = 0;
    std::uint64_t seed_;
    std::mt19937_64 rng_;
};

void write_step_header(std::ostream& os);
void write_step_row(std::ostream& os, int episode, int step, const GraspAction& action,
                    const Outcome& outcome);

}  // namespace graspsim
