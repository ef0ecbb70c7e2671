#include "graspsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace graspsim {

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::enveloping: return "enveloping";
        case ActionKind::sucking: return "sucking";
        case ActionKind::enveloping_then_sucking: return "enveloping_then_sucking";
    }
    return "?";
}

void RewardConfig::validate(double gamma) const {
    if (!(es_full > single_success + single_success))
        throw EnvError("reward config: es_full must exceed two single successes");
    if (!(es_full > single_success + gamma * single_success))
        throw EnvError("reward config: es_full must exceed single + gamma * single");
    if (!(es_semi < single_success))
        throw EnvError("reward config: es_semi must be below a single success");
    if (!(single_success > 0.0 && es_semi >= 0.0))
        throw EnvError("reward config: rewards must be non-negative");
}

double reward_of(ActionKind kind, const Outcome& outcome, const RewardConfig& rewards) {
    switch (kind) {
        case ActionKind::enveloping:
            return outcome.envelope_success.value_or(false) ? rewards.single_success : 0.0;
        case ActionKind::sucking:
            return outcome.suck_success.value_or(false) ? rewards.single_success : 0.0;
        case ActionKind::enveloping_then_sucking: {
            const int picked = outcome.objects_picked();
            return picked == 2 ? rewards.es_full : picked == 1 ? rewards.es_semi : 0.0;
        }
    }
    return 0.0;
}

StateViews make_views(const Scene& scene, int resolution, double depth_noise,
                      std::uint64_t noise_seed) {
    StateViews v;
    v.depth = render_depth(scene, resolution, depth_noise, noise_seed);
    v.masks = render_masks(scene, resolution);
    for (const auto& o : scene.objects) {
        v.ids.push_back(o.id);
        v.descriptors.push_back(object_descriptor(scene, o.id));
    }
    return v;
}

GraspAction make_action(const Scene& scene, const EnvConfig& config, ActionKind kind,
                        int first_id, int second_id) {
    GraspAction a;
    a.kind = kind;
    auto need = [&](int id) {
        if (!scene.find(id)) throw EnvError("action targets removed or unknown object " + std::to_string(id));
    };
    try {
        switch (kind) {
            case ActionKind::enveloping:
                need(first_id);
                a.envelope_id = first_id;
                a.envelope = plan_envelope(scene, first_id, config.gripper, config.planner);
                break;
            case ActionKind::sucking:
                need(first_id);
                a.suck_id = first_id;
                a.suck = plan_suck(scene, first_id, config.gripper, config.planner);
                break;
            case ActionKind::enveloping_then_sucking:
                need(first_id);
                need(second_id);
                if (first_id == second_id) throw EnvError("enveloping_then_sucking needs two distinct targets");
                a.envelope_id = first_id;
                a.suck_id = second_id;
                try {
                    a.envelope = plan_envelope(scene, first_id, config.gripper, config.planner);
                } catch (const PlanningError& e) {
                    a.planning_error = e.what();
                }
                a.suck = plan_suck(scene.without(first_id), second_id, config.gripper, config.planner);
                break;
        }
    } catch (const PlanningError& e) {
        if (!a.planning_error.empty()) a.planning_error += "; ";
        a.planning_error += e.what();
    }
    return a;
}

namespace {

// The fingers sit at yaw gamma_e + k*90 about the world vertical.
std::array<Vec2, 4> fingertip_positions(const EnvelopePlan& plan, double radius) {
    std::array<Vec2, 4> tips;
    const Vec2 c(plan.target.x(), plan.target.y());
    for (int k = 0; k < 4; ++k) {
        const double a = deg2rad(plan.gamma_e + 90.0 * k);
        tips[static_cast<std::size_t>(k)] = c + radius * Vec2(std::cos(a), std::sin(a));
    }
    return tips;
}

double exit_distance(const RotatedRect& r, const Vec2& dir) {
    const double du = std::abs(dir.dot(r.long_axis()));
    const double dv = std::abs(dir.dot(r.short_axis()));
    double t = std::numeric_limits<double>::infinity();
    if (du > 0.0) t = std::min(t, r.half_long / du);
    if (dv > 0.0) t = std::min(t, r.half_short / dv);
    return t;
}

}  // namespace

bool envelope_feasible(const Scene& scene, const EnvelopePlan& plan, const EnvConfig& config) {
    const SceneObject* target = scene.find(plan.target_id);
    if (!target || !can_envelope(target->affinity)) return false;
    if (target->footprint.short_side() > plan.opening_d + 1e-12) return false;
    if (config.ideal_outcomes) return true;

    const double df = fingertip_radius(config.gripper, plan.finger);
    for (const Vec2& tip : fingertip_positions(plan, df))
        if (target->footprint.contains(tip, 1e-9)) return false;

    const Vec2 c(plan.target.x(), plan.target.y());
    const double inner = df - config.finger_width / 2.0;
    const double outer = df + config.finger_width / 2.0;
    for (const auto& o : scene.objects) {
        if (o.id == plan.target_id) continue;
        if (o.footprint.distance_to(c) <= outer && o.footprint.max_distance_to(c) >= inner) return false;
    }
    return true;
}

bool suck_feasible(const Scene& scene, const SuckPlan& plan, const EnvConfig& config,
                   bool check_blocked_sucker) {
    const SceneObject* target = scene.find(plan.target_id);
    if (!target || !can_suck(target->affinity)) return false;
    if (target->top_flat_area < config.gripper.sucker_area()) return false;
    if (config.ideal_outcomes) return true;

    const ObstacleField field = obstacle_field(scene, plan.target_id);
    if (field.value_at(plan.alpha_s) < config.clearance) return false;

    if (check_blocked_sucker) {
        const Vec2 dir(std::cos(deg2rad(plan.alpha_s)), std::sin(deg2rad(plan.alpha_s)));
        const Vec2 c = target->footprint.center;
        const double t0 = exit_distance(target->footprint, dir);
        const Vec2 a = c + t0 * dir;
        const Vec2 b = c + (t0 + config.gripper.sucker_diameter) * dir;
        for (const auto& o : scene.objects) {
            if (o.id == plan.target_id) continue;
            if (segment_intersects(o.footprint, a, b)) return false;
        }
    }
    return true;
}

Episode::Episode(Scene scene, EnvConfig config, std::uint64_t seed)
    : scene_(std::move(scene)), config_(std::move(config)), seed_(seed), rng_(seed) {
    max_steps_ = config_.max_steps_factor * static_cast<int>(scene_.objects.size());
}

bool Episode::terminal() const {
    return scene_.objects.empty() || step_count_ >= max_steps_;
}

GraspAction Episode::make_action(ActionKind kind, int first_id, int second_id) const {
    return graspsim::make_action(scene_, config_, kind, first_id, second_id);
}

Outcome Episode::attempt_outcome(const GraspAction& action) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto survive = [&](bool ok) {
        const double u = unit(rng_);
        return ok && !(u < config_.p_fail);
    };

    Outcome out;
    switch (action.kind) {
        case ActionKind::enveloping:
            out.envelope_success = survive(action.envelope && envelope_feasible(scene_, *action.envelope, config_));
            break;
        case ActionKind::sucking:
            out.suck_success = survive(action.suck && suck_feasible(scene_, *action.suck, config_, false));
            break;
        case ActionKind::enveloping_then_sucking: {
            const bool env_ok = survive(action.envelope && envelope_feasible(scene_, *action.envelope, config_));
            out.envelope_success = env_ok;
            const Scene after = env_ok ? scene_.without(action.envelope_id) : scene_;
            out.suck_success = survive(action.suck && suck_feasible(after, *action.suck, config_, true));
            break;
        }
    }
    out.reward = reward_of(action.kind, out, config_.rewards);
    return out;
}

StepResult Episode::step(const GraspAction& action) {
    if (terminal()) throw EnvError("step on a terminal episode");
    if (action.envelope_id >= 0 && !scene_.find(action.envelope_id))
        throw EnvError("action on removed object " + std::to_string(action.envelope_id));
    if (action.suck_id >= 0 && !scene_.find(action.suck_id))
        throw EnvError("action on removed object " + std::to_string(action.suck_id));

    StepResult r;
    r.outcome = attempt_outcome(action);
    if (r.outcome.envelope_success.value_or(false)) scene_ = scene_.without(action.envelope_id);
    if (r.outcome.suck_success.value_or(false)) scene_ = scene_.without(action.suck_id);
    ++step_count_;
    r.views = views();
    r.terminal = terminal();
    return r;
}

StateViews Episode::views() const {
    return make_views(scene_, config_.resolution, config_.depth_noise,
                      seed_ ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(step_count_ + 1)));
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

const char* flag(const std::optional<bool>& b) {
    return !b ? "na" : (*b ? "1" : "0");
}

}  // namespace

void write_step_header(std::ostream& os) {
    os << "episode,step,kind,envelope_id,suck_id,alpha_e,gamma_e,d,alpha_s,gamma_s,sucker_index,"
          "envelope_success,suck_success,reward\n";
}

void write_step_row(std::ostream& os, int episode, int step, const GraspAction& a,
                    const Outcome& o) {
    os << episode << ',' << step << ',' << to_string(a.kind) << ',' << a.envelope_id << ',' << a.suck_id << ',';
    if (a.envelope)
        os << num(a.envelope->alpha_e) << ',' << num(a.envelope->gamma_e) << ',' << num(a.envelope->opening_d) << ',';
    else
        os << ",,,";
    if (a.suck)
        os << num(a.suck->alpha_s) << ',' << num(a.suck->gamma_s) << ',' << a.suck->sucker_index << ',';
    else
        os << ",,,";
    os << flag(o.envelope_success) << ',' << flag(o.suck_success) << ',' << num(o.reward) << '\n';
}

}  // namespace graspsim
