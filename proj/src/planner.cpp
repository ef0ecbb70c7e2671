#include "graspsim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace graspsim {

double ObstacleField::value_at(double deg) const {
    const int k = static_cast<int>(std::lround(wrap_deg(deg))) % 360;
    return combined[static_cast<std::size_t>(k)];
}

double envelope_rotation(double alpha_e) {
    return alpha_e <= 90.0 ? alpha_e - 45.0 : alpha_e - 135.0;
}

SuckerChoice sucker_for_orientation(double alpha_s) {
    if (alpha_s <= 45.0) return {1, alpha_s};
    if (alpha_s <= 135.0) return {2, alpha_s - 90.0};
    if (alpha_s <= 225.0) return {3, alpha_s - 180.0};
    if (alpha_s <= 315.0) return {4, alpha_s - 270.0};
    return {1, alpha_s - 360.0};
}

double obstacle_factor(double obstacle_height, double target_height, double center_distance) {
    if (obstacle_height <= target_height) return 1.0;
    return std::exp(-(obstacle_height - target_height) / center_distance);
}

std::array<double, 360> combine_obstacle_factors(std::span<const ObstacleEntry> entries) {
    std::array<double, 360> out;
    for (int t = 0; t < 360; ++t) {
        double v = 1.0;
        for (const auto& e : entries)
            if (e.sector.contains(t)) v *= e.factor;
        out[static_cast<std::size_t>(t)] = v;
    }
    return out;
}

ObstacleField obstacle_field(const Scene& scene, int target_id) {
    const SceneObject& target = scene.at(target_id);
    const Vec2 c0 = target.footprint.center;
    ObstacleField field;
    for (const auto& o : scene.objects) {
        if (o.id == target_id) continue;
        ObstacleEntry e;
        e.object_id = o.id;
        const double dist = (o.footprint.center - c0).norm();
        e.factor = dist > 0.0 ? obstacle_factor(o.height, target.height, dist)
                              : (o.height > target.height ? 0.0 : 1.0);
        if (o.footprint.distance_to(c0) <= 1e-12)
            e.sector = Sector::make_full();  // overlapping box: blocks every direction
        else
            e.sector = largest_sector_of_box(c0, o.footprint);
        field.entries.push_back(e);
    }
    field.combined = combine_obstacle_factors(field.entries);
    return field;
}

double select_sucking_orientation(const ObstacleField& field, double xi) {
    std::vector<ObstacleEntry> entries = field.entries;
    for (;;) {
        bool all_clear = true;
        for (const auto& e : entries)
            if (e.factor < 1.0) all_clear = false;
        if (all_clear) return 0.0;

        const auto fo = combine_obstacle_factors(entries);
        auto at = [&](int t) { return fo[static_cast<std::size_t>(t)]; };

        std::optional<double> alpha;
        double best = -std::numeric_limits<double>::infinity();
        int s1 = 0, e1 = 0, s2 = 0, e2 = 0;
        bool changed = false;
        for (int t = 0; t < 360; ++t) {
            if (t > 0 && at(t) != at(t - 1)) {
                changed = true;
                e1 = t - 1;
                if (e1 - s1 >= xi && at(e1) >= best) {
                    alpha = (s1 + e1) / 2.0;
                    best = at(e1);
                }
                if (s1 == 0) e2 = e1;
                s1 = t;
            }
            if (t == 359) {
                if (s1 != t) {
                    e1 = t;
                    s2 = s1;
                    if (e1 - s1 >= xi && at(t) >= best) {
                        alpha = (s1 + e1) / 2.0;
                        best = at(t);
                    }
                } else {
                    s2 = t;
                }
            }
        }
        // First and last runs join across 0 degrees.
        if (changed && at(0) == at(359) && 360 + e2 - s2 >= xi && at(0) >= best) {
            alpha = (s2 + e2) >= 360 ? (s2 + e2) / 2.0 - 180.0 : (s2 + e2) / 2.0 + 180.0;
            best = at(0);
        }
        if (alpha) return *alpha;

        // No zone is wide enough: drop the mildest remaining obstacle.
        std::size_t pick = entries.size();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].factor >= 1.0) continue;
            if (pick == entries.size() || entries[i].factor > entries[pick].factor) pick = i;
        }
        entries[pick].factor = 1.0;
    }
}

Rotation3 suck_rotation(double alpha_s, double gamma_s, double theta_s) {
    const Rotation3 base = rot_x(180.0) * rot_z(gamma_s);
    if (alpha_s > 45.0 && alpha_s <= 135.0) return base * rot_x(-theta_s);
    if (alpha_s > 135.0 && alpha_s <= 225.0) return base * rot_y(theta_s);
    if (alpha_s > 225.0 && alpha_s <= 315.0) return base * rot_x(theta_s);
    return base * rot_y(-theta_s);
}

Vec3 suck_target_in_gripper(double alpha_s, double d_s, double h_p, double h_s) {
    const double z = h_p + h_s;
    if (alpha_s > 45.0 && alpha_s <= 135.0) return {0.0, -d_s, z};
    if (alpha_s > 135.0 && alpha_s <= 225.0) return {-d_s, 0.0, z};
    if (alpha_s > 225.0 && alpha_s <= 315.0) return {0.0, d_s, z};
    return {d_s, 0.0, z};
}

EnvelopePlan plan_envelope(const Scene& scene, int target_id, const GripperParams& gripper,
                           const PlannerOptions& opts) {
    const ObjectDescriptor desc = object_descriptor(scene, target_id);
    if (desc.box.short_side() > gripper.d_max)
        throw PlanningError("object exceeds gripper opening (short side " +
                            std::to_string(desc.box.short_side()) + " m > d_max " +
                            std::to_string(gripper.d_max) + " m)");
    EnvelopePlan plan;
    plan.target_id = target_id;
    plan.alpha_e = opts.orientation_optimization ? desc.box.axis_angle : 0.0;
    plan.gamma_e = envelope_rotation(plan.alpha_e);
    plan.opening_d = opts.preenveloping ? std::min(desc.box.short_side(), gripper.d_max) : gripper.d_max;
    plan.finger = solve_bend_for_opening(gripper, plan.opening_d);
    plan.target = desc.center;
    plan.delta = std::max(opts.min_envelope_depth, desc.center.z());

    const Vec3 q_eg(0.0, 0.0, gripper.h_p + fingertip_height(gripper, plan.finger) - plan.delta);
    plan.pose.rotation = rot_x(180.0) * rot_z(plan.gamma_e);
    plan.pose.position = plan.target - plan.pose.rotation * q_eg;
    return plan;
}

SuckPlan plan_suck(const Scene& scene, int target_id, const GripperParams& gripper,
                   const PlannerOptions& opts) {
    const SceneObject& obj = scene.at(target_id);
    if (obj.top_flat_area < gripper.sucker_area())
        throw PlanningError("unsuckable target: flat area " + std::to_string(obj.top_flat_area) +
                            " m^2 below sucker area " + std::to_string(gripper.sucker_area()) + " m^2");
    SuckPlan plan;
    plan.target_id = target_id;
    plan.alpha_s = opts.orientation_optimization
                       ? select_sucking_orientation(obstacle_field(scene, target_id), opts.xi)
                       : 0.0;
    const SuckerChoice choice = sucker_for_orientation(plan.alpha_s);
    plan.sucker_index = choice.index;
    plan.gamma_s = choice.gamma_s;

    const FingerState finger = FingerState::from_bend(gripper, gripper.suck_bend_deg);
    plan.theta_s = sucker_normal_angle(gripper, finger);
    const SuckerPosition sp = sucker_position(gripper, finger, plan.theta_s);

    const ObjectDescriptor desc = object_descriptor(scene, target_id);
    plan.target = desc.center;
    plan.target_in_gripper = suck_target_in_gripper(plan.alpha_s, sp.d_s, gripper.h_p, sp.h_s);
    plan.pose.rotation = suck_rotation(plan.alpha_s, plan.gamma_s, plan.theta_s);
    plan.pose.position = plan.target - plan.pose.rotation * plan.target_in_gripper;
    return plan;
}

std::pair<EnvelopePlan, SuckPlan> plan_envelope_then_suck(const Scene& scene, int envelope_id,
                                                          int suck_id, const GripperParams& gripper,
                                                          const PlannerOptions& opts,
                                                          bool remove_enveloped) {
    if (envelope_id == suck_id)
        throw PlanningError("enveloping_then_sucking needs two distinct targets");
    scene.at(suck_id);
    EnvelopePlan env = plan_envelope(scene, envelope_id, gripper, opts);
    SuckPlan suck = remove_enveloped ? plan_suck(scene.without(envelope_id), suck_id, gripper, opts)
                                     : plan_suck(scene, suck_id, gripper, opts);
    return {env, suck};
}

}  // namespace graspsim
