#pragma once

#include "graspsim/geometry.hpp"
#include "graspsim/gripper.hpp"
#include "graspsim/scene.hpp"

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace graspsim {

class PlanningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlannerOptions {
    bool orientation_optimization = true;  // off: alpha_e = alpha_s = 0
    bool preenveloping = true;             // off: opening held at d_max
    double xi = 45.0;                      // minimum sucking-zone extent, degrees
    double min_envelope_depth = 0.05;      // lower bound of the fingertip descent, m
};

struct EnvelopePlan {
    int target_id = -1;
    double alpha_e = 0.0;    // long-axis direction, [0, 180)
    double gamma_e = 0.0;    // yaw applied to the gripper, [-45, 45)
    double opening_d = 0.0;  // m
    double delta = 0.0;      // fingertip descent below q_e, m
    FingerState finger;
    Vec3 target = Vec3::Zero();  // q_e
    Pose pose;
};

struct SuckPlan {
    int target_id = -1;
    double alpha_s = 0.0;  // [0, 360)
    double gamma_s = 0.0;  // (-45, 45]
    int sucker_index = 1;  // 1..4
    double theta_s = 0.0;  // sucker normal tilt, degrees
    Vec3 target = Vec3::Zero();  // q_s
    Vec3 target_in_gripper = Vec3::Zero();  // q_sg
    Pose pose;
};

struct ObstacleEntry {
    int object_id = -1;
    double factor = 1.0;  // f_oi
    Sector sector;        // theta_oi
};

struct ObstacleField {
    std::vector<ObstacleEntry> entries;
    std::array<double, 360> combined{};  // F_o at integer degrees

    /// F_o at the nearest integer degree.
    double value_at(double deg) const;
};

/// Minimum yaw that brings the enveloping axis onto the gripper's diagonal.
double envelope_rotation(double alpha_e);

struct SuckerChoice {
    int index = 1;
    double gamma_s = 0.0;
};

/// Sucker that faces alpha_s after the smallest yaw, and that yaw.
SuckerChoice sucker_for_orientation(double alpha_s);

double obstacle_factor(double obstacle_height, double target_height, double center_distance);

ObstacleField obstacle_field(const Scene& scene, int target_id);

/// Combines per-object factors on the integer-degree grid.
std::array<double, 360> combine_obstacle_factors(std::span<const ObstacleEntry> entries);

/// Best sucking zone search on integer degrees, with the fallback that drops
/// the mildest obstacle until some zone spans at least `xi` degrees.
double select_sucking_orientation(const ObstacleField& field, double xi = 45.0);

/// Orientation of G for sucking with the given yaw and sucker tilt.
Rotation3 suck_rotation(double alpha_s, double gamma_s, double theta_s);

/// Suction point in frame G for the sucker selected by alpha_s.
Vec3 suck_target_in_gripper(double alpha_s, double d_s, double h_p, double h_s);

EnvelopePlan plan_envelope(const Scene& scene, int target_id, const GripperParams& gripper,
                           const PlannerOptions& opts = {});

SuckPlan plan_suck(const Scene& scene, int target_id, const GripperParams& gripper,
                   const PlannerOptions& opts = {});

/// The suck half is planned on the scene without the enveloped object unless
/// `remove_enveloped` is false.
std::pair<EnvelopePlan, SuckPlan> plan_envelope_then_suck(const Scene& scene, int envelope_id,
                                                          int suck_id, const GripperParams& gripper,
                                                          const PlannerOptions& opts = {},
                                                          bool remove_enveloped = true);

}  // namespace graspsim
