#pragma once

#include "graspsim/geometry.hpp"

#include <array>
#include <limits>
#include <stdexcept>

namespace graspsim {

class GripperError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constants of the four-finger constant-curvature model. Lengths in meters,
/// angles in degrees.
struct GripperParams {
    double l_p = 0.05;      // torsion spring radius from the z-axis of G
    double h_p = 0.02;      // torsion spring z-offset in G
    double theta_t = 15.0;  // finger axis tilt from vertical
    double l_f = 0.11;      // finger length
    double h = 0.008;       // tendon offset from the finger back
    double l_s1 = 0.015;
    double l_s2 = 0.01;
    double d_max = 0.07;
    double sucker_diameter = 0.02;
    double suck_bend_deg = 60.0;  // finger bend held while sucking

    /// Throws GripperError naming the first violated invariant.
    void validate() const;
    double sucker_area() const { return kPi * sucker_diameter * sucker_diameter / 4.0; }
};

/// Bend configuration of one finger; all four fingers share it.
class FingerState {
public:
    FingerState() = default;

    /// theta_f in degrees, >= 0. r and d_t follow from l_f = r*theta and
    /// theta = d_t/h.
    static FingerState from_bend(const GripperParams& params, double theta_f_deg);
    static FingerState from_tendon(const GripperParams& params, double d_t);

    double theta_f() const { return theta_f_; }
    double theta_f_rad() const { return deg2rad(theta_f_); }
    /// Bend radius; +inf for a straight finger.
    double r() const { return r_; }
    double d_t() const { return d_t_; }
    bool straight() const { return theta_f_ == 0.0; }

private:
    double theta_f_ = 0.0;
    double r_ = std::numeric_limits<double>::infinity();
    double d_t_ = 0.0;
};

/// Vertical distance from the torsion spring to the fingertip.
double fingertip_height(const GripperParams& params, const FingerState& state);
/// Distance from the fingertip to the z-axis of G.
double fingertip_radius(const GripperParams& params, const FingerState& state);

/// Angle between the sucker normal and the z-axis of G. Geometric stand-in
/// for the attitude sensor: the arc's end tangent, theta_f - theta_t.
double sucker_normal_angle(const GripperParams& params, const FingerState& state);

struct SuckerPosition {
    double h_s = 0.0;
    double d_s = 0.0;
};

SuckerPosition sucker_position(const GripperParams& params, const FingerState& state,
                               double theta_s_deg);

struct TipCoordinates {
    std::array<Vec3, 4> suckers;     // S1..S4 in frame G
    std::array<Vec3, 4> fingertips;  // F1..F4 in frame G
};

TipCoordinates all_tip_and_sucker_coords(const GripperParams& params, const FingerState& state,
                                         double theta_s_deg);

/// Distance between adjacent fingertips, sqrt(2) * d_f.
double opening_distance(const GripperParams& params, const FingerState& state);

/// Bend that yields the requested opening distance, |d - d_target| <= 1e-6.
/// Throws GripperError carrying the reachable range when no root exists.
FingerState solve_bend_for_opening(const GripperParams& params, double d_target);

/// 1/r = d_t / (h * l_f).
double curvature(const GripperParams& params, const FingerState& state);

}  // namespace graspsim
