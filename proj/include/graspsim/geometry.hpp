#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace graspsim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [0, period).
double wrap_deg(double deg, double period = 360.0);

/// Proper rotation matrix. Constructed only from elementary rotations and
/// their products, so orthonormality holds up to rounding.
class Rotation3 {
public:
    Rotation3() : m_(Eigen::Matrix3d::Identity()) {}

    /// Throws GeometryError if `m` is not orthonormal with det +1 (1e-9).
    static Rotation3 from_matrix(const Eigen::Matrix3d& m);

    const Eigen::Matrix3d& matrix() const { return m_; }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    Rotation3 operator*(const Rotation3& o) const { return Rotation3(m_ * o.m_); }
    Rotation3 transpose() const { return Rotation3(m_.transpose()); }

    bool is_valid(double tol = 1e-9) const;

private:
    explicit Rotation3(const Eigen::Matrix3d& m) : m_(m) {}
    friend Rotation3 rot_x(double);
    friend Rotation3 rot_y(double);
    friend Rotation3 rot_z(double);

    Eigen::Matrix3d m_;
};

Rotation3 rot_x(double alpha_deg);
Rotation3 rot_y(double beta_deg);
Rotation3 rot_z(double gamma_deg);

/// Gripper frame G expressed in workspace frame W.
struct Pose {
    Vec3 position = Vec3::Zero();
    Rotation3 rotation;

    /// Maps a point given in frame G to frame W.
    Vec3 apply(const Vec3& local) const { return position + rotation * local; }
};

struct RotatedRect {
    Vec2 center = Vec2::Zero();
    double half_long = 0.0;
    double half_short = 0.0;
    double axis_angle = 0.0;  // long-side direction, degrees in [0, 180)

    double area() const { return 4.0 * half_long * half_short; }
    double short_side() const { return 2.0 * half_short; }
    double long_side() const { return 2.0 * half_long; }
    Vec2 long_axis() const;
    Vec2 short_axis() const;

    /// Corners in counter-clockwise order.
    std::array<Vec2, 4> corners() const;

    /// Strict interior test; points within `tol` of the boundary are outside.
    bool contains(const Vec2& p, double tol = 1e-12) const;
    double distance_to(const Vec2& p) const;
    double max_distance_to(const Vec2& p) const;
};

/// Builds a rect from arbitrary side lengths and direction; normalizes so that
/// half_long >= half_short and axis_angle is in [0, 180).
RotatedRect make_rect(const Vec2& center, double side_a, double side_b, double angle_a_deg);

/// Angular interval on the circle, walked counter-clockwise from start to end.
/// start > end is the wrap-around form.
struct Sector {
    double start = 0.0;
    double end = 0.0;
    bool empty = false;
    bool full = false;

    static Sector make_full() { return {0.0, 0.0, false, true}; }
    static Sector make_empty() { return {0.0, 0.0, true, false}; }

    bool contains(double deg) const;
    bool wraps() const { return !empty && !full && start > end; }
    double extent() const;
};

std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Minimum-area enclosing rectangle by rotating calipers over the convex hull.
/// Throws GeometryError for fewer than 3 points or collinear input.
RotatedRect min_area_rect(std::span<const Vec2> points);

/// Largest of the six sectors spanned, as seen from `target_center`, by pairs
/// of the box's corners. Throws GeometryError if the target lies inside `box`.
Sector largest_sector_of_box(const Vec2& target_center, const RotatedRect& box);

/// Area of the intersection of two rotated rectangles (convex clipping).
double intersection_area(const RotatedRect& a, const RotatedRect& b);

/// Euclidean gap between two rectangles; 0 when they touch or overlap.
double rect_distance(const RotatedRect& a, const RotatedRect& b);

/// True if the segment [a, b] touches the closed rectangle.
bool segment_intersects(const RotatedRect& rect, const Vec2& a, const Vec2& b);

}  // namespace graspsim
