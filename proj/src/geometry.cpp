#include "graspsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graspsim {

double wrap_deg(double deg, double period) {
    double r = std::fmod(deg, period);
    if (r < 0.0) r += period;
    if (period - r < 1e-9) r = 0.0;
    return r + 0.0;  // folds -0.0
}

Rotation3 Rotation3::from_matrix(const Eigen::Matrix3d& m) {
    Rotation3 r(m);
    if (!r.is_valid()) throw GeometryError("matrix is not a proper rotation");
    return r;
}

bool Rotation3::is_valid(double tol) const {
    if (!m_.allFinite()) return false;
    const Eigen::Matrix3d err = m_.transpose() * m_ - Eigen::Matrix3d::Identity();
    return err.cwiseAbs().maxCoeff() <= tol && std::abs(m_.determinant() - 1.0) <= tol;
}

namespace {

// Exact values at multiples of 90 degrees keep half-turns integral.
void exact_sin_cos(double deg, double& s, double& c) {
    const double w = wrap_deg(deg);
    if (w == 0.0) { s = 0.0; c = 1.0; return; }
    if (w == 90.0) { s = 1.0; c = 0.0; return; }
    if (w == 180.0) { s = 0.0; c = -1.0; return; }
    if (w == 270.0) { s = -1.0; c = 0.0; return; }
    s = std::sin(deg2rad(deg));
    c = std::cos(deg2rad(deg));
}

}  // namespace

Rotation3 rot_x(double alpha_deg) {
    double s, c;
    exact_sin_cos(alpha_deg, s, c);
    Eigen::Matrix3d m;
    m << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return Rotation3(m);
}

Rotation3 rot_y(double beta_deg) {
    double s, c;
    exact_sin_cos(beta_deg, s, c);
    Eigen::Matrix3d m;
    m << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return Rotation3(m);
}

Rotation3 rot_z(double gamma_deg) {
    double s, c;
    exact_sin_cos(gamma_deg, s, c);
    Eigen::Matrix3d m;
    m << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return Rotation3(m);
}

Vec2 RotatedRect::long_axis() const {
    const double a = deg2rad(axis_angle);
    return {std::cos(a), std::sin(a)};
}

Vec2 RotatedRect::short_axis() const {
    const Vec2 u = long_axis();
    return {-u.y(), u.x()};
}

std::array<Vec2, 4> RotatedRect::corners() const {
    const Vec2 u = long_axis() * half_long;
    const Vec2 v = short_axis() * half_short;
    return {center - u - v, center + u - v, center + u + v, center - u + v};
}

namespace {

Vec2 to_local(const RotatedRect& r, const Vec2& p) {
    const Vec2 d = p - r.center;
    return {d.dot(r.long_axis()), d.dot(r.short_axis())};
}

}  // namespace

bool RotatedRect::contains(const Vec2& p, double tol) const {
    const Vec2 q = to_local(*this, p);
    return std::abs(q.x()) < half_long - tol && std::abs(q.y()) < half_short - tol;
}

double RotatedRect::distance_to(const Vec2& p) const {
    const Vec2 q = to_local(*this, p);
    const double dx = std::max(std::abs(q.x()) - half_long, 0.0);
    const double dy = std::max(std::abs(q.y()) - half_short, 0.0);
    return std::hypot(dx, dy);
}

double RotatedRect::max_distance_to(const Vec2& p) const {
    const Vec2 q = to_local(*this, p);
    return std::hypot(std::abs(q.x()) + half_long, std::abs(q.y()) + half_short);
}

RotatedRect make_rect(const Vec2& center, double side_a, double side_b, double angle_a_deg) {
    RotatedRect r;
    r.center = center;
    if (side_a >= side_b) {
        r.half_long = side_a / 2.0;
        r.half_short = side_b / 2.0;
        r.axis_angle = wrap_deg(angle_a_deg, 180.0);
    } else {
        r.half_long = side_b / 2.0;
        r.half_short = side_a / 2.0;
        r.axis_angle = wrap_deg(angle_a_deg + 90.0, 180.0);
    }
    return r;
}

bool Sector::contains(double deg) const {
    if (full) return true;
    if (empty) return false;
    constexpr double tol = 1e-9;
    const double t = wrap_deg(deg);
    if (start <= end) return t >= start - tol && t <= end + tol;
    return t >= start - tol || t <= end + tol;
}

double Sector::extent() const {
    if (full) return 360.0;
    if (empty) return 0.0;
    return start <= end ? end - start : 360.0 - start + end;
}

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

RotatedRect min_area_rect(std::span<const Vec2> points) {
    if (points.size() < 3) throw GeometryError("min_area_rect: need at least 3 points");
    const std::vector<Vec2> hull = convex_hull(points);
    if (hull.size() < 3) throw GeometryError("min_area_rect: points are collinear");

    const std::size_t h = hull.size();
    auto next = [h](std::size_t i) { return (i + 1) % h; };

    // Caliper pointers: farthest along the edge normal, max and min along the edge.
    std::size_t top = 0, right = 0, left = 0;
    double best_area = std::numeric_limits<double>::infinity();
    RotatedRect best;

    for (std::size_t i = 0; i < h; ++i) {
        const Vec2& a = hull[i];
        const Vec2 u = (hull[next(i)] - a).normalized();
        const Vec2 n(-u.y(), u.x());
        auto along = [&](std::size_t k) { return (hull[k] - a).dot(u); };
        auto across = [&](std::size_t k) { return (hull[k] - a).dot(n); };

        if (i == 0) {
            for (std::size_t k = 0; k < h; ++k) {
                if (across(k) > across(top)) top = k;
                if (along(k) > along(right)) right = k;
                if (along(k) < along(left)) left = k;
            }
        } else {
            for (std::size_t s = 0; s < h && across(next(top)) >= across(top); ++s) top = next(top);
            for (std::size_t s = 0; s < h && along(next(right)) >= along(right); ++s) right = next(right);
            for (std::size_t s = 0; s < h && along(next(left)) <= along(left); ++s) left = next(left);
        }

        const double width = along(right) - along(left);
        const double height = across(top);
        const double area = width * height;
        if (area < best_area - 1e-15) {
            best_area = area;
            const Vec2 c = a + u * (along(right) + along(left)) / 2.0 + n * height / 2.0;
            const double angle_u = rad2deg(std::atan2(u.y(), u.x()));
            best = make_rect(c, width, height, angle_u);
        }
    }
    return best;
}

Sector largest_sector_of_box(const Vec2& target_center, const RotatedRect& box) {
    if (box.distance_to(target_center) <= 1e-12)
        throw GeometryError("largest_sector_of_box: target center lies inside the obstacle box");

    const auto cs = box.corners();
    std::array<double, 4> ang{};
    for (int k = 0; k < 4; ++k) {
        const Vec2 d = cs[k] - target_center;
        ang[k] = wrap_deg(rad2deg(std::atan2(d.y(), d.x())));
    }

    Sector best = Sector::make_empty();
    double best_extent = -1.0;
    for (int p = 0; p < 4; ++p) {
        for (int q = p + 1; q < 4; ++q) {
            const double ccw = wrap_deg(ang[q] - ang[p]);
            Sector s;
            double extent;
            if (ccw <= 180.0) {
                s = {ang[p], ang[q], false, false};
                extent = ccw;
            } else {
                s = {ang[q], ang[p], false, false};
                extent = 360.0 - ccw;
            }
            if (extent > best_extent) {
                best_extent = extent;
                best = s;
            }
        }
    }
    return best;
}

namespace {

using Poly = std::vector<Vec2>;

Poly clip(const Poly& subject, const Vec2& a, const Vec2& b) {
    Poly out;
    if (subject.empty()) return out;
    auto inside = [&](const Vec2& p) { return cross(a, b, p) >= 0.0; };
    auto meet = [&](const Vec2& p, const Vec2& q) {
        const double cp = cross(a, b, p);
        const double cq = cross(a, b, q);
        return Vec2(p + (q - p) * (cp / (cp - cq)));
    };
    for (std::size_t i = 0; i < subject.size(); ++i) {
        const Vec2& cur = subject[i];
        const Vec2& prev = subject[(i + subject.size() - 1) % subject.size()];
        if (inside(cur)) {
            if (!inside(prev)) out.push_back(meet(prev, cur));
            out.push_back(cur);
        } else if (inside(prev)) {
            out.push_back(meet(prev, cur));
        }
    }
    return out;
}

double polygon_area(const Poly& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2& a = p[i];
        const Vec2& b = p[(i + 1) % p.size()];
        s += a.x() * b.y() - a.y() * b.x();
    }
    return std::abs(s) / 2.0;
}

}  // namespace

double intersection_area(const RotatedRect& a, const RotatedRect& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    Poly poly(ca.begin(), ca.end());
    for (int k = 0; k < 4 && !poly.empty(); ++k) poly = clip(poly, cb[k], cb[(k + 1) % 4]);
    return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

bool segment_intersects(const RotatedRect& rect, const Vec2& a, const Vec2& b) {
    // Liang-Barsky in the rectangle's local frame.
    const Vec2 p = to_local(rect, a);
    const Vec2 d = to_local(rect, b) - p;
    double t0 = 0.0, t1 = 1.0;
    const double lo[2] = {-rect.half_long, -rect.half_short};
    const double hi[2] = {rect.half_long, rect.half_short};
    for (int ax = 0; ax < 2; ++ax) {
        if (d[ax] == 0.0) {
            if (p[ax] < lo[ax] || p[ax] > hi[ax]) return false;
            continue;
        }
        double ta = (lo[ax] - p[ax]) / d[ax];
        double tb = (hi[ax] - p[ax]) / d[ax];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

double rect_distance(const RotatedRect& a, const RotatedRect& b) {
    if (intersection_area(a, b) > 0.0) return 0.0;
    // Disjoint convex polygons: the gap is attained at a vertex of one of them.
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& c : a.corners()) d = std::min(d, b.distance_to(c));
    for (const Vec2& c : b.corners()) d = std::min(d, a.distance_to(c));
    return d;
}

}  // namespace graspsim
