#include "graspsim/gripper.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace graspsim {

void GripperParams::validate() const {
    auto fail = [](const char* what) { throw GripperError(std::string("gripper: ") + what); };
    if (!(l_p > 0 && h_p > 0 && l_f > 0 && h > 0 && l_s1 >= 0 && l_s2 >= 0 && d_max > 0 &&
          sucker_diameter > 0))
        fail("lengths must be positive");
    if (!(theta_t > 0.0 && theta_t < 90.0)) fail("theta_t must lie in (0, 90) degrees");
    if (d_max > std::sqrt(2.0) * l_p + 1e-12) fail("d_max must not exceed sqrt(2)*l_p");
    if (!(suck_bend_deg > 0.0 && suck_bend_deg <= 180.0)) fail("suck_bend_deg must lie in (0, 180]");
}

FingerState FingerState::from_bend(const GripperParams& params, double theta_f_deg) {
    if (!(theta_f_deg >= 0.0) || !std::isfinite(theta_f_deg))
        throw GripperError("finger bend angle must be finite and >= 0");
    FingerState s;
    s.theta_f_ = theta_f_deg;
    const double rad = deg2rad(theta_f_deg);
    s.d_t_ = params.h * rad;
    s.r_ = rad > 0.0 ? params.l_f / rad : std::numeric_limits<double>::infinity();
    return s;
}

FingerState FingerState::from_tendon(const GripperParams& params, double d_t) {
    return from_bend(params, rad2deg(d_t / params.h));
}

double fingertip_height(const GripperParams& params, const FingerState& state) {
    const double tt = deg2rad(params.theta_t);
    if (state.straight()) return params.l_f * std::cos(tt);
    return state.r() * (std::sin(tt) + std::sin(state.theta_f_rad() - tt));
}

double fingertip_radius(const GripperParams& params, const FingerState& state) {
    const double tt = deg2rad(params.theta_t);
    if (state.straight()) return params.l_p + params.l_f * std::sin(tt);
    return params.l_p - state.r() * (std::cos(tt) - std::cos(state.theta_f_rad() - tt));
}

double sucker_normal_angle(const GripperParams& params, const FingerState& state) {
    return state.theta_f() - params.theta_t;
}

SuckerPosition sucker_position(const GripperParams& params, const FingerState& state,
                               double theta_s_deg) {
    const double ts = deg2rad(theta_s_deg);
    return {fingertip_height(params, state) - params.l_s1 * std::sin(ts) + params.l_s2 * std::cos(ts),
            fingertip_radius(params, state) + params.l_s1 * std::cos(ts) + params.l_s2 * std::sin(ts)};
}

TipCoordinates all_tip_and_sucker_coords(const GripperParams& params, const FingerState& state,
                                         double theta_s_deg) {
    const double hf = fingertip_height(params, state);
    const double df = fingertip_radius(params, state);
    const SuckerPosition sp = sucker_position(params, state, theta_s_deg);
    const double zf = params.h_p + hf;
    const double zs = params.h_p + sp.h_s;
    TipCoordinates out;
    out.suckers = {Vec3(sp.d_s, 0, zs), Vec3(0, -sp.d_s, zs), Vec3(-sp.d_s, 0, zs), Vec3(0, sp.d_s, zs)};
    out.fingertips = {Vec3(df, 0, zf), Vec3(0, -df, zf), Vec3(-df, 0, zf), Vec3(0, df, zf)};
    return out;
}

double opening_distance(const GripperParams& params, const FingerState& state) {
    return std::sqrt(2.0) * fingertip_radius(params, state);
}

FingerState solve_bend_for_opening(const GripperParams& params, double d_target) {
    auto residual = [&](double theta_deg) {
        return opening_distance(params, FingerState::from_bend(params, theta_deg)) - d_target;
    };
    auto range_error = [&](const char* why) {
        const double hi = opening_distance(params, FingerState::from_bend(params, 0.0));
        const double lo = opening_distance(params, FingerState::from_bend(params, 180.0));
        std::ostringstream os;
        os << "solve_bend_for_opening: " << why << " (requested " << d_target
           << " m; reachable opening range [" << std::max(lo, 0.0) << ", " << hi
           << "] m, configured d_max " << params.d_max << " m)";
        throw GripperError(os.str());
    };
    if (!(d_target > 0.0) || d_target > params.d_max + 1e-12) range_error("target outside (0, d_max]");

    // Bracketing scan at 1 degree steps, then bisection.
    double lo = 0.0;
    double f_lo = residual(lo);
    if (f_lo == 0.0) return FingerState::from_bend(params, lo);
    for (int step = 1; step <= 180; ++step) {
        const double hi = static_cast<double>(step);
        const double f_hi = residual(hi);
        if (f_hi == 0.0) return FingerState::from_bend(params, hi);
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
            double a = lo, b = hi, fa = f_lo;
            for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = residual(m);
                if (fm == 0.0) { a = b = m; break; }
                if ((fa < 0.0) == (fm < 0.0)) { a = m; fa = fm; } else { b = m; }
            }
            FingerState s = FingerState::from_bend(params, 0.5 * (a + b));
            if (s.theta_f() <= 0.0) s = FingerState::from_bend(params, b);
            return s;
        }
        lo = hi;
        f_lo = f_hi;
    }
    range_error("no root for theta_f in (0, 180] degrees");
    return {};
}

double curvature(const GripperParams& params, const FingerState& state) {
    return state.d_t() / (params.h * params.l_f);
}

}  // namespace graspsim
