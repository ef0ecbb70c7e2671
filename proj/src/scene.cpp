#include "graspsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace graspsim {

const char* to_string(Affinity a) {
    switch (a) {
        case Affinity::envelope_only: return "envelope_only";
        case Affinity::suck_only: return "suck_only";
        case Affinity::both: return "both";
    }
    return "?";
}

Affinity affinity_from_string(const std::string& s) {
    if (s == "envelope_only") return Affinity::envelope_only;
    if (s == "suck_only") return Affinity::suck_only;
    if (s == "both") return Affinity::both;
    throw SceneError("unknown affinity '" + s + "'");
}

const std::vector<ObjectTemplate>& default_catalog() {
    // Envelope-type objects are rounded and tall; suck-type objects are flat.
    static const std::vector<ObjectTemplate> catalog = {
        {"sports_ball", 0.030, 0.038, 0.030, 0.038, 0.035, 0.045, Affinity::envelope_only, 0.0},
        {"apple", 0.027, 0.036, 0.027, 0.036, 0.035, 0.045, Affinity::envelope_only, 0.0},
        {"orange", 0.025, 0.034, 0.025, 0.034, 0.030, 0.040, Affinity::envelope_only, 0.0},
        {"banana", 0.019, 0.025, 0.051, 0.072, 0.025, 0.035, Affinity::envelope_only, 0.0},
        {"toy_car", 0.021, 0.030, 0.038, 0.055, 0.030, 0.040, Affinity::envelope_only, 0.0},
        {"teddy_bear", 0.030, 0.043, 0.038, 0.051, 0.045, 0.060, Affinity::envelope_only, 0.0},
        {"bottle", 0.021, 0.030, 0.043, 0.064, 0.010, 0.020, Affinity::suck_only, 0.6},
        {"mouse", 0.021, 0.030, 0.038, 0.047, 0.012, 0.020, Affinity::suck_only, 0.5},
        {"remote", 0.021, 0.030, 0.055, 0.076, 0.008, 0.015, Affinity::suck_only, 0.7},
        {"cup", 0.030, 0.038, 0.030, 0.038, 0.010, 0.020, Affinity::suck_only, 0.5},
        {"bowl", 0.034, 0.043, 0.034, 0.043, 0.010, 0.020, Affinity::suck_only, 0.4},
        {"cellphone", 0.025, 0.034, 0.051, 0.064, 0.005, 0.010, Affinity::suck_only, 0.9},
        {"clock", 0.034, 0.043, 0.034, 0.043, 0.008, 0.015, Affinity::suck_only, 0.8},
    };
    return catalog;
}

const SceneObject* Scene::find(int id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

const SceneObject& Scene::at(int id) const {
    const SceneObject* o = find(id);
    if (!o) throw SceneError("unknown object id " + std::to_string(id));
    return *o;
}

Scene Scene::without(int id) const {
    Scene s = *this;
    std::erase_if(s.objects, [id](const SceneObject& o) { return o.id == id; });
    return s;
}

namespace {

// Rounds to the 9 significant digits the text format carries, so that a
// spawned scene survives write/read unchanged.
double q9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

bool inside_workspace(const RotatedRect& r, double side) {
    for (const auto& c : r.corners())
        if (c.x() < 0.0 || c.y() < 0.0 || c.x() > side || c.y() > side) return false;
    return true;
}

}  // namespace

Scene spawn_scene(double pe, int n_objects, const std::vector<ObjectTemplate>& catalog,
                  std::uint64_t seed, const SceneParams& params) {
    if (n_objects < 1) throw SceneError("spawn_scene: need at least one object");
    if (n_objects > params.max_objects)
        throw SceneError("spawn_scene: object count exceeds configured maximum");
    if (!(pe >= 0.0 && pe <= 1.0)) throw SceneError("spawn_scene: pe must lie in [0, 1]");

    std::vector<const ObjectTemplate*> env_t, suck_t;
    for (const auto& t : catalog) (t.affinity == Affinity::suck_only ? suck_t : env_t).push_back(&t);

    const int n_env = static_cast<int>(std::lround(pe * n_objects));
    if ((n_env > 0 && env_t.empty()) || (n_env < n_objects && suck_t.empty()))
        throw SceneError("spawn_scene: catalog lacks a required object type");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto lerp = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    std::vector<bool> is_env(static_cast<std::size_t>(n_objects), false);
    std::fill(is_env.begin(), is_env.begin() + n_env, true);
    std::shuffle(is_env.begin(), is_env.end(), rng);

    Scene scene;
    scene.workspace_side = params.workspace_side;
    scene.rng_seed = seed;

    for (int id = 0; id < n_objects; ++id) {
        const auto& pool = is_env[static_cast<std::size_t>(id)] ? env_t : suck_t;
        const ObjectTemplate& t = *pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        const double short_side = lerp(t.short_min, t.short_max);
        const double long_side = std::max(short_side, lerp(t.long_min, t.long_max));
        const double own_height = lerp(t.height_min, t.height_max);

        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            const Vec2 c(lerp(0.0, params.workspace_side), lerp(0.0, params.workspace_side));
            RotatedRect r = make_rect(c, long_side, short_side, lerp(0.0, 180.0));
            r.center = Vec2(q9(r.center.x()), q9(r.center.y()));
            r.half_long = q9(r.half_long);
            r.half_short = q9(r.half_short);
            r.axis_angle = q9(r.axis_angle);
            if (r.axis_angle >= 180.0) r.axis_angle = 0.0;
            if (!inside_workspace(r, params.workspace_side)) continue;

            double base = 0.0;
            bool ok = true;
            for (const auto& other : scene.objects) {
                if (params.clutter == ClutterMode::light && params.min_gap > 0.0 &&
                    rect_distance(r, other.footprint) < params.min_gap) {
                    ok = false;
                    break;
                }
                const double inter = intersection_area(r, other.footprint);
                if (inter <= 1e-12) continue;
                if (params.clutter == ClutterMode::light ||
                    inter > params.max_overlap * std::min(r.area(), other.footprint.area())) {
                    ok = false;
                    break;
                }
                base = std::max(base, other.height);
            }
            if (!ok) continue;

            SceneObject obj;
            obj.id = id;
            obj.footprint = r;
            obj.height = q9(base + own_height);
            obj.affinity = t.affinity;
            obj.top_flat_area = q9(t.flat_fraction * r.area());
            scene.objects.push_back(obj);
            placed = true;
        }
        if (!placed) throw SceneError("spawn_scene: placement failed after 1000 rejections (workspace too crowded)");
    }
    return scene;
}

Scene spawn_scene_retrying(double pe, int n_objects, const std::vector<ObjectTemplate>& catalog,
                           std::uint64_t seed, const SceneParams& params, int attempts) {
    for (int a = 0;; ++a) {
        try {
            return spawn_scene(pe, n_objects, catalog, seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(a),
                               params);
        } catch (const SceneError& e) {
            if (a + 1 >= attempts || std::string(e.what()).find("rejections") == std::string::npos) throw;
        }
    }
}

Vec2 Heightmap::cell_center(int ix, int iy) const {
    const double px = workspace_side / resolution;
    return {(ix + 0.5) * px, (iy + 0.5) * px};
}

namespace {

// Visits every cell whose center lies in the closed footprint.
template <typename F>
void for_each_covered_cell(const RotatedRect& r, double side, int res, F&& fn) {
    const double px = side / res;
    double xmin = side, xmax = 0, ymin = side, ymax = 0;
    for (const auto& c : r.corners()) {
        xmin = std::min(xmin, c.x());
        xmax = std::max(xmax, c.x());
        ymin = std::min(ymin, c.y());
        ymax = std::max(ymax, c.y());
    }
    const int ix0 = std::max(0, static_cast<int>(std::floor(xmin / px)) - 1);
    const int ix1 = std::min(res - 1, static_cast<int>(std::ceil(xmax / px)) + 1);
    const int iy0 = std::max(0, static_cast<int>(std::floor(ymin / px)) - 1);
    const int iy1 = std::min(res - 1, static_cast<int>(std::ceil(ymax / px)) + 1);
    const Vec2 u = r.long_axis();
    const Vec2 v = r.short_axis();
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const Vec2 d = Vec2((ix + 0.5) * px, (iy + 0.5) * px) - r.center;
            if (std::abs(d.dot(u)) <= r.half_long && std::abs(d.dot(v)) <= r.half_short) fn(ix, iy);
        }
    }
}

}  // namespace

Heightmap render_depth(const Scene& scene, int resolution, double noise_amplitude,
                       std::uint64_t noise_seed) {
    Heightmap hm;
    hm.resolution = resolution;
    hm.workspace_side = scene.workspace_side;
    hm.cells.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
    for (const auto& o : scene.objects) {
        for_each_covered_cell(o.footprint, scene.workspace_side, resolution, [&](int ix, int iy) {
            hm.at(ix, iy) = std::max(hm.at(ix, iy), o.height);
        });
    }
    if (noise_amplitude > 0.0) {
        std::mt19937_64 rng(noise_seed);
        std::uniform_real_distribution<double> noise(-noise_amplitude, noise_amplitude);
        for (auto& c : hm.cells) c = std::max(0.0, c + noise(rng));
    }
    return hm;
}

std::vector<Mask> render_masks(const Scene& scene, int resolution) {
    std::vector<Mask> masks;
    masks.reserve(scene.objects.size());
    for (const auto& o : scene.objects) {
        Mask m;
        m.resolution = resolution;
        m.cells.assign(static_cast<std::size_t>(resolution) * resolution, 0);
        for_each_covered_cell(o.footprint, scene.workspace_side, resolution, [&](int ix, int iy) {
            m.cells[static_cast<std::size_t>(iy) * resolution + ix] = 1;
        });
        masks.push_back(std::move(m));
    }
    return masks;
}

ObjectDescriptor object_descriptor(const Scene& scene, int id) {
    const SceneObject& o = scene.at(id);
    return {o.footprint, Vec3(o.footprint.center.x(), o.footprint.center.y(), o.height), o.height};
}

namespace {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double parse_num(const std::string& tok, int line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        throw SceneError("scene line " + std::to_string(line) + ": bad number '" + tok + "'");
    return v;
}

}  // namespace

void write_scene(std::ostream& os, const Scene& scene) {
    os << "workspace " << fmt9(scene.workspace_side) << ' ' << scene.rng_seed << '\n';
    for (const auto& o : scene.objects) {
        const auto& f = o.footprint;
        os << "obj " << o.id << ' ' << fmt9(f.center.x()) << ' ' << fmt9(f.center.y()) << ' '
           << fmt9(f.half_long) << ' ' << fmt9(f.half_short) << ' ' << fmt9(f.axis_angle) << ' '
           << fmt9(o.height) << ' ' << to_string(o.affinity) << ' ' << fmt9(o.top_flat_area) << '\n';
    }
}

Scene read_scene(std::istream& is) {
    Scene scene;
    std::string line;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok[0] == "workspace") {
            if (tok.size() != 3) throw SceneError("scene line " + std::to_string(lineno) + ": malformed header");
            scene.workspace_side = parse_num(tok[1], lineno);
            scene.rng_seed = std::stoull(tok[2]);
            have_header = true;
        } else if (tok[0] == "obj") {
            if (!have_header) throw SceneError("scene: object before workspace header");
            if (tok.size() != 10) throw SceneError("scene line " + std::to_string(lineno) + ": expected 10 fields");
            SceneObject o;
            o.id = std::stoi(tok[1]);
            o.footprint.center = Vec2(parse_num(tok[2], lineno), parse_num(tok[3], lineno));
            o.footprint.half_long = parse_num(tok[4], lineno);
            o.footprint.half_short = parse_num(tok[5], lineno);
            o.footprint.axis_angle = parse_num(tok[6], lineno);
            o.height = parse_num(tok[7], lineno);
            o.affinity = affinity_from_string(tok[8]);
            o.top_flat_area = parse_num(tok[9], lineno);
            if (!(o.footprint.half_long >= o.footprint.half_short && o.footprint.half_short > 0.0))
                throw SceneError("scene line " + std::to_string(lineno) + ": need half_long >= half_short > 0");
            if (!(o.height > 0.0)) throw SceneError("scene line " + std::to_string(lineno) + ": height must be > 0");
            if (scene.find(o.id)) throw SceneError("scene line " + std::to_string(lineno) + ": duplicate id");
            scene.objects.push_back(o);
        } else {
            throw SceneError("scene line " + std::to_string(lineno) + ": unknown record '" + tok[0] + "'");
        }
    }
    if (!have_header) throw SceneError("scene: missing workspace header");
    return scene;
}

}  // namespace graspsim
