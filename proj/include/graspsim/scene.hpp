#pragma once

#include "graspsim/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graspsim {

class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Affinity { envelope_only, suck_only, both };

const char* to_string(Affinity a);
Affinity affinity_from_string(const std::string& s);

inline bool can_envelope(Affinity a) { return a != Affinity::suck_only; }
inline bool can_suck(Affinity a) { return a != Affinity::envelope_only; }

struct SceneObject {
    int id = 0;
    RotatedRect footprint;
    double height = 0.0;         // top of the object above the table, m
    Affinity affinity = Affinity::both;
    double top_flat_area = 0.0;  // m^2
};

/// Object template; sizes are drawn uniformly from the ranges.
struct ObjectTemplate {
    std::string name;
    double short_min, short_max;
    double long_min, long_max;
    double height_min, height_max;
    Affinity affinity;
    double flat_fraction;  // share of the footprint that is suckable
};

/// Thirteen categories split into envelope-type and suck-type templates.
const std::vector<ObjectTemplate>& default_catalog();

enum class ClutterMode { light, heavy };

struct SceneParams {
    double workspace_side = 0.25;
    ClutterMode clutter = ClutterMode::light;
    double max_overlap = 0.5;  // heavy mode: overlap share of the smaller footprint
    double min_gap = 0.01;     // light mode: clearance between footprints, m
    int min_objects = 2;
    int max_objects = 10;
};

struct Scene {
    double workspace_side = 0.25;
    std::uint64_t rng_seed = 0;
    std::vector<SceneObject> objects;

    const SceneObject* find(int id) const;
    const SceneObject& at(int id) const;  // throws SceneError for unknown ids
    Scene without(int id) const;
};

/// round(pe * n) envelope-type objects, the rest suck-type, placed uniformly
/// with rejection sampling. Deterministic for a given seed.
Scene spawn_scene(double pe, int n_objects, const std::vector<ObjectTemplate>& catalog,
                  std::uint64_t seed, const SceneParams& params = {});

/// spawn_scene with up to `attempts` derived seeds; rethrows the last failure.
Scene spawn_scene_retrying(double pe, int n_objects, const std::vector<ObjectTemplate>& catalog,
                           std::uint64_t seed, const SceneParams& params = {}, int attempts = 16);

struct Heightmap {
    int resolution = 0;
    double workspace_side = 0.25;
    std::vector<double> cells;  // row-major, row = y index

    double at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * resolution + ix]; }
    double& at(int ix, int iy) { return cells[static_cast<std::size_t>(iy) * resolution + ix]; }
    /// Workspace coordinates of a cell center.
    Vec2 cell_center(int ix, int iy) const;
};

struct Mask {
    int resolution = 0;
    std::vector<std::uint8_t> cells;
    bool at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * resolution + ix] != 0; }
};

/// Orthographic top-down depth: each cell holds the tallest covering object.
/// A nonzero `noise_amplitude` adds uniform noise in [-a, a] (clamped at 0).
Heightmap render_depth(const Scene& scene, int resolution, double noise_amplitude = 0.0,
                       std::uint64_t noise_seed = 0);

/// One exact footprint mask per object, in scene order.
std::vector<Mask> render_masks(const Scene& scene, int resolution);

struct ObjectDescriptor {
    RotatedRect box;
    Vec3 center;  // box center lifted to z = height
    double height = 0.0;
};

ObjectDescriptor object_descriptor(const Scene& scene, int id);

/// Text format: `workspace <side> <seed>` then one `obj ...` line per object,
/// 9 significant digits.
void write_scene(std::ostream& os, const Scene& scene);
Scene read_scene(std::istream& is);

}  // namespace graspsim
