#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "graspsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace graspsim;

namespace {

int count_envelope(const Scene& s) {
    return static_cast<int>(std::count_if(s.objects.begin(), s.objects.end(),
                                          [](const SceneObject& o) { return o.affinity == Affinity::envelope_only; }));
}

SceneObject box(int id, Vec2 c, double a, double b, double angle, double h) {
    SceneObject o;
    o.id = id;
    o.footprint = make_rect(c, a, b, angle);
    o.height = h;
    o.affinity = Affinity::both;
    o.top_flat_area = 0.5 * o.footprint.area();
    return o;
}

}  // namespace

TEST_CASE("catalog has thirteen categories of both types") {
    const auto& cat = default_catalog();
    CHECK(cat.size() == 13);
    int env = 0;
    for (const auto& t : cat) {
        if (t.affinity == Affinity::envelope_only) ++env;
        CHECK(t.short_min <= t.short_max);
        CHECK(t.long_min <= t.long_max);
        CHECK(t.height_min > 0.0);
    }
    CHECK(env == 6);
}

TEST_CASE("spawn_scene mixture counts") {
    CHECK(count_envelope(spawn_scene(1.0, 5, default_catalog(), 1)) == 5);
    const Scene s = spawn_scene_retrying(0.3, 10, default_catalog(), 2);
    CHECK(s.objects.size() == 10);
    CHECK(count_envelope(s) == 3);
    for (int n = 1; n <= 10; ++n)
        for (int k = 0; k <= n; ++k) {
            const double pe = static_cast<double>(k) / n;
            CHECK(count_envelope(spawn_scene_retrying(pe, n, default_catalog(), 100 + n * 11 + k)) == k);
        }
}

TEST_CASE("spawn_scene is deterministic and respects the rules") {
    const Scene a = spawn_scene_retrying(0.5, 8, default_catalog(), 42);
    const Scene b = spawn_scene_retrying(0.5, 8, default_catalog(), 42);
    std::ostringstream sa, sb;
    write_scene(sa, a);
    write_scene(sb, b);
    CHECK(sa.str() == sb.str());

    const SceneParams params;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Scene s = spawn_scene_retrying(0.4, 10, default_catalog(), seed, params);
        for (const auto& o : s.objects) {
            CHECK(o.height > 0.0);
            CHECK(o.top_flat_area <= o.footprint.area());
            for (const auto& c : o.footprint.corners()) {
                CHECK(c.x() >= 0.0);
                CHECK(c.y() <= params.workspace_side);
            }
            for (const auto& p : s.objects)
                if (p.id != o.id) CHECK(rect_distance(o.footprint, p.footprint) >= params.min_gap - 1e-9);
        }
    }
}

TEST_CASE("heavy clutter allows bounded overlap and stacks heights") {
    SceneParams params;
    params.clutter = ClutterMode::heavy;
    bool stacked = false;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Scene s = spawn_scene_retrying(0.5, 10, default_catalog(), seed, params);
        for (std::size_t i = 0; i < s.objects.size(); ++i)
            for (std::size_t j = i + 1; j < s.objects.size(); ++j) {
                const auto& a = s.objects[i].footprint;
                const auto& b = s.objects[j].footprint;
                const double inter = intersection_area(a, b);
                CHECK(inter <= params.max_overlap * std::min(a.area(), b.area()) + 1e-12);
                if (inter > 1e-12) {
                    stacked = true;
                    CHECK(s.objects[j].height > s.objects[i].height - 1e-12);
                }
            }
    }
    CHECK(stacked);
}

TEST_CASE("spawn_scene errors") {
    CHECK_THROWS_AS(spawn_scene(0.5, 0, default_catalog(), 1), SceneError);
    CHECK_THROWS_AS(spawn_scene(1.5, 3, default_catalog(), 1), SceneError);
    SceneParams tiny;
    tiny.workspace_side = 0.05;
    CHECK_THROWS_WITH_AS(spawn_scene(0.5, 10, default_catalog(), 1, tiny), doctest::Contains("1000 rejections"),
                         SceneError);
}

TEST_CASE("rendering") {
    Scene empty;
    const Heightmap h0 = render_depth(empty, 32);
    CHECK(std::all_of(h0.cells.begin(), h0.cells.end(), [](double v) { return v == 0.0; }));

    Scene one;
    one.objects.push_back(box(0, Vec2(0.1, 0.1), 0.05, 0.05, 0, 0.05));
    const Heightmap h = render_depth(one, 64);
    const auto masks = render_masks(one, 64);
    REQUIRE(masks.size() == 1);
    int covered = 0;
    for (int iy = 0; iy < 64; ++iy)
        for (int ix = 0; ix < 64; ++ix) {
            const bool inside = masks[0].at(ix, iy);
            CHECK(h.at(ix, iy) == (inside ? 0.05 : 0.0));
            const Vec2 c = h.cell_center(ix, iy);
            CHECK(inside == (one.objects[0].footprint.distance_to(c) == 0.0));
            covered += inside;
        }
    CHECK(covered > 0);
}

TEST_CASE("stacked objects render the taller one") {
    Scene s;
    s.objects.push_back(box(0, Vec2(0.1, 0.1), 0.06, 0.04, 10, 0.02));
    s.objects.push_back(box(1, Vec2(0.12, 0.1), 0.05, 0.05, 70, 0.045));
    s.objects.push_back(box(2, Vec2(0.18, 0.16), 0.03, 0.05, 35, 0.03));
    const Heightmap h = render_depth(s, 96);
    for (int iy = 0; iy < 96; ++iy)
        for (int ix = 0; ix < 96; ++ix) {
            double expect = 0.0;
            for (const auto& o : s.objects)
                if (o.footprint.distance_to(h.cell_center(ix, iy)) == 0.0) expect = std::max(expect, o.height);
            CHECK(h.at(ix, iy) == expect);
        }
}

TEST_CASE("raising an object never lowers a cell") {
    const Scene s = spawn_scene_retrying(0.5, 6, default_catalog(), 9);
    const Heightmap before = render_depth(s, 64);
    Scene t = s;
    t.objects[2].height += 0.01;
    const Heightmap after = render_depth(t, 64);
    for (std::size_t k = 0; k < before.cells.size(); ++k) CHECK(after.cells[k] >= before.cells[k]);
}

TEST_CASE("depth noise is bounded and reproducible") {
    const Scene s = spawn_scene_retrying(0.5, 6, default_catalog(), 4);
    const Heightmap clean = render_depth(s, 64);
    const Heightmap a = render_depth(s, 64, 0.002, 77);
    const Heightmap b = render_depth(s, 64, 0.002, 77);
    CHECK(a.cells == b.cells);
    for (std::size_t k = 0; k < a.cells.size(); ++k) {
        CHECK(a.cells[k] >= 0.0);
        CHECK(std::abs(a.cells[k] - clean.cells[k]) <= 0.002 + 1e-15);
    }
}

TEST_CASE("mask round trip through min_area_rect at 224 px") {
    const int res = 224;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Scene s = spawn_scene_retrying(0.5, 6, default_catalog(), seed);
        const auto masks = render_masks(s, res);
        const Heightmap h = render_depth(s, res);
        const double px = s.workspace_side / res;
        for (std::size_t k = 0; k < s.objects.size(); ++k) {
            std::vector<Vec2> pts;
            for (int iy = 0; iy < res; ++iy)
                for (int ix = 0; ix < res; ++ix)
                    if (masks[k].at(ix, iy)) pts.push_back(h.cell_center(ix, iy));
            const RotatedRect r = min_area_rect(pts);
            const RotatedRect& truth = s.objects[k].footprint;
            CHECK((r.center - truth.center).norm() <= px);
            if (truth.half_long > 1.15 * truth.half_short) {
                double diff = std::fmod(std::abs(r.axis_angle - truth.axis_angle), 180.0);
                diff = std::min(diff, 180.0 - diff);
                CHECK(diff <= 2.0);
            }
        }
    }
}

TEST_CASE("object descriptor") {
    Scene s;
    s.objects.push_back(box(3, Vec2(0.1, 0.1), 0.04, 0.02, 0, 0.03));
    s.objects.push_back(box(4, Vec2(0.2, 0.05), 0.04, 0.02, 200, 0.02));
    const ObjectDescriptor d = object_descriptor(s, 3);
    CHECK(d.center.isApprox(Vec3(0.1, 0.1, 0.03)));
    CHECK(d.height == 0.03);
    const ObjectDescriptor e = object_descriptor(s, 4);
    CHECK(e.box.axis_angle >= 0.0);
    CHECK(e.box.axis_angle < 180.0);
    CHECK_THROWS_AS(object_descriptor(s, 99), SceneError);
}

TEST_CASE("scene serialization round trip is bit exact") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene s = spawn_scene_retrying(0.5, 10, default_catalog(), seed);
        std::ostringstream os;
        write_scene(os, s);
        std::istringstream is(os.str());
        const Scene t = read_scene(is);
        REQUIRE(t.objects.size() == s.objects.size());
        CHECK(t.rng_seed == s.rng_seed);
        for (std::size_t k = 0; k < s.objects.size(); ++k) {
            const auto& a = s.objects[k];
            const auto& b = t.objects[k];
            CHECK(a.id == b.id);
            CHECK(a.footprint.center == b.footprint.center);
            CHECK(a.footprint.half_long == b.footprint.half_long);
            CHECK(a.footprint.half_short == b.footprint.half_short);
            CHECK(a.footprint.axis_angle == b.footprint.axis_angle);
            CHECK(a.height == b.height);
            CHECK(a.affinity == b.affinity);
            CHECK(a.top_flat_area == b.top_flat_area);
        }
        std::ostringstream again;
        write_scene(again, t);
        CHECK(again.str() == os.str());
    }
}

TEST_CASE("read_scene rejects malformed input") {
    std::istringstream bad("workspace 0.25 1\nobj 0 0.1 0.1 0.02\n");
    CHECK_THROWS_AS(read_scene(bad), SceneError);
    std::istringstream no_header("obj 0 0.1 0.1 0.02 0.01 0 0.03 both 0.0001\n");
    CHECK_THROWS_AS(read_scene(no_header), SceneError);
}

TEST_CASE("without and at") {
    const Scene s = spawn_scene_retrying(0.5, 4, default_catalog(), 3);
    const Scene t = s.without(1);
    CHECK(t.objects.size() == 3);
    CHECK(t.find(1) == nullptr);
    CHECK(&s.at(2) == s.find(2));
    CHECK_THROWS_AS(s.at(17), SceneError);
}
