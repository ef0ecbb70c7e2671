#include "graspsim/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace graspsim {

namespace {

struct Field {
    std::string section;
    std::string key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
}

template <class Int>
Int to_int(const std::string& s) {
    Int v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("not a boolean: '" + s + "'");
}

Field real(std::string sec, std::string key, double& ref) {
    return {std::move(sec), std::move(key), [&ref](const std::string& v) { ref = to_double(v); },
            [&ref] { return fmt_double(ref); }};
}

Field integer(std::string sec, std::string key, int& ref) {
    return {std::move(sec), std::move(key), [&ref](const std::string& v) { ref = to_int<int>(v); },
            [&ref] { return std::to_string(ref); }};
}

Field flag(std::string sec, std::string key, bool& ref) {
    return {std::move(sec), std::move(key), [&ref](const std::string& v) { ref = to_bool(v); },
            [&ref] { return std::string(ref ? "true" : "false"); }};
}

Field text(std::string sec, std::string key, std::string& ref) {
    return {std::move(sec), std::move(key), [&ref](const std::string& v) { ref = v; }, [&ref] { return ref; }};
}

std::vector<Field> fields(ExperimentConfig& c) {
    GripperParams& g = c.env.gripper;
    std::vector<Field> f{
        real("gripper", "l_p", g.l_p),
        real("gripper", "h_p", g.h_p),
        real("gripper", "theta_t", g.theta_t),
        real("gripper", "l_f", g.l_f),
        real("gripper", "h", g.h),
        real("gripper", "l_s1", g.l_s1),
        real("gripper", "l_s2", g.l_s2),
        real("gripper", "d_max", g.d_max),
        real("gripper", "sucker_diameter", g.sucker_diameter),
        real("gripper", "suck_bend_deg", g.suck_bend_deg),

        real("scene", "workspace_side", c.scene.workspace_side),
        {"scene", "clutter",
         [&c](const std::string& v) {
             if (v == "light") c.scene.clutter = ClutterMode::light;
             else if (v == "heavy") c.scene.clutter = ClutterMode::heavy;
             else throw ConfigError("clutter must be light or heavy");
         },
         [&c] { return std::string(c.scene.clutter == ClutterMode::light ? "light" : "heavy"); }},
        real("scene", "max_overlap", c.scene.max_overlap),
        real("scene", "min_gap", c.scene.min_gap),
        integer("scene", "min_objects", c.scene.min_objects),
        integer("scene", "max_objects", c.scene.max_objects),
        text("scene", "catalog", c.catalog_path),

        real("env", "p_fail", c.env.p_fail),
        real("env", "clearance", c.env.clearance),
        real("env", "finger_width", c.env.finger_width),
        integer("env", "max_steps_factor", c.env.max_steps_factor),
        integer("env", "resolution", c.env.resolution),
        real("env", "depth_noise", c.env.depth_noise),
        flag("env", "ideal_outcomes", c.env.ideal_outcomes),

        real("planner", "xi", c.env.planner.xi),
        real("planner", "min_envelope_depth", c.env.planner.min_envelope_depth),

        real("rewards", "single_success", c.env.rewards.single_success),
        real("rewards", "es_full", c.env.rewards.es_full),
        real("rewards", "es_semi", c.env.rewards.es_semi),

        real("learner", "gamma", c.learner.gamma),
        real("learner", "learning_rate", c.learner.learning_rate),
        real("learner", "eps_start", c.learner.eps_start),
        real("learner", "eps_end", c.learner.eps_end),
        integer("learner", "eps_anneal_steps", c.learner.eps_anneal_steps),
        integer("learner", "train_steps", c.learner.train_steps),
        integer("learner", "sync_period", c.learner.sync_period),
        flag("learner", "replay", c.learner.replay),
        integer("learner", "replay_capacity", c.learner.replay_capacity),
        integer("learner", "replay_batch", c.learner.replay_batch),
        integer("learner", "hidden", c.learner.hidden),
        real("learner", "train_pe", c.learner.train_pe),
        flag("learner", "continual_eval", c.learner.continual_eval),
        real("learner", "divergence_limit", c.learner.divergence_limit),

        {"sweep", "pe", [&c](const std::string& v) { c.sweep.pe_values = parse_double_list(v); },
         [&c] {
             std::string s;
             for (double pe : c.sweep.pe_values) s += (s.empty() ? "" : ",") + fmt_double(pe);
             return s;
         }},
        integer("sweep", "actions_per_group", c.sweep.actions_per_group),
        integer("sweep", "repetitions", c.sweep.repetitions),
        integer("sweep", "objects_per_scene", c.sweep.objects_per_scene),
        integer("sweep", "threads", c.sweep.threads),

        {"run", "seed", [&c](const std::string& v) { c.seed = to_int<std::uint64_t>(v); },
         [&c] { return std::to_string(c.seed); }},
        text("run", "policy", c.policy),
        text("run", "checkpoint", c.checkpoint),
    };
    return f;
}

void assign(ExperimentConfig& c, const std::string& section, const std::string& key, const std::string& value) {
    for (auto& f : fields(c)) {
        if (f.section == section && f.key == key) {
            f.set(value);
            return;
        }
    }
    throw ConfigError("unknown key '" + (section.empty() ? key : section + "." + key) + "'");
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

void ExperimentConfig::validate() const {
    try {
        env.gripper.validate();
        learner.validate();
        env.rewards.validate(learner.gamma);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    auto fail = [](const std::string& m) { throw ConfigError("invalid config: " + m); };
    if (!(env.p_fail >= 0.0 && env.p_fail <= 1.0)) fail("env.p_fail must lie in [0, 1]");
    if (!(env.clearance >= 0.0 && env.clearance <= 1.0)) fail("env.clearance must lie in [0, 1]");
    if (!(env.finger_width > 0.0)) fail("env.finger_width must be positive");
    if (env.max_steps_factor < 1) fail("env.max_steps_factor must be >= 1");
    if (env.resolution < kFeatureSide || env.resolution % kFeatureSide != 0)
        fail("env.resolution must be a positive multiple of " + std::to_string(kFeatureSide));
    if (!(env.depth_noise >= 0.0)) fail("env.depth_noise must be >= 0");
    if (!(env.planner.xi > 0.0 && env.planner.xi < 360.0)) fail("planner.xi must lie in (0, 360)");
    if (!(env.planner.min_envelope_depth >= 0.0)) fail("planner.min_envelope_depth must be >= 0");
    if (!(scene.workspace_side > 0.0)) fail("scene.workspace_side must be positive");
    if (!(scene.max_overlap >= 0.0 && scene.max_overlap < 1.0)) fail("scene.max_overlap must lie in [0, 1)");
    if (!(scene.min_gap >= 0.0)) fail("scene.min_gap must be >= 0");
    if (scene.min_objects < 1 || scene.max_objects < scene.min_objects)
        fail("scene object counts need 1 <= min_objects <= max_objects");
    if (sweep.pe_values.empty()) fail("sweep.pe must not be empty");
    for (double pe : sweep.pe_values)
        if (!(pe >= 0.0 && pe <= 1.0)) fail("sweep.pe values must lie in [0, 1]");
    if (sweep.actions_per_group < 1 || sweep.repetitions < 1 || sweep.objects_per_scene < 1)
        fail("sweep counts must be positive");
    if (sweep.objects_per_scene > scene.max_objects) fail("sweep.objects_per_scene exceeds scene.max_objects");
    if (sweep.threads < 0) fail("sweep.threads must be >= 0");
    try {
        policy_from_string(policy);
    } catch (const std::exception& e) {
        fail(e.what());
    }
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
    ExperimentConfig c;
    std::string line, section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(where + "empty key");
        try {
            assign(c, section, key, trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    return parse_config(in, path);
}

void save_config(std::ostream& os, const ExperimentConfig& config) {
    ExperimentConfig copy = config;
    std::string section;
    for (const auto& f : fields(copy)) {
        if (f.section != section) {
            if (!section.empty()) os << '\n';
            section = f.section;
            os << '[' << section << "]\n";
        }
        os << f.key << " = " << f.get() << '\n';
    }
}

void set_config_value(ExperimentConfig& config, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos) throw ConfigError("unknown key '" + dotted_key + "'");
    assign(config, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value);
}

std::vector<ObjectTemplate> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("catalog file not found: " + path);
    std::vector<ObjectTemplate> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        std::istringstream ss(line);
        ObjectTemplate t{};
        std::string affinity;
        if (!(ss >> t.name >> affinity >> t.short_min >> t.short_max >> t.long_min >> t.long_max >> t.height_min >>
              t.height_max >> t.flat_fraction))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed catalog row");
        try {
            t.affinity = affinity_from_string(affinity);
        } catch (const std::exception& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(t);
    }
    if (out.empty()) throw ConfigError("catalog is empty: " + path);
    return out;
}

std::vector<ObjectTemplate> catalog_of(const ExperimentConfig& config) {
    return config.catalog_path.empty() ? default_catalog() : load_catalog(config.catalog_path);
}

}  // namespace graspsim
