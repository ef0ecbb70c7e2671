#pragma once

#include "graspsim/eval.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace graspsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command needs. Sections in the file: [gripper], [scene],
/// [env], [planner], [rewards], [learner], [sweep], [run].
struct ExperimentConfig {
    EnvConfig env;
    SceneParams scene;
    std::string catalog_path;  // empty: built-in catalog
    LearnerConfig learner;
    SweepConfig sweep;
    std::uint64_t seed = 1;
    std::string policy = "eses_drl";
    std::string checkpoint;  // sweep: load instead of training when set

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// Line-oriented `key = value` with `[section]` headers and `#` comments.
ExperimentConfig parse_config(std::istream& is, const std::string& source = "<stream>");
ExperimentConfig load_config(const std::string& path);
void save_config(std::ostream& os, const ExperimentConfig& config);

/// Sets one `section.key` entry; used for command-line overrides.
void set_config_value(ExperimentConfig& config, const std::string& dotted_key, const std::string& value);

/// Whitespace-separated rows: name affinity short_min short_max long_min
/// long_max height_min height_max flat_fraction.
std::vector<ObjectTemplate> load_catalog(const std::string& path);
std::vector<ObjectTemplate> catalog_of(const ExperimentConfig& config);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace graspsim
