#pragma once

#include <cstdint>
#include <string>

#include "akbeam/active_learning.hpp"
#include "akbeam/beam.hpp"
#include "akbeam/reliability.hpp"
#include "akbeam/sampling.hpp"

namespace akbeam {

/// Resolved tool configuration: one JSON document with sections beam, space,
/// limit_state, surrogate, reliability and al. Every field has a default;
/// unknown fields are rejected with a diagnostic naming them.
struct AppConfig {
    BeamConfig beam;
    DesignSpace space;
    LimitStateConfig limit_state;
    SurrogateConfig surrogate;
    int n_reference = 10000;
    SubsetConfig subset;
    ALConfig al;
    int grid_resolution = 200;
    std::uint64_t seed = 42;

    static AppConfig defaults();
    void validate() const;
};

AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::string& path);

/// Full resolved configuration as JSON (round-trips through parse_config).
std::string config_to_json(const AppConfig& cfg);

}  // namespace akbeam
