#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pnp/grid.hpp"
#include "pnp/multidomain_channel.hpp"
#include "pnp/problem.hpp"

namespace pnp {

enum class Mode { single_domain, channel };

struct SingleDomainConfig {
    SinglePnpProblem problem;
    PointFamily points = PointFamily::chebyshev;
    Eigen::Index n = 100;
};

struct ChannelConfig {
    ChannelOptions geometry;
    ChannelSolveOptions solve;
};

/// A validated run description. Only the field set matching `mode` is meaningful.
struct CaseConfig {
    std::string preset;
    Mode mode = Mode::single_domain;
    SingleDomainConfig single;
    ChannelConfig channel;

    void validate() const;
};

[[nodiscard]] std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
[[nodiscard]] CaseConfig preset_config(std::string_view name);

/// JSON object with a required "preset" key; every other key overrides one
/// field of that preset. Keys that do not belong to the preset's mode, and
/// unknown keys, are rejected. Errors carry the line of a parse failure or
/// the name of the offending field.
[[nodiscard]] CaseConfig parse_config(std::string_view text);
[[nodiscard]] CaseConfig load_config(const std::string& path);

/// Full (all fields explicit) JSON form; parse_config(dump_config(c)) == c.
[[nodiscard]] std::string dump_config(const CaseConfig& config);

[[nodiscard]] PointFamily parse_point_family(std::string_view name);
[[nodiscard]] std::string_view to_string(PointFamily family) noexcept;

bool operator==(const CaseConfig& a, const CaseConfig& b);

}  // namespace pnp
