#pragma once

#include <stdexcept>
#include <string>

namespace chainchaos {

// base for everything we throw on purpose, so callers can catch one type
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& msg) : error("parse: " + msg) {}
};

struct config_error : error {
    explicit config_error(const std::string& msg) : error("config: " + msg) {}
};

// finite system construction
struct empty_successor_error : error {
    explicit empty_successor_error(const std::string& msg) : error("empty successor set: " + msg) {}
};

struct metric_violation_error : error {
    explicit metric_violation_error(const std::string& msg) : error("metric violation: " + msg) {}
};

struct degenerate_grid_error : error {
    explicit degenerate_grid_error(const std::string& msg) : error("degenerate grid: " + msg) {}
};

struct empty_shift_error : error {
    explicit empty_shift_error(const std::string& msg) : error("no admissible words: " + msg) {}
};

struct state_space_cap_error : error {
    explicit state_space_cap_error(const std::string& msg) : error("state space over cap: " + msg) {}
};

// graph-level preconditions
struct not_strongly_connected_error : error {
    explicit not_strongly_connected_error(const std::string& msg)
        : error("not strongly connected: " + msg) {}
};

struct not_a_component_error : error {
    explicit not_a_component_error(const std::string& msg) : error("not a component: " + msg) {}
};

// catalog / parameters
struct unknown_example_error : error {
    explicit unknown_example_error(const std::string& msg) : error("unknown example: " + msg) {}
};

struct unknown_map_error : error {
    explicit unknown_map_error(const std::string& msg) : error("unknown map: " + msg) {}
};

struct param_mismatch_error : error {
    explicit param_mismatch_error(const std::string& msg) : error("parameter mismatch: " + msg) {}
};

struct bad_threshold_error : error {
    explicit bad_threshold_error(const std::string& msg) : error("bad threshold: " + msg) {}
};

struct bad_delta_error : error {
    explicit bad_delta_error(const std::string& msg) : error("bad delta: " + msg) {}
};

// symbolic orbit bookkeeping
struct symbolic_growth_error : error {
    explicit symbolic_growth_error(const std::string& msg)
        : error("symbolic representation over cap: " + msg) {}
};

} // namespace chainchaos
