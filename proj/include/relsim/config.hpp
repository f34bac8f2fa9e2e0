#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "relsim/params.hpp"

namespace relsim {

// Evaluates a restricted arithmetic expression: numbers, + - * /, parentheses
// and unary minus. This is what appears on the right-hand side of config lines
// and in sweep value lists, e.g. "0.01/(24*60)" or "2*1440". Throws
// ConfigError (with a character position) on malformed input.
double evaluate_expression(std::string_view text);

// One settable simulation parameter. All values arrive as doubles; integer
// fields reject non-integral values when set.
struct ParamField {
    const char* name;
    bool integral;
    bool optional;
    void (*set)(SimParams&, double);
    double (*get)(const SimParams&);
    bool (*present)(const SimParams&);
};

const std::vector<ParamField>& param_fields();

// Sets `key` on `params`, throwing ConfigError for unknown keys or values the
// field cannot hold. Range checking happens later in validate().
void set_param(SimParams& params, std::string_view key, double value);

// Parses `key = expression` lines (UTF-8, '#' starts a comment, blank lines
// ignored). Unknown keys, duplicate keys, malformed expressions and
// out-of-range values all throw ConfigError naming the line. An empty document
// yields the defaults.
SimParams parse_config(std::string_view text);

// Reads and parses a config file; file-system failures become ConfigError.
SimParams parse_config_file(const std::string& path);

// Canonical `key = value` rendering; parse_config(serialize_config(p)) == p.
std::string serialize_config(const SimParams& params);

// Shortest round-trip decimal rendering of a double (also used for CSV cells).
std::string format_number(double value);

}  // namespace relsim
