#include "relsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace relsim {

namespace {

// Recursive-descent evaluator over expr := term (('+'|'-') term)*,
// term := factor (('*'|'/') factor)*, factor := number | '(' expr ')' | '-' factor.
class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    double run() {
        double v = expression();
        skip_spaces();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(what + " at column " + std::to_string(pos_ + 1));
    }

    void skip_spaces() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool consume(char c) {
        skip_spaces();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expression() {
        double v = term();
        for (;;) {
            if (consume('+')) {
                v += term();
            } else if (consume('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            if (consume('*')) {
                v *= factor();
            } else if (consume('/')) {
                v /= factor();
            } else {
                return v;
            }
        }
    }

    double factor() {
        skip_spaces();
        if (pos_ >= text_.size()) fail("expected a number or '('");
        if (consume('-')) return -factor();
        if (consume('(')) {
            double v = expression();
            if (!consume(')')) fail("expected ')'");
            return v;
        }
        return number();
    }

    double number() {
        skip_spaces();
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

template <auto Member>
void set_real(SimParams& p, double v) {
    p.*Member = v;
}

template <auto Member>
double get_real(const SimParams& p) {
    return p.*Member;
}

void require_integral(double v) {
    if (!(std::isfinite(v)) || std::abs(v - std::nearbyint(v)) > 1e-9 * std::max(1.0, std::abs(v))) {
        throw ConfigError("value must be an integer");
    }
}

template <auto Member>
void set_int(SimParams& p, double v) {
    require_integral(v);
    p.*Member = static_cast<int>(std::llround(v));
}

template <auto Member>
double get_int(const SimParams& p) {
    return static_cast<double>(p.*Member);
}

template <auto Member>
void set_opt_real(SimParams& p, double v) {
    p.*Member = v;
}

template <auto Member>
double get_opt_real(const SimParams& p) {
    return (p.*Member).value();
}

template <auto Member>
void set_opt_int(SimParams& p, double v) {
    require_integral(v);
    p.*Member = static_cast<int>(std::llround(v));
}

template <auto Member>
double get_opt_int(const SimParams& p) {
    return static_cast<double>((p.*Member).value());
}

template <auto Member>
bool opt_present(const SimParams& p) {
    return (p.*Member).has_value();
}

bool always_present(const SimParams&) { return true; }

void set_seed(SimParams& p, double v) {
    require_integral(v);
    if (v < 0) throw ConfigError("base_seed must be >= 0");
    p.base_seed = static_cast<std::uint64_t>(std::llround(v));
}

double get_seed(const SimParams& p) {
    return static_cast<double>(p.base_seed);
}

}  // namespace

double evaluate_expression(std::string_view text) {
    double v = ExpressionParser(text).run();
    if (!std::isfinite(v)) {
        throw ConfigError("expression does not evaluate to a finite number");
    }
    return v;
}

const std::vector<ParamField>& param_fields() {
    static const std::vector<ParamField> fields = {
        {"random_failure_rate", false, false, set_real<&SimParams::random_failure_rate>,
         get_real<&SimParams::random_failure_rate>, always_present},
        {"systematic_rate_multiplier", false, false, set_real<&SimParams::systematic_rate_multiplier>,
         get_real<&SimParams::systematic_rate_multiplier>, always_present},
        {"systematic_failure_fraction", false, false, set_real<&SimParams::systematic_failure_fraction>,
         get_real<&SimParams::systematic_failure_fraction>, always_present},
        {"job_size", true, false, set_int<&SimParams::job_size>, get_int<&SimParams::job_size>,
         always_present},
        {"job_length", false, false, set_real<&SimParams::job_length>,
         get_real<&SimParams::job_length>, always_present},
        {"warm_standbys", true, false, set_int<&SimParams::warm_standbys>,
         get_int<&SimParams::warm_standbys>, always_present},
        {"recovery_time", false, false, set_real<&SimParams::recovery_time>,
         get_real<&SimParams::recovery_time>, always_present},
        {"host_selection_time", false, false, set_real<&SimParams::host_selection_time>,
         get_real<&SimParams::host_selection_time>, always_present},
        {"waiting_time", false, false, set_real<&SimParams::waiting_time>,
         get_real<&SimParams::waiting_time>, always_present},
        {"preemption_cost_per_server", false, false, set_real<&SimParams::preemption_cost_per_server>,
         get_real<&SimParams::preemption_cost_per_server>, always_present},
        {"working_pool_size", true, false, set_int<&SimParams::working_pool_size>,
         get_int<&SimParams::working_pool_size>, always_present},
        {"spare_pool_size", true, false, set_int<&SimParams::spare_pool_size>,
         get_int<&SimParams::spare_pool_size>, always_present},
        {"auto_repair_probability", false, false, set_real<&SimParams::auto_repair_probability>,
         get_real<&SimParams::auto_repair_probability>, always_present},
        {"auto_fail_probability", false, false, set_real<&SimParams::auto_fail_probability>,
         get_real<&SimParams::auto_fail_probability>, always_present},
        {"manual_fail_probability", false, false, set_real<&SimParams::manual_fail_probability>,
         get_real<&SimParams::manual_fail_probability>, always_present},
        {"auto_repair_time", false, false, set_real<&SimParams::auto_repair_time>,
         get_real<&SimParams::auto_repair_time>, always_present},
        {"manual_repair_time", false, false, set_real<&SimParams::manual_repair_time>,
         get_real<&SimParams::manual_repair_time>, always_present},
        {"diagnosis_uncertainty", false, false, set_real<&SimParams::diagnosis_uncertainty>,
         get_real<&SimParams::diagnosis_uncertainty>, always_present},
        {"regeneration_period", false, true, set_opt_real<&SimParams::regeneration_period>,
         get_opt_real<&SimParams::regeneration_period>, opt_present<&SimParams::regeneration_period>},
        {"removal_threshold", true, true, set_opt_int<&SimParams::removal_threshold>,
         get_opt_int<&SimParams::removal_threshold>, opt_present<&SimParams::removal_threshold>},
        {"removal_window", false, true, set_opt_real<&SimParams::removal_window>,
         get_opt_real<&SimParams::removal_window>, opt_present<&SimParams::removal_window>},
        {"base_seed", true, false, set_seed, get_seed, always_present},
        {"replications", true, false, set_int<&SimParams::replications>,
         get_int<&SimParams::replications>, always_present},
    };
    return fields;
}

void set_param(SimParams& params, std::string_view key, double value) {
    for (const ParamField& f : param_fields()) {
        if (key == f.name) {
            f.set(params, value);
            return;
        }
    }
    throw ConfigError("unknown parameter '" + std::string(key) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

SimParams parse_config(std::string_view text) {
    SimParams params;
    std::unordered_set<std::string> seen;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        auto context = [&](const std::string& what) {
            return ConfigError("config line " + std::to_string(line_no) + ": " + what);
        };

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw context("expected 'key = expression'");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string_view rhs = trim(line.substr(eq + 1));
        if (key.empty()) throw context("missing key");
        if (rhs.empty()) throw context("missing value for '" + key + "'");
        if (!seen.insert(key).second) {
            throw context("duplicate key '" + key + "'");
        }

        try {
            set_param(params, key, evaluate_expression(rhs));
        } catch (const ConfigError& e) {
            throw context(std::string(e.what()) + " (key '" + key + "')");
        }
    }

    validate(params);
    return params;
}

SimParams parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw ConfigError("error reading config file '" + path + "'");
    }
    return parse_config(buf.str());
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string serialize_config(const SimParams& params) {
    std::string out;
    for (const ParamField& f : param_fields()) {
        if (!f.present(params)) continue;
        out += f.name;
        out += " = ";
        out += format_number(f.get(params));
        out += '\n';
    }
    return out;
}

}  // namespace relsim
