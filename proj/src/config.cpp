#include "cavcnot/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cavcnot {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, int line, const std::string& value) {
    if (value == "inf") return kInfinity;
    try {
        std::size_t consumed = 0;
        const double x = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(line) + ": key '" + key +
                           "': not a number: '" + value + "'");
    }
}

int parse_int(const std::string& key, int line, const std::string& value) {
    const double x = parse_double(key, line, value);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) {
        throw config_error("line " + std::to_string(line) + ": key '" + key +
                           "': expected an integer, got '" + value + "'");
    }
    return i;
}

bool parse_bool(const std::string& key, int line, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw config_error("line " + std::to_string(line) + ": key '" + key +
                       "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, int line,
                               const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::istringstream stream(value);
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, line, item));
    }
    return out;
}

using Setter = std::function<void(RunConfig&, int line, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    auto num = [](const char* key, double RunConfig::* field) {
        return [key, field](RunConfig& c, int line, const std::string& v) {
            c.*field = parse_double(key, line, v);
        };
    };
    static const std::map<std::string, Setter> table = {
        {"omega_max_tp", num("omega_max_tp", &RunConfig::omega_max_tp)},
        {"g_tp", num("g_tp", &RunConfig::g_tp)},
        {"delay_tp", num("delay_tp", &RunConfig::delay_tp)},
        {"kappa_tp", num("kappa_tp", &RunConfig::kappa_tp)},
        {"tau_e_tp", num("tau_e_tp", &RunConfig::tau_e_tp)},
        {"tau_u_tp", num("tau_u_tp", &RunConfig::tau_u_tp)},
        {"h_tp", num("h_tp", &RunConfig::h_tp)},
        {"norm_tol", num("norm_tol", &RunConfig::norm_tol)},
        {"trace_tol", num("trace_tol", &RunConfig::trace_tol)},
        {"tp_ns", num("tp_ns", &RunConfig::tp_ns)},
        {"branch_e0", [](RunConfig& c, int l, const std::string& v) { c.branch_e[0] = parse_double("branch_e0", l, v); }},
        {"branch_ea", [](RunConfig& c, int l, const std::string& v) { c.branch_e[1] = parse_double("branch_ea", l, v); }},
        {"branch_e1", [](RunConfig& c, int l, const std::string& v) { c.branch_e[2] = parse_double("branch_e1", l, v); }},
        {"branch_u0", [](RunConfig& c, int l, const std::string& v) { c.branch_u[0] = parse_double("branch_u0", l, v); }},
        {"branch_ua", [](RunConfig& c, int l, const std::string& v) { c.branch_u[1] = parse_double("branch_ua", l, v); }},
        {"branch_u1", [](RunConfig& c, int l, const std::string& v) { c.branch_u[2] = parse_double("branch_u1", l, v); }},
        {"n_max", [](RunConfig& c, int l, const std::string& v) { c.n_max = parse_int("n_max", l, v); }},
        {"record_stride", [](RunConfig& c, int l, const std::string& v) { c.record_stride = parse_int("record_stride", l, v); }},
        {"phi_1", [](RunConfig& c, int l, const std::string& v) { c.phases[0] = parse_double("phi_1", l, v); }},
        {"phi_2", [](RunConfig& c, int l, const std::string& v) { c.phases[1] = parse_double("phi_2", l, v); }},
        {"phi_3", [](RunConfig& c, int l, const std::string& v) { c.phases[2] = parse_double("phi_3", l, v); }},
        {"phi_4", [](RunConfig& c, int l, const std::string& v) { c.phases[3] = parse_double("phi_4", l, v); }},
        {"phi_5", [](RunConfig& c, int l, const std::string& v) { c.phases[4] = parse_double("phi_5", l, v); }},
        {"phi_6", [](RunConfig& c, int l, const std::string& v) { c.phases[5] = parse_double("phi_6", l, v); }},
        {"input", [](RunConfig& c, int, const std::string& v) { c.input = v; }},
        {"out_dir", [](RunConfig& c, int, const std::string& v) { c.out_dir = v; }},
        {"merged", [](RunConfig& c, int l, const std::string& v) { c.merged = parse_bool("merged", l, v); }},
        {"sweep_param", [](RunConfig& c, int, const std::string& v) { c.sweep_param = v; }},
        {"sweep_values", [](RunConfig& c, int l, const std::string& v) { c.sweep_values = parse_list("sweep_values", l, v); }},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw config_error("key '" + key + "': " + why);
    };
    if (omega_max_tp <= 0.0) fail("omega_max_tp", "must be > 0");
    if (g_tp < 0.0) fail("g_tp", "must be >= 0");
    if (delay_tp <= 0.0) fail("delay_tp", "must be > 0");
    if (kappa_tp < 0.0) fail("kappa_tp", "must be >= 0");
    if (tau_e_tp <= 0.0) fail("tau_e_tp", "must be > 0 (use inf to disable)");
    if (tau_u_tp <= 0.0) fail("tau_u_tp", "must be > 0 (use inf to disable)");
    if (n_max < 2) fail("n_max", "must be >= 2");
    if (h_tp <= 0.0) fail("h_tp", "must be > 0");
    if (norm_tol <= 0.0) fail("norm_tol", "must be > 0");
    if (trace_tol <= 0.0) fail("trace_tol", "must be > 0");
    if (record_stride < 1) fail("record_stride", "must be >= 1");
    if (tp_ns < 0.0) fail("tp_ns", "must be >= 0");
    for (double b : branch_e) {
        if (b < 0.0) fail("branch_e*", "must be >= 0");
    }
    for (double b : branch_u) {
        if (b < 0.0) fail("branch_u*", "must be >= 0");
    }
    static const char* inputs[] = {"00", "01", "10", "11", "bell", "all"};
    if (std::find(std::begin(inputs), std::end(inputs), input) == std::end(inputs)) {
        fail("input", "must be one of 00|01|10|11|bell|all");
    }
    if (!sweep_param.empty() && !is_numeric_parameter(sweep_param)) {
        fail("sweep_param", "'" + sweep_param + "' is not a numeric parameter");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string entry = trim(raw);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line) +
                               ": expected key = value, got '" + entry + "'");
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw config_error("line " + std::to_string(line) + ": unknown key '" +
                               key + "'");
        }
        try {
            it->second(config, line, value);
        } catch (const config_error&) {
            throw;
        } catch (const std::exception& e) {
            throw config_error("line " + std::to_string(line) + ": key '" + key +
                               "': " + e.what());
        }
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

bool is_numeric_parameter(const std::string& name) {
    static const char* numeric[] = {
        "omega_max_tp", "g_tp", "delay_tp", "kappa_tp", "tau_e_tp", "tau_u_tp",
        "h_tp", "norm_tol", "trace_tol", "n_max", "record_stride",
        "phi_1", "phi_2", "phi_3", "phi_4", "phi_5", "phi_6",
    };
    return std::find(std::begin(numeric), std::end(numeric), name) !=
           std::end(numeric);
}

void set_numeric_parameter(RunConfig& config, const std::string& name, double value) {
    if (!is_numeric_parameter(name)) {
        throw config_error("'" + name + "' is not a numeric parameter");
    }
    const auto it = setters().find(name);
    it->second(config, 0, [&] {
        std::ostringstream s;
        s.precision(17);
        s << value;
        return s.str();
    }());
    config.validate();
}

HilbertSpace space_from(const RunConfig& config) { return build_space(config.n_max); }

ProtocolSchedule schedule_from(const RunConfig& config) {
    ProtocolSchedule s =
        build_cnot_protocol(config.omega_max_tp, 1.0, config.delay_tp, config.phases);
    if (config.merged) s = merge_adjacent_pulses(s);
    return s;
}

CavityParams cavity_from(const RunConfig& config) {
    return CavityParams{config.g_tp, config.g_tp};
}

std::optional<LindbladModel> model_from(const RunConfig& config) {
    LindbladModel model;
    model.kappa = config.kappa_tp;
    model.tau_e = config.tau_e_tp;
    model.branch_e = config.branch_e;
    model.tau_u = config.tau_u_tp;
    model.branch_u = config.branch_u;
    if (!model.any_dissipation()) return std::nullopt;
    model.validate();
    return model;
}

IntegratorConfig integrator_from(const RunConfig& config) {
    IntegratorConfig ic;
    ic.step = config.h_tp;
    ic.norm_tol = config.norm_tol;
    ic.trace_tol = config.trace_tol;
    ic.record_stride = config.record_stride;
    return ic;
}

std::vector<std::pair<std::string, Vector>> input_states(const RunConfig& config,
                                                         const HilbertSpace& space) {
    std::vector<std::pair<std::string, Vector>> out;
    auto add = [&](const std::string& sel) {
        if (sel == "bell") {
            out.emplace_back(sel, bell_state(space));
        } else {
            out.emplace_back(sel, computational_state(space, sel[0] - '0', sel[1] - '0'));
        }
    };
    if (config.input == "all") {
        for (const char* sel : {"00", "01", "10", "11"}) add(sel);
    } else {
        add(config.input);
    }
    return out;
}

}  // namespace cavcnot
