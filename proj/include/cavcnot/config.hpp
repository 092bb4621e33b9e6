// config.hpp — flat key=value run configuration and the sweep description.
//
// All physics is expressed in units of the pulse width T_p (omega_max_tp is
// Omega_max*T_p and so on); the optional tp_ns key only labels reports.

#pragma once

#include "cavcnot/dynamics.hpp"
#include "cavcnot/pulses.hpp"
#include "cavcnot/statespace.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cavcnot {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double omega_max_tp = 10.0;
    double g_tp = 25.0;
    double delay_tp = 1.2;
    double kappa_tp = 0.0;
    double tau_e_tp = kInfinity;
    std::array<double, 3> branch_e{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double tau_u_tp = kInfinity;
    std::array<double, 3> branch_u{1.0 / 3, 1.0 / 3, 1.0 / 3};
    int n_max = 3;
    double h_tp = 1.0 / 200;
    double norm_tol = 1e-8;
    double trace_tol = 1e-6;
    int record_stride = 10;
    std::array<double, 6> phases{};
    std::string input = "all";  // 00 | 01 | 10 | 11 | bell | all
    bool merged = false;
    double tp_ns = 0.0;  // 0 = unlabeled
    std::string out_dir;

    std::string sweep_param;
    std::vector<double> sweep_values;

    void validate() const;  // throws config_error naming the offending key
};

struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    RunConfig base;
};

// Parse the documented key=value format ('#' comments, scientific notation,
// "inf" for lifetimes).  Unknown keys, non-numeric values and violated
// invariants are rejected with the key and line number.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

// True when the named parameter is a sweepable numeric RunConfig field.
bool is_numeric_parameter(const std::string& name);

// Set a numeric field by key name (used by the sweep runner).
void set_numeric_parameter(RunConfig& config, const std::string& name, double value);

// ------------------------- materialized run objects --------------------------

HilbertSpace space_from(const RunConfig& config);
ProtocolSchedule schedule_from(const RunConfig& config);
CavityParams cavity_from(const RunConfig& config);
std::optional<LindbladModel> model_from(const RunConfig& config);
IntegratorConfig integrator_from(const RunConfig& config);

// The (label, state) pairs selected by config.input.
std::vector<std::pair<std::string, Vector>> input_states(const RunConfig& config,
                                                         const HilbertSpace& space);

}  // namespace cavcnot
