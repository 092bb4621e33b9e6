// cavcnot — simulator CLI for the cavity-mediated adiabatic-passage CNOT gate.
//
// Subcommands: simulate, sweep, truth-table, compose-phases, verify-darkstates,
// dump-basis, dump-hamiltonian.
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 verification
// failure.

#include "cavcnot/config.hpp"
#include "cavcnot/darkstates.hpp"
#include "cavcnot/dynamics.hpp"
#include "cavcnot/gateanalysis.hpp"
#include "cavcnot/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace {

using namespace cavcnot;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerics = 3;
constexpr int kExitVerification = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::string input;
    bool merged = false;
};

RunConfig make_config(const CommonArgs& args) {
    RunConfig config =
        args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (config.out_dir.empty()) config.out_dir = ".";
    if (!args.input.empty()) config.input = args.input;
    if (args.merged) config.merged = true;
    config.validate();
    return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (std::filesystem::path(config.out_dir) / name).string();
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfig config = make_config(args);
    const HilbertSpace space = space_from(config);
    const ProtocolSchedule schedule = schedule_from(config);
    const CavityParams cavity = cavity_from(config);
    const auto model = model_from(config);
    const IntegratorConfig integrator = integrator_from(config);

    write_file(out_path(config, "schedule.json"), schedule_json(schedule).dump(2) + "\n");

    Json summary;
    summary["engine"] = model.has_value() ? "lindblad" : "schrodinger";
    summary["merged"] = config.merged;
    if (config.tp_ns > 0.0) summary["tp_ns"] = config.tp_ns;
    Json inputs;
    for (const auto& [label, psi0] : input_states(config, space)) {
        const ProtocolResult result =
            run_protocol(space, schedule, cavity, model, psi0, integrator);
        std::ostringstream csv;
        write_timeseries_csv(result.series, csv);
        write_file(out_path(config, "timeseries_" + label + ".csv"), csv.str());
        inputs[label] = result_json(space, result);
    }
    summary["inputs"] = inputs;
    write_file(out_path(config, "summary.json"), summary.dump(2) + "\n");
    std::cout << "simulate: wrote summary.json and per-input time series to "
              << config.out_dir << "\n";
    return kExitOk;
}

struct SweepRow {
    double value = 0.0;
    double retention_00 = 0.0;
    double retention_01 = 0.0;
    double exchange_10 = 0.0;
    double exchange_11 = 0.0;
    std::string status = "ok";
};

SweepRow sweep_one(const RunConfig& base, const std::string& param, double value) {
    SweepRow row;
    row.value = value;
    try {
        RunConfig config = base;
        set_numeric_parameter(config, param, value);
        const HilbertSpace space = space_from(config);
        const ProtocolSchedule schedule = schedule_from(config);
        const CavityParams cavity = cavity_from(config);
        const auto model = model_from(config);
        const IntegratorConfig integrator = integrator_from(config);

        auto final_pop = [&](int b1, int b2, const BasisState& target) {
            const ProtocolResult r =
                run_protocol(space, schedule, cavity, model,
                             computational_state(space, b1, b2), integrator);
            return r.final_population(space, target);
        };
        row.retention_00 = final_pop(0, 0, {AtomLevel::g0, AtomLevel::g0, 0});
        row.retention_01 = final_pop(0, 1, {AtomLevel::g0, AtomLevel::g1, 0});
        row.exchange_10 = final_pop(1, 0, {AtomLevel::g1, AtomLevel::g1, 0});
        row.exchange_11 = final_pop(1, 1, {AtomLevel::g1, AtomLevel::g0, 0});
    } catch (const std::exception& e) {
        row.status = e.what();
    }
    return row;
}

int cmd_sweep(const CommonArgs& args) {
    const RunConfig config = make_config(args);
    if (config.sweep_param.empty()) {
        throw config_error("sweep requires sweep_param in the config");
    }

    // Values run concurrently; rows are assembled in input order.
    std::vector<std::future<SweepRow>> futures;
    for (double value : config.sweep_values) {
        futures.push_back(std::async(std::launch::async, sweep_one, config,
                                     config.sweep_param, value));
    }
    std::ostringstream csv;
    csv << "# cavcnot sweep v1\n";
    csv << config.sweep_param
        << ",retention_00,retention_01,exchange_10,exchange_11,status\n";
    for (auto& f : futures) {
        const SweepRow row = f.get();
        csv << format_double(row.value) << ',' << format_double(row.retention_00)
            << ',' << format_double(row.retention_01) << ','
            << format_double(row.exchange_10) << ','
            << format_double(row.exchange_11) << ','
            << (row.status == "ok" ? row.status : "failed: " + row.status) << '\n';
    }
    write_file(out_path(config, "sweep.csv"), csv.str());
    std::cout << csv.str();
    return kExitOk;
}

int cmd_truth_table(const CommonArgs& args) {
    const RunConfig config = make_config(args);
    const HilbertSpace space = space_from(config);
    const ProtocolSchedule schedule = schedule_from(config);
    const CavityParams cavity = cavity_from(config);
    const auto model = model_from(config);
    const IntegratorConfig integrator = integrator_from(config);

    std::array<ProtocolResult, 4> runs;
    for (int i = 0; i < 4; ++i) {
        runs[i] = run_protocol(space, schedule, cavity, model,
                               computational_state(space, i >> 1, i & 1), integrator);
    }
    const TruthTable table = truth_table(space, runs);

    Json out;
    Json rows = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 4; ++c) row.push_back(table.table(r, c));
        rows.push_back(row);
    }
    out["basis"] = {"00", "01", "10", "11"};
    out["table"] = rows;
    out["failed_rows"] = table.failed_rows;

    std::cout << "truth table (rows = inputs 00,01,10,11):\n";
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) std::cout << ' ' << format_double(table.table(r, c));
        std::cout << '\n';
    }

    if (!model.has_value()) {
        const ExtractedGate gate = extract_gate(space, schedule, cavity, integrator);
        out["gate"] = gate_json(gate.matrix);
        out["unitarity_deviation"] = gate.unitarity_deviation;
        out["gate_flagged"] = gate.flagged;
        out["fidelity_to_cnot"] = gate_fidelity(gate.matrix, cnot_matrix());
        out["fidelity_to_composition"] =
            gate_fidelity(gate.matrix, target_composition(config.phases));
        std::cout << "fidelity to CNOT: " << out["fidelity_to_cnot"] << '\n';
    }
    write_file(out_path(config, "truth_table.json"), out.dump(2) + "\n");
    return kExitOk;
}

int cmd_compose_phases(const CommonArgs& args, bool simulate) {
    const RunConfig config = make_config(args);
    const GateMatrix target = target_composition(config.phases);

    Json out;
    out["phases"] = config.phases;
    out["target"] = gate_json(target);
    out["fidelity_target_to_cnot"] = gate_fidelity(target, cnot_matrix());
    if (simulate) {
        const HilbertSpace space = space_from(config);
        const ExtractedGate gate =
            extract_gate(space, schedule_from(config), cavity_from(config),
                         integrator_from(config));
        out["gate"] = gate_json(gate.matrix);
        out["unitarity_deviation"] = gate.unitarity_deviation;
        out["gate_flagged"] = gate.flagged;
        out["fidelity_gate_to_target"] = gate_fidelity(gate.matrix, target);
        std::cout << "fidelity of extracted gate to composition target: "
                  << out["fidelity_gate_to_target"] << '\n';
    }
    write_file(out_path(config, "composition.json"), out.dump(2) + "\n");
    std::cout << "compose-phases: wrote composition.json to " << config.out_dir
              << "\n";
    return kExitOk;
}

int cmd_verify_darkstates(const CommonArgs& args, int geometric_samples) {
    const RunConfig config = make_config(args);
    const HilbertSpace space = space_from(config);
    const ProtocolSchedule schedule = schedule_from(config);
    const CavityParams cavity = cavity_from(config);

    const DarkStateReport report =
        verify_dark_states(space, schedule, cavity, 161, geometric_samples);

    std::cout << "block dimensions (stationary/transfer/spectator): "
              << report.block_dim_stationary << "/" << report.block_dim_transfer
              << "/" << report.block_dim_spectator << "\n";
    std::cout << "transfer block contains |ga g1;0>: "
              << (report.transfer_block_has_a1 ? "yes" : "no")
              << ", contains |ga g0;0>: "
              << (report.transfer_block_has_a0 ? "yes" : "no") << "\n";
    for (const DarkStateStepReport& s : report.steps) {
        std::cout << "step " << s.step_index + 1 << " (" << s.kind << ")"
                  << " residual=" << s.max_residual
                  << " excited_amp=" << s.max_excited_amplitude
                  << " coupling=" << s.max_coupling
                  << (s.coupling_converged ? "" : " (unconverged)");
        if (s.kernel_dimension >= 0) {
            std::cout << " kernel_dim=" << s.kernel_dimension;
        }
        std::cout << "\n";
    }
    const bool ok = report.pass();
    std::cout << (ok ? "verify-darkstates: PASS" : "verify-darkstates: FAIL") << "\n";
    return ok ? kExitOk : kExitVerification;
}

int cmd_dump_basis(const CommonArgs& args) {
    const RunConfig config = make_config(args);
    const HilbertSpace space = space_from(config);
    if (!args.out_dir.empty()) {
        std::ostringstream csv;
        write_basis_csv(space, csv);
        write_file(out_path(config, "basis.csv"), csv.str());
    } else {
        write_basis_csv(space, std::cout);
    }
    return kExitOk;
}

int cmd_dump_hamiltonian(const CommonArgs& args, double time) {
    const RunConfig config = make_config(args);
    const HilbertSpace space = space_from(config);
    const ProtocolSchedule schedule = schedule_from(config);
    if (time < schedule.t_begin || time > schedule.t_end) {
        throw config_error("dump-hamiltonian: --time outside the schedule span [" +
                           format_double(schedule.t_begin) + ", " +
                           format_double(schedule.t_end) + "]");
    }
    const Matrix h = interaction_hamiltonian(
        space, active_couplings(schedule, time), cavity_from(config));
    if (!args.out_dir.empty()) {
        std::ostringstream csv;
        write_hamiltonian_csv(h, csv);
        write_file(out_path(config, "hamiltonian.csv"), csv.str());
    } else {
        write_hamiltonian_csv(h, std::cout);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cavcnot: adiabatic-passage CNOT gate simulator for two five-level "
        "atoms in a single-mode optical cavity"};
    app.require_subcommand(1);

    CommonArgs args;
    double dump_time = 0.0;
    bool simulate_composition = false;
    int geometric_samples = 150001;

    auto add_common = [&](CLI::App* cmd, bool with_input) {
        cmd->add_option("--config", args.config_path, "key=value config file");
        cmd->add_option("--out", args.out_dir, "output directory");
        if (with_input) {
            cmd->add_option("--input", args.input, "input state")
                ->check(CLI::IsMember({"00", "01", "10", "11", "bell", "all"}));
            cmd->add_flag("--merged", args.merged, "use the eleven-pulse schedule");
        }
    };

    CLI::App* simulate = app.add_subcommand("simulate", "run the protocol");
    add_common(simulate, true);
    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
    add_common(sweep, false);
    CLI::App* truth = app.add_subcommand("truth-table", "four-input truth table");
    add_common(truth, true);
    CLI::App* compose =
        app.add_subcommand("compose-phases", "analytic phase-composition target");
    add_common(compose, true);
    compose->add_flag("--simulate", simulate_composition,
                      "also extract the gate and compare");
    CLI::App* verify =
        app.add_subcommand("verify-darkstates", "dark-state verification report");
    add_common(verify, true);
    verify->add_option("--geometric-samples", geometric_samples,
                       "grid points per step for the coupling audit");
    CLI::App* basis = app.add_subcommand("dump-basis", "basis ordering as CSV");
    add_common(basis, false);
    CLI::App* dump_h =
        app.add_subcommand("dump-hamiltonian", "nonzero H(t) entries as CSV");
    add_common(dump_h, true);
    dump_h->add_option("--time", dump_time, "evaluation time (units of T_p)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (truth->parsed()) return cmd_truth_table(args);
        if (compose->parsed()) return cmd_compose_phases(args, simulate_composition);
        if (verify->parsed()) return cmd_verify_darkstates(args, geometric_samples);
        if (basis->parsed()) return cmd_dump_basis(args);
        if (dump_h->parsed()) return cmd_dump_hamiltonian(args, dump_time);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const numerics_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerics;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerics;
    }
    return kExitOk;
}
