#include "cavcnot/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace cavcnot {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_basis_csv(const HilbertSpace& space, std::ostream& os) {
    os << "index,atom1,atom2,photons\n";
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisState b = space.state_at(i);
        os << i << ',' << level_name(b.atom1) << ',' << level_name(b.atom2) << ','
           << b.photons << '\n';
    }
}

void write_hamiltonian_csv(const Matrix& h, std::ostream& os, double tol) {
    os << "row,col,re,im\n";
    for (int c = 0; c < h.cols(); ++c) {
        for (int r = 0; r < h.rows(); ++r) {
            const Complex v = h(r, c);
            if (std::abs(v) <= tol) continue;
            os << r << ',' << c << ',' << format_double(v.real()) << ','
               << format_double(v.imag()) << '\n';
        }
    }
}

void write_timeseries_csv(const TimeSeries& series, std::ostream& os) {
    os << "# cavcnot timeseries v1\n";
    os << "t";
    for (const std::string& label : series.labels) os << ',' << label;
    os << ",norm_or_trace,photon_expectation\n";
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        os << format_double(series.t[i]);
        for (Eigen::Index j = 0; j < series.populations.cols(); ++j) {
            os << ',' << format_double(series.populations(static_cast<Eigen::Index>(i), j));
        }
        os << ',' << format_double(series.norm_or_trace[i]) << ','
           << format_double(series.photon[i]) << '\n';
    }
}

Json schedule_json(const ProtocolSchedule& schedule) {
    Json pulses = Json::array();
    for (const DrivePulse& p : schedule.pulses) {
        Json entry;
        entry["atom"] = p.atom;
        entry["transition"] =
            std::string(level_name(p.upper)) + "<-" + level_name(p.lower);
        entry["omega_max"] = p.shape.amplitude;
        entry["t_p"] = p.shape.width;
        entry["t0"] = p.shape.center;
        if (p.shape.center2 > p.shape.center) entry["t1"] = p.shape.center2;
        entry["phase"] = p.shape.phase;
        pulses.push_back(entry);
    }
    Json steps = Json::array();
    for (const StepSpec& s : schedule.steps) {
        Json entry;
        entry["kind"] =
            s.kind == StepKind::lambda_stirap ? "lambda_stirap" : "cavity_stirap";
        entry["step_phase"] = s.step_phase;
        entry["first_pulse"] = s.first_pulse;
        entry["second_pulse"] = s.second_pulse;
        entry["window_begin"] = s.window_begin;
        entry["window_end"] = s.window_end;
        steps.push_back(entry);
    }
    Json out;
    out["pulse_width"] = schedule.pulse_width;
    out["delay"] = schedule.delay;
    out["merged"] = schedule.merged;
    out["t_begin"] = schedule.t_begin;
    out["t_end"] = schedule.t_end;
    out["pulse_count"] = schedule.pulse_count();
    out["pulses"] = pulses;
    out["steps"] = steps;
    return out;
}

Json result_json(const HilbertSpace& space, const ProtocolResult& result) {
    Json out;
    out["engine"] = result.unitary ? "schrodinger" : "lindblad";

    Json finals;
    const std::vector<std::pair<const char*, BasisState>> tracked = {
        {"00", {AtomLevel::g0, AtomLevel::g0, 0}},
        {"01", {AtomLevel::g0, AtomLevel::g1, 0}},
        {"10", {AtomLevel::g1, AtomLevel::g0, 0}},
        {"11", {AtomLevel::g1, AtomLevel::g1, 0}},
        {"0a", {AtomLevel::g0, AtomLevel::ga, 0}},
        {"1a", {AtomLevel::g1, AtomLevel::ga, 0}},
        {"a1", {AtomLevel::ga, AtomLevel::g1, 0}},
    };
    for (const auto& [label, b] : tracked) {
        finals[label] = result.final_population(space, b);
    }
    out["final_populations"] = finals;

    Json steps = Json::array();
    for (const StepDiagnostics& d : result.step_diags) {
        Json entry;
        entry["end_overlap"] = d.end_overlap;
        entry["max_photon"] = d.max_photon;
        entry["max_excited"] = d.max_excited;
        steps.push_back(entry);
    }
    out["steps"] = steps;

    if (result.unitary) {
        out["max_norm_drift"] = result.max_norm_drift;
    } else {
        out["max_trace_drift"] = result.max_trace_drift;
        out["min_density_eigenvalue"] = result.min_density_eigenvalue;
    }
    return out;
}

Json gate_json(const GateMatrix& gate) {
    Json re = Json::array();
    Json im = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json re_row = Json::array();
        Json im_row = Json::array();
        for (int c = 0; c < 4; ++c) {
            re_row.push_back(gate(r, c).real());
            im_row.push_back(gate(r, c).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    Json out;
    out["basis"] = {"00", "01", "10", "11"};
    out["re"] = re;
    out["im"] = im;
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream file(p, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    file << text;
    if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace cavcnot
