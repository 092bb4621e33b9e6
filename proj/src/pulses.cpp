#include "cavcnot/pulses.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace cavcnot {

namespace {

constexpr double kWindowMargin = 4.0;  // window extends 4 T_p beyond each center
constexpr double kStepGap = 2.0;       // gap between consecutive windows, in T_p

struct StepLayout {
    StepKind kind;
    int atom_first;
    AtomLevel lower_first;
    int atom_second;
    AtomLevel lower_second;
    AtomLevel upper;
};

// The six-step program.  Within each step the first pulse couples the state
// the population leaves *into* (Stokes), the second the initially populated
// state (pump); this is the counterintuitive order.
constexpr StepLayout kCnotSteps[6] = {
    // 1: atom-2 STIRAP g1 -> ga via u, Omega_a(sti) before Omega_1(sti)
    {StepKind::lambda_stirap, 2, AtomLevel::ga, 2, AtomLevel::g1, AtomLevel::u},
    // 2: Omega_a(1), Omega_0(2)
    {StepKind::cavity_stirap, 1, AtomLevel::ga, 2, AtomLevel::g0, AtomLevel::e},
    // 3: Omega_0(1), Omega_a(2)
    {StepKind::cavity_stirap, 1, AtomLevel::g0, 2, AtomLevel::ga, AtomLevel::e},
    // 4: Omega_a(2), Omega_a(1)
    {StepKind::cavity_stirap, 2, AtomLevel::ga, 1, AtomLevel::ga, AtomLevel::e},
    // 5: Omega_0(2), Omega_0(1)
    {StepKind::cavity_stirap, 2, AtomLevel::g0, 1, AtomLevel::g0, AtomLevel::e},
    // 6: atom-2 STIRAP ga -> g1 via u, Omega_1(sti) before Omega_a(sti)
    {StepKind::lambda_stirap, 2, AtomLevel::g1, 2, AtomLevel::ga, AtomLevel::u},
};

}  // namespace

ProtocolSchedule build_cnot_protocol(double omega_max, double t_p,
                                     double delay_over_tp,
                                     const std::array<double, 6>& step_phases) {
    if (omega_max <= 0.0 || t_p <= 0.0) {
        throw std::invalid_argument(
            "build_cnot_protocol: omega_max and t_p must be positive");
    }
    if (delay_over_tp <= 0.0) {
        throw std::invalid_argument("build_cnot_protocol: delay must be positive");
    }

    ProtocolSchedule s;
    s.pulse_width = t_p;
    s.delay = delay_over_tp * t_p;
    const double window = (delay_over_tp + 2.0 * kWindowMargin) * t_p;

    double begin = 0.0;
    for (int n = 0; n < 6; ++n) {
        const StepLayout& layout = kCnotSteps[n];
        const double c_first = begin + kWindowMargin * t_p;
        const double c_second = c_first + s.delay;

        // Lambda steps realize the relative phase pi + phi_(n); cavity steps
        // carry phi_(n) directly.  Both ride on the second pulse.
        const double second_phase =
            (layout.kind == StepKind::lambda_stirap ? std::numbers::pi : 0.0) +
            step_phases[n];

        StepSpec step;
        step.kind = layout.kind;
        step.step_phase = step_phases[n];
        step.window_begin = begin;
        step.window_end = begin + window;

        step.first_pulse = static_cast<int>(s.pulses.size());
        s.pulses.push_back(DrivePulse{layout.atom_first, layout.lower_first,
                                      layout.upper,
                                      gaussian_pulse(omega_max, t_p, c_first)});
        step.second_pulse = static_cast<int>(s.pulses.size());
        s.pulses.push_back(
            DrivePulse{layout.atom_second, layout.lower_second, layout.upper,
                       gaussian_pulse(omega_max, t_p, c_second, second_phase)});

        s.steps.push_back(step);
        begin += window + kStepGap * t_p;
    }

    s.t_begin = 0.0;
    s.t_end = s.steps.back().window_end;
    return s;
}

ProtocolSchedule merge_adjacent_pulses(const ProtocolSchedule& s) {
    if (s.merged) return s;
    if (s.steps.size() != 6 || s.pulses.size() != 12) {
        throw std::invalid_argument(
            "merge_adjacent_pulses: expected the unmerged six-step schedule");
    }

    const StepSpec& step3 = s.steps[2];
    const StepSpec& step4 = s.steps[3];
    const DrivePulse& tail = s.pulses[step3.second_pulse];
    const DrivePulse& head = s.pulses[step4.first_pulse];
    if (tail.atom != head.atom || tail.lower != head.lower ||
        tail.upper != head.upper) {
        throw std::invalid_argument(
            "merge_adjacent_pulses: steps 3 and 4 do not share a drive");
    }
    if (std::abs(step3.step_phase - step4.step_phase) > 1e-12) {
        throw std::invalid_argument(
            "merge_adjacent_pulses: incompatible phases on the pulses to merge "
            "(requires equal step phases phi_3 == phi_4)");
    }

    DrivePulse bridged = tail;
    bridged.shape.center2 = head.shape.center;

    ProtocolSchedule out;
    out.pulse_width = s.pulse_width;
    out.delay = s.delay;
    out.t_begin = s.t_begin;
    out.t_end = s.t_end;
    out.merged = true;
    out.steps = s.steps;

    // Rebuild the pulse list with the bridged pulse shared by steps 3 and 4.
    // Step 4 keeps its relative phase: its second pulse is re-gauged by the
    // shared pulse's phase so the within-step phase difference is unchanged.
    for (int n = 0; n < 6; ++n) {
        const StepSpec& old_step = s.steps[n];
        StepSpec& step = out.steps[n];
        if (n == 3) {
            step.first_pulse = out.steps[2].second_pulse;
        } else {
            step.first_pulse = static_cast<int>(out.pulses.size());
            out.pulses.push_back(s.pulses[old_step.first_pulse]);
        }
        step.second_pulse = static_cast<int>(out.pulses.size());
        if (n == 2) {
            out.pulses.push_back(bridged);
        } else {
            DrivePulse second = s.pulses[old_step.second_pulse];
            if (n == 3) second.shape.phase += bridged.shape.phase;
            out.pulses.push_back(second);
        }
    }
    return out;
}

std::vector<LaserCoupling> active_couplings(const ProtocolSchedule& s, double t,
                                            double floor_rel) {
    if (t < s.t_begin || t > s.t_end) {
        throw std::out_of_range("active_couplings: time outside schedule bounds");
    }
    std::vector<LaserCoupling> out;
    for (const DrivePulse& p : s.pulses) {
        if (p.shape.envelope(t) <= floor_rel * p.shape.amplitude) continue;
        out.push_back(LaserCoupling{p.atom, p.lower, p.upper, p.shape.value(t)});
    }
    return out;
}

ProtocolSchedule idle_schedule(double t_begin, double t_end, double t_p) {
    ProtocolSchedule s;
    s.pulse_width = t_p;
    s.t_begin = t_begin;
    s.t_end = t_end;
    return s;
}

ProtocolSchedule single_step_schedule(const ProtocolSchedule& s, int step_index) {
    if (step_index < 0 || step_index >= static_cast<int>(s.steps.size())) {
        throw std::out_of_range("single_step_schedule: bad step index");
    }
    const StepSpec& step = s.steps[step_index];
    ProtocolSchedule out;
    out.pulse_width = s.pulse_width;
    out.delay = s.delay;
    out.pulses = {s.pulses[step.first_pulse], s.pulses[step.second_pulse]};
    out.steps = {step};
    out.steps[0].first_pulse = 0;
    out.steps[0].second_pulse = 1;
    out.t_begin = step.window_begin;
    out.t_end = step.window_end;
    return out;
}

LaserAssignment cavity_step_assignment(const ProtocolSchedule& s, int step_index) {
    if (step_index < 0 || step_index >= static_cast<int>(s.steps.size())) {
        throw std::out_of_range("cavity_step_assignment: bad step index");
    }
    const StepSpec& step = s.steps[step_index];
    if (step.kind != StepKind::cavity_stirap) {
        throw std::invalid_argument(
            "cavity_step_assignment: step is not a cavity step");
    }
    const DrivePulse& a = s.pulses[step.first_pulse];
    const DrivePulse& b = s.pulses[step.second_pulse];
    LaserAssignment assign;
    (a.atom == 1 ? assign.atom1 : assign.atom2) = a.lower;
    (b.atom == 1 ? assign.atom1 : assign.atom2) = b.lower;
    return assign;
}

}  // namespace cavcnot
