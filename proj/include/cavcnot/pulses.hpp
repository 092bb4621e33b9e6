// pulses.hpp — Gaussian pulse shapes, the six-step CNOT pulse program, and
// schedule evaluation.
//
// Timing conventions (in units of the pulse width T_p):
//   * within a step the first-listed pulse peaks at c, the second at c+delay
//     (counterintuitive STIRAP order; default delay 1.2),
//   * a step window is [c - 4, c + delay + 4],
//   * consecutive step windows are separated by a gap of 2.
// A Gaussian is below 1.2e-7 of its peak at 4 widths, so steps are isolated
// at the evaluation floor used by active_couplings().

#pragma once

#include "cavcnot/statespace.hpp"
#include "cavcnot/types.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace cavcnot {

// Gaussian envelope with an optional flat top between center and center2
// (center2 == center gives the plain Gaussian; center2 > center is the
// bridged shape produced by merge_adjacent_pulses).
struct PulseShape {
    double amplitude = 0.0;  // peak Rabi frequency
    double width = 1.0;      // Gaussian 1/e half-width T_p
    double center = 0.0;
    double center2 = 0.0;
    double phase = 0.0;      // radians

    double envelope(double t) const {
        const double c = std::clamp(t, center, center2);
        const double x = (t - c) / width;
        return amplitude * std::exp(-x * x);
    }

    Complex value(double t) const {
        return envelope(t) * std::exp(kImag * phase);
    }
};

inline PulseShape gaussian_pulse(double amplitude, double width, double center,
                                 double phase = 0.0) {
    return PulseShape{amplitude, width, center, center, phase};
}

// Value of the plain Gaussian shape at time t.
inline Complex gaussian_value(const PulseShape& p, double t) { return p.value(t); }

// One laser pulse driving the transition |upper><lower| on one atom.
struct DrivePulse {
    int atom = 1;
    AtomLevel lower = AtomLevel::g0;
    AtomLevel upper = AtomLevel::e;
    PulseShape shape;
};

enum class StepKind { lambda_stirap, cavity_stirap };

// One protocol step: an ordered pair of pulses (indices into
// ProtocolSchedule::pulses) plus the step phase. The step phase is carried by
// the second pulse's PulseShape::phase (lambda steps carry pi + phase there).
struct StepSpec {
    StepKind kind = StepKind::cavity_stirap;
    double step_phase = 0.0;  // the configurable phi_(n)
    int first_pulse = -1;
    int second_pulse = -1;
    double window_begin = 0.0;
    double window_end = 0.0;
};

// Time-independent cavity couplings per atom.
struct CavityParams {
    double g1 = 0.0;
    double g2 = 0.0;

    double g(int atom) const { return atom == 1 ? g1 : g2; }
};

struct ProtocolSchedule {
    std::vector<DrivePulse> pulses;
    std::vector<StepSpec> steps;
    double pulse_width = 1.0;  // T_p
    double delay = 1.2;        // intra-step pulse delay, in absolute time units
    bool merged = false;
    double t_begin = 0.0;
    double t_end = 0.0;

    std::size_t pulse_count() const { return pulses.size(); }
};

// An evaluated laser coupling at a fixed time, ready for Hamiltonian assembly.
struct LaserCoupling {
    int atom = 1;
    AtomLevel lower = AtomLevel::g0;
    AtomLevel upper = AtomLevel::e;
    Complex amplitude;
};

// Assemble the six-step CNOT program (12 pulses).  step_phases are the
// phi_(1..6) decorations; all-zero reproduces the plain CNOT protocol.
ProtocolSchedule build_cnot_protocol(double omega_max, double t_p,
                                     double delay_over_tp = 1.2,
                                     const std::array<double, 6>& step_phases = {});

// Fuse the trailing pulse of step 3 with the leading pulse of step 4 (both
// drive e<-ga on atom 2) into one flat-top bridged pulse, leaving 11 pulses.
// Requires phase compatibility phi_(3) == phi_(4); idempotent.
ProtocolSchedule merge_adjacent_pulses(const ProtocolSchedule& s);

// Every pulse whose envelope exceeds floor_rel * amplitude at time t.
std::vector<LaserCoupling> active_couplings(const ProtocolSchedule& s, double t,
                                            double floor_rel = 1e-8);

// A schedule with no pulses and no steps spanning [t_begin, t_end]; useful to
// drive the propagators with lasers off.
ProtocolSchedule idle_schedule(double t_begin, double t_end, double t_p = 1.0);

// A schedule containing just one step of s (with its two pulses), spanning
// that step's window.
ProtocolSchedule single_step_schedule(const ProtocolSchedule& s, int step_index);

// The laser-driven ground level of each atom during a cavity step.
struct LaserAssignment {
    AtomLevel atom1 = AtomLevel::g0;  // L(1)
    AtomLevel atom2 = AtomLevel::g0;  // L(2)

    AtomLevel laser_level(int atom) const { return atom == 1 ? atom1 : atom2; }
    AtomLevel idle_level(int atom) const {
        return laser_level(atom) == AtomLevel::g0 ? AtomLevel::ga : AtomLevel::g0;
    }
};

LaserAssignment cavity_step_assignment(const ProtocolSchedule& s, int step_index);

}  // namespace cavcnot
