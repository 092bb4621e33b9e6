#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavcnot/pulses.hpp"

#include <numbers>

using namespace cavcnot;

TEST_CASE("gaussian pulse values") {
    const PulseShape p = gaussian_pulse(10.0, 1.0, 0.0);
    CHECK(gaussian_value(p, 0.0) == Complex(10.0));
    CHECK(gaussian_value(p, 1.0).real() == doctest::Approx(10.0 * std::exp(-1.0)));
    CHECK(gaussian_value(p, 1.0).real() == doctest::Approx(3.6787944117144233));

    const PulseShape flipped = gaussian_pulse(10.0, 1.0, 0.0, std::numbers::pi);
    CHECK(flipped.value(0.0).real() == doctest::Approx(-10.0));
    CHECK(flipped.value(0.0).imag() == doctest::Approx(0.0));

    const PulseShape shifted = gaussian_pulse(2.0, 0.5, 3.0);
    CHECK(shifted.value(3.5).real() == doctest::Approx(2.0 * std::exp(-1.0)));
}

TEST_CASE("six-step protocol structure") {
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    CHECK(s.steps.size() == 6);
    CHECK(s.pulse_count() == 12);
    CHECK(!s.merged);
    CHECK(s.delay == doctest::Approx(1.2));

    for (const StepSpec& step : s.steps) {
        const DrivePulse& first = s.pulses[step.first_pulse];
        const DrivePulse& second = s.pulses[step.second_pulse];
        CHECK(second.shape.center - first.shape.center == doctest::Approx(1.2));
    }

    // Step kinds and pulse assignments.
    CHECK(s.steps[0].kind == StepKind::lambda_stirap);
    CHECK(s.steps[5].kind == StepKind::lambda_stirap);
    for (int n = 1; n <= 4; ++n) CHECK(s.steps[n].kind == StepKind::cavity_stirap);

    const DrivePulse& s2_first = s.pulses[s.steps[1].first_pulse];
    const DrivePulse& s2_second = s.pulses[s.steps[1].second_pulse];
    CHECK(s2_first.atom == 1);
    CHECK(s2_first.lower == AtomLevel::ga);
    CHECK(s2_second.atom == 2);
    CHECK(s2_second.lower == AtomLevel::g0);

    const DrivePulse& s4_first = s.pulses[s.steps[3].first_pulse];
    CHECK(s4_first.atom == 2);
    CHECK(s4_first.lower == AtomLevel::ga);

    // Lambda steps carry relative phase pi on the second pulse at phi = 0.
    const DrivePulse& s6_second = s.pulses[s.steps[5].second_pulse];
    CHECK(s6_second.shape.phase == doctest::Approx(std::numbers::pi));
    CHECK(s6_second.lower == AtomLevel::ga);
    CHECK(s6_second.upper == AtomLevel::u);
    const DrivePulse& s6_first = s.pulses[s.steps[5].first_pulse];
    CHECK(s6_first.lower == AtomLevel::g1);
    CHECK(s6_first.shape.phase == 0.0);

    CHECK_THROWS_AS(build_cnot_protocol(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_cnot_protocol(10.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("counterintuitive ordering and window isolation") {
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    for (const StepSpec& step : s.steps) {
        const PulseShape& first = s.pulses[step.first_pulse].shape;
        const PulseShape& second = s.pulses[step.second_pulse].shape;
        CHECK(second.envelope(step.window_begin) / first.envelope(step.window_begin) <
              1e-3);
        CHECK(first.envelope(step.window_end) / second.envelope(step.window_end) <
              1e-3);
    }
    // Windows are partition-ordered at the 1e-8 floor: no pulse of step n is
    // active past the start of step n+1's window, and vice versa.
    for (std::size_t n = 0; n + 1 < s.steps.size(); ++n) {
        const double boundary =
            0.5 * (s.steps[n].window_end + s.steps[n + 1].window_begin);
        for (int idx : {s.steps[n].first_pulse, s.steps[n].second_pulse}) {
            const PulseShape& p = s.pulses[idx].shape;
            CHECK(p.envelope(boundary) < 1e-8 * p.amplitude);
        }
        for (int idx : {s.steps[n + 1].first_pulse, s.steps[n + 1].second_pulse}) {
            const PulseShape& p = s.pulses[idx].shape;
            CHECK(p.envelope(boundary) < 1e-8 * p.amplitude);
        }
    }
}

TEST_CASE("active couplings evaluation") {
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);

    // Dead gap between steps 1 and 2.
    const double gap = 0.5 * (s.steps[0].window_end + s.steps[1].window_begin);
    CHECK(active_couplings(s, gap).empty());

    // Peak of step 2's first pulse: (atom 1, e<-ga, ~omega_max) dominates.
    const double peak = s.pulses[s.steps[1].first_pulse].shape.center;
    const auto at_peak = active_couplings(s, peak);
    bool found = false;
    for (const LaserCoupling& c : at_peak) {
        if (c.atom == 1 && c.lower == AtomLevel::ga && c.upper == AtomLevel::e) {
            found = true;
            CHECK(std::abs(c.amplitude) == doctest::Approx(10.0));
        }
    }
    CHECK(found);

    // Midway between the two step-2 centers both pulses have equal magnitude.
    const double mid = peak + 0.6;
    const auto at_mid = active_couplings(s, mid);
    REQUIRE(at_mid.size() == 2);
    CHECK(std::abs(at_mid[0].amplitude) == doctest::Approx(std::abs(at_mid[1].amplitude)));

    CHECK_THROWS_AS(active_couplings(s, s.t_end + 1.0), std::out_of_range);
}

TEST_CASE("eleven-pulse merge") {
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    const ProtocolSchedule m = merge_adjacent_pulses(s);
    CHECK(m.pulse_count() == 11);
    CHECK(m.merged);

    // Steps 1, 2, 5, 6 are untouched.
    for (int n : {0, 1, 4, 5}) {
        for (auto pick : {&StepSpec::first_pulse, &StepSpec::second_pulse}) {
            const DrivePulse& before = s.pulses[s.steps[n].*pick];
            const DrivePulse& after = m.pulses[m.steps[n].*pick];
            CHECK(before.atom == after.atom);
            CHECK(before.lower == after.lower);
            CHECK(before.shape.center == after.shape.center);
            CHECK(before.shape.center2 == after.shape.center2);
            CHECK(before.shape.phase == after.shape.phase);
        }
    }

    // Steps 3 and 4 share the bridged pulse, flat between the old centers.
    CHECK(m.steps[2].second_pulse == m.steps[3].first_pulse);
    const PulseShape& bridged = m.pulses[m.steps[2].second_pulse].shape;
    CHECK(bridged.center2 > bridged.center);
    const double inside = 0.5 * (bridged.center + bridged.center2);
    CHECK(bridged.envelope(inside) == doctest::Approx(10.0));
    CHECK(bridged.envelope(bridged.center - 1.0) ==
          doctest::Approx(10.0 * std::exp(-1.0)));
    CHECK(bridged.envelope(bridged.center2 + 1.0) ==
          doctest::Approx(10.0 * std::exp(-1.0)));

    // Merging is idempotent.
    const ProtocolSchedule mm = merge_adjacent_pulses(m);
    CHECK(mm.pulse_count() == 11);
    CHECK(mm.pulses[mm.steps[2].second_pulse].shape.center2 == bridged.center2);

    // Phase-incompatible schedules are rejected: phi_3 != phi_4.
    const ProtocolSchedule incompatible =
        build_cnot_protocol(10.0, 1.0, 1.2, {0.0, 0.0, 0.3, 0.1, 0.0, 0.0});
    CHECK_THROWS_AS(merge_adjacent_pulses(incompatible), std::invalid_argument);

    // Equal nonzero phases merge; step 4 keeps its relative phase.
    const ProtocolSchedule compatible =
        build_cnot_protocol(10.0, 1.0, 1.2, {0.0, 0.0, 0.4, 0.4, 0.0, 0.0});
    const ProtocolSchedule cm = merge_adjacent_pulses(compatible);
    const double shared_phase = cm.pulses[cm.steps[2].second_pulse].shape.phase;
    const double second4_phase = cm.pulses[cm.steps[3].second_pulse].shape.phase;
    CHECK(shared_phase == doctest::Approx(0.4));
    CHECK(second4_phase - shared_phase == doctest::Approx(0.4));
}

TEST_CASE("cavity step assignment") {
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    const LaserAssignment a2 = cavity_step_assignment(s, 1);
    CHECK(a2.atom1 == AtomLevel::ga);
    CHECK(a2.atom2 == AtomLevel::g0);
    CHECK(a2.idle_level(1) == AtomLevel::g0);
    CHECK(a2.idle_level(2) == AtomLevel::ga);
    const LaserAssignment a4 = cavity_step_assignment(s, 3);
    CHECK(a4.atom1 == AtomLevel::ga);
    CHECK(a4.atom2 == AtomLevel::ga);
    CHECK_THROWS_AS(cavity_step_assignment(s, 0), std::invalid_argument);
}
