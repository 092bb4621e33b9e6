#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavcnot/gateanalysis.hpp"

#include <numbers>
#include <random>

using namespace cavcnot;

namespace {

// Haar-ish random 4x4 unitary via QR of a Gaussian matrix.
GateMatrix random_unitary(std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    GateMatrix a;
    for (int i = 0; i < 16; ++i) a(i) = Complex(gauss(rng), gauss(rng));
    const Eigen::HouseholderQR<GateMatrix> qr(a);
    return qr.householderQ();
}

}  // namespace

TEST_CASE("target composition reduces to CNOT at zero phases") {
    const GateMatrix cnot = cnot_matrix();
    CHECK((target_composition({}) - cnot).norm() == 0.0);
    CHECK(cnot(0, 0) == Complex(1.0));
    CHECK(cnot(3, 2) == Complex(1.0));
    CHECK(cnot(2, 3) == Complex(1.0));
    CHECK(cnot(2, 2) == Complex(0.0));
    // Unitarity of the composition for arbitrary phases.
    const GateMatrix decorated = target_composition({0.3, -1.2, 0.7, 2.2, 0.1, -0.4});
    CHECK((decorated.adjoint() * decorated - GateMatrix::Identity()).norm() < 1e-14);
}

TEST_CASE("composition with phi2 = phi4 = pi/2 negates the |11> output column") {
    const GateMatrix composed =
        target_composition({0.0, std::numbers::pi / 2, 0.0, std::numbers::pi / 2, 0.0, 0.0});
    // C-phase(pi) after CNOT: |10> -> -|11>, all else as CNOT.
    GateMatrix expected = cnot_matrix();
    expected(3, 2) = -1.0;
    CHECK((composed - expected).norm() < 1e-14);
}

TEST_CASE("composition with phi1 = pi phases the columns with target bit 1") {
    const GateMatrix composed = target_composition({std::numbers::pi, 0, 0, 0, 0, 0});
    GateMatrix expected = cnot_matrix();
    expected.col(1) *= -1.0;
    expected.col(3) *= -1.0;
    CHECK((composed - expected).norm() < 1e-13);
}

TEST_CASE("gate fidelity properties") {
    std::mt19937 rng(41);
    const GateMatrix cnot = cnot_matrix();
    CHECK(gate_fidelity(cnot, cnot) == doctest::Approx(1.0));
    CHECK(gate_fidelity(cnot, std::exp(kImag * 1.234) * cnot) == doctest::Approx(1.0));
    CHECK(gate_fidelity(cnot, GateMatrix::Identity()) == doctest::Approx(0.5));

    for (int trial = 0; trial < 10; ++trial) {
        const GateMatrix u = random_unitary(rng);
        const GateMatrix v = random_unitary(rng);
        const GateMatrix w = random_unitary(rng);
        CHECK(gate_fidelity(u, v) == doctest::Approx(gate_fidelity(v, u)));
        CHECK(gate_fidelity(w * u, w * v) == doctest::Approx(gate_fidelity(u, v)));
        CHECK(gate_fidelity(u, v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("state fidelity") {
    const HilbertSpace space = build_space(2);
    const Vector a = computational_state(space, 0, 0);
    const Vector b = computational_state(space, 1, 1);
    CHECK(state_fidelity(a, a) == doctest::Approx(1.0));
    CHECK(state_fidelity(a, b) == 0.0);
    const Vector half = (a + b) / std::numbers::sqrt2;
    CHECK(state_fidelity(half, a) == doctest::Approx(0.5));
    const Matrix rho = half * half.adjoint();
    CHECK(state_fidelity(rho, a) == doctest::Approx(0.5));
    CHECK(state_fidelity(rho, half) == doctest::Approx(1.0));
}

TEST_CASE("truth table from protocol results") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule idle = idle_schedule(0.0, 1.0);
    const CavityParams off{0.0, 0.0};
    IntegratorConfig config;

    std::array<ProtocolResult, 4> runs;
    for (int i = 0; i < 4; ++i) {
        runs[i] = evolve_schrodinger(space, idle, off,
                                     computational_state(space, i >> 1, i & 1), config);
    }
    const TruthTable table = truth_table(space, runs);
    CHECK((table.table - Eigen::Matrix4d::Identity()).norm() < 1e-12);
    for (bool failed : table.failed_rows) CHECK(!failed);
}

TEST_CASE("extracted gate of the trivial protocol is the identity") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule idle = idle_schedule(0.0, 1.0);
    IntegratorConfig config;
    const ExtractedGate gate = extract_gate(space, idle, CavityParams{0.0, 0.0}, config);
    CHECK((gate.matrix - GateMatrix::Identity()).norm() < 1e-8);
    CHECK(gate.unitarity_deviation < 1e-8);
    CHECK(!gate.flagged);
}

TEST_CASE("extracted ideal protocol matches CNOT and its own truth table") {
    const HilbertSpace space = build_space(3);
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    const CavityParams cavity{25.0, 25.0};
    IntegratorConfig config;

    const ExtractedGate gate = extract_gate(space, s, cavity, config);
    CHECK(!gate.flagged);
    CHECK(gate_fidelity(gate.matrix, cnot_matrix()) >= 0.99);

    // Step phases 0 and 2*pi give the same gate.
    const ProtocolSchedule wrapped = build_cnot_protocol(
        10.0, 1.0, 1.2,
        {2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi,
         2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi});
    const ExtractedGate gate_wrapped = extract_gate(space, wrapped, cavity, config);
    CHECK((gate_wrapped.matrix - gate.matrix).cwiseAbs().maxCoeff() < 1e-6);

    // The truth table equals the elementwise squared moduli of the matrix.
    std::array<ProtocolResult, 4> runs;
    for (int i = 0; i < 4; ++i) {
        runs[i] = evolve_schrodinger(space, s, cavity,
                                     computational_state(space, i >> 1, i & 1), config);
    }
    const TruthTable table = truth_table(space, runs);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            // Table rows are inputs; gate columns are inputs.
            CHECK(table.table(r, c) ==
                  doctest::Approx(std::norm(gate.matrix(c, r))).epsilon(1e-10));
        }
    }
}
