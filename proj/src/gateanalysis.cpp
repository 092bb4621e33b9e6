#include "cavcnot/gateanalysis.hpp"

#include <cmath>
#include <stdexcept>

namespace cavcnot {

namespace {

std::array<int, 4> computational_indices(const HilbertSpace& space) {
    return {
        space.index_of(AtomLevel::g0, AtomLevel::g0, 0),
        space.index_of(AtomLevel::g0, AtomLevel::g1, 0),
        space.index_of(AtomLevel::g1, AtomLevel::g0, 0),
        space.index_of(AtomLevel::g1, AtomLevel::g1, 0),
    };
}

}  // namespace

TruthTable truth_table(const HilbertSpace& space,
                       const std::array<ProtocolResult, 4>& results,
                       double leakage_floor) {
    const std::array<int, 4> comp = computational_indices(space);
    TruthTable out;
    for (int row = 0; row < 4; ++row) {
        const ProtocolResult& r = results[row];
        for (int col = 0; col < 4; ++col) {
            out.table(row, col) = r.final_population(space, space.state_at(comp[col]));
        }
        out.failed_rows[row] = out.table.row(row).sum() < leakage_floor;
    }
    return out;
}

ExtractedGate extract_gate(const HilbertSpace& space,
                           const ProtocolSchedule& schedule,
                           const CavityParams& cavity,
                           const IntegratorConfig& config) {
    const std::array<int, 4> comp = computational_indices(space);
    ExtractedGate gate;
    for (int col = 0; col < 4; ++col) {
        const Vector psi0 = computational_state(space, col >> 1, col & 1);
        const ProtocolResult r =
            evolve_schrodinger(space, schedule, cavity, psi0, config);
        for (int row = 0; row < 4; ++row) {
            gate.matrix(row, col) = r.final_state(comp[row]);
        }
    }
    gate.unitarity_deviation =
        (gate.matrix.adjoint() * gate.matrix - GateMatrix::Identity()).norm();
    gate.flagged = gate.unitarity_deviation > 0.1;
    return gate;
}

GateMatrix cnot_matrix() {
    GateMatrix cnot = GateMatrix::Zero();
    cnot(0, 0) = 1.0;
    cnot(1, 1) = 1.0;
    cnot(3, 2) = 1.0;  // |10> -> |11>
    cnot(2, 3) = 1.0;  // |11> -> |10>
    return cnot;
}

GateMatrix target_composition(const std::array<double, 6>& phases) {
    auto ph2 = [](double phi) {
        GateMatrix m = GateMatrix::Identity();
        m(1, 1) = std::exp(kImag * phi);
        m(3, 3) = std::exp(kImag * phi);
        return m;
    };
    auto cphase = [](double phi) {
        GateMatrix m = GateMatrix::Identity();
        m(3, 3) = std::exp(kImag * phi);
        return m;
    };
    return ph2(phases[5]) * cphase(phases[1] + phases[3]) * cnot_matrix() *
           cphase(phases[2] + phases[4]) * ph2(phases[0]);
}

double gate_fidelity(const GateMatrix& u, const GateMatrix& v) {
    return std::abs((u.adjoint() * v).trace()) / 4.0;
}

double state_fidelity(const Vector& psi, const Vector& target) {
    if (psi.size() != target.size()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    return std::norm(target.dot(psi));
}

double state_fidelity(const Matrix& rho, const Vector& target) {
    if (rho.rows() != target.size()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    return (target.adjoint() * rho * target)(0).real();
}

}  // namespace cavcnot
