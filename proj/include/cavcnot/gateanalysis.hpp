// gateanalysis.hpp — gate-level verdicts on protocol runs: truth tables,
// extracted computational-subspace matrices, fidelity metrics, and the
// analytic phase-composition targets.
//
// All 4x4 matrices use the ordered basis (|00>, |01>, |10>, |11>) at zero
// photons; global phase is quotiented out by the fidelity metric.

#pragma once

#include "cavcnot/dynamics.hpp"
#include "cavcnot/statespace.hpp"
#include "cavcnot/types.hpp"

#include <array>

namespace cavcnot {

using GateMatrix = Eigen::Matrix4cd;

struct ExtractedGate {
    GateMatrix matrix = GateMatrix::Zero();
    double unitarity_deviation = 0.0;  // ||U^dag U - I||_F
    bool flagged = false;              // deviation > 0.1: leakage/non-adiabaticity
};

struct TruthTable {
    Eigen::Matrix4d table = Eigen::Matrix4d::Zero();  // row = input, col = output
    std::array<bool, 4> failed_rows{};                // row sum below leakage floor
};

// Final computational-subspace populations of the four basis-input runs
// (inputs in order 00, 01, 10, 11).
TruthTable truth_table(const HilbertSpace& space,
                       const std::array<ProtocolResult, 4>& results,
                       double leakage_floor = 0.5);

// Run the four basis inputs through the unitary engine and project the final
// states onto the computational subspace, column by column.
ExtractedGate extract_gate(const HilbertSpace& space,
                           const ProtocolSchedule& schedule,
                           const CavityParams& cavity,
                           const IntegratorConfig& config);

// Analytic target for the phase-decorated protocol:
//   Ph2(phi6) . Cphase(phi2+phi4) . CNOT . Cphase(phi3+phi5) . Ph2(phi1),
// with Ph2(phi) the phase e^{i phi} on atom-2 level |1> and Cphase(phi) the
// phase e^{i phi} on |11>.  All-zero phases give the CNOT permutation exactly.
GateMatrix target_composition(const std::array<double, 6>& phases);

GateMatrix cnot_matrix();

// Global-phase-invariant overlap |Tr(U^dag V)| / 4.
double gate_fidelity(const GateMatrix& u, const GateMatrix& v);

// |<target|psi>|^2 resp. <target|rho|target>.
double state_fidelity(const Vector& psi, const Vector& target);
double state_fidelity(const Matrix& rho, const Vector& target);

}  // namespace cavcnot
