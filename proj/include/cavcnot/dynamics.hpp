// dynamics.hpp — fixed-step 4th-order propagation of the protocol, unitary
// (Schrodinger) and dissipative (Lindblad), with population recording and
// per-step diagnostics.

#pragma once

#include "cavcnot/darkstates.hpp"
#include "cavcnot/hamiltonian.hpp"
#include "cavcnot/pulses.hpp"
#include "cavcnot/statespace.hpp"
#include "cavcnot/types.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavcnot {

// Raised when the integrator detects norm/trace drift or loss of positivity.
struct numerics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Zero-temperature dissipation channels: cavity photon loss at rate kappa
// (collapse operator sqrt(kappa) a) and optional spontaneous emission from
// each excited level with lifetime tau and branching ratios onto the ground
// levels (g0, ga, g1), per atom.
struct LindbladModel {
    double kappa = 0.0;
    double tau_e = kInfinity;
    std::array<double, 3> branch_e{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double tau_u = kInfinity;
    std::array<double, 3> branch_u{1.0 / 3, 1.0 / 3, 1.0 / 3};

    bool any_dissipation() const {
        return kappa > 0.0 || std::isfinite(tau_e) || std::isfinite(tau_u);
    }
    void validate() const;
};

struct IntegratorConfig {
    double step = 1.0 / 200;       // h, in the schedule's time units
    double norm_tol = 1e-8;        // unitary runs
    double trace_tol = 1e-6;       // lindblad runs
    double positivity_tol = 1e-8;  // min eigenvalue >= -positivity_tol
    int record_stride = 10;        // samples every record_stride steps

    void validate() const {
        if (step <= 0.0) throw std::invalid_argument("IntegratorConfig: step <= 0");
        if (record_stride < 1) {
            throw std::invalid_argument("IntegratorConfig: record_stride < 1");
        }
    }
};

struct Projector {
    std::string label;
    std::vector<int> indices;
};

struct TimeSeries {
    std::vector<std::string> labels;
    std::vector<double> t;
    RealMatrix populations;  // samples x labels
    std::vector<double> norm_or_trace;
    std::vector<double> photon;
};

struct StepDiagnostics {
    double end_overlap = 0.0;  // population on the expected connection target
    double max_photon = 0.0;
    double max_excited = 0.0;  // population on e/u levels
};

struct ProtocolResult {
    bool unitary = true;
    Vector final_state;    // unitary runs
    Matrix final_density;  // lindblad runs
    std::vector<StepDiagnostics> step_diags;
    TimeSeries series;
    double max_norm_drift = 0.0;
    double max_trace_drift = 0.0;
    double min_density_eigenvalue = 0.0;

    // Final population of one zero-photon basis state.
    double final_population(const HilbertSpace& space, const BasisState& b) const;
};

// Expectation values of an orthogonal projector set (index sets must be
// pairwise disjoint).
RealVector populations(const Vector& psi, const std::vector<Projector>& projectors);
RealVector populations(const Matrix& rho, const std::vector<Projector>& projectors);

// Unitary propagation of psi0 across the schedule.  psi0 must be normalized;
// norm drift beyond config.norm_tol aborts with a diagnostic.
ProtocolResult evolve_schrodinger(const HilbertSpace& space,
                                  const ProtocolSchedule& schedule,
                                  const CavityParams& cavity, const Vector& psi0,
                                  const IntegratorConfig& config);

// Lindblad propagation of rho0 (validated as a density matrix) across the
// schedule.  Trace drift beyond config.trace_tol or negativity beyond
// config.positivity_tol aborts.
ProtocolResult evolve_lindblad(const HilbertSpace& space,
                               const ProtocolSchedule& schedule,
                               const CavityParams& cavity, const LindbladModel& model,
                               const Matrix& rho0, const IntegratorConfig& config);

// Protocol front end: dispatches to the unitary engine, or to the Lindblad
// engine when the model carries any dissipation.  The initial state must be
// supported on computational (g0/g1) levels with zero photons.
ProtocolResult run_protocol(const HilbertSpace& space,
                            const ProtocolSchedule& schedule,
                            const CavityParams& cavity,
                            const std::optional<LindbladModel>& model,
                            const Vector& psi0, const IntegratorConfig& config);

// Generic fixed-step RK4 over any Eigen state type; rhs(t, y, dy) fills dy.
template <class State, class Rhs>
void rk4_propagate(Rhs&& rhs, State& y, double t0, double t1, double h) {
    if (h <= 0.0) throw std::invalid_argument("rk4_propagate: h <= 0");
    State k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    const long nsteps = static_cast<long>(std::ceil((t1 - t0) / h - 1e-12));
    for (long i = 0; i < nsteps; ++i) {
        const double t = t0 + i * h;
        const double dt = std::min(h, t1 - t);
        rhs(t, y, k1);
        tmp = y + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = y + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = y + dt * k3;
        rhs(t + dt, tmp, k4);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

}  // namespace cavcnot
