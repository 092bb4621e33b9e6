// darkstates.hpp — analytic zero-eigenvalue eigenstates of the protocol
// Hamiltonian, numeric kernels as an independent check, and the
// geometric-coupling audit of adiabatic families.

#pragma once

#include "cavcnot/hamiltonian.hpp"
#include "cavcnot/pulses.hpp"
#include "cavcnot/statespace.hpp"
#include "cavcnot/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cavcnot {

// Dark state of the single-atom lambda system, as coefficients on (g1, ga):
//   proportional to omega_asti |g1> - e^{i phase} omega_1sti |ga>,
// where phase is the relative phase of the u<-g1 pulse w.r.t. the u<-ga one.
// Normalized; rejects the all-zero input.
Eigen::Vector2cd lambda_dark_state(double omega_asti, double omega_1sti,
                                   double phase);

// Embed atom-2 coefficients (c_g1, c_ga) into the full space at a fixed
// atom-1 level and photon number.
Vector embed_atom2_pair(const HilbertSpace& space, AtomLevel atom1,
                        int photons, const Eigen::Vector2cd& coeffs);

// The population-transfer dark state of a cavity step (the only member of the
// seven-dimensional block that carries population):
//   g1*omega2 |L1 g1; 0> + g2*omega1 |g1 L2; 0> - omega1*omega2 |g1 g1; 1>,
// normalized.  Complex amplitudes carry the pulse phases.
Vector transfer_dark_state(const HilbertSpace& space, const LaserAssignment& lasers,
                           Complex omega1, Complex omega2, double g1, double g2);

// The four dark states of the sixteen-dimensional block that return spectator
// configurations to themselves, indexed k = 2..5 by the configuration they
// anchor at vanishing pulses:
//   k=2: N1 L2,  k=3: L1 N2,  k=4: N1 N2 (constant),  k=5: L1 L2.
Vector spectator_dark_state(const HilbertSpace& space, const LaserAssignment& lasers,
                            int k, Complex omega1, Complex omega2, double g1,
                            double g2);

// Orthonormal kernel basis of a Hermitian matrix: singular directions with
// sigma < tol * sigma_max.  Columns of the result span the kernel.
Matrix numeric_kernel(const Matrix& h, double tol = 1e-10);

// A family of instantaneous dark states sampled on a uniform time grid.
// members[m][j] is member m at times[j]; members are orthonormal per sample.
struct DarkFamily {
    std::vector<double> times;
    std::vector<std::vector<Vector>> members;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(members.size()); }
    int samples() const { return static_cast<int>(times.size()); }
};

// Time-indexed constructors of the analytic dark states followed during one
// protocol step, including the constant uncoupled members so cross-couplings
// are audited too.
struct FamilyBuilders {
    std::vector<std::function<Vector(double)>> build;
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(build.size()); }
};

FamilyBuilders dark_family_builders(const HilbertSpace& space,
                                    const ProtocolSchedule& schedule,
                                    const CavityParams& cavity, int step_index);

// The analytic dark states of one step, sampled on `samples` uniform points
// across the step window.
DarkFamily protocol_dark_family(const HilbertSpace& space,
                                const ProtocolSchedule& schedule,
                                const CavityParams& cavity, int step_index,
                                int samples);

// Make successive overlaps <v(t_j)|v(t_{j+1})> real-positive per member.
void fix_gauge(DarkFamily& family);

// Suprema over the grid of |<m'(s)| d/ds |m(s)>| (centered differences).
RealMatrix geometric_couplings(const DarkFamily& family);

// Streaming evaluation of the couplings for one step at `samples` grid points
// and at the halved grid spacing (2*samples - 1 points).  `converged` is
// false when an entry above `floor` on both grids moves by more than 10%.
struct GeometricAudit {
    RealMatrix couplings;
    RealMatrix couplings_halved;
    bool converged = true;

    double max_coupling() const {
        return std::max(couplings.maxCoeff(), couplings_halved.maxCoeff());
    }
};

GeometricAudit audit_geometric_couplings(const HilbertSpace& space,
                                         const ProtocolSchedule& schedule,
                                         const CavityParams& cavity, int step_index,
                                         int samples, double floor = 1e-8);

struct ConnectionResult {
    BasisState output;
    bool spectator = false;  // input not addressed by the step
};

// Symbolic adiabatic connection of one step: which zero-photon basis state an
// input is carried into.
ConnectionResult expected_connection(const ProtocolSchedule& schedule,
                                     int step_index, const BasisState& input);

// ------------------------- whole-protocol verification -----------------------

struct DarkStateStepReport {
    int step_index = 0;
    std::string kind;
    double max_residual = 0.0;        // max over samples of ||H v|| / ||H||
    double max_excited_amplitude = 0.0;  // entrywise e/u support (exact zero)
    double max_coupling = 0.0;        // geometric-coupling supremum
    bool coupling_converged = true;
    int kernel_dimension = -1;        // 7-block kernel dim (cavity steps)
};

struct DarkStateReport {
    std::vector<DarkStateStepReport> steps;
    int block_dim_stationary = 0;  // closure of |g1 g1; 0>
    int block_dim_transfer = 0;    // transfer closure plus uncoupled members
    int block_dim_spectator = 0;   // union of the four spectator closures
    bool transfer_block_has_a1 = false;  // |ga g1; 0> membership
    bool transfer_block_has_a0 = false;  // |ga g0; 0> membership (must be false)

    bool pass(double residual_tol = 1e-10, double coupling_tol = 1e-8) const;
};

// Residuals, kernels, closure dimensions and geometric couplings for every
// step of the schedule.
DarkStateReport verify_dark_states(const HilbertSpace& space,
                                   const ProtocolSchedule& schedule,
                                   const CavityParams& cavity,
                                   int residual_samples = 161,
                                   int geometric_samples = 150001);

}  // namespace cavcnot
