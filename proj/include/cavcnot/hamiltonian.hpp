// hamiltonian.hpp — assembly of the resonant interaction-picture Hamiltonian
//
//   H(t) = sum_i Omega_i(t) |upper_i><lower_i|  (active laser couplings)
//        + g(1) a |e(1)><g1(1)| + g(2) a |e(2)><g1(2)|
//        + h.c.
//
// plus the coupling-graph closure used to audit the block structure of H.

#pragma once

#include "cavcnot/pulses.hpp"
#include "cavcnot/statespace.hpp"
#include "cavcnot/types.hpp"

#include <vector>

namespace cavcnot {

// Dense H for a fixed set of evaluated laser couplings.  The cavity terms are
// always present.  Hermitian by construction (conjugate entries added in
// pairs).  Rejects couplings outside the four physical laser transitions
// e<-g0, e<-ga, u<-ga, u<-g1; in particular |u> is never cavity-coupled and
// e<-g1 is reserved for the cavity mode.
Matrix interaction_hamiltonian(const HilbertSpace& space,
                               const std::vector<LaserCoupling>& couplings,
                               const CavityParams& cavity);

// Three-level lambda Hamiltonian on one atom,
//   H = omega_1sti |u><g1| + e^{-i phase} omega_asti |u><ga| + h.c.,
// identity elsewhere.  The phase sits on the |u><ga| term so that the
// analytic lambda dark state spans the kernel on span{g1, ga, u}.
Matrix lambda_hamiltonian(const HilbertSpace& space, int atom,
                          double omega_1sti, double omega_asti, double phase);

// Breadth-first closure of seed under nonzero matrix elements of H, in
// discovery order (seed first).
std::vector<BasisState> coupling_closure(const HilbertSpace& space,
                                         const Matrix& h, const BasisState& seed,
                                         double tol = 1e-12);

// Precomputed sparse structure of the schedule's Hamiltonian for fast
// repeated application inside the propagators.  matrix(t) and apply(t, ...)
// agree entrywise with interaction_hamiltonian at active_couplings(s, t).
class HamiltonianTerms {
public:
    HamiltonianTerms(const HilbertSpace& space, const ProtocolSchedule& schedule,
                     const CavityParams& cavity);

    // out = H(t) * in; out is overwritten.
    void apply(double t, const Vector& in, Vector& out) const;
    void apply(double t, const Matrix& in, Matrix& out) const;

    Matrix matrix(double t) const;

    int dimension() const { return dim_; }
    const HilbertSpace& space() const { return space_; }
    const ProtocolSchedule& schedule() const { return schedule_; }

private:
    struct IndexPair {
        int row;  // upper-level state
        int col;  // lower-level state
        double weight;
    };

    void refresh_couplings(double t) const;

    HilbertSpace space_;
    ProtocolSchedule schedule_;
    CavityParams cavity_;
    int dim_;
    std::vector<std::vector<IndexPair>> pulse_pairs_;  // one list per pulse
    std::vector<IndexPair> cavity_pairs_;              // weight includes g*sqrt(n)
    mutable std::vector<Complex> pulse_values_;        // scratch, refreshed per t
};

}  // namespace cavcnot
