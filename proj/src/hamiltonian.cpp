#include "cavcnot/hamiltonian.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace cavcnot {

namespace {

bool valid_laser_transition(AtomLevel upper, AtomLevel lower) {
    if (upper == AtomLevel::e) {
        return lower == AtomLevel::g0 || lower == AtomLevel::ga;
    }
    if (upper == AtomLevel::u) {
        return lower == AtomLevel::ga || lower == AtomLevel::g1;
    }
    return false;
}

void add_hermitian(Matrix& h, int row, int col, Complex v) {
    h(row, col) += v;
    h(col, row) += std::conj(v);
}

}  // namespace

Matrix interaction_hamiltonian(const HilbertSpace& space,
                               const std::vector<LaserCoupling>& couplings,
                               const CavityParams& cavity) {
    if (cavity.g1 < 0.0 || cavity.g2 < 0.0) {
        throw std::invalid_argument("interaction_hamiltonian: g must be >= 0");
    }
    Matrix h = Matrix::Zero(space.dimension(), space.dimension());

    for (const LaserCoupling& c : couplings) {
        if (c.atom != 1 && c.atom != 2) {
            throw std::invalid_argument("interaction_hamiltonian: atom must be 1 or 2");
        }
        if (!valid_laser_transition(c.upper, c.lower)) {
            throw std::invalid_argument(
                std::string("interaction_hamiltonian: no laser drives ") +
                level_name(c.upper) + "<-" + level_name(c.lower) +
                " (u is laser-only from ga/g1; e<-g1 belongs to the cavity)");
        }
        for (int i = 0; i < space.dimension(); ++i) {
            const BasisState b = space.state_at(i);
            if (space.level_of(b, c.atom) != c.lower) continue;
            BasisState raised = b;
            (c.atom == 1 ? raised.atom1 : raised.atom2) = c.upper;
            add_hermitian(h, space.index_of(raised), i, c.amplitude);
        }
    }

    // Cavity terms g a |e><g1| + h.c. per atom, always present.
    for (int atom = 1; atom <= 2; ++atom) {
        const double g = cavity.g(atom);
        if (g == 0.0) continue;
        for (int i = 0; i < space.dimension(); ++i) {
            const BasisState b = space.state_at(i);
            if (space.level_of(b, atom) != AtomLevel::g1 || b.photons == 0) continue;
            BasisState raised = b;
            (atom == 1 ? raised.atom1 : raised.atom2) = AtomLevel::e;
            raised.photons -= 1;
            add_hermitian(h, space.index_of(raised), i,
                          g * std::sqrt(static_cast<double>(b.photons)));
        }
    }
    return h;
}

Matrix lambda_hamiltonian(const HilbertSpace& space, int atom, double omega_1sti,
                          double omega_asti, double phase) {
    if (atom != 1 && atom != 2) {
        throw std::invalid_argument("lambda_hamiltonian: atom must be 1 or 2");
    }
    if (omega_1sti < 0.0 || omega_asti < 0.0) {
        throw std::invalid_argument(
            "lambda_hamiltonian: amplitudes are magnitudes, must be >= 0");
    }
    Matrix h = Matrix::Zero(space.dimension(), space.dimension());
    const Complex amp_a = omega_asti * std::exp(-kImag * phase);
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisState b = space.state_at(i);
        const AtomLevel l = space.level_of(b, atom);
        if (l != AtomLevel::g1 && l != AtomLevel::ga) continue;
        BasisState raised = b;
        (atom == 1 ? raised.atom1 : raised.atom2) = AtomLevel::u;
        const Complex amp = (l == AtomLevel::g1) ? Complex(omega_1sti) : amp_a;
        add_hermitian(h, space.index_of(raised), i, amp);
    }
    return h;
}

std::vector<BasisState> coupling_closure(const HilbertSpace& space,
                                         const Matrix& h, const BasisState& seed,
                                         double tol) {
    const int dim = space.dimension();
    if (h.rows() != dim || h.cols() != dim) {
        throw std::invalid_argument("coupling_closure: operator/space mismatch");
    }
    std::vector<bool> visited(dim, false);
    std::vector<BasisState> out;
    std::deque<int> frontier;
    const int start = space.index_of(seed);
    frontier.push_back(start);
    visited[start] = true;
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop_front();
        out.push_back(space.state_at(i));
        for (int j = 0; j < dim; ++j) {
            if (visited[j] || std::abs(h(j, i)) <= tol) continue;
            visited[j] = true;
            frontier.push_back(j);
        }
    }
    return out;
}

// ------------------------------ HamiltonianTerms ------------------------------

HamiltonianTerms::HamiltonianTerms(const HilbertSpace& space,
                                   const ProtocolSchedule& schedule,
                                   const CavityParams& cavity)
    : space_(space), schedule_(schedule), cavity_(cavity), dim_(space.dimension()) {
    pulse_pairs_.resize(schedule_.pulses.size());
    pulse_values_.resize(schedule_.pulses.size());
    for (std::size_t p = 0; p < schedule_.pulses.size(); ++p) {
        const DrivePulse& pulse = schedule_.pulses[p];
        if (!valid_laser_transition(pulse.upper, pulse.lower)) {
            throw std::invalid_argument("HamiltonianTerms: invalid pulse transition");
        }
        for (int i = 0; i < dim_; ++i) {
            const BasisState b = space_.state_at(i);
            if (space_.level_of(b, pulse.atom) != pulse.lower) continue;
            BasisState raised = b;
            (pulse.atom == 1 ? raised.atom1 : raised.atom2) = pulse.upper;
            pulse_pairs_[p].push_back(IndexPair{space_.index_of(raised), i, 1.0});
        }
    }
    for (int atom = 1; atom <= 2; ++atom) {
        const double g = cavity.g(atom);
        if (g == 0.0) continue;
        for (int i = 0; i < dim_; ++i) {
            const BasisState b = space_.state_at(i);
            if (space_.level_of(b, atom) != AtomLevel::g1 || b.photons == 0) continue;
            BasisState raised = b;
            (atom == 1 ? raised.atom1 : raised.atom2) = AtomLevel::e;
            raised.photons -= 1;
            cavity_pairs_.push_back(
                IndexPair{space_.index_of(raised), i,
                          g * std::sqrt(static_cast<double>(b.photons))});
        }
    }
}

void HamiltonianTerms::refresh_couplings(double t) const {
    for (std::size_t p = 0; p < schedule_.pulses.size(); ++p) {
        pulse_values_[p] = schedule_.pulses[p].shape.value(t);
    }
}

void HamiltonianTerms::apply(double t, const Vector& in, Vector& out) const {
    refresh_couplings(t);
    out.setZero(dim_);
    for (std::size_t p = 0; p < pulse_pairs_.size(); ++p) {
        const Complex v = pulse_values_[p];
        if (v == Complex(0.0)) continue;
        for (const IndexPair& pair : pulse_pairs_[p]) {
            out(pair.row) += v * in(pair.col);
            out(pair.col) += std::conj(v) * in(pair.row);
        }
    }
    for (const IndexPair& pair : cavity_pairs_) {
        out(pair.row) += pair.weight * in(pair.col);
        out(pair.col) += pair.weight * in(pair.row);
    }
}

void HamiltonianTerms::apply(double t, const Matrix& in, Matrix& out) const {
    refresh_couplings(t);
    out.setZero(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        auto in_col = in.col(j);
        auto out_col = out.col(j);
        for (std::size_t p = 0; p < pulse_pairs_.size(); ++p) {
            const Complex v = pulse_values_[p];
            if (v == Complex(0.0)) continue;
            for (const IndexPair& pair : pulse_pairs_[p]) {
                out_col(pair.row) += v * in_col(pair.col);
                out_col(pair.col) += std::conj(v) * in_col(pair.row);
            }
        }
        for (const IndexPair& pair : cavity_pairs_) {
            out_col(pair.row) += pair.weight * in_col(pair.col);
            out_col(pair.col) += pair.weight * in_col(pair.row);
        }
    }
}

Matrix HamiltonianTerms::matrix(double t) const {
    return interaction_hamiltonian(space_, active_couplings(schedule_, t), cavity_);
}

}  // namespace cavcnot
