// statespace.hpp — composite Hilbert space of two five-level atoms and one
// cavity mode, with basis bookkeeping and elementary operator builders.
//
// Basis ordering is lexicographic in (atom1, atom2, photons) with atom levels
// ordered g0 < ga < g1 < e < u, so
//   index = (25*atom1 + 5*atom2)*(n_max+1)*... see index_of().
// This ordering is frozen: file output (dump-basis) relies on it.

#pragma once

#include "cavcnot/types.hpp"

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavcnot {

// The five atomic levels: three ground states (g0, ga, g1) and two excited
// states. |e> is the cavity-coupled excited state, |u> is laser-only.
enum class AtomLevel : int { g0 = 0, ga = 1, g1 = 2, e = 3, u = 4 };

inline constexpr int kNumLevels = 5;

inline bool is_ground(AtomLevel l) { return static_cast<int>(l) < 3; }
inline bool is_excited(AtomLevel l) { return !is_ground(l); }

inline const char* level_name(AtomLevel l) {
    switch (l) {
        case AtomLevel::g0: return "g0";
        case AtomLevel::ga: return "ga";
        case AtomLevel::g1: return "g1";
        case AtomLevel::e: return "e";
        case AtomLevel::u: return "u";
    }
    return "?";
}

struct BasisState {
    AtomLevel atom1 = AtomLevel::g0;
    AtomLevel atom2 = AtomLevel::g0;
    int photons = 0;

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

inline std::string to_string(const BasisState& b) {
    return std::string("|") + level_name(b.atom1) + " " + level_name(b.atom2) +
           "; n=" + std::to_string(b.photons) + ">";
}

// Tensor-product space H(atom1) x H(atom2) x Fock(0..n_max).
class HilbertSpace {
public:
    explicit HilbertSpace(int n_max) : n_max_(n_max) {
        if (n_max < 2) {
            throw std::invalid_argument(
                "HilbertSpace: n_max must be >= 2 (two-photon basis states "
                "such as |g1 g1; n=2> would be unrepresentable)");
        }
    }

    int n_max() const { return n_max_; }
    int fock_dim() const { return n_max_ + 1; }
    int dimension() const { return kNumLevels * kNumLevels * fock_dim(); }

    int index_of(const BasisState& b) const {
        if (b.photons < 0 || b.photons > n_max_) {
            throw std::out_of_range("HilbertSpace::index_of: photons " +
                                    std::to_string(b.photons) +
                                    " outside [0, n_max]");
        }
        const int a1 = static_cast<int>(b.atom1);
        const int a2 = static_cast<int>(b.atom2);
        return (a1 * kNumLevels + a2) * fock_dim() + b.photons;
    }

    int index_of(AtomLevel a1, AtomLevel a2, int photons) const {
        return index_of(BasisState{a1, a2, photons});
    }

    BasisState state_at(int index) const {
        if (index < 0 || index >= dimension()) {
            throw std::out_of_range("HilbertSpace::state_at: index " +
                                    std::to_string(index) + " outside space");
        }
        BasisState b;
        b.photons = index % fock_dim();
        const int atoms = index / fock_dim();
        b.atom2 = static_cast<AtomLevel>(atoms % kNumLevels);
        b.atom1 = static_cast<AtomLevel>(atoms / kNumLevels);
        return b;
    }

    std::vector<BasisState> states() const {
        std::vector<BasisState> out;
        out.reserve(dimension());
        for (int i = 0; i < dimension(); ++i) out.push_back(state_at(i));
        return out;
    }

    AtomLevel level_of(const BasisState& b, int atom) const {
        if (atom != 1 && atom != 2) {
            throw std::invalid_argument("HilbertSpace::level_of: atom must be 1 or 2");
        }
        return atom == 1 ? b.atom1 : b.atom2;
    }

private:
    int n_max_;
};

inline HilbertSpace build_space(int n_max) { return HilbertSpace(n_max); }

// ----------------------------- operator builders -----------------------------

// Cavity annihilation operator: a|s1 s2; n> = sqrt(n)|s1 s2; n-1>.
inline Matrix annihilation(const HilbertSpace& space) {
    Matrix a = Matrix::Zero(space.dimension(), space.dimension());
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisState b = space.state_at(i);
        if (b.photons == 0) continue;
        BasisState lowered = b;
        lowered.photons -= 1;
        a(space.index_of(lowered), i) = std::sqrt(static_cast<double>(b.photons));
    }
    return a;
}

inline Matrix photon_number(const HilbertSpace& space) {
    Matrix n = Matrix::Zero(space.dimension(), space.dimension());
    for (int i = 0; i < space.dimension(); ++i) {
        n(i, i) = static_cast<double>(space.state_at(i).photons);
    }
    return n;
}

// |upper><lower| on the chosen atom, identity on the other atom and the mode.
inline Matrix atomic_transition(const HilbertSpace& space, int atom,
                                AtomLevel upper, AtomLevel lower) {
    if (atom != 1 && atom != 2) {
        throw std::invalid_argument("atomic_transition: atom must be 1 or 2");
    }
    if (!is_excited(upper) || !is_ground(lower)) {
        throw std::invalid_argument(
            std::string("atomic_transition: invalid level pair ") +
            level_name(upper) + "<-" + level_name(lower) +
            " (upper must be e or u, lower a ground state)");
    }
    Matrix op = Matrix::Zero(space.dimension(), space.dimension());
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisState b = space.state_at(i);
        if (space.level_of(b, atom) != lower) continue;
        BasisState raised = b;
        (atom == 1 ? raised.atom1 : raised.atom2) = upper;
        op(space.index_of(raised), i) = 1.0;
    }
    return op;
}

// Projector index set for one atom being in a given level (any photon count,
// any level of the other atom).
inline std::vector<int> level_indices(const HilbertSpace& space, int atom,
                                      AtomLevel level) {
    std::vector<int> out;
    for (int i = 0; i < space.dimension(); ++i) {
        if (space.level_of(space.state_at(i), atom) == level) out.push_back(i);
    }
    return out;
}

// ------------------------------- restrictions --------------------------------

namespace detail {
inline void check_subset(std::span<const int> subset, int dim, const char* who) {
    std::vector<bool> seen(dim, false);
    for (int idx : subset) {
        if (idx < 0 || idx >= dim) {
            throw std::out_of_range(std::string(who) + ": index " +
                                    std::to_string(idx) + " outside space");
        }
        if (seen[idx]) {
            throw std::invalid_argument(std::string(who) + ": duplicate index " +
                                        std::to_string(idx));
        }
        seen[idx] = true;
    }
}
}  // namespace detail

// Principal submatrix in the subset's order.
inline Matrix restricted(const Matrix& op, std::span<const int> subset) {
    detail::check_subset(subset, static_cast<int>(op.rows()), "restricted");
    const int m = static_cast<int>(subset.size());
    Matrix out(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) out(r, c) = op(subset[r], subset[c]);
    return out;
}

inline Vector restricted(const Vector& v, std::span<const int> subset) {
    detail::check_subset(subset, static_cast<int>(v.size()), "restricted");
    Vector out(static_cast<int>(subset.size()));
    for (int r = 0; r < static_cast<int>(subset.size()); ++r) out(r) = v(subset[r]);
    return out;
}

// Scatter a restricted vector back into the full space (zero elsewhere).
inline Vector embedded(const Vector& sub, std::span<const int> subset, int dim) {
    detail::check_subset(subset, dim, "embedded");
    if (sub.size() != static_cast<Eigen::Index>(subset.size())) {
        throw std::invalid_argument("embedded: subvector/subset size mismatch");
    }
    Vector out = Vector::Zero(dim);
    for (int r = 0; r < static_cast<int>(subset.size()); ++r) out(subset[r]) = sub(r);
    return out;
}

inline std::vector<int> indices_of(const HilbertSpace& space,
                                   std::span<const BasisState> states) {
    std::vector<int> out;
    out.reserve(states.size());
    for (const BasisState& b : states) out.push_back(space.index_of(b));
    return out;
}

// ------------------------------ state builders -------------------------------

// Computational basis state |b1 b2; n=0> with b in {0, 1}.
inline Vector computational_state(const HilbertSpace& space, int b1, int b2) {
    if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) {
        throw std::invalid_argument("computational_state: bits must be 0 or 1");
    }
    Vector v = Vector::Zero(space.dimension());
    const AtomLevel a1 = b1 == 0 ? AtomLevel::g0 : AtomLevel::g1;
    const AtomLevel a2 = b2 == 0 ? AtomLevel::g0 : AtomLevel::g1;
    v(space.index_of(a1, a2, 0)) = 1.0;
    return v;
}

// (|00> + |11>)/sqrt(2) with zero photons.
inline Vector bell_state(const HilbertSpace& space) {
    Vector v = Vector::Zero(space.dimension());
    v(space.index_of(AtomLevel::g0, AtomLevel::g0, 0)) = 1.0 / std::numbers::sqrt2;
    v(space.index_of(AtomLevel::g1, AtomLevel::g1, 0)) = 1.0 / std::numbers::sqrt2;
    return v;
}

}  // namespace cavcnot
