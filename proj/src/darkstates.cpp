#include "cavcnot/darkstates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavcnot {

Eigen::Vector2cd lambda_dark_state(double omega_asti, double omega_1sti,
                                   double phase) {
    if (omega_asti < 0.0 || omega_1sti < 0.0) {
        throw std::invalid_argument(
            "lambda_dark_state: amplitudes are magnitudes, must be >= 0");
    }
    if (omega_asti == 0.0 && omega_1sti == 0.0) {
        throw std::invalid_argument("lambda_dark_state: both amplitudes are zero");
    }
    Eigen::Vector2cd v;
    v(0) = omega_asti;
    v(1) = -std::exp(kImag * phase) * omega_1sti;
    v /= v.norm();
    return v;
}

Vector embed_atom2_pair(const HilbertSpace& space, AtomLevel atom1, int photons,
                        const Eigen::Vector2cd& coeffs) {
    Vector out = Vector::Zero(space.dimension());
    out(space.index_of(atom1, AtomLevel::g1, photons)) = coeffs(0);
    out(space.index_of(atom1, AtomLevel::ga, photons)) = coeffs(1);
    return out;
}

Vector transfer_dark_state(const HilbertSpace& space, const LaserAssignment& lasers,
                           Complex omega1, Complex omega2, double g1, double g2) {
    const Complex c_final = g1 * omega2;       // |L1 g1; 0>
    const Complex c_initial = g2 * omega1;     // |g1 L2; 0>
    const Complex c_photon = -omega1 * omega2; // |g1 g1; 1>
    const double norm = std::sqrt(std::norm(c_final) + std::norm(c_initial) +
                                  std::norm(c_photon));
    if (norm == 0.0) {
        throw std::invalid_argument("transfer_dark_state: all coefficients vanish");
    }
    Vector out = Vector::Zero(space.dimension());
    out(space.index_of(lasers.atom1, AtomLevel::g1, 0)) = c_final / norm;
    out(space.index_of(AtomLevel::g1, lasers.atom2, 0)) = c_initial / norm;
    out(space.index_of(AtomLevel::g1, AtomLevel::g1, 1)) = c_photon / norm;
    return out;
}

Vector spectator_dark_state(const HilbertSpace& space, const LaserAssignment& lasers,
                            int k, Complex omega1, Complex omega2, double g1,
                            double g2) {
    const AtomLevel l1 = lasers.atom1;
    const AtomLevel n1 = lasers.idle_level(1);
    const AtomLevel l2 = lasers.atom2;
    const AtomLevel n2 = lasers.idle_level(2);
    const double root2 = std::numbers::sqrt2;

    Vector out = Vector::Zero(space.dimension());
    switch (k) {
        case 2:
            out(space.index_of(n1, AtomLevel::g1, 1)) = omega2;
            out(space.index_of(n1, l2, 0)) = -g2;
            break;
        case 3:
            out(space.index_of(AtomLevel::g1, n2, 1)) = omega1;
            out(space.index_of(l1, n2, 0)) = -g1;
            break;
        case 4:
            out(space.index_of(n1, n2, 0)) = 1.0;
            break;
        case 5:
            out(space.index_of(l1, l2, 0)) = root2 * g1 * g2;
            out(space.index_of(AtomLevel::g1, l2, 1)) = -root2 * g2 * omega1;
            out(space.index_of(l1, AtomLevel::g1, 1)) = -root2 * g1 * omega2;
            out(space.index_of(AtomLevel::g1, AtomLevel::g1, 2)) = omega1 * omega2;
            break;
        default:
            throw std::invalid_argument("spectator_dark_state: k must be in 2..5");
    }
    const double norm = out.norm();
    if (norm == 0.0) {
        throw std::invalid_argument("spectator_dark_state: degenerate input");
    }
    return out / norm;
}

Matrix numeric_kernel(const Matrix& h, double tol) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("numeric_kernel: matrix must be square");
    }
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + h.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("numeric_kernel: matrix must be Hermitian");
    }
    Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
    if (smax == 0.0) return Matrix::Identity(h.rows(), h.cols());

    int kdim = 0;
    for (int i = 0; i < sigma.size(); ++i) {
        if (sigma(i) < tol * smax) ++kdim;
    }
    return svd.matrixV().rightCols(kdim);
}

FamilyBuilders dark_family_builders(const HilbertSpace& space,
                                    const ProtocolSchedule& schedule,
                                    const CavityParams& cavity, int step_index) {
    if (step_index < 0 || step_index >= static_cast<int>(schedule.steps.size())) {
        throw std::out_of_range("dark_family_builders: bad step index");
    }
    const StepSpec& step = schedule.steps[step_index];

    FamilyBuilders out;
    auto constant_member = [&](const BasisState& b, const std::string& label) {
        Vector v = Vector::Zero(space.dimension());
        v(space.index_of(b)) = 1.0;
        out.build.push_back([v](double) { return v; });
        out.labels.push_back(label);
    };

    if (step.kind == StepKind::lambda_stirap) {
        const DrivePulse first = schedule.pulses[step.first_pulse];
        const DrivePulse second = schedule.pulses[step.second_pulse];
        // Relative phase of the u<-g1 pulse w.r.t. the u<-ga pulse.
        const double rel_phase = (first.lower == AtomLevel::g1)
                                     ? first.shape.phase - second.shape.phase
                                     : second.shape.phase - first.shape.phase;
        const PulseShape shape_a =
            (first.lower == AtomLevel::ga ? first : second).shape;
        const PulseShape shape_1 =
            (first.lower == AtomLevel::g1 ? first : second).shape;
        for (AtomLevel atom1 : {AtomLevel::g0, AtomLevel::g1}) {
            out.build.push_back([&space, atom1, shape_a, shape_1,
                                 rel_phase](double t) {
                return embed_atom2_pair(
                    space, atom1, 0,
                    lambda_dark_state(shape_a.envelope(t), shape_1.envelope(t),
                                      rel_phase));
            });
            out.labels.push_back(std::string("lambda_dark(atom1=") +
                                 level_name(atom1) + ")");
        }
        constant_member({AtomLevel::g0, AtomLevel::g0, 0}, "const(g0 g0)");
        constant_member({AtomLevel::g1, AtomLevel::g0, 0}, "const(g1 g0)");
        return out;
    }

    const LaserAssignment lasers = cavity_step_assignment(schedule, step_index);
    const bool first_is_atom1 = schedule.pulses[step.first_pulse].atom == 1;
    const PulseShape pulse1 =
        schedule.pulses[first_is_atom1 ? step.first_pulse : step.second_pulse].shape;
    const PulseShape pulse2 =
        schedule.pulses[first_is_atom1 ? step.second_pulse : step.first_pulse].shape;
    const double g1 = cavity.g1;
    const double g2 = cavity.g2;

    out.build.push_back([&space, lasers, pulse1, pulse2, g1, g2](double t) {
        return transfer_dark_state(space, lasers, pulse1.value(t), pulse2.value(t),
                                   g1, g2);
    });
    out.labels.push_back("transfer_dark");
    for (int k = 2; k <= 5; ++k) {
        out.build.push_back([&space, lasers, pulse1, pulse2, g1, g2, k](double t) {
            return spectator_dark_state(space, lasers, k, pulse1.value(t),
                                        pulse2.value(t), g1, g2);
        });
        out.labels.push_back("spectator_dark(" + std::to_string(k) + ")");
    }
    constant_member({AtomLevel::g1, AtomLevel::g1, 0}, "const(g1 g1)");
    constant_member({lasers.idle_level(1), AtomLevel::g1, 0}, "const(N1 g1)");
    constant_member({AtomLevel::g1, lasers.idle_level(2), 0}, "const(g1 N2)");
    return out;
}

DarkFamily protocol_dark_family(const HilbertSpace& space,
                                const ProtocolSchedule& schedule,
                                const CavityParams& cavity, int step_index,
                                int samples) {
    if (samples < 3) {
        throw std::invalid_argument("protocol_dark_family: need at least 3 samples");
    }
    const FamilyBuilders builders =
        dark_family_builders(space, schedule, cavity, step_index);
    const StepSpec& step = schedule.steps[step_index];

    DarkFamily family;
    family.labels = builders.labels;
    family.times.resize(samples);
    const double dt = (step.window_end - step.window_begin) / (samples - 1);
    for (int j = 0; j < samples; ++j) {
        family.times[j] = step.window_begin + j * dt;
    }
    for (const auto& build : builders.build) {
        std::vector<Vector> traj(samples);
        for (int j = 0; j < samples; ++j) traj[j] = build(family.times[j]);
        family.members.push_back(std::move(traj));
    }
    return family;
}

void fix_gauge(DarkFamily& family) {
    for (auto& traj : family.members) {
        for (std::size_t j = 1; j < traj.size(); ++j) {
            const Complex overlap = traj[j - 1].dot(traj[j]);
            const double mag = std::abs(overlap);
            if (mag < 0.5) {
                throw std::runtime_error(
                    "fix_gauge: successive overlap below 0.5; grid too coarse for "
                    "gauge continuity");
            }
            traj[j] *= std::conj(overlap) / mag;
        }
    }
}

RealMatrix geometric_couplings(const DarkFamily& family) {
    const int m = family.size();
    const int n = family.samples();
    if (n < 3) {
        throw std::invalid_argument("geometric_couplings: need at least 3 samples");
    }
    const double dt = family.times[1] - family.times[0];
    RealMatrix out = RealMatrix::Zero(m, m);
    Vector deriv;
    for (int k = 0; k < m; ++k) {
        const auto& traj = family.members[k];
        for (int j = 1; j + 1 < n; ++j) {
            deriv = (traj[j + 1] - traj[j - 1]) / (2.0 * dt);
            for (int kp = 0; kp < m; ++kp) {
                const double mag = std::abs(family.members[kp][j].dot(deriv));
                out(kp, k) = std::max(out(kp, k), mag);
            }
        }
    }
    return out;
}

namespace {

// One streaming pass of the centered-difference coupling suprema.  Only three
// grid slices are alive at a time, so very fine grids stay cheap.
RealMatrix streamed_couplings(const FamilyBuilders& builders, double t_begin,
                              double t_end, int samples) {
    const int m = builders.size();
    const double dt = (t_end - t_begin) / (samples - 1);
    std::vector<Vector> prev(m), cur(m), next(m);
    for (int k = 0; k < m; ++k) {
        prev[k] = builders.build[k](t_begin);
        cur[k] = builders.build[k](t_begin + dt);
        const Complex overlap = prev[k].dot(cur[k]);
        cur[k] *= std::conj(overlap) / std::abs(overlap);
    }
    RealMatrix out = RealMatrix::Zero(m, m);
    Vector deriv;
    for (int j = 1; j + 1 < samples; ++j) {
        const double t_next = t_begin + (j + 1) * dt;
        for (int k = 0; k < m; ++k) {
            next[k] = builders.build[k](t_next);
            const Complex overlap = cur[k].dot(next[k]);
            next[k] *= std::conj(overlap) / std::abs(overlap);
        }
        for (int k = 0; k < m; ++k) {
            deriv = (next[k] - prev[k]) / (2.0 * dt);
            for (int kp = 0; kp < m; ++kp) {
                out(kp, k) = std::max(out(kp, k), std::abs(cur[kp].dot(deriv)));
            }
        }
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    return out;
}

}  // namespace

GeometricAudit audit_geometric_couplings(const HilbertSpace& space,
                                         const ProtocolSchedule& schedule,
                                         const CavityParams& cavity, int step_index,
                                         int samples, double floor) {
    if (samples < 3) {
        throw std::invalid_argument("audit_geometric_couplings: need >= 3 samples");
    }
    const FamilyBuilders builders =
        dark_family_builders(space, schedule, cavity, step_index);
    const StepSpec& step = schedule.steps[step_index];

    GeometricAudit audit;
    audit.couplings =
        streamed_couplings(builders, step.window_begin, step.window_end, samples);
    audit.couplings_halved = streamed_couplings(builders, step.window_begin,
                                                step.window_end, 2 * samples - 1);
    audit.converged = true;
    for (int i = 0; i < audit.couplings.rows(); ++i) {
        for (int j = 0; j < audit.couplings.cols(); ++j) {
            const double a = audit.couplings(i, j);
            const double b = audit.couplings_halved(i, j);
            if (std::min(a, b) <= floor) continue;  // at the discretization floor
            if (std::abs(a - b) > 0.1 * std::max(a, b)) audit.converged = false;
        }
    }
    return audit;
}

bool DarkStateReport::pass(double residual_tol, double coupling_tol) const {
    if (block_dim_stationary != 1 || block_dim_transfer != 7 ||
        block_dim_spectator != 16) {
        return false;
    }
    if (!transfer_block_has_a1 || transfer_block_has_a0) return false;
    for (const DarkStateStepReport& s : steps) {
        if (s.max_residual > residual_tol) return false;
        if (s.max_excited_amplitude != 0.0) return false;
        if (s.max_coupling > coupling_tol || !s.coupling_converged) return false;
        if (s.kernel_dimension != -1 && s.kernel_dimension != 3) return false;
    }
    return true;
}

DarkStateReport verify_dark_states(const HilbertSpace& space,
                                   const ProtocolSchedule& schedule,
                                   const CavityParams& cavity,
                                   int residual_samples, int geometric_samples) {
    DarkStateReport report;
    const HamiltonianTerms terms(space, schedule, cavity);

    std::vector<int> excited;
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisState b = space.state_at(i);
        if (is_excited(b.atom1) || is_excited(b.atom2)) excited.push_back(i);
    }

    Vector hv(space.dimension());
    for (int n = 0; n < static_cast<int>(schedule.steps.size()); ++n) {
        const StepSpec& step = schedule.steps[n];
        DarkStateStepReport sr;
        sr.step_index = n;
        sr.kind = step.kind == StepKind::lambda_stirap ? "lambda" : "cavity";

        const FamilyBuilders builders =
            dark_family_builders(space, schedule, cavity, n);
        const double dt =
            (step.window_end - step.window_begin) / (residual_samples - 1);
        for (int j = 0; j < residual_samples; ++j) {
            const double t = step.window_begin + j * dt;
            const double hnorm = spectral_norm_hermitian(terms.matrix(t));
            for (const auto& build : builders.build) {
                const Vector v = build(t);
                terms.apply(t, v, hv);
                sr.max_residual = std::max(sr.max_residual, hv.norm() / hnorm);
                for (int idx : excited) {
                    sr.max_excited_amplitude =
                        std::max(sr.max_excited_amplitude, std::abs(v(idx)));
                }
            }
        }

        const GeometricAudit audit =
            audit_geometric_couplings(space, schedule, cavity, n, geometric_samples);
        sr.max_coupling = audit.max_coupling();
        sr.coupling_converged = audit.converged;

        if (step.kind == StepKind::cavity_stirap) {
            // Kernel dimension of the transfer block at a generic mid-step time
            // (midway between the two pulse peaks nearest this window; a
            // bridged pulse peaks at whichever plateau edge lies inside).
            const LaserAssignment lasers = cavity_step_assignment(schedule, n);
            auto peak_in_window = [&](const PulseShape& p) {
                return (p.center >= step.window_begin && p.center <= step.window_end)
                           ? p.center
                           : p.center2;
            };
            const double t_mid =
                0.5 * (peak_in_window(schedule.pulses[step.first_pulse].shape) +
                       peak_in_window(schedule.pulses[step.second_pulse].shape));
            const Matrix h = terms.matrix(t_mid);
            std::vector<BasisState> block =
                coupling_closure(space, h, {AtomLevel::g1, lasers.atom2, 0});
            block.push_back({lasers.idle_level(1), AtomLevel::g1, 0});
            block.push_back({AtomLevel::g1, lasers.idle_level(2), 0});
            const Matrix h_block = restricted(h, indices_of(space, block));
            sr.kernel_dimension = static_cast<int>(numeric_kernel(h_block).cols());
        }
        report.steps.push_back(sr);
    }

    // Closure audit at generic amplitudes for the first cavity step.
    int cavity_index = -1;
    for (int n = 0; n < static_cast<int>(schedule.steps.size()); ++n) {
        if (schedule.steps[n].kind == StepKind::cavity_stirap) {
            cavity_index = n;
            break;
        }
    }
    if (cavity_index >= 0) {
        const LaserAssignment lasers = cavity_step_assignment(schedule, cavity_index);
        const std::vector<LaserCoupling> generic = {
            {1, lasers.atom1, AtomLevel::e, 1.0},
            {2, lasers.atom2, AtomLevel::e, 1.0},
        };
        const Matrix h = interaction_hamiltonian(space, generic, CavityParams{2.0, 2.0});
        report.block_dim_stationary = static_cast<int>(
            coupling_closure(space, h, {AtomLevel::g1, AtomLevel::g1, 0}).size());
        const auto chain =
            coupling_closure(space, h, {AtomLevel::g1, lasers.atom2, 0});
        report.block_dim_transfer = static_cast<int>(chain.size()) + 2;
        for (const BasisState& b : chain) {
            if (b == BasisState{AtomLevel::ga, AtomLevel::g1, 0}) {
                report.transfer_block_has_a1 = true;
            }
            if (b == BasisState{AtomLevel::ga, AtomLevel::g0, 0}) {
                report.transfer_block_has_a0 = true;
            }
        }
        std::vector<int> spectator;
        for (const AtomLevel a1 : {lasers.atom1, lasers.idle_level(1)}) {
            for (const AtomLevel a2 : {lasers.atom2, lasers.idle_level(2)}) {
                const BasisState seed{a1, a2, 0};
                for (const BasisState& b : coupling_closure(space, h, seed)) {
                    const int idx = space.index_of(b);
                    if (std::find(spectator.begin(), spectator.end(), idx) ==
                        spectator.end()) {
                        spectator.push_back(idx);
                    }
                }
            }
        }
        report.block_dim_spectator = static_cast<int>(spectator.size());
    }
    return report;
}

ConnectionResult expected_connection(const ProtocolSchedule& schedule,
                                     int step_index, const BasisState& input) {
    if (step_index < 0 || step_index >= static_cast<int>(schedule.steps.size())) {
        throw std::out_of_range("expected_connection: bad step index");
    }
    const StepSpec& step = schedule.steps[step_index];
    ConnectionResult res{input, true};
    if (input.photons != 0) return res;

    if (step.kind == StepKind::lambda_stirap) {
        const int atom = schedule.pulses[step.first_pulse].atom;
        const AtomLevel level = atom == 1 ? input.atom1 : input.atom2;
        if (level != AtomLevel::g1 && level != AtomLevel::ga) return res;
        const AtomLevel swapped =
            level == AtomLevel::g1 ? AtomLevel::ga : AtomLevel::g1;
        (atom == 1 ? res.output.atom1 : res.output.atom2) = swapped;
        res.spectator = false;
        return res;
    }

    // Cavity step: population leaves the state addressed by the second pulse
    // and arrives at the one addressed by the first (counterintuitive order).
    const DrivePulse& first = schedule.pulses[step.first_pulse];
    const DrivePulse& second = schedule.pulses[step.second_pulse];
    const AtomLevel at_second = second.atom == 1 ? input.atom1 : input.atom2;
    const AtomLevel at_first = first.atom == 1 ? input.atom1 : input.atom2;
    if (at_second != second.lower || at_first != AtomLevel::g1) return res;
    (second.atom == 1 ? res.output.atom1 : res.output.atom2) = AtomLevel::g1;
    (first.atom == 1 ? res.output.atom1 : res.output.atom2) = first.lower;
    res.spectator = false;
    return res;
}

}  // namespace cavcnot
