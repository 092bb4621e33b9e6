#include "cavcnot/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace cavcnot {

void LindbladModel::validate() const {
    if (kappa < 0.0) throw std::invalid_argument("LindbladModel: kappa < 0");
    auto check_branch = [](const std::array<double, 3>& b, const char* who) {
        double sum = 0.0;
        for (double x : b) {
            if (x < 0.0) {
                throw std::invalid_argument(std::string("LindbladModel: negative "
                                                        "branching ratio for ") +
                                            who);
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::invalid_argument(std::string("LindbladModel: branching "
                                                    "ratios for ") +
                                        who + " must sum to 1");
        }
    };
    if (std::isfinite(tau_e)) {
        if (tau_e <= 0.0) throw std::invalid_argument("LindbladModel: tau_e <= 0");
        check_branch(branch_e, "e");
    }
    if (std::isfinite(tau_u)) {
        if (tau_u <= 0.0) throw std::invalid_argument("LindbladModel: tau_u <= 0");
        check_branch(branch_u, "u");
    }
}

namespace {

void check_projectors(const std::vector<Projector>& projectors, int dim) {
    std::vector<bool> seen(dim, false);
    for (const Projector& p : projectors) {
        for (int idx : p.indices) {
            if (idx < 0 || idx >= dim) {
                throw std::out_of_range("populations: projector index outside space");
            }
            if (seen[idx]) {
                throw std::invalid_argument(
                    "populations: projectors overlap (must be orthogonal)");
            }
            seen[idx] = true;
        }
    }
}

}  // namespace

RealVector populations(const Vector& psi, const std::vector<Projector>& projectors) {
    check_projectors(projectors, static_cast<int>(psi.size()));
    RealVector out(projectors.size());
    for (std::size_t k = 0; k < projectors.size(); ++k) {
        double sum = 0.0;
        for (int idx : projectors[k].indices) sum += std::norm(psi(idx));
        out(static_cast<Eigen::Index>(k)) = sum;
    }
    return out;
}

RealVector populations(const Matrix& rho, const std::vector<Projector>& projectors) {
    check_projectors(projectors, static_cast<int>(rho.rows()));
    RealVector out(projectors.size());
    for (std::size_t k = 0; k < projectors.size(); ++k) {
        double sum = 0.0;
        for (int idx : projectors[k].indices) sum += rho(idx, idx).real();
        out(static_cast<Eigen::Index>(k)) = sum;
    }
    return out;
}

double ProtocolResult::final_population(const HilbertSpace& space,
                                        const BasisState& b) const {
    const int idx = space.index_of(b);
    return unitary ? std::norm(final_state(idx)) : final_density(idx, idx).real();
}

// ----------------------------- shared machinery ------------------------------

namespace {

struct CollapseChannel {
    std::vector<int> to;
    std::vector<int> from;
    std::vector<double> w;
};

std::vector<CollapseChannel> build_channels(const HilbertSpace& space,
                                            const LindbladModel& model) {
    std::vector<CollapseChannel> channels;
    if (model.kappa > 0.0) {
        CollapseChannel cavity;
        for (int i = 0; i < space.dimension(); ++i) {
            const BasisState b = space.state_at(i);
            if (b.photons == 0) continue;
            BasisState lowered = b;
            lowered.photons -= 1;
            cavity.to.push_back(space.index_of(lowered));
            cavity.from.push_back(i);
            cavity.w.push_back(std::sqrt(model.kappa * b.photons));
        }
        channels.push_back(std::move(cavity));
    }
    const AtomLevel grounds[3] = {AtomLevel::g0, AtomLevel::ga, AtomLevel::g1};
    auto add_emission = [&](AtomLevel source, double tau,
                            const std::array<double, 3>& branch) {
        if (!std::isfinite(tau)) return;
        for (int atom = 1; atom <= 2; ++atom) {
            for (int s = 0; s < 3; ++s) {
                if (branch[s] == 0.0) continue;
                CollapseChannel ch;
                const double w = std::sqrt(branch[s] / tau);
                for (int i = 0; i < space.dimension(); ++i) {
                    const BasisState b = space.state_at(i);
                    if (space.level_of(b, atom) != source) continue;
                    BasisState dropped = b;
                    (atom == 1 ? dropped.atom1 : dropped.atom2) = grounds[s];
                    ch.to.push_back(space.index_of(dropped));
                    ch.from.push_back(i);
                    ch.w.push_back(w);
                }
                channels.push_back(std::move(ch));
            }
        }
    };
    add_emission(AtomLevel::e, model.tau_e, model.branch_e);
    add_emission(AtomLevel::u, model.tau_u, model.branch_u);
    return channels;
}

RealVector channel_diagonal(const std::vector<CollapseChannel>& channels, int dim) {
    RealVector d = RealVector::Zero(dim);
    for (const CollapseChannel& ch : channels) {
        for (std::size_t p = 0; p < ch.from.size(); ++p) {
            d(ch.from[p]) += ch.w[p] * ch.w[p];
        }
    }
    return d;
}

std::vector<Projector> tracked_projectors(const HilbertSpace& space) {
    auto one = [&](AtomLevel a1, AtomLevel a2, const std::string& label) {
        return Projector{label, {space.index_of(a1, a2, 0)}};
    };
    return {
        one(AtomLevel::g0, AtomLevel::g0, "pop_00"),
        one(AtomLevel::g0, AtomLevel::g1, "pop_01"),
        one(AtomLevel::g1, AtomLevel::g0, "pop_10"),
        one(AtomLevel::g1, AtomLevel::g1, "pop_11"),
        one(AtomLevel::g0, AtomLevel::ga, "pop_0a"),
        one(AtomLevel::g1, AtomLevel::ga, "pop_1a"),
        one(AtomLevel::ga, AtomLevel::g1, "pop_a1"),
    };
}

std::vector<int> excited_indices(const HilbertSpace& space) {
    std::vector<int> out;
    for (int i = 0; i < space.dimension(); ++i) {
        const BasisState b = space.state_at(i);
        if (is_excited(b.atom1) || is_excited(b.atom2)) out.push_back(i);
    }
    return out;
}

// Cumulative expected-connection targets, one per step, for a given initial
// state decomposed over the basis.
std::vector<Vector> expected_targets(const HilbertSpace& space,
                                     const ProtocolSchedule& schedule,
                                     const Vector& psi0) {
    std::vector<Vector> targets;
    Vector current = psi0;
    for (int n = 0; n < static_cast<int>(schedule.steps.size()); ++n) {
        Vector next = Vector::Zero(space.dimension());
        for (int i = 0; i < space.dimension(); ++i) {
            if (std::abs(current(i)) < 1e-14) continue;
            const ConnectionResult conn =
                expected_connection(schedule, n, space.state_at(i));
            next(space.index_of(conn.output)) += current(i);
        }
        targets.push_back(next);
        current = next;
    }
    return targets;
}

struct Trace {
    const HilbertSpace& space;
    const ProtocolSchedule& schedule;
    std::vector<Projector> tracked;
    std::vector<int> excited;
    RealVector photon_weight;
    std::vector<Vector> targets;

    TimeSeries series;
    std::vector<StepDiagnostics> diags;
    int current_step = 0;
    double max_drift = 0.0;

    Trace(const HilbertSpace& s, const ProtocolSchedule& sched, const Vector& psi0)
        : space(s), schedule(sched), tracked(tracked_projectors(s)),
          excited(excited_indices(s)), targets(expected_targets(s, sched, psi0)) {
        photon_weight.resize(s.dimension());
        for (int i = 0; i < s.dimension(); ++i) {
            photon_weight(i) = static_cast<double>(s.state_at(i).photons);
        }
        diags.resize(sched.steps.size());
        for (const Projector& p : tracked) series.labels.push_back(p.label);
    }

    template <class State>
    double photon_expectation(const State& state) const {
        double sum = 0.0;
        if constexpr (std::is_same_v<State, Vector>) {
            for (int i = 0; i < state.size(); ++i) {
                sum += photon_weight(i) * std::norm(state(i));
            }
        } else {
            for (int i = 0; i < state.rows(); ++i) {
                sum += photon_weight(i) * state(i, i).real();
            }
        }
        return sum;
    }

    template <class State>
    double excited_population(const State& state) const {
        double sum = 0.0;
        for (int idx : excited) {
            if constexpr (std::is_same_v<State, Vector>) {
                sum += std::norm(state(idx));
            } else {
                sum += state(idx, idx).real();
            }
        }
        return sum;
    }

    template <class State>
    double target_overlap(int step, const State& state) const {
        const Vector& target = targets[step];
        if constexpr (std::is_same_v<State, Vector>) {
            return std::norm(target.dot(state));
        } else {
            return (target.adjoint() * state * target)(0).real();
        }
    }

    // Per-integration-step bookkeeping: step-window maxima and end overlaps.
    template <class State>
    void after_step(double t, const State& state) {
        if (current_step >= static_cast<int>(schedule.steps.size())) return;
        const StepSpec& step = schedule.steps[current_step];
        if (t >= step.window_begin - 1e-12) {
            StepDiagnostics& d = diags[current_step];
            d.max_photon = std::max(d.max_photon, photon_expectation(state));
            d.max_excited = std::max(d.max_excited, excited_population(state));
        }
        if (t >= step.window_end - 1e-12) {
            diags[current_step].end_overlap = target_overlap(current_step, state);
            ++current_step;
        }
    }

    template <class State>
    void record(double t, const State& state, double norm_or_trace) {
        series.t.push_back(t);
        series.norm_or_trace.push_back(norm_or_trace);
        series.photon.push_back(photon_expectation(state));
        const RealVector pop = populations(state, tracked);
        const Eigen::Index row = static_cast<Eigen::Index>(series.t.size()) - 1;
        if (series.populations.rows() < row + 1) {
            series.populations.conservativeResize(
                std::max<Eigen::Index>(2 * (row + 1), 64),
                static_cast<Eigen::Index>(tracked.size()));
        }
        series.populations.row(row) = pop.transpose();
    }

    void finish(ProtocolResult& result) {
        series.populations.conservativeResize(
            static_cast<Eigen::Index>(series.t.size()),
            static_cast<Eigen::Index>(tracked.size()));
        result.series = std::move(series);
        result.step_diags = std::move(diags);
    }
};

long step_count(const ProtocolSchedule& schedule, double h) {
    const double span = schedule.t_end - schedule.t_begin;
    if (span <= 0.0) throw std::invalid_argument("schedule has empty time span");
    return static_cast<long>(std::ceil(span / h - 1e-9));
}

}  // namespace

// ------------------------------ unitary engine -------------------------------

ProtocolResult evolve_schrodinger(const HilbertSpace& space,
                                  const ProtocolSchedule& schedule,
                                  const CavityParams& cavity, const Vector& psi0,
                                  const IntegratorConfig& config) {
    config.validate();
    if (psi0.size() != space.dimension()) {
        throw std::invalid_argument("evolve_schrodinger: state/space mismatch");
    }
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_schrodinger: psi0 is not normalized");
    }

    const HamiltonianTerms terms(space, schedule, cavity);
    Trace trace(space, schedule, psi0);

    Vector psi = psi0;
    Vector k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size());
    Vector tmp(psi.size()), hbuf(psi.size());
    auto rhs = [&](double t, const Vector& y, Vector& dy) {
        terms.apply(t, y, hbuf);
        dy = -kImag * hbuf;
    };

    const double h = config.step;
    const long nsteps = step_count(schedule, h);
    trace.record(schedule.t_begin, psi, psi.norm());
    for (long i = 0; i < nsteps; ++i) {
        const double t = schedule.t_begin + i * h;
        const double dt = std::min(h, schedule.t_end - t);
        rhs(t, psi, k1);
        tmp = psi + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = psi + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = psi + dt * k3;
        rhs(t + dt, tmp, k4);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double t_new = schedule.t_begin + (i + 1) * h;
        trace.after_step(t_new, psi);
        if ((i + 1) % config.record_stride == 0 || i + 1 == nsteps) {
            const double norm = psi.norm();
            const double drift = std::abs(1.0 - norm);
            trace.max_drift = std::max(trace.max_drift, drift);
            if (drift > config.norm_tol) {
                std::ostringstream msg;
                msg << "evolve_schrodinger: norm drift " << drift << " exceeds "
                    << config.norm_tol << " at t=" << t_new
                    << " (step size too large for the couplings?)";
                throw numerics_error(msg.str());
            }
            trace.record(std::min(t_new, schedule.t_end), psi, norm);
        }
    }

    ProtocolResult result;
    result.unitary = true;
    result.final_state = std::move(psi);
    result.max_norm_drift = trace.max_drift;
    trace.finish(result);
    return result;
}

// ------------------------------ lindblad engine -------------------------------

ProtocolResult evolve_lindblad(const HilbertSpace& space,
                               const ProtocolSchedule& schedule,
                               const CavityParams& cavity,
                               const LindbladModel& model, const Matrix& rho0,
                               const IntegratorConfig& config) {
    config.validate();
    model.validate();
    const int dim = space.dimension();
    if (rho0.rows() != dim || rho0.cols() != dim) {
        throw std::invalid_argument("evolve_lindblad: density/space mismatch");
    }
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("evolve_lindblad: rho0 is not Hermitian");
    }
    if (std::abs(rho0.trace().real() - 1.0) > 1e-9) {
        throw std::invalid_argument("evolve_lindblad: rho0 trace != 1");
    }
    {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(rho0, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -1e-10) {
            throw std::invalid_argument("evolve_lindblad: rho0 is not positive");
        }
    }

    const HamiltonianTerms terms(space, schedule, cavity);
    const std::vector<CollapseChannel> channels = build_channels(space, model);
    const RealVector diag = channel_diagonal(channels, dim);

    // Expected-connection targets need a pure reference; use the diagonal
    // amplitudes of rho0 (exact for pure inputs, diagnostic-only otherwise).
    Vector seed(dim);
    for (int i = 0; i < dim; ++i) seed(i) = std::sqrt(std::max(0.0, rho0(i, i).real()));
    if (seed.norm() > 0) seed /= seed.norm();
    Trace trace(space, schedule, seed);

    Matrix rho = rho0;
    Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim);
    Matrix tmp(dim, dim), hbuf(dim, dim);

    auto rhs = [&](double t, const Matrix& y, Matrix& dy) {
        terms.apply(t, y, hbuf);                    // hbuf = H y
        dy = -kImag * (hbuf - hbuf.adjoint());      // -i [H, y] for Hermitian y
        for (const CollapseChannel& ch : channels) {
            const std::size_t m = ch.from.size();
            for (std::size_t p = 0; p < m; ++p) {
                for (std::size_t q = 0; q < m; ++q) {
                    dy(ch.to[p], ch.to[q]) +=
                        ch.w[p] * ch.w[q] * y(ch.from[p], ch.from[q]);
                }
            }
        }
        for (int j = 0; j < dim; ++j) {
            for (int i = 0; i < dim; ++i) {
                dy(i, j) -= 0.5 * (diag(i) + diag(j)) * y(i, j);
            }
        }
    };

    auto min_eigenvalue = [&](const Matrix& m) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    };

    double min_eig = min_eigenvalue(rho0);
    const double h = config.step;
    const long nsteps = step_count(schedule, h);
    trace.record(schedule.t_begin, rho, rho.trace().real());
    for (long i = 0; i < nsteps; ++i) {
        const double t = schedule.t_begin + i * h;
        const double dt = std::min(h, schedule.t_end - t);
        rhs(t, rho, k1);
        tmp = rho + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = rho + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = rho + dt * k3;
        rhs(t + dt, tmp, k4);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double t_new = schedule.t_begin + (i + 1) * h;
        const int step_before = trace.current_step;
        trace.after_step(t_new, rho);
        const bool crossed_window = trace.current_step != step_before;
        if (crossed_window || i + 1 == nsteps) {
            min_eig = std::min(min_eig, min_eigenvalue(rho));
            if (min_eig < -config.positivity_tol) {
                std::ostringstream msg;
                msg << "evolve_lindblad: density matrix negativity " << min_eig
                    << " exceeds tolerance at t=" << t_new;
                throw numerics_error(msg.str());
            }
        }
        if ((i + 1) % config.record_stride == 0 || i + 1 == nsteps) {
            const double tr = rho.trace().real();
            const double drift = std::abs(1.0 - tr);
            trace.max_drift = std::max(trace.max_drift, drift);
            if (drift > config.trace_tol) {
                std::ostringstream msg;
                msg << "evolve_lindblad: trace drift " << drift << " exceeds "
                    << config.trace_tol << " at t=" << t_new;
                throw numerics_error(msg.str());
            }
            trace.record(std::min(t_new, schedule.t_end), rho, tr);
        }
    }

    ProtocolResult result;
    result.unitary = false;
    result.final_density = std::move(rho);
    result.max_trace_drift = trace.max_drift;
    result.min_density_eigenvalue = min_eig;
    trace.finish(result);
    return result;
}

// -------------------------------- front end ----------------------------------

ProtocolResult run_protocol(const HilbertSpace& space,
                            const ProtocolSchedule& schedule,
                            const CavityParams& cavity,
                            const std::optional<LindbladModel>& model,
                            const Vector& psi0, const IntegratorConfig& config) {
    if (psi0.size() != space.dimension()) {
        throw std::invalid_argument("run_protocol: state/space mismatch");
    }
    for (int i = 0; i < space.dimension(); ++i) {
        if (std::abs(psi0(i)) < 1e-12) continue;
        const BasisState b = space.state_at(i);
        const bool computational =
            (b.atom1 == AtomLevel::g0 || b.atom1 == AtomLevel::g1) &&
            (b.atom2 == AtomLevel::g0 || b.atom2 == AtomLevel::g1) && b.photons == 0;
        if (!computational) {
            throw std::invalid_argument(
                "run_protocol: initial state must be supported on computational "
                "(g0/g1) levels with zero photons; offending component " +
                to_string(b));
        }
    }
    if (model.has_value() && model->any_dissipation()) {
        const Matrix rho0 = psi0 * psi0.adjoint();
        return evolve_lindblad(space, schedule, cavity, *model, rho0, config);
    }
    return evolve_schrodinger(space, schedule, cavity, psi0, config);
}

}  // namespace cavcnot
