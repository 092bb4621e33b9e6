#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavcnot/dynamics.hpp"

#include <iostream>
#include <numbers>

using namespace cavcnot;

namespace {

IntegratorConfig default_config() { return IntegratorConfig{}; }

}  // namespace

TEST_CASE("rk4 on a two-level Rabi flop") {
    // H = omega (|e><0| + h.c.); a quarter Rabi period pi/(2 omega) moves all
    // population from |0> to |e>.
    const double omega = 1.7;
    Eigen::Matrix2cd h;
    h << 0.0, omega, omega, 0.0;
    Eigen::Vector2cd psi(1.0, 0.0);
    auto rhs = [&](double, const Eigen::Vector2cd& y, Eigen::Vector2cd& dy) {
        dy = -kImag * (h * y);
    };
    rk4_propagate(rhs, psi, 0.0, std::numbers::pi / (2.0 * omega), 1e-4);
    CHECK(std::norm(psi(1)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::norm(psi(0)) < 1e-8);
}

TEST_CASE("zero couplings leave the state alone") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule idle = idle_schedule(0.0, 3.0);
    const Vector psi0 = computational_state(space, 1, 1);
    const ProtocolResult r = evolve_schrodinger(space, idle, CavityParams{0.0, 0.0},
                                                psi0, default_config());
    CHECK((r.final_state - psi0).norm() < 1e-14);
    CHECK(r.max_norm_drift < 1e-14);
    // Cavity-only coupling also acts trivially on zero-photon ground states.
    const ProtocolResult rc = evolve_schrodinger(space, idle, CavityParams{25.0, 25.0},
                                                 psi0, default_config());
    CHECK((rc.final_state - psi0).norm() < 1e-14);
}

TEST_CASE("cavity decay of a one-photon state") {
    const HilbertSpace space = build_space(2);
    const double kappa = 0.8, t_end = 2.5;
    const ProtocolSchedule idle = idle_schedule(0.0, t_end);
    LindbladModel model;
    model.kappa = kappa;

    Vector one_photon = Vector::Zero(space.dimension());
    one_photon(space.index_of(AtomLevel::g0, AtomLevel::g0, 1)) = 1.0;
    const Matrix rho0 = one_photon * one_photon.adjoint();

    const ProtocolResult r = evolve_lindblad(space, idle, CavityParams{0.0, 0.0},
                                             model, rho0, default_config());
    CHECK(r.series.photon.back() ==
          doctest::Approx(std::exp(-kappa * t_end)).epsilon(1e-7));
    CHECK(r.max_trace_drift < 1e-10);
    CHECK(r.min_density_eigenvalue > -1e-10);
}

TEST_CASE("lindblad with no channels reproduces unitary populations") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule step1 = single_step_schedule(build_cnot_protocol(10.0, 1.0), 0);
    const CavityParams cavity{25.0, 25.0};
    const Vector psi0 = computational_state(space, 1, 1);

    const ProtocolResult pure =
        evolve_schrodinger(space, step1, cavity, psi0, default_config());
    const LindbladModel closed;  // kappa = 0, no emission
    const ProtocolResult mixed = evolve_lindblad(space, step1, cavity, closed,
                                                 psi0 * psi0.adjoint(), default_config());
    for (const BasisState b : {BasisState{AtomLevel::g1, AtomLevel::g1, 0},
                               BasisState{AtomLevel::g1, AtomLevel::ga, 0},
                               BasisState{AtomLevel::g1, AtomLevel::g0, 0}}) {
        CHECK(pure.final_population(space, b) ==
              doctest::Approx(mixed.final_population(space, b)).epsilon(1e-6));
    }
}

TEST_CASE("single stirap step transfers g1 -> ga on atom 2") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule step1 = single_step_schedule(build_cnot_protocol(10.0, 1.0), 0);
    const CavityParams cavity{25.0, 25.0};
    const Vector psi0 = computational_state(space, 1, 1);
    const ProtocolResult r =
        evolve_schrodinger(space, step1, cavity, psi0, default_config());
    const double transferred =
        r.final_population(space, {AtomLevel::g1, AtomLevel::ga, 0});
    CHECK(transferred >= 0.99);
    CHECK(r.step_diags.size() == 1);
    CHECK(r.step_diags[0].end_overlap == doctest::Approx(transferred).epsilon(1e-9));
    std::cout << "single STIRAP transfer: " << transferred
              << " norm drift: " << r.max_norm_drift << "\n";
}

TEST_CASE("populations of projector sets") {
    const HilbertSpace space = build_space(2);
    const Vector s10 = computational_state(space, 1, 0);
    const int idx10 = space.index_of(AtomLevel::g1, AtomLevel::g0, 0);
    const int idx01 = space.index_of(AtomLevel::g0, AtomLevel::g1, 0);
    const std::vector<Projector> projs = {{"self", {idx10}}, {"other", {idx01}}};
    const RealVector pops = populations(s10, projs);
    CHECK(pops(0) == 1.0);
    CHECK(pops(1) == 0.0);

    Matrix mixed = Matrix::Zero(space.dimension(), space.dimension());
    mixed(idx10, idx10) = 0.5;
    mixed(idx01, idx01) = 0.5;
    const RealVector mixed_pops = populations(mixed, projs);
    CHECK(mixed_pops(0) == 0.5);
    CHECK(mixed_pops(1) == 0.5);

    const std::vector<Projector> overlapping = {{"a", {idx10}}, {"b", {idx10}}};
    CHECK_THROWS_AS(populations(s10, overlapping), std::invalid_argument);
}

TEST_CASE("full ideal protocol: exchange, spectators, hygiene") {
    const HilbertSpace space = build_space(3);
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    const CavityParams cavity{25.0, 25.0};

    const ProtocolResult r10 = run_protocol(space, s, cavity, std::nullopt,
                                            computational_state(space, 1, 0),
                                            default_config());
    const double p11 = r10.final_population(space, {AtomLevel::g1, AtomLevel::g1, 0});
    std::cout << "fig3 |10> -> |11| population: " << p11
              << " norm drift: " << r10.max_norm_drift << "\n";
    CHECK(p11 >= 0.95);
    CHECK(r10.max_norm_drift <= 1e-8);

    // Per-step targets are followed closely.
    REQUIRE(r10.step_diags.size() == 6);
    for (const StepDiagnostics& d : r10.step_diags) {
        CHECK(d.end_overlap >= 0.95);
        std::cout << "  step overlap " << d.end_overlap << " max_photon "
                  << d.max_photon << " max_excited " << d.max_excited << "\n";
    }

    // Excited levels stay nearly empty throughout.
    for (const StepDiagnostics& d : r10.step_diags) CHECK(d.max_excited <= 0.05);

    const ProtocolResult r00 = run_protocol(space, s, cavity, std::nullopt,
                                            computational_state(space, 0, 0),
                                            default_config());
    CHECK(r00.final_population(space, {AtomLevel::g0, AtomLevel::g0, 0}) >= 0.95);

    // Time series columns are populated and norm stays near one.
    CHECK(r00.series.t.size() > 100);
    CHECK(r00.series.populations.rows() ==
          static_cast<Eigen::Index>(r00.series.t.size()));
    for (double n : r00.series.norm_or_trace) CHECK(std::abs(n - 1.0) < 1e-7);
}

TEST_CASE("step refinement converges at fourth order") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule step2 = single_step_schedule(build_cnot_protocol(10.0, 1.0), 1);
    const CavityParams cavity{25.0, 25.0};
    const Vector psi0 = computational_state(space, 1, 0);
    const BasisState target{AtomLevel::ga, AtomLevel::g1, 0};

    std::vector<double> pops;
    for (double h : {1.0 / 100, 1.0 / 200, 1.0 / 400}) {
        IntegratorConfig config;
        config.step = h;
        pops.push_back(evolve_schrodinger(space, step2, cavity, psi0, config)
                           .final_population(space, target));
    }
    const double diff_coarse = std::abs(pops[0] - pops[1]);
    const double diff_fine = std::abs(pops[1] - pops[2]);
    CHECK(diff_fine < diff_coarse);
    CHECK(diff_fine <= 1e-6);
}

TEST_CASE("dissipation in the model selects the lindblad engine") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule step1 = single_step_schedule(build_cnot_protocol(10.0, 1.0), 0);
    const CavityParams cavity{25.0, 25.0};
    const Vector psi0 = computational_state(space, 1, 1);
    IntegratorConfig config;

    LindbladModel lossy;
    lossy.kappa = 0.2;
    const ProtocolResult dissipative =
        run_protocol(space, step1, cavity, lossy, psi0, config);
    CHECK(!dissipative.unitary);
    CHECK(dissipative.final_density.rows() == space.dimension());

    LindbladModel closed;  // zero rates: unitary engine despite the model
    const ProtocolResult unitary =
        run_protocol(space, step1, cavity, closed, psi0, config);
    CHECK(unitary.unitary);
}

TEST_CASE("input validation and failure diagnostics") {
    const HilbertSpace space = build_space(2);
    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    const CavityParams cavity{25.0, 25.0};

    Vector bad = Vector::Zero(space.dimension());
    bad(space.index_of(AtomLevel::ga, AtomLevel::g0, 0)) = 1.0;
    CHECK_THROWS_AS(
        run_protocol(space, s, cavity, std::nullopt, bad, default_config()),
        std::invalid_argument);

    Vector unnormalized = computational_state(space, 0, 0) * 0.5;
    CHECK_THROWS_AS(evolve_schrodinger(space, s, cavity, unnormalized, default_config()),
                    std::invalid_argument);

    // A hopeless step size aborts with a norm-drift diagnostic.
    IntegratorConfig coarse;
    coarse.step = 0.4;
    coarse.record_stride = 1;
    CHECK_THROWS_AS(evolve_schrodinger(space, s, cavity,
                                       computational_state(space, 1, 0), coarse),
                    numerics_error);

    LindbladModel bad_model;
    bad_model.kappa = 1.0;
    bad_model.tau_e = 5.0;
    bad_model.branch_e = {0.5, 0.2, 0.2};
    CHECK_THROWS_AS(bad_model.validate(), std::invalid_argument);

    const Matrix not_density = Matrix::Identity(space.dimension(), space.dimension());
    LindbladModel model;
    model.kappa = 0.1;
    CHECK_THROWS_AS(
        evolve_lindblad(space, s, cavity, model, not_density, default_config()),
        std::invalid_argument);
}
