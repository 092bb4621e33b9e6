#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavcnot/config.hpp"
#include "cavcnot/io.hpp"

#include <sstream>

using namespace cavcnot;

TEST_CASE("defaults reproduce the reference parameter point") {
    const RunConfig config = parse_config("");
    CHECK(config.omega_max_tp == 10.0);
    CHECK(config.g_tp == 25.0);
    CHECK(config.delay_tp == 1.2);
    CHECK(config.kappa_tp == 0.0);
    CHECK(config.n_max == 3);
    CHECK(config.h_tp == 1.0 / 200);
    CHECK(config.input == "all");
    CHECK(!config.merged);
    CHECK(std::isinf(config.tau_e_tp));
}

TEST_CASE("key parsing, comments, scientific notation") {
    const RunConfig config = parse_config(
        "# reference point\n"
        "omega_max_tp = 10\n"
        "g_tp = 25\n"
        "kappa_tp = 5e-1   # cavity loss\n"
        "phi_3 = 0.25\n"
        "input = bell\n"
        "merged = true\n"
        "tau_e_tp = inf\n");
    CHECK(config.kappa_tp == 0.5);
    CHECK(config.phases[2] == 0.25);
    CHECK(config.input == "bell");
    CHECK(config.merged);
}

TEST_CASE("errors name the key and line") {
    try {
        parse_config("omega_max_tp = 10\nwhatever = 3\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("whatever") != std::string::npos);
    }

    try {
        parse_config("g_tp = -1\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("g_tp") != std::string::npos);
    }

    try {
        parse_config("h_tp = fast\n");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("h_tp") != std::string::npos);
        CHECK(msg.find("line 1") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("input = 22\n"), config_error);
    CHECK_THROWS_AS(parse_config("n_max = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config("just a line\n"), config_error);
    CHECK_THROWS_AS(parse_config("sweep_param = input\n"), config_error);
}

TEST_CASE("sweep spec parsing and parameter setting") {
    const RunConfig config = parse_config(
        "sweep_param = kappa_tp\n"
        "sweep_values = 0.5, 0.05\n");
    CHECK(config.sweep_param == "kappa_tp");
    REQUIRE(config.sweep_values.size() == 2);
    CHECK(config.sweep_values[0] == 0.5);
    CHECK(config.sweep_values[1] == 0.05);

    RunConfig base;
    set_numeric_parameter(base, "kappa_tp", 0.25);
    CHECK(base.kappa_tp == 0.25);
    set_numeric_parameter(base, "n_max", 2.0);
    CHECK(base.n_max == 2);
    CHECK_THROWS_AS(set_numeric_parameter(base, "input", 1.0), config_error);
    CHECK_THROWS_AS(set_numeric_parameter(base, "g_tp", -2.0), config_error);
}

TEST_CASE("materializers") {
    RunConfig config = parse_config("omega_max_tp = 10\ng_tp = 25\nmerged = true\n");
    const ProtocolSchedule schedule = schedule_from(config);
    CHECK(schedule.merged);
    CHECK(schedule.pulse_count() == 11);
    CHECK(cavity_from(config).g1 == 25.0);
    CHECK(!model_from(config).has_value());

    config.kappa_tp = 0.5;
    const auto model = model_from(config);
    REQUIRE(model.has_value());
    CHECK(model->kappa == 0.5);
    CHECK(model->any_dissipation());

    const HilbertSpace space = space_from(config);
    const auto all = input_states(config, space);
    CHECK(all.size() == 4);
    config.input = "bell";
    const auto bell = input_states(config, space);
    REQUIRE(bell.size() == 1);
    CHECK(bell[0].first == "bell");
    CHECK(bell[0].second.norm() == doctest::Approx(1.0));
}

TEST_CASE("csv and json writers") {
    const HilbertSpace space = build_space(2);

    std::ostringstream basis;
    write_basis_csv(space, basis);
    const std::string basis_text = basis.str();
    CHECK(basis_text.find("index,atom1,atom2,photons\n0,g0,g0,0\n") != std::string::npos);
    CHECK(basis_text.find("74,u,u,2") != std::string::npos);

    Matrix h = Matrix::Zero(3, 3);
    h(0, 1) = Complex(1.5, -0.5);
    std::ostringstream hcsv;
    write_hamiltonian_csv(h, hcsv);
    CHECK(hcsv.str() == "row,col,re,im\n0,1,1.5,-0.5\n");

    const ProtocolSchedule s = build_cnot_protocol(10.0, 1.0);
    const Json sj = schedule_json(s);
    CHECK(sj["pulse_count"] == 12);
    CHECK(sj["pulses"].size() == 12);
    CHECK(sj["steps"].size() == 6);
    CHECK(sj["pulses"][0]["transition"] == "u<-ga");

    const Json mj = schedule_json(merge_adjacent_pulses(s));
    CHECK(mj["pulse_count"] == 11);
    int bridged = 0;
    for (const auto& p : mj["pulses"]) bridged += p.contains("t1") ? 1 : 0;
    CHECK(bridged == 1);

    TimeSeries series;
    series.labels = {"pop_00"};
    series.t = {0.0, 0.5};
    series.populations = RealMatrix::Zero(2, 1);
    series.populations(1, 0) = 0.25;
    series.norm_or_trace = {1.0, 1.0};
    series.photon = {0.0, 0.125};
    std::ostringstream ts;
    write_timeseries_csv(series, ts);
    CHECK(ts.str() ==
          "# cavcnot timeseries v1\n"
          "t,pop_00,norm_or_trace,photon_expectation\n"
          "0,0,1,0\n"
          "0.5,0.25,1,0.125\n");
}
