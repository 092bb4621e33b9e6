// io.hpp — deterministic CSV/JSON emission for the CLI.

#pragma once

#include "cavcnot/dynamics.hpp"
#include "cavcnot/gateanalysis.hpp"
#include "cavcnot/pulses.hpp"
#include "cavcnot/statespace.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace cavcnot {

using Json = nlohmann::ordered_json;

// Fixed decimal formatting used by every CSV writer (bit-identical output for
// identical inputs).
std::string format_double(double x);

void write_basis_csv(const HilbertSpace& space, std::ostream& os);

// Nonzero entries (row, col, re, im) of a dense operator.
void write_hamiltonian_csv(const Matrix& h, std::ostream& os, double tol = 1e-14);

// Schema: comment line with version, then
//   t, <one column per tracked population>, norm_or_trace, photon_expectation
void write_timeseries_csv(const TimeSeries& series, std::ostream& os);

Json schedule_json(const ProtocolSchedule& schedule);

Json result_json(const HilbertSpace& space, const ProtocolResult& result);

Json gate_json(const GateMatrix& gate);

// Write text to path, creating parent directories; throws on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace cavcnot
