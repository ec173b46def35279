// ucplab: deterministic report emission.
//
// Reports are byte-stable for a fixed configuration: key order is fixed,
// doubles print in shortest round-trip form, and nothing time- or
// host-dependent is written. Values whose magnitude exceeds binary64 in
// either direction are emitted as {"linear": null, "log10": ...} with the
// log10 itself falling back to a decimal string when even it does not fit.
#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ucplab/constants.hpp"
#include "ucplab/experiments.hpp"
#include "ucplab/params.hpp"
#include "ucplab/xreal.hpp"

namespace ucplab {

using json = nlohmann::ordered_json;

// {"linear": double or null, "log10": double or decimal string} from a
// natural-log value.
json log_value_from_ln(const xreal& lnValue);
// Same shape from a plain linear value (log10 null when value <= 0).
json log_value_linear(double v);

// Shortest round-trip decimal for a double (used by every emitter).
std::string fmt_double(double v);

json report_json(const ExperimentReport& rep);

// Writes report.json, cases.csv, <name>.dat (cases with a sweep abscissa),
// and raw.csv (when the report carries raw Monte Carlo rows) under outDir,
// creating the directory if needed.
void write_report(const ExperimentReport& rep, const std::string& outDir);

// Full constants sheet at the given model and sensing radius: delta0, the
// radii families, three-annuli and chain constants, the composed sampling
// constant in ball and cube form, the spectral-application thresholds, and
// the control-cost bound. Radii families whose precondition excludes the
// given delta are replaced by a note rather than an error.
json constants_json(const ModelParams& p, const xreal& delta, const CalibrationConstants& cal,
                    double E0, double lambda1, double T);

}  // namespace ucplab
