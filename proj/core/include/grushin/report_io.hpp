/// @file report_io.hpp
/// Deterministic JSON / CSV rendering of verification results.  Field order
/// is fixed and numbers use shortest round-trip decimals capped at 12
/// significant digits, so identical runs produce byte-identical reports.
#pragma once

#include <span>
#include <string>

#include "grushin/cp.hpp"
#include "grushin/verifier.hpp"
#include "grushin/weights.hpp"

namespace grushin {

/// Shortest round-trip decimal form, at most 12 significant digits.
/// Non-finite values render as null (JSON-safe).
std::string format_number(double x);

/// Echo of the run configuration, emitted under the "spec" key.
struct RunDescriptor {
    std::string name;
    int m = 1;
    int k = 0;
    double gamma = 0.0;
    Params params;       ///< includes "p"
    std::string f_text;  ///< canonical text of the test function
};

std::string verification_json(const RunDescriptor& run, const VerificationReport& rep);
std::string hpw_json(const RunDescriptor& run, const HpwReport& rep);
std::string constants_json(const CpConstants& c);

/// Campaign table: one row per run, configuration order.
std::string campaign_csv_header();
std::string campaign_csv_row(int run_index, const RunDescriptor& run,
                             const VerificationReport& rep);

}  // namespace grushin
