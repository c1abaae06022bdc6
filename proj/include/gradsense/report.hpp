#pragma once

#include <nlohmann/json.hpp>
#include <ostream>
#include <string>

#include "gradsense/config.hpp"
#include "gradsense/simulate.hpp"
#include "gradsense/strategic.hpp"

namespace gradsense {

struct GramianSummary {
    bool computed = false;
    double horizon = 0.0;
    double min_eigenvalue = 0.0;       // full-matrix spectral floor (diagnostic)
    double max_eigenvalue = 0.0;
    double min_group_eigenvalue = 0.0; // smallest eigenvalue over group blocks
    bool positive_definite = false;    // group-blockwise test
};

// Everything cmd_check reports. Serializes losslessly: doubles are emitted
// with shortest round-trip representation, so parse(serialize(r)) == r.
struct VerdictReport {
    std::string tool_version;
    json config_echo;
    std::vector<double> group_eigenvalues;
    std::vector<int> group_multiplicities;
    StrategicVerdict verdict;
    std::vector<LocusReport> locus;
    GramianSummary gramian;
    CompletenessSurrogate completeness;
};

json to_json(const VerdictReport& r);
VerdictReport verdict_report_from_json(const json& j);

json to_json(const StrategicVerdict& v);
StrategicVerdict strategic_verdict_from_json(const json& j);
json to_json(const LocusReport& r);
LocusReport locus_report_from_json(const json& j);
json to_json(const CompletenessSurrogate& c);
json to_json(const CrossingReport& c);

// CSV writers (RFC 4180, LF line endings, round-trip-exact floats).
void write_scan_csv(std::ostream& os, const ScanResult& scan, bool boundary_scan);
void write_outputs_csv(std::ostream& os, const OutputRecord& rec);

// Reconstructed (and, when given, true) gradient trace on gamma in
// tangential/normal components: s,g_tangential,g_normal[,g_true_tangential,g_true_normal].
void write_trace_csv(std::ostream& os, const GradientTrace& estimate,
                     const GradientTrace* truth = nullptr);

// Output CSV reader for cmd_reconstruct: header t,y_1..y_q. Raises
// ParseError on malformed rows, HorizonMismatch on empty/decreasing times.
OutputRecord read_outputs_csv(std::istream& is);

std::string format_double(double v); // shortest repr used by the CSV writers

} // namespace gradsense
