#include "gradsense/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>

#include "gradsense/errors.hpp"
#include "gradsense/version.hpp"

namespace gradsense {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

json condition_to_json(double c) {
    // JSON has no infinity literal; a missing J-th direction serializes as null.
    if (!std::isfinite(c)) return nullptr;
    return c;
}

double condition_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

LocusRule locus_rule_from_name(const std::string& s) {
    for (LocusRule r : {LocusRule::None, LocusRule::Cor41, LocusRule::Cor42OneSide,
                        LocusRule::Cor42TwoSide, LocusRule::Cor43Pointwise,
                        LocusRule::Cor43Filament, LocusRule::Cor44})
        if (locus_rule_name(r) == s) return r;
    throw ParseError("unknown locus rule \"" + s + "\"");
}

json region_to_json(const BoundaryRegion& r) {
    return json{{"side", side_name(r.side)}, {"lo", r.lo}, {"hi", r.hi}};
}

BoundaryRegion region_from_json(const json& j) {
    BoundaryRegion r;
    r.side = side_from_name(j.at("side").get<std::string>());
    r.lo = j.at("lo").get<double>();
    r.hi = j.at("hi").get<double>();
    return r;
}

CompletenessSurrogate completeness_from_json(const json& j) {
    CompletenessSurrogate c;
    c.rank = j.at("rank").get<int>();
    c.required = j.at("required").get<int>();
    c.full_rank = j.at("full_rank").get<bool>();
    c.condition = condition_from_json(j.at("condition"));
    return c;
}

json gramian_to_json(const GramianSummary& g) {
    return json{{"computed", g.computed},
                {"horizon", g.horizon},
                {"min_eigenvalue", g.min_eigenvalue},
                {"max_eigenvalue", g.max_eigenvalue},
                {"min_group_eigenvalue", g.min_group_eigenvalue},
                {"positive_definite", g.positive_definite}};
}

GramianSummary gramian_from_json(const json& j) {
    GramianSummary g;
    g.computed = j.at("computed").get<bool>();
    g.horizon = j.at("horizon").get<double>();
    g.min_eigenvalue = j.at("min_eigenvalue").get<double>();
    g.max_eigenvalue = j.at("max_eigenvalue").get<double>();
    g.min_group_eigenvalue = j.at("min_group_eigenvalue").get<double>();
    g.positive_definite = j.at("positive_definite").get<bool>();
    return g;
}

} // namespace

json to_json(const StrategicVerdict& v) {
    json groups = json::array();
    for (const GroupVerdict& g : v.groups)
        groups.push_back(json{{"lambda", g.lambda},
                              {"multiplicity", g.multiplicity},
                              {"numerical_rank", g.numerical_rank},
                              {"sigma_min", g.sigma_min},
                              {"pass", g.pass}});
    return json{{"strategic", v.strategic},
                {"q", v.q},
                {"r", v.r},
                {"sigma_max", v.sigma_max},
                {"rank_tol", v.rank_tol},
                {"simple_spectrum", v.simple_spectrum},
                {"region", region_to_json(v.region)},
                {"assumption", v.assumption},
                {"groups", groups},
                {"failing_groups", v.failing_groups}};
}

StrategicVerdict strategic_verdict_from_json(const json& j) {
    StrategicVerdict v;
    v.strategic = j.at("strategic").get<bool>();
    v.q = j.at("q").get<int>();
    v.r = j.at("r").get<int>();
    v.sigma_max = j.at("sigma_max").get<double>();
    v.rank_tol = j.at("rank_tol").get<double>();
    v.simple_spectrum = j.at("simple_spectrum").get<bool>();
    v.region = region_from_json(j.at("region"));
    v.assumption = j.at("assumption").get<std::string>();
    for (const json& gj : j.at("groups")) {
        GroupVerdict g;
        g.lambda = gj.at("lambda").get<double>();
        g.multiplicity = gj.at("multiplicity").get<int>();
        g.numerical_rank = gj.at("numerical_rank").get<int>();
        g.sigma_min = gj.at("sigma_min").get<double>();
        g.pass = gj.at("pass").get<bool>();
        v.groups.push_back(g);
    }
    v.failing_groups = j.at("failing_groups").get<std::vector<int>>();
    return v;
}

json to_json(const LocusReport& r) {
    json blind = nullptr;
    if (r.blind_mode) blind = json::array({r.blind_mode->n, r.blind_mode->m});
    return json{{"applicable", r.applicable},
                {"fires", r.fires},
                {"rule", locus_rule_name(r.rule)},
                {"blind_mode", blind},
                {"witness", r.witness}};
}

LocusReport locus_report_from_json(const json& j) {
    LocusReport r;
    r.applicable = j.at("applicable").get<bool>();
    r.fires = j.at("fires").get<bool>();
    r.rule = locus_rule_from_name(j.at("rule").get<std::string>());
    const json& blind = j.at("blind_mode");
    if (!blind.is_null()) r.blind_mode = ModeIndex{blind.at(0).get<int>(), blind.at(1).get<int>()};
    r.witness = j.at("witness").get<std::string>();
    return r;
}

json to_json(const CompletenessSurrogate& c) {
    return json{{"rank", c.rank},
                {"required", c.required},
                {"full_rank", c.full_rank},
                {"condition", condition_to_json(c.condition)}};
}

json to_json(const CrossingReport& c) {
    return json{{"radius", c.radius},
                {"collar_description", c.collar_description},
                {"collar_area", c.collar_area},
                {"internal_pass", c.internal_pass},
                {"boundary_pass", c.boundary_pass},
                {"implication_holds", c.implication_holds},
                {"internal_surrogate", to_json(c.internal_surrogate)},
                {"boundary_surrogate", to_json(c.boundary_surrogate)}};
}

json to_json(const VerdictReport& r) {
    json locus = json::array();
    for (const LocusReport& l : r.locus) locus.push_back(to_json(l));
    return json{{"tool_version", r.tool_version},
                {"config", r.config_echo},
                {"group_eigenvalues", r.group_eigenvalues},
                {"group_multiplicities", r.group_multiplicities},
                {"verdict", to_json(r.verdict)},
                {"locus", locus},
                {"gramian", gramian_to_json(r.gramian)},
                {"completeness", to_json(r.completeness)}};
}

VerdictReport verdict_report_from_json(const json& j) {
    VerdictReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config_echo = j.at("config");
    r.group_eigenvalues = j.at("group_eigenvalues").get<std::vector<double>>();
    r.group_multiplicities = j.at("group_multiplicities").get<std::vector<int>>();
    r.verdict = strategic_verdict_from_json(j.at("verdict"));
    for (const json& lj : j.at("locus")) r.locus.push_back(locus_report_from_json(lj));
    r.gramian = gramian_from_json(j.at("gramian"));
    r.completeness = completeness_from_json(j.at("completeness"));
    return r;
}

// CSV ---------------------------------------------------------------------------

void write_scan_csv(std::ostream& os, const ScanResult& scan, bool boundary_scan) {
    os << (boundary_scan ? "s,strategic,sigma_min\n" : "x,y,strategic,sigma_min\n");
    for (const ScanRecord& rec : scan.records) {
        os << format_double(rec.x);
        if (!boundary_scan) os << ',' << format_double(rec.y);
        if (rec.valid)
            os << ',' << (rec.strategic ? "true" : "false") << ',' << format_double(rec.sigma_min);
        else
            os << ",failed,nan";
        os << '\n';
    }
}

void write_outputs_csv(std::ostream& os, const OutputRecord& rec) {
    os << 't';
    for (Eigen::Index i = 0; i < rec.samples.cols(); ++i) os << ",y_" << (i + 1);
    os << '\n';
    for (Eigen::Index k = 0; k < rec.samples.rows(); ++k) {
        os << format_double(rec.times[static_cast<std::size_t>(k)]);
        for (Eigen::Index i = 0; i < rec.samples.cols(); ++i)
            os << ',' << format_double(rec.samples(k, i));
        os << '\n';
    }
}

void write_trace_csv(std::ostream& os, const GradientTrace& estimate, const GradientTrace* truth) {
    if (truth && truth->arc.size() != estimate.arc.size())
        throw ValidationError("trace CSV: estimate and truth sampled differently");
    const Vec2 tan = side_tangent(estimate.region.side);
    const Vec2 nor = side_outward_normal(estimate.region.side);
    os << "s,g_tangential,g_normal";
    if (truth) os << ",g_true_tangential,g_true_normal";
    os << '\n';
    for (std::size_t k = 0; k < estimate.arc.size(); ++k) {
        const Vec2& g = estimate.values[k];
        os << format_double(estimate.arc[k]) << ','
           << format_double(g[0] * tan[0] + g[1] * tan[1]) << ','
           << format_double(g[0] * nor[0] + g[1] * nor[1]);
        if (truth) {
            const Vec2& gt = truth->values[k];
            os << ',' << format_double(gt[0] * tan[0] + gt[1] * tan[1]) << ','
               << format_double(gt[0] * nor[0] + gt[1] * nor[1]);
        }
        os << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_csv_number(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno || s.empty() || end != s.c_str() + s.size())
        throw ParseError("outputs CSV line " + std::to_string(line_no) + ": bad number \"" + s +
                         "\"");
    return v;
}

} // namespace

OutputRecord read_outputs_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("outputs CSV: missing header");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw ParseError("outputs CSV: expected header t,y_1,...");
    const std::size_t q = header.size() - 1;

    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != q + 1)
            throw ParseError("outputs CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(q + 1) + " fields, got " + std::to_string(f.size()));
        times.push_back(parse_csv_number(f[0], line_no));
        std::vector<double> row(q);
        for (std::size_t i = 0; i < q; ++i) row[i] = parse_csv_number(f[i + 1], line_no);
        rows.push_back(std::move(row));
    }
    if (times.empty()) throw HorizonMismatch("outputs CSV has no sample rows");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw HorizonMismatch("outputs CSV times must be strictly increasing");

    OutputRecord rec;
    rec.times = std::move(times);
    rec.samples.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(q));
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t i = 0; i < q; ++i)
            rec.samples(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][i];
    return rec;
}

} // namespace gradsense
