#include "gradsense/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gradsense/errors.hpp"
#include "gradsense/simulate.hpp"

namespace gradsense {

namespace {

// Strict object access: every key must be claimed, leftovers are rejected
// with their full path.
class ObjReader {
public:
    ObjReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ParseError(path_ + ": expected an object");
    }
    const json* opt(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }
    const json& req(const std::string& key) {
        const json* p = opt(key);
        if (!p) throw ParseError(path_ + "." + key + ": missing required field");
        return *p;
    }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ParseError(path_ + "." + it.key() + ": unknown field");
    }
    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path + ": expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ParseError(path + ": expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path + ": expected a string");
    return j.get<std::string>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<long long>() < 0))
        throw ParseError(path + ": expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

// "p/q" with integer p, q.
bool parse_fraction_text(const std::string& s, long long& p, long long& q) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return false;
    const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (num.empty() || den.empty()) return false;
    char* end = nullptr;
    errno = 0;
    p = std::strtoll(num.c_str(), &end, 10);
    if (errno || end != num.c_str() + num.size()) return false;
    errno = 0;
    q = std::strtoll(den.c_str(), &end, 10);
    if (errno || end != den.c_str() + den.size()) return false;
    return true;
}

bool parse_decimal_text(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    v = std::strtod(s.c_str(), &end);
    return !errno && end == s.c_str() + s.size();
}

// Side length: number, "p/q", "sqrt(k)" (k itself a decimal or fraction), or
// decimal text.
double parse_length(const json& j, const std::string& path, std::string& text_out) {
    if (j.is_number()) {
        text_out = j.dump();
        return j.get<double>();
    }
    if (!j.is_string())
        throw ParseError(path + ": expected a number or a string (\"p/q\", \"sqrt(k)\")");
    const std::string s = j.get<std::string>();
    text_out = s;
    if (s.rfind("sqrt(", 0) == 0 && s.size() > 6 && s.back() == ')') {
        const std::string inner = s.substr(5, s.size() - 6);
        long long p, q;
        double v;
        if (parse_fraction_text(inner, p, q)) {
            if (q == 0) throw ParseError(path + ": zero denominator");
            v = static_cast<double>(p) / static_cast<double>(q);
        } else if (!parse_decimal_text(inner, v)) {
            throw ParseError(path + ": cannot parse sqrt argument \"" + inner + "\"");
        }
        if (v < 0.0) throw ValidationError(path + ": sqrt of a negative value");
        return std::sqrt(v);
    }
    long long p, q;
    if (parse_fraction_text(s, p, q)) {
        if (q == 0) throw ParseError(path + ": zero denominator");
        return static_cast<double>(p) / static_cast<double>(q);
    }
    double v;
    if (!parse_decimal_text(s, v)) throw ParseError(path + ": cannot parse \"" + s + "\"");
    return v;
}

// Coordinate with rationality annotation: a JSON number is declared
// irrational; "p/q" is the exact fraction of the axis length.
Coord parse_coord(const json& j, double axis_len, const std::string& path) {
    if (j.is_number()) return Coord::irrational(j.get<double>());
    if (!j.is_string())
        throw ParseError(path + ": expected a number or an exact fraction \"p/q\"");
    const std::string s = j.get<std::string>();
    long long p, q;
    if (!parse_fraction_text(s, p, q))
        throw ParseError(path + ": expected an exact fraction \"p/q\", got \"" + s + "\"");
    if (q == 0) throw ParseError(path + ": zero denominator");
    return Coord::fraction(p, q, axis_len);
}

// Plain arc value: number or "p/q" evaluated as a plain ratio (not scaled).
double parse_arc(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw ParseError(path + ": expected a number or \"p/q\"");
    long long p, q;
    if (!parse_fraction_text(j.get<std::string>(), p, q))
        throw ParseError(path + ": cannot parse \"" + j.get<std::string>() + "\"");
    if (q == 0) throw ParseError(path + ": zero denominator");
    return static_cast<double>(p) / static_cast<double>(q);
}

Side parse_side(const json& j, const std::string& path) {
    const std::string s = get_string(j, path);
    try {
        return side_from_name(s);
    } catch (const Error&) {
        throw ParseError(path + ": unknown side \"" + s + "\"");
    }
}

std::vector<double> parse_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

SpatialDistribution parse_distribution(const json& j, const std::string& path,
                                       SensorKind kind) {
    ObjReader r(j, path);
    const std::string type = get_string(r.req("type"), path + ".type");
    DistributionKind dk;
    try {
        dk = distribution_kind_from_name(type);
    } catch (const Error&) {
        throw ParseError(path + ".type: unknown distribution \"" + type + "\"");
    }
    std::optional<bool> symmetric;
    if (const json* p = r.opt("symmetric")) symmetric = get_bool(*p, path + ".symmetric");

    SpatialDistribution d;
    switch (dk) {
        case DistributionKind::Dirac:
            d = SpatialDistribution::dirac();
            break;
        case DistributionKind::Uniform:
            // Uniform density over a zone or single segment is symmetric about
            // its center; filament supports need an explicit declaration.
            d = SpatialDistribution::uniform(kind != SensorKind::Filament);
            break;
        case DistributionKind::Analytic: {
            const std::string id = get_string(r.req("id"), path + ".id");
            if (id == "one")
                d = SpatialDistribution::analytic("one", [](double, double) { return 1.0; });
            else
                throw ParseError(path + ".id: unknown analytic density \"" + id +
                                 "\" (available: \"one\")");
            break;
        }
        case DistributionKind::Tabulated: {
            const bool two_d = kind == SensorKind::InternalZone;
            if (two_d) {
                Tabulated2D t;
                t.xs = parse_number_array(r.req("xs"), path + ".xs");
                t.ys = parse_number_array(r.req("ys"), path + ".ys");
                const json& vals = r.req("values");
                if (!vals.is_array()) throw ParseError(path + ".values: expected an array");
                for (std::size_t i = 0; i < vals.size(); ++i)
                    t.values.push_back(
                        parse_number_array(vals[i], path + ".values[" + std::to_string(i) + "]"));
                d = SpatialDistribution::tabulated(std::move(t));
            } else {
                Tabulated1D t;
                t.s = parse_number_array(r.req("s"), path + ".s");
                t.values = parse_number_array(r.req("values"), path + ".values");
                d = SpatialDistribution::tabulated(std::move(t));
            }
            break;
        }
    }
    if (symmetric) d.declared_symmetric = *symmetric;
    r.finish();
    return d;
}

Sensor parse_sensor(const json& j, const RectDomain& dom, const std::string& path) {
    ObjReader r(j, path);
    const std::string kind_name = get_string(r.req("kind"), path + ".kind");
    SensorKind kind;
    try {
        kind = sensor_kind_from_name(kind_name);
    } catch (const Error&) {
        throw ParseError(path + ".kind: unknown sensor kind \"" + kind_name + "\"");
    }

    Sensor s;
    switch (kind) {
        case SensorKind::InternalPointwise:
            s = Sensor::internal_pointwise(parse_coord(r.req("x"), dom.a1, path + ".x"),
                                           parse_coord(r.req("y"), dom.a2, path + ".y"));
            break;
        case SensorKind::BoundaryPointwise: {
            const Side side = parse_side(r.req("side"), path + ".side");
            s = Sensor::boundary_pointwise(
                side, parse_coord(r.req("s"), side_length(dom, side), path + ".s"));
            break;
        }
        case SensorKind::InternalZone: {
            const json& c = r.req("center");
            if (!c.is_array() || c.size() != 2)
                throw ParseError(path + ".center: expected [cx, cy]");
            const json& h = r.req("half_width");
            if (!h.is_array() || h.size() != 2)
                throw ParseError(path + ".half_width: expected [hx, hy]");
            SpatialDistribution d = SpatialDistribution::uniform();
            if (const json* p = r.opt("distribution"))
                d = parse_distribution(*p, path + ".distribution", kind);
            s = Sensor::internal_zone(parse_coord(c[0], dom.a1, path + ".center[0]"),
                                      parse_coord(c[1], dom.a2, path + ".center[1]"),
                                      get_number(h[0], path + ".half_width[0]"),
                                      get_number(h[1], path + ".half_width[1]"), d);
            r.finish();
            return s;
        }
        case SensorKind::BoundaryZone: {
            const json& segs = r.req("segments");
            if (!segs.is_array() || segs.empty())
                throw ParseError(path + ".segments: expected a non-empty array");
            std::vector<BoundarySegmentGeometry> gs;
            for (std::size_t k = 0; k < segs.size(); ++k) {
                const std::string sp = path + ".segments[" + std::to_string(k) + "]";
                ObjReader sr(segs[k], sp);
                BoundarySegmentGeometry g;
                g.side = parse_side(sr.req("side"), sp + ".side");
                const double len = side_length(dom, g.side);
                g.lo = parse_coord(sr.req("lo"), len, sp + ".lo");
                g.hi = parse_coord(sr.req("hi"), len, sp + ".hi");
                sr.finish();
                gs.push_back(g);
            }
            SpatialDistribution d = SpatialDistribution::uniform();
            if (const json* p = r.opt("distribution"))
                d = parse_distribution(*p, path + ".distribution", kind);
            s = Sensor::boundary_zone(std::move(gs), d);
            r.finish();
            return s;
        }
        case SensorKind::Filament: {
            const json& vs = r.req("vertices");
            if (!vs.is_array() || vs.size() < 2)
                throw ParseError(path + ".vertices: expected at least two [x, y] pairs");
            std::vector<Vec2> verts;
            for (std::size_t k = 0; k < vs.size(); ++k) {
                const std::string vp = path + ".vertices[" + std::to_string(k) + "]";
                if (!vs[k].is_array() || vs[k].size() != 2)
                    throw ParseError(vp + ": expected [x, y]");
                verts.push_back(
                    Vec2{get_number(vs[k][0], vp + "[0]"), get_number(vs[k][1], vp + "[1]")});
            }
            std::optional<std::array<Coord, 2>> center;
            if (const json* p = r.opt("symmetry_center")) {
                if (!p->is_array() || p->size() != 2)
                    throw ParseError(path + ".symmetry_center: expected [cx, cy]");
                center = std::array<Coord, 2>{
                    parse_coord((*p)[0], dom.a1, path + ".symmetry_center[0]"),
                    parse_coord((*p)[1], dom.a2, path + ".symmetry_center[1]")};
            }
            SpatialDistribution d = SpatialDistribution::uniform(false);
            if (const json* p = r.opt("distribution"))
                d = parse_distribution(*p, path + ".distribution", kind);
            s = Sensor::filament(std::move(verts), d, center);
            r.finish();
            return s;
        }
    }
    if (const json* p = r.opt("distribution"))
        s.distribution = parse_distribution(*p, path + ".distribution", kind);
    r.finish();
    return s;
}

ScanAxis parse_scan_axis(const json& j, const std::string& path) {
    ObjReader r(j, path);
    ScanAxis axis;
    if (const json* vals = r.opt("values")) {
        axis.values = parse_number_array(*vals, path + ".values");
        if (axis.values.empty()) throw ValidationError(path + ".values: must be non-empty");
        r.finish();
        return axis;
    }
    const int count = get_int(r.req("count"), path + ".count");
    const double lo = get_number(r.req("min"), path + ".min");
    const double hi = get_number(r.req("max"), path + ".max");
    r.finish();
    if (count < 1) throw ValidationError(path + ".count: must be >= 1");
    if (!(lo <= hi)) throw ValidationError(path + ": min must be <= max");
    axis.values.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        axis.values.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
    return axis;
}

InitialState parse_initial_state(const json& j, const std::string& path) {
    ObjReader r(j, path);
    const std::string type = get_string(r.req("type"), path + ".type");
    if (type == "bump") {
        r.finish();
        return BumpState{};
    }
    if (type == "mode") {
        ModeState ms;
        ms.n = get_int(r.req("n"), path + ".n");
        ms.m = get_int(r.req("m"), path + ".m");
        if (const json* p = r.opt("amplitude")) ms.amplitude = get_number(*p, path + ".amplitude");
        r.finish();
        if (ms.n < 1 || ms.m < 1) throw ValidationError(path + ": mode indices must be >= 1");
        return ms;
    }
    if (type == "coeffs") {
        CoeffsState cs;
        const json& entries = r.req("entries");
        if (!entries.is_array() || entries.empty())
            throw ParseError(path + ".entries: expected a non-empty array of [n, m, c]");
        std::set<std::pair<int, int>> seen;
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const std::string ep = path + ".entries[" + std::to_string(k) + "]";
            const json& e = entries[k];
            if (!e.is_array() || e.size() != 3) throw ParseError(ep + ": expected [n, m, c]");
            const int n = get_int(e[0], ep + "[0]");
            const int m = get_int(e[1], ep + "[1]");
            const double c = get_number(e[2], ep + "[2]");
            if (n < 1 || m < 1) throw ValidationError(ep + ": mode indices must be >= 1");
            if (!seen.insert({n, m}).second) throw ValidationError(ep + ": duplicate mode");
            cs.entries.emplace_back(n, m, c);
        }
        r.finish();
        return cs;
    }
    throw ParseError(path + ".type: unknown initial state \"" + type +
                     "\" (expected bump, mode or coeffs)");
}

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig cfg;
    cfg.echo = j;
    ObjReader root(j, "config");

    {
        const json& d = root.req("domain");
        ObjReader r(d, "domain");
        const double a1 = parse_length(r.req("a1"), "domain.a1", cfg.a1_text);
        const double a2 = parse_length(r.req("a2"), "domain.a2", cfg.a2_text);
        r.finish();
        if (!(a1 > 0.0)) throw ValidationError("domain.a1: side length must be positive");
        if (!(a2 > 0.0)) throw ValidationError("domain.a2: side length must be positive");
        cfg.domain = RectDomain(a1, a2);
    }

    {
        const json& g = root.req("gamma");
        ObjReader r(g, "gamma");
        cfg.gamma.side = parse_side(r.req("side"), "gamma.side");
        cfg.gamma.lo = parse_arc(r.req("lo"), "gamma.lo");
        cfg.gamma.hi = parse_arc(r.req("hi"), "gamma.hi");
        r.finish();
        try {
            validate_region(cfg.domain, cfg.gamma);
        } catch (const Error& e) {
            throw ValidationError(std::string("gamma: ") + e.what());
        }
    }

    if (const json* m = root.opt("modes")) {
        ObjReader r(*m, "modes");
        if (const json* p = r.opt("J")) cfg.J = get_int(*p, "modes.J");
        if (const json* p = r.opt("grouping_tol"))
            cfg.grouping_tol = get_number(*p, "modes.grouping_tol");
        r.finish();
    }
    if (cfg.J < 1) throw ValidationError("modes.J: must be >= 1");
    if (cfg.J > 64) throw ValidationError("modes.J: must be <= 64");
    if (!(cfg.grouping_tol >= 0.0)) throw ValidationError("modes.grouping_tol: must be >= 0");

    {
        const json& ss = root.req("sensors");
        if (!ss.is_array() || ss.empty())
            throw ParseError("sensors: expected a non-empty array");
        for (std::size_t k = 0; k < ss.size(); ++k) {
            const std::string sp = "sensors[" + std::to_string(k) + "]";
            Sensor s = parse_sensor(ss[k], cfg.domain, sp);
            try {
                validate_sensor(cfg.domain, s);
            } catch (const Error& e) {
                throw ValidationError(sp + ": " + e.what());
            }
            cfg.suite.sensors.push_back(std::move(s));
        }
    }

    bool dt_given = false;
    if (const json* t = root.opt("time")) {
        ObjReader r(*t, "time");
        if (const json* p = r.opt("T")) cfg.T = get_number(*p, "time.T");
        if (const json* p = r.opt("dt")) {
            cfg.dt = get_number(*p, "time.dt");
            dt_given = true;
        }
        r.finish();
    }
    if (!(cfg.T > 0.0)) throw ValidationError("time.T: must be positive");
    if (!dt_given) cfg.dt = cfg.T / 100.0;
    if (!(cfg.dt > 0.0) || cfg.dt > cfg.T)
        throw ValidationError("time.dt: must lie in (0, T]");

    if (const json* t = root.opt("tolerances")) {
        ObjReader r(*t, "tolerances");
        if (const json* p = r.opt("rank_tol")) cfg.rank_tol = get_number(*p, "tolerances.rank_tol");
        if (const json* p = r.opt("pd_tol")) cfg.pd_tol = get_number(*p, "tolerances.pd_tol");
        r.finish();
    }
    if (!(cfg.rank_tol >= 0.0)) throw ValidationError("tolerances.rank_tol: must be >= 0");
    if (!(cfg.pd_tol >= 0.0)) throw ValidationError("tolerances.pd_tol: must be >= 0");

    cfg.quad = QuadratureSpec::for_level(cfg.J);
    if (const json* qj = root.opt("quadrature")) {
        ObjReader r(*qj, "quadrature");
        int order = cfg.quad.order, line_order = cfg.quad.line_order;
        if (const json* p = r.opt("order")) order = get_int(*p, "quadrature.order");
        if (const json* p = r.opt("line_order")) line_order = get_int(*p, "quadrature.line_order");
        r.finish();
        if (order < 2 || line_order < 2)
            throw ValidationError("quadrature: orders must be >= 2");
        cfg.quad = QuadratureSpec(order, line_order);
    }

    if (const json* nj = root.opt("noise")) {
        ObjReader r(*nj, "noise");
        if (const json* p = r.opt("sigma")) cfg.noise_sigma = get_number(*p, "noise.sigma");
        if (const json* p = r.opt("seed")) cfg.seed = get_seed(*p, "noise.seed");
        r.finish();
    }
    if (!(cfg.noise_sigma >= 0.0)) throw ValidationError("noise.sigma: must be >= 0");

    if (const json* rj = root.opt("regularization")) {
        ObjReader r(*rj, "regularization");
        const double lam = get_number(r.req("lambda"), "regularization.lambda");
        r.finish();
        if (!(lam >= 0.0)) throw ValidationError("regularization.lambda: must be >= 0");
        cfg.reg_lambda = lam;
    }

    if (const json* ij = root.opt("initial_state"))
        cfg.initial_state = parse_initial_state(*ij, "initial_state");

    if (const json* sj = root.opt("scan")) {
        ObjReader r(*sj, "scan");
        ScanSpec spec;
        spec.x = parse_scan_axis(r.req("x"), "scan.x");
        if (const json* p = r.opt("y")) spec.y = parse_scan_axis(*p, "scan.y");
        r.finish();
        cfg.scan = std::move(spec);
    }

    root.finish();
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config JSON: ") + e.what());
    }
    return parse_config(j);
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

Eigen::VectorXd initial_state_coeffs(const RunConfig& cfg, const ModeSet& ms) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ms.flat.size()));
    const RectDomain& dom = ms.domain;
    if (std::holds_alternative<BumpState>(cfg.initial_state)) {
        // x0 = x(a1-x) y(a2-y): separable sine-series integrals in closed form.
        const double pi = std::acos(-1.0);
        const double scale = 8.0 * std::pow(dom.a1, 2.5) * std::pow(dom.a2, 2.5) /
                             (pi * pi * pi * pi * pi * pi);
        for (std::size_t a = 0; a < ms.flat.size(); ++a) {
            const ModeIndex idx = ms.flat[a].index;
            if (idx.n % 2 == 0 || idx.m % 2 == 0) continue; // even factors vanish
            const double n3 = static_cast<double>(idx.n) * idx.n * idx.n;
            const double m3 = static_cast<double>(idx.m) * idx.m * idx.m;
            c(static_cast<Eigen::Index>(a)) = scale * 4.0 / (n3 * m3);
        }
        return c;
    }
    if (const ModeState* m = std::get_if<ModeState>(&cfg.initial_state)) {
        if (m->n > ms.level || m->m > ms.level)
            throw ValidationError("initial_state: mode (" + std::to_string(m->n) + "," +
                                  std::to_string(m->m) + ") outside truncation level " +
                                  std::to_string(ms.level));
        c(static_cast<Eigen::Index>(ms.flat_index(ModeIndex{m->n, m->m}))) = m->amplitude;
        return c;
    }
    const CoeffsState& cs = std::get<CoeffsState>(cfg.initial_state);
    for (const auto& [n, m, v] : cs.entries) {
        if (n > ms.level || m > ms.level)
            throw ValidationError("initial_state: mode (" + std::to_string(n) + "," +
                                  std::to_string(m) + ") outside truncation level " +
                                  std::to_string(ms.level));
        c(static_cast<Eigen::Index>(ms.flat_index(ModeIndex{n, m}))) = v;
    }
    return c;
}

} // namespace gradsense
