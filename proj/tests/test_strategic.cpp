#include <doctest.h>

#include <cmath>
#include <random>

#include "gradsense/strategic.hpp"
#include "oracles.hpp"

using namespace gradsense;

namespace {

Sensor pointwise_at(double x, double y) {
    return Sensor::internal_pointwise(Coord::unspecified(x), Coord::unspecified(y));
}

SensorSuite suite_of(std::initializer_list<Sensor> list) {
    SensorSuite s;
    s.sensors = list;
    return s;
}

const BoundaryRegion kBottom{Side::Bottom, 0.0, 1.0};

} // namespace

TEST_CASE("rank test accepts the generic single-sensor placement on (1, sqrt 2)") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    StrategicVerdict v =
        rank_test(dom, suite_of({pointwise_at(0.23, 0.41)}), ms, kBottom, quad, 1e-10);
    CHECK(v.strategic);
    CHECK(v.q == 1);
    CHECK(v.r == 1);
    CHECK(v.simple_spectrum);
    REQUIRE(v.groups.size() == 9);
    CHECK(v.failing_groups.empty());
    CHECK(v.sigma_min_overall() > 0.0);
    CHECK(v.assumption.find("bottom") != std::string::npos);
    // group 0 is the least-negative eigenvalue (1,1); its 1x1 singular value
    // is the absolute frozen entry at this point
    CHECK(v.groups[0].sigma_min == doctest::Approx(4.6457144898636560331).epsilon(1e-12));
    CHECK(v.sigma_max >= v.groups[0].sigma_min);
}

TEST_CASE("rank test rejects the domain-center placement and names the failing groups") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    SensorSuite center = suite_of({Sensor::internal_pointwise(
        Coord::fraction(1, 2, dom.a1), Coord::fraction(1, 2, dom.a2))});
    StrategicVerdict v = rank_test(dom, center, ms, kBottom, quad, 1e-10);
    CHECK_FALSE(v.strategic);
    // the gradient entry vanishes iff n and m have equal parity: 5 of 9 modes
    CHECK(v.failing_groups.size() == 5);
    for (int gi : v.failing_groups) {
        CHECK(v.groups[gi].numerical_rank == 0);
        const auto& members = ms.groups[static_cast<std::size_t>(gi)].members;
        REQUIRE(members.size() == 1);
        CHECK((members[0].n + members[0].m) % 2 == 0);
    }
}

TEST_CASE("multiplicity gate: one sensor cannot serve a double eigenvalue") {
    RectDomain dom(1.0, 1.0);
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    StrategicVerdict solo =
        rank_test(dom, suite_of({pointwise_at(0.23, 0.37)}), ms, kBottom, quad, 1e-10);
    CHECK_FALSE(solo.strategic);
    CHECK(solo.q == 1);
    CHECK(solo.r == 2);

    StrategicVerdict pair =
        rank_test(dom, suite_of({pointwise_at(0.23, 0.37), pointwise_at(0.61, 0.18)}), ms,
                  kBottom, quad, 1e-10);
    CHECK(pair.strategic);
    CHECK(pair.q == 2);
    CHECK(pair.r == 2);
}

TEST_CASE("the multiplicity-two group matrix matches the closed-form entries") {
    RectDomain dom(1.0, 1.0);
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    SensorSuite suite = suite_of({pointwise_at(0.23, 0.37), pointwise_at(0.61, 0.18)});
    const auto mats = assemble_group_matrices(dom, suite, ms, quad);
    REQUIRE(mats.size() == 3);
    const GMatrix* m2 = nullptr;
    for (const auto& m : mats)
        if (m.modes.size() == 2) m2 = &m;
    REQUIRE(m2 != nullptr);
    // columns follow the lexicographic member order (1,2), (2,1)
    const double pts[2][2] = {{0.23, 0.37}, {0.61, 0.18}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const auto& idx = m2->modes[static_cast<std::size_t>(j)];
            const double ref = oracle::grad_sum(1, 1, idx.n, idx.m, pts[i][0], pts[i][1]);
            CHECK(m2->entries(i, j) == doctest::Approx(ref).epsilon(1e-12));
        }
    const double det = m2->entries(0, 0) * m2->entries(1, 1) - m2->entries(0, 1) * m2->entries(1, 0);
    CHECK(det == doctest::Approx(7.120046576).epsilon(1e-9));
    CHECK(m2->singular_values.size() == 2);
    CHECK(m2->singular_values.minCoeff() > 0.0);
}

TEST_CASE("rank test rejects an empty suite and invalid tolerances") {
    RectDomain dom(1.0, 1.0);
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    CHECK_THROWS_AS(rank_test(dom, SensorSuite{}, ms, kBottom, quad, 1e-10), EmptySuite);
    CHECK_THROWS_AS(
        rank_test(dom, suite_of({pointwise_at(0.3, 0.4)}), ms, kBottom, quad, -1.0),
        ValidationError);
    CHECK_THROWS_AS(rank_test(dom, suite_of({pointwise_at(0.3, 0.4)}), ms,
                              BoundaryRegion{Side::Bottom, 0.8, 0.2}, quad, 1e-10),
                    ValidationError);
}

TEST_CASE("gramian matches the J=1 closed form") {
    RectDomain dom(1.0, 1.0);
    ModeSet ms = build_mode_set(dom, 1);
    const QuadratureSpec quad = QuadratureSpec::for_level(1);
    ObservabilityGramian g =
        gramian(dom, suite_of({pointwise_at(0.3, 0.4)}), ms, 1.0, quad);
    REQUIRE(g.matrix.rows() == 1);
    CHECK(g.horizon == 1.0);
    CHECK(g.matrix(0, 0) == doctest::Approx(0.059983001661356427616).epsilon(1e-12));
    CHECK(g.eigenvalues(0) == doctest::Approx(0.059983001661356427616).epsilon(1e-12));
    REQUIRE(g.group_blocks.size() == 1);
    CHECK(g.group_blocks[0] == std::pair<int, int>(0, 1));
    CHECK(positive_definite_test(g));
    CHECK(min_group_eigenvalue(g) == doctest::Approx(g.eigenvalues(0)).epsilon(1e-12));
}

TEST_CASE("gramian matches a Simpson time integral at J=2") {
    RectDomain dom(1.0, 1.0);
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    SensorSuite suite = suite_of({pointwise_at(0.23, 0.37), pointwise_at(0.61, 0.18)});
    ObservabilityGramian g = gramian(dom, suite, ms, 1.0, quad);
    REQUIRE(g.matrix.rows() == 4);
    CHECK(g.matrix.isApprox(g.matrix.transpose(), 1e-14));

    const double pts[2][2] = {{0.23, 0.37}, {0.61, 0.18}};
    for (Eigen::Index a = 0; a < 4; ++a)
        for (Eigen::Index b = 0; b < 4; ++b) {
            const auto& ia = ms.flat[static_cast<std::size_t>(a)].index;
            const auto& ib = ms.flat[static_cast<std::size_t>(b)].index;
            const double la = ms.flat[static_cast<std::size_t>(a)].lambda;
            const double lb = ms.flat[static_cast<std::size_t>(b)].lambda;
            const double ref = oracle::simpson_interval(
                [&](double t) {
                    double s = 0.0;
                    for (int i = 0; i < 2; ++i)
                        s += oracle::phi(1, 1, ia.n, ia.m, pts[i][0], pts[i][1]) *
                             oracle::phi(1, 1, ib.n, ib.m, pts[i][0], pts[i][1]);
                    return s * std::exp((la + lb) * t);
                },
                0.0, 1.0, 20000);
            CHECK(g.matrix(a, b) == doctest::Approx(ref).epsilon(1e-6));
        }
    CHECK_THROWS_AS(gramian(dom, suite, ms, 0.0, quad), NonPositiveHorizon);
    CHECK_THROWS_AS(gramian(dom, suite, ms, -1.0, quad), NonPositiveHorizon);
}

TEST_CASE("positive-definiteness test agrees with the rank verdict on the pinned examples") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    SensorSuite good = suite_of({pointwise_at(0.23, 0.41)});
    SensorSuite blind = suite_of({Sensor::internal_pointwise(Coord::fraction(1, 2, dom.a1),
                                                             Coord::fraction(1, 2, dom.a2))});
    ObservabilityGramian gg = gramian(dom, good, ms, 1.0, quad);
    ObservabilityGramian gb = gramian(dom, blind, ms, 1.0, quad);
    CHECK(positive_definite_test(gg, 1e-10));
    CHECK_FALSE(positive_definite_test(gb, 1e-10));
    CHECK(min_group_eigenvalue(gg) > min_group_eigenvalue(gb));
    REQUIRE(gg.group_blocks.size() == 9);
    // blocks tile the diagonal in order
    int off = 0;
    for (const auto& [o, sz] : gg.group_blocks) {
        CHECK(o == off);
        off += sz;
    }
    CHECK(off == 9);
}

TEST_CASE("gramian PD agrees with the rank test over random single-sensor draws") {
    RectDomain dom(1.0, std::sqrt(2.0));
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
        const int J = 2 + static_cast<int>(rng() % 2);
        ModeSet ms = build_mode_set(dom, J);
        SensorSuite s = suite_of({pointwise_at(u(rng) * dom.a1, u(rng) * dom.a2)});
        StrategicVerdict v = rank_test(dom, s, ms, kBottom, quad, 1e-10);
        ObservabilityGramian g = gramian(dom, s, ms, 1.0, quad);
        const double margin = v.sigma_min_overall() / (1e-10 * v.sigma_max);
        if (margin > 10.0 || margin < 0.1)
            CHECK(positive_definite_test(g, 1e-10) == v.strategic);
    }
}

TEST_CASE("locus: internal pointwise rational coordinates") {
    RectDomain dom(1.0, std::sqrt(2.0));
    // (1/3, 1/2): sines vanish jointly at (3, 2)
    Sensor s = Sensor::internal_pointwise(Coord::fraction(1, 3, dom.a1),
                                          Coord::fraction(1, 2, dom.a2));
    LocusReport rep = locus_check(dom, s, 3);
    CHECK(rep.applicable);
    CHECK(rep.fires);
    CHECK(rep.rule == LocusRule::Cor43Pointwise);
    CHECK(locus_rule_name(rep.rule) == "cor_4_3_pointwise");
    REQUIRE(rep.blind_mode.has_value());
    CHECK(rep.blind_mode->n == 3);
    CHECK(rep.blind_mode->m == 2);
    CHECK(rep.witness.find("1/3") != std::string::npos);

    // (1/7, 1/2): no annihilated mode within level 5
    LocusReport none = locus_check(
        dom,
        Sensor::internal_pointwise(Coord::fraction(1, 7, dom.a1), Coord::fraction(1, 2, dom.a2)),
        5);
    CHECK(none.applicable);
    CHECK_FALSE(none.fires);

    // the same fraction fires once the level reaches the denominator pattern
    LocusReport seven = locus_check(
        dom,
        Sensor::internal_pointwise(Coord::fraction(1, 7, dom.a1), Coord::fraction(1, 2, dom.a2)),
        7);
    CHECK(seven.fires);

    // center point: the cosine pattern annihilates (1,1)
    LocusReport center = locus_check(
        dom,
        Sensor::internal_pointwise(Coord::fraction(1, 2, dom.a1), Coord::fraction(1, 2, dom.a2)),
        3);
    CHECK(center.fires);
    REQUIRE(center.blind_mode.has_value());
    CHECK(center.blind_mode->n == 1);
    CHECK(center.blind_mode->m == 1);
}

TEST_CASE("locus: declared-irrational coordinates never fire; unspecified ones throw") {
    RectDomain dom(1.0, std::sqrt(2.0));
    Sensor irr = Sensor::internal_pointwise(Coord::irrational(0.23), Coord::irrational(0.41));
    LocusReport rep = locus_check(dom, irr, 5);
    CHECK(rep.applicable);
    CHECK_FALSE(rep.fires);
    CHECK(rep.witness.find("irrational") != std::string::npos);

    CHECK_THROWS_AS(locus_check(dom, pointwise_at(0.23, 0.41), 5), IrrationalUnsupported);
    CHECK_THROWS_AS(locus_check(dom, irr, 0), ValidationError);
}

TEST_CASE("locus: symmetric zone at the domain center") {
    RectDomain dom(1.0, 1.0);
    Sensor zone = Sensor::internal_zone(Coord::fraction(1, 2, dom.a1),
                                        Coord::fraction(1, 2, dom.a2), 0.2, 0.2,
                                        SpatialDistribution::uniform());
    LocusReport rep = locus_check(dom, zone, 2);
    CHECK(rep.applicable);
    CHECK(rep.rule == LocusRule::Cor41);
    CHECK(locus_rule_name(rep.rule) == "cor_4_1");
    CHECK(rep.fires);

    Sensor asym = Sensor::internal_zone(Coord::fraction(1, 2, dom.a1),
                                        Coord::fraction(1, 2, dom.a2), 0.2, 0.2,
                                        SpatialDistribution::uniform(false));
    LocusReport off = locus_check(dom, asym, 2);
    CHECK_FALSE(off.applicable);
    CHECK(off.witness.find("symmetric") != std::string::npos);
}

TEST_CASE("locus: boundary pointwise blind line") {
    RectDomain dom(1.0, std::sqrt(2.0));
    Sensor s = Sensor::boundary_pointwise(Side::Bottom, Coord::fraction(1, 3, dom.a1));
    LocusReport rep = locus_check(dom, s, 3);
    CHECK(rep.applicable);
    CHECK(rep.rule == LocusRule::Cor44);
    CHECK(locus_rule_name(rep.rule) == "cor_4_4");
    CHECK(rep.fires);
    REQUIRE(rep.blind_mode.has_value());
    CHECK(rep.blind_mode->n == 3);
    CHECK(rep.blind_mode->m == 1);

    // vertical side: the ratio is against a2 and the blind family is (1,k)
    Sensor left = Sensor::boundary_pointwise(Side::Left, Coord::fraction(1, 2, dom.a2));
    LocusReport lrep = locus_check(dom, left, 3);
    CHECK(lrep.fires);
    REQUIRE(lrep.blind_mode.has_value());
    CHECK(lrep.blind_mode->n == 1);
    CHECK(lrep.blind_mode->m == 2);
}

TEST_CASE("locus: boundary zone center conditions") {
    RectDomain dom(1.0, std::sqrt(2.0));
    // single segment [1/4, 3/4] on the bottom: center 1/2, blind family n=2
    BoundarySegmentGeometry seg;
    seg.side = Side::Bottom;
    seg.lo = Coord::fraction(1, 4, dom.a1);
    seg.hi = Coord::fraction(3, 4, dom.a1);
    Sensor one = Sensor::boundary_zone({seg}, SpatialDistribution::uniform());
    LocusReport rep = locus_check(dom, one, 3);
    CHECK(rep.applicable);
    CHECK(rep.rule == LocusRule::Cor42OneSide);
    CHECK(rep.fires);
    REQUIRE(rep.blind_mode.has_value());
    CHECK(rep.blind_mode->n == 2);
    CHECK(rep.blind_mode->m == 1);

    // two horizontal segments with centers 1/2 and 1/2: joint blind mode (2,1)
    BoundarySegmentGeometry top = seg;
    top.side = Side::Top;
    Sensor two = Sensor::boundary_zone({seg, top}, SpatialDistribution::uniform());
    LocusReport rep2 = locus_check(dom, two, 3);
    CHECK(rep2.rule == LocusRule::Cor42TwoSide);
    CHECK(rep2.fires);
    REQUIRE(rep2.blind_mode.has_value());
    CHECK(rep2.blind_mode->n == 2);

    // centers 1/2 and 1/3 share no blind index at J=2
    BoundarySegmentGeometry third = top;
    third.lo = Coord::fraction(1, 6, dom.a1);
    third.hi = Coord::fraction(1, 2, dom.a1);
    Sensor mixed = Sensor::boundary_zone({seg, third}, SpatialDistribution::uniform());
    LocusReport rep3 = locus_check(dom, mixed, 2);
    CHECK(rep3.rule == LocusRule::Cor42TwoSide);
    CHECK_FALSE(rep3.fires);
}

TEST_CASE("locus: filament with declared symmetry center") {
    RectDomain dom(1.0, std::sqrt(2.0));
    // straight filament symmetric about (1/2 a1, 1/3 a2): blind mode (2,3)
    const double cx = 0.5 * dom.a1, cy = dom.a2 / 3.0;
    const double dx = 0.15, dy = 0.1;
    std::array<Coord, 2> center = {Coord::fraction(1, 2, dom.a1), Coord::fraction(1, 3, dom.a2)};
    Sensor fil = Sensor::filament({Vec2{cx - dx, cy - dy}, Vec2{cx + dx, cy + dy}},
                                  SpatialDistribution::dirac(), center);
    LocusReport rep = locus_check(dom, fil, 3);
    CHECK(rep.applicable);
    CHECK(rep.rule == LocusRule::Cor43Filament);
    CHECK(locus_rule_name(rep.rule) == "cor_4_3_filament");
    CHECK(rep.fires);
    REQUIRE(rep.blind_mode.has_value());
    CHECK(rep.blind_mode->n == 2);
    CHECK(rep.blind_mode->m == 3);

    // without a declared center the rule does not engage
    Sensor plain = Sensor::filament({Vec2{cx - dx, cy - dy}, Vec2{cx + dx, cy + dy}},
                                    SpatialDistribution::dirac());
    LocusReport off = locus_check(dom, plain, 3);
    CHECK_FALSE(off.applicable);
}

TEST_CASE("locus soundness: a fired rule implies a failing rank test at the same level") {
    RectDomain dom(1.0, std::sqrt(2.0));
    const int J = 4;
    ModeSet ms = build_mode_set(dom, J);
    const QuadratureSpec quad = QuadratureSpec::for_level(J);
    int fired = 0;
    for (int q1 = 2; q1 <= 4; ++q1)
        for (int p1 = 1; p1 < q1; ++p1)
            for (int q2 = 2; q2 <= 4; ++q2)
                for (int p2 = 1; p2 < q2; ++p2) {
                    Sensor s = Sensor::internal_pointwise(Coord::fraction(p1, q1, dom.a1),
                                                          Coord::fraction(p2, q2, dom.a2));
                    LocusReport rep = locus_check(dom, s, J);
                    if (!rep.fires) continue;
                    ++fired;
                    StrategicVerdict v = rank_test(dom, suite_of({s}), ms, kBottom, quad, 1e-10);
                    CHECK_FALSE(v.strategic);
                    // the blind mode's group is one of the failing groups
                    REQUIRE(rep.blind_mode.has_value());
                    const std::size_t flat = ms.flat_index(*rep.blind_mode);
                    std::size_t at = 0;
                    int blind_group = -1;
                    for (std::size_t gi = 0; gi < ms.groups.size(); ++gi) {
                        at += static_cast<std::size_t>(ms.groups[gi].multiplicity());
                        if (flat < at) {
                            blind_group = static_cast<int>(gi);
                            break;
                        }
                    }
                    bool found = false;
                    for (int fg : v.failing_groups) found = found || fg == blind_group;
                    CHECK(found);
                }
    CHECK(fired > 10); // the sweep actually exercised the rule
}

TEST_CASE("verdict is invariant under density scaling; sigma scales") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    auto f = [](double x, double y) { return 1.0 + x + y; };
    auto f5 = [](double x, double y) { return 5.0 * (1.0 + x + y); };
    Sensor a = Sensor::internal_zone(Coord::unspecified(0.4), Coord::unspecified(0.5), 0.15, 0.2,
                                     SpatialDistribution::analytic("custom", f));
    Sensor b = Sensor::internal_zone(Coord::unspecified(0.4), Coord::unspecified(0.5), 0.15, 0.2,
                                     SpatialDistribution::analytic("custom", f5));
    StrategicVerdict va = rank_test(dom, suite_of({a}), ms, kBottom, quad, 1e-10);
    StrategicVerdict vb = rank_test(dom, suite_of({b}), ms, kBottom, quad, 1e-10);
    CHECK(va.strategic == vb.strategic);
    CHECK(vb.sigma_max == doctest::Approx(5.0 * va.sigma_max).epsilon(1e-12));
    CHECK(vb.sigma_min_overall() == doctest::Approx(5.0 * va.sigma_min_overall()).epsilon(1e-12));
}

TEST_CASE("appending a sensor never destroys strategicness") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
        SensorSuite s = suite_of({pointwise_at(u(rng) * dom.a1, u(rng) * dom.a2)});
        StrategicVerdict v = rank_test(dom, s, ms, kBottom, quad, 1e-10);
        if (!v.strategic) continue;
        s.sensors.push_back(pointwise_at(u(rng) * dom.a1, u(rng) * dom.a2));
        StrategicVerdict v2 = rank_test(dom, s, ms, kBottom, quad, 1e-10);
        CHECK(v2.strategic);
    }
}

TEST_CASE("the verdict depends on gamma only through the declared assumption") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    SensorSuite s = suite_of({pointwise_at(0.23, 0.41)});
    StrategicVerdict whole = rank_test(dom, s, ms, kBottom, quad, 1e-10);
    StrategicVerdict part =
        rank_test(dom, s, ms, BoundaryRegion{Side::Bottom, 0.2, 0.7}, quad, 1e-10);
    CHECK(whole.strategic == part.strategic);
    CHECK(whole.sigma_max == part.sigma_max);
    REQUIRE(whole.groups.size() == part.groups.size());
    for (std::size_t i = 0; i < whole.groups.size(); ++i) {
        CHECK(whole.groups[i].sigma_min == part.groups[i].sigma_min);
        CHECK(whole.groups[i].numerical_rank == part.groups[i].numerical_rank);
    }
    CHECK(whole.assumption != part.assumption); // the declaration itself moves with gamma
}

TEST_CASE("completeness surrogate reaches level J on the pinned region") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    CompletenessSurrogate c =
        completeness_surrogate(dom, ms, kBottom, QuadratureSpec::for_level(3), 1e-10);
    CHECK(c.required == 3);
    CHECK(c.rank >= c.required);
    CHECK(c.full_rank);
    CHECK(c.condition >= 1.0);
}

TEST_CASE("crossing check: implication holds on both pinned examples") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    SensorSuite good = suite_of({pointwise_at(0.23, 0.41)});
    CrossingReport cg = crossing_check(dom, good, ms, kBottom, 0.1, quad, 1e-10);
    CHECK(cg.internal_pass);
    CHECK(cg.boundary_pass);
    CHECK(cg.implication_holds);
    CHECK(cg.collar_area > 0.0);
    CHECK(cg.collar_area < dom.a1 * dom.a2);
    CHECK(cg.radius == 0.1);

    SensorSuite blind = suite_of({Sensor::internal_pointwise(Coord::fraction(1, 2, dom.a1),
                                                             Coord::fraction(1, 2, dom.a2))});
    CrossingReport cb = crossing_check(dom, blind, ms, kBottom, 0.1, quad, 1e-10);
    CHECK_FALSE(cb.internal_pass);
    CHECK_FALSE(cb.boundary_pass);
    CHECK(cb.implication_holds);

    CHECK_THROWS_AS(
        crossing_check(dom, good, ms, kBottom, std::max(dom.a1, dom.a2), quad, 1e-10),
        RadiusTooLarge);
    CHECK_THROWS_AS(crossing_check(dom, good, ms, kBottom, 0.0, quad, 1e-10), ValidationError);
}

TEST_CASE("scan: a one-point grid reproduces rank_test") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    Sensor tpl = pointwise_at(0.1, 0.1);
    ScanResult res = scan_locations(dom, tpl, ms, kBottom, {0.23}, {0.41}, quad, 1e-10, 1);
    REQUIRE(res.records.size() == 1);
    const ScanRecord& rec = res.records[0];
    CHECK(rec.valid);
    StrategicVerdict v =
        rank_test(dom, suite_of({pointwise_at(0.23, 0.41)}), ms, kBottom, quad, 1e-10);
    CHECK(rec.strategic == v.strategic);
    CHECK(rec.sigma_min == v.sigma_min_overall());
    CHECK(rec.x == 0.23);
    CHECK(rec.y == 0.41);
}

TEST_CASE("scan: invalid grid points produce failure records, not aborts") {
    RectDomain dom(1.0, 1.0);
    ModeSet ms = build_mode_set(dom, 2);
    const QuadratureSpec quad = QuadratureSpec::for_level(2);
    Sensor tpl = pointwise_at(0.1, 0.1);
    ScanResult res = scan_locations(dom, tpl, ms, kBottom, {0.3, 1.7}, {0.4}, quad, 1e-10, 1);
    REQUIRE(res.records.size() == 2);
    CHECK(res.records[0].valid);
    CHECK_FALSE(res.records[1].valid);
    CHECK_FALSE(res.records[1].strategic);
    CHECK_FALSE(res.records[1].note.empty());
    CHECK_THROWS_AS(scan_locations(dom, tpl, ms, kBottom, {}, {0.4}, quad, 1e-10, 1),
                    ValidationError);
}

TEST_CASE("scan records are identical across thread counts") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    Sensor tpl = pointwise_at(0.1, 0.1);
    std::vector<double> xs, ys;
    for (int i = 1; i <= 6; ++i) xs.push_back(i / 7.0 * dom.a1);
    for (int i = 1; i <= 5; ++i) ys.push_back(i / 6.0 * dom.a2);
    ScanResult seq = scan_locations(dom, tpl, ms, kBottom, xs, ys, quad, 1e-10, 1);
    ScanResult par = scan_locations(dom, tpl, ms, kBottom, xs, ys, quad, 1e-10, 8);
    REQUIRE(seq.records.size() == par.records.size());
    for (std::size_t i = 0; i < seq.records.size(); ++i) {
        CHECK(seq.records[i].valid == par.records[i].valid);
        CHECK(seq.records[i].strategic == par.records[i].strategic);
        CHECK(seq.records[i].sigma_min == par.records[i].sigma_min);
        CHECK(seq.records[i].x == par.records[i].x);
        CHECK(seq.records[i].y == par.records[i].y);
    }
}

TEST_CASE("scan relocates boundary templates along the arc coordinate") {
    RectDomain dom(1.0, std::sqrt(2.0));
    ModeSet ms = build_mode_set(dom, 3);
    const QuadratureSpec quad = QuadratureSpec::for_level(3);
    Sensor tpl = Sensor::boundary_pointwise(Side::Left, Coord::unspecified(0.3));
    ScanResult res = scan_locations(dom, tpl, ms, kBottom, {0.2 * dom.a2, 0.9 * dom.a2}, {}, quad,
                                    1e-10, 2);
    REQUIRE(res.records.size() == 2);
    CHECK(res.records[0].valid);
    CHECK(res.records[1].valid);
    CHECK(res.ys.empty());
}
