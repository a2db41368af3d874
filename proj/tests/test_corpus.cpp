#include "doctest.h"

#include "gwrd/corpus.hpp"

#include <cmath>

using namespace gwrd;

namespace {

// TV distance between P(a, y, z) and P(a, y) P(z | y), with a = (s1, s2).
double markov_residual(const JointSourcePmf& src, bool y1_in_middle)
{
    const auto probs = src.pmf().probs();
    const std::size_t na = src.card(Role::S1) * src.card(Role::S2);
    const std::size_t m1 = src.card(Role::Y1), m2 = src.card(Role::Y2);
    auto p = [&](std::size_t a, std::size_t y1, std::size_t y2) { return probs[(a * m1 + y1) * m2 + y2]; };
    const std::size_t nm = y1_in_middle ? m1 : m2, ne = y1_in_middle ? m2 : m1;
    auto at = [&](std::size_t a, std::size_t mid, std::size_t end) {
        return y1_in_middle ? p(a, mid, end) : p(a, end, mid);
    };
    std::vector<double> pam(na * nm, 0.0), pme(nm * ne, 0.0), pm(nm, 0.0);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t m = 0; m < nm; ++m)
            for (std::size_t e = 0; e < ne; ++e) {
                const double v = at(a, m, e);
                pam[a * nm + m] += v;
                pme[m * ne + e] += v;
                pm[m] += v;
            }
    double tv = 0.0;
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t m = 0; m < nm; ++m)
            for (std::size_t e = 0; e < ne; ++e) {
                const double q = pm[m] > 0 ? pam[a * nm + m] * pme[m * ne + e] / pm[m] : 0.0;
                tv += std::abs(at(a, m, e) - q);
            }
    return 0.5 * tv;
}

SearchConfig probe(std::size_t samples)
{
    SearchConfig cfg;
    cfg.samples = samples;
    cfg.seed = 7;
    return cfg;
}

} // namespace

TEST_CASE("builtin sources by name")
{
    CHECK(builtin_source("example1").name == "example1");
    CHECK(builtin_source("example2").variant == Variant::sc);
    auto bs = builtin_source("bs-lossless:0.1");
    CHECK(bs.source.pmf().probs()[0] == doctest::Approx(0.5 * 0.9 * 0.9));
    CHECK_THROWS_AS(builtin_source("bs-lossless:"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_source("bs-lossless:0.1x"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_source("bs-lossless:1.5"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_source("example3"), std::invalid_argument);
}

TEST_CASE("examples have no degradedness ordering")
{
    for (const auto& ns : {build_example1(), build_example2()}) {
        CAPTURE(ns.name);
        CHECK(markov_residual(ns.source, true) > 0.01);
        CHECK(markov_residual(ns.source, false) > 0.01);
    }
    // a physically degraded pair for contrast: Y1 = Y2 = X
    CHECK(markov_residual(build_bs_lossless(0.0).source, true) < 1e-15);
}

TEST_CASE("documented channels are lossless at receiver 1")
{
    for (const auto& ns : {build_example1(), build_example2()}) {
        auto d = DistortionMeasure::hamming(ns.source.alphabet(Role::S1));
        CHECK(optimal_phi(extend_with_aux(ns.source, *ns.documented_channel), d).distortion == 0.0);
    }
}

TEST_CASE("claim verification")
{
    auto r1 = verify_claim("claim1", probe(300));
    CHECK(r1.variant == Variant::sr);
    CHECK(r1.documented_d1 == 0.0);
    REQUIRE(r1.achievability.size() == 2);
    CHECK(std::abs(r1.achievability[0].achieved - 1.0) < 1e-9);
    CHECK(std::abs(r1.achievability[1].achieved - 2.0) < 1e-9);
    CHECK(r1.achievability_pass());
    CHECK(r1.converse_pass());
    CHECK(r1.pass());
    CHECK(r1.converse.channels == 300);

    auto r2 = verify_claim("claim2", probe(300));
    CHECK(r2.variant == Variant::sc);
    REQUIRE(r2.achievability.size() == 1);
    CHECK(std::abs(r2.achievability[0].achieved - 1.0) < 1e-9);
    REQUIRE(r2.suboptimal.size() == 2);
    CHECK(std::abs(r2.suboptimal[0].achieved - 1.0) < 1e-9);
    CHECK(std::abs(r2.suboptimal[1].achieved - 2.0) < 1e-9);
    CHECK(r2.pass());

    CHECK_THROWS_AS(verify_claim("claim3", probe(1)), std::invalid_argument);
}

TEST_CASE("tampered frontier is flagged")
{
    auto r = verify_claim("claim1", probe(300), {{{1, 0, 0}, 0.9}, {{1, 1, 0}, 2.0}});
    CHECK_FALSE(r.achievability[0].match);
    CHECK(r.achievability[0].achieved == doctest::Approx(1.0));
    CHECK(r.achievability[1].match);
    CHECK(r.converse_pass());
    CHECK_FALSE(r.pass());

    // a value above the documented one is a mismatch as well
    auto low = verify_claim("claim1", probe(300), {{{1, 0, 0}, 1.5}});
    CHECK_FALSE(low.achievability_pass());
}
