#include "doctest.h"
#include "helpers.hpp"

#include "gwrd/corpus.hpp"
#include "gwrd/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace gwrd;

namespace {

const VarSet S1{Role::S1}, S2{Role::S2}, Y1{Role::Y1}, Y2{Role::Y2}, U0{Role::U0}, U1{Role::U1};

// Full-network right-hand sides straight from the full table.
std::array<double, 3> reference_bounds(const JointPmf& ext)
{
    double a1 = conditional_entropy(ext, S2, Y1) +
                conditional_mutual_information(ext, U0 | U1, S1, S2 | Y1);
    double a2 = conditional_entropy(ext, S2, Y2) + conditional_mutual_information(ext, U0, S1, S2 | Y2);
    double c = conditional_mutual_information(ext, U1, S1, U0 | S2 | Y1);
    return {a1, a2, a2 + c};
}

} // namespace

TEST_CASE("example1 bounds at the documented channel")
{
    auto e1 = build_example1();
    auto ext = extend_with_aux(e1.source, *e1.documented_channel);
    auto b1 = theorem1_bounds(ext);
    CHECK(*b1.b_r0_r1 == 2.0);
    CHECK(*b1.b_r0_r2 == 1.0);
    CHECK(*b1.b_sum == 1.0);
    CHECK(!b1.b_r0);
    auto b2 = theorem2_bounds(ext);
    CHECK(*b2.b_r0 == 1.0);
    CHECK(*b2.b_r0_r1 == 2.0);
    CHECK(*b2.b_sum == 1.0);
    // 2 + H(X2X3|X4U0) - H(X1|X4U0) on the table
    double chain = 2.0 + conditional_entropy(ext, Y2, S2 | U0) - conditional_entropy(ext, Y1, S2 | U0);
    CHECK(chain == 1.0);
}

TEST_CASE("example2 bounds")
{
    auto e2 = build_example2();
    auto ext = extend_with_aux(e2.source, *e2.documented_channel);
    auto b1 = theorem1_bounds(ext);
    CHECK(*b1.b_r0_r1 == 1.0);
    CHECK(*b1.b_sum == 1.0);
    auto b3 = theorem3_bounds(ext);
    CHECK(*b3.b_r0 == 1.0);
    CHECK(*b3.b_r0_r2 == 1.0);

    auto sub = theorem3_bounds(extend_with_aux(e2.source, *e2.suboptimal_channel));
    CHECK(*sub.b_r0 == 1.0);
    CHECK(*sub.b_r0_r2 == 2.0);

    // Both auxiliaries constant: cheaper bounds, but decoder 1 then misses X3.
    auto cext = extend_with_aux(e2.source, AuxChannel::constant(4, 2));
    auto cb = theorem3_bounds(cext);
    CHECK(*cb.b_r0 == 0.0);
    CHECK(*cb.b_r0_r2 == 1.0);
    auto d = DistortionMeasure::hamming(e2.source.alphabet(Role::S1));
    CHECK(optimal_phi(cext, d).distortion == 0.5);
    CHECK(optimal_phi(extend_with_aux(e2.source, *e2.suboptimal_channel), d).distortion == 0.0);
    CHECK(optimal_phi(ext, d).distortion == 0.0);
}

TEST_CASE("degenerate sources")
{
    // S1 independent of everything, S2 = Y1 = Y2, constant auxiliaries.
    std::vector<double> probs(2 * 2 * 2 * 2, 0.0);
    for (std::size_t s1 = 0; s1 < 2; ++s1)
        for (std::size_t x = 0; x < 2; ++x)
            probs[((s1 * 2 + x) * 2 + x) * 2 + x] = 0.25;
    JointSourcePmf src(FiniteAlphabet::indexed(2), FiniteAlphabet::indexed(2),
                       FiniteAlphabet::indexed(2), FiniteAlphabet::indexed(2), probs);
    auto ext = extend_with_aux(src, AuxChannel::constant(2, 2));
    auto b = theorem1_bounds(ext);
    CHECK(*b.b_r0_r1 == 0.0);
    CHECK(*b.b_r0_r2 == 0.0);
    CHECK(*b.b_sum == 0.0);
    CHECK(*theorem2_bounds(ext).b_r0 == 0.0);

    // S1 a function of (S2, Y1) and of (S2, Y2): bounds are conditional entropies of S2.
    testutil::Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        auto w = testutil::random_simplex(rng, 2 * 3);
        std::vector<double> q(2 * 2 * 3 * 3, 0.0);
        for (std::size_t s2 = 0; s2 < 2; ++s2)
            for (std::size_t y = 0; y < 3; ++y) {
                std::size_t s1 = (s2 + y) % 2;
                q[((s1 * 2 + s2) * 3 + y) * 3 + y] = w[s2 * 3 + y];
            }
        JointSourcePmf fs(FiniteAlphabet::indexed(2), FiniteAlphabet::indexed(2),
                          FiniteAlphabet::indexed(3), FiniteAlphabet::indexed(3), q);
        auto fext = extend_with_aux(fs, AuxChannel::constant(2, 2));
        auto b3 = theorem3_bounds(fext);
        CHECK(*b3.b_r0 == doctest::Approx(conditional_entropy(fext, S2, Y1)).epsilon(1e-12));
        CHECK(*b3.b_r0_r2 == doctest::Approx(conditional_entropy(fext, S2, Y2)).epsilon(1e-12));
    }
}

TEST_CASE("membership")
{
    RateBounds claim1;
    claim1.variant = Variant::sr;
    claim1.b_r0 = 1.0;
    claim1.b_r0_r1 = 2.0;
    claim1.b_sum = 2.0;
    CHECK(point_in_region({1, 1, 0, 0}, claim1));
    CHECK(!point_in_region({0.5, 1.4, 0, 0}, claim1));
    RateBounds zero;
    zero.b_r0_r1 = zero.b_r0_r2 = zero.b_sum = 0.0;
    CHECK(point_in_region({0, 0, 0, 0}, zero));
    RateBounds gw;
    gw.b_r0_r1 = 2.0;
    gw.b_r0_r2 = 1.0;
    gw.b_sum = 2.5;
    CHECK(point_in_region({1, 1, 0.5, 0}, gw));
    CHECK(!point_in_region({1, 1, 0.4, 0}, gw));
    CHECK(point_in_region({1, 1, 0.4, 0}, gw, 0.1 + 1e-12));
}

TEST_CASE("fast bounds agree with the full table")
{
    testutil::Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        auto src = testutil::random_source(rng, 3, 2, 2, 3, 0.3);
        auto chan = testutil::random_channel(rng, 3, 2, 3, 2, t % 2 ? 0.5 : 0.0);
        auto ext = extend_with_aux(src, chan);
        auto ref = reference_bounds(ext);
        auto fast = theorem1_bounds(ExtensionInfo(src, chan));
        auto full = theorem1_bounds(ext);
        CHECK(*fast.b_r0_r1 == doctest::Approx(ref[0]).epsilon(1e-12));
        CHECK(*fast.b_r0_r2 == doctest::Approx(ref[1]).epsilon(1e-12));
        CHECK(*fast.b_sum == doctest::Approx(ref[2]).epsilon(1e-12));
        CHECK(std::abs(*full.b_sum - ref[2]) <= 1e-12);
    }
}

TEST_CASE("specialization and combined sum-rate identity on random channels")
{
    testutil::Rng rng(13);
    int min_form_differs = 0;
    for (int t = 0; t < 100; ++t) {
        auto src = testutil::random_source(rng, 2, 2, 3, 3, 0.2);
        auto chan = testutil::random_channel(rng, 2, 2, 3, 2, 0.3);
        ExtensionInfo info(src, chan);
        auto b1 = theorem1_bounds(info);
        auto b2 = theorem2_bounds(info);
        auto b3 = theorem3_bounds(info);
        CHECK(*b2.b_r0 == *b1.b_r0_r2);
        CHECK(*b2.b_r0_r1 == *b1.b_r0_r1);
        CHECK(*b2.b_sum == *b1.b_sum);
        CHECK(*b3.b_r0 == *b1.b_r0_r1);
        CHECK(*b3.b_r0_r2 == *b1.b_sum);

        // I(U0S2; S1S2 | Y) with the shared S2, from entropies
        auto iv = [&](VarSet y) {
            return info.H(U0 | S2, y) + info.H(S1 | S2, y) - info.H(U0 | S1 | S2, y);
        };
        double i1 = iv(Y1), i2 = iv(Y2);
        double c = info.I(U1, S1, U0 | S2 | Y1);
        CHECK(i1 == doctest::Approx(info.H(S2, Y1) + info.I(U0, S1, S2 | Y1)).epsilon(1e-9));
        double combined = std::max(*b2.b_r0_r1, *b2.b_sum);
        CHECK(combined == doctest::Approx(std::max(i1, i2) + c).epsilon(1e-9));
        if (std::abs(combined - (std::min(i1, i2) + c)) > 1e-6)
            ++min_form_differs;
    }
    CHECK(min_form_differs > 0);
}

TEST_CASE("degraded side information: the R0+R1 constraint is implied")
{
    testutil::Rng rng(17);
    for (int s = 0; s < 20; ++s) {
        auto src = testutil::random_degraded_source(rng, 2, 2, 3, 2);
        for (int c = 0; c < 50; ++c) {
            auto chan = testutil::random_channel(rng, 2, 2, 3, 2, 0.3);
            ExtensionInfo info(src, chan);
            CHECK(info.H(S2, Y2) + info.I(U0, S1, S2 | Y2) >=
                  info.H(S2, Y1) + info.I(U0, S1, S2 | Y1) - 1e-9);
        }
    }
}

TEST_CASE("reductions")
{
    testutil::Rng rng(23);
    auto src = testutil::random_degraded_source(rng, 2, 2, 3, 2);
    auto chan = testutil::random_channel(rng, 2, 2, 2, 2);
    ExtensionInfo info(src, chan);
    auto b2 = theorem2_bounds(info);
    auto y1b = reduced_region_bounds(info, Reduction::sr_degraded_y1_better);
    CHECK(*y1b.b_r0 == *b2.b_r0);
    CHECK(*y1b.b_sum == *b2.b_sum);
    CHECK(!y1b.b_r0_r1);
    auto y2b = reduced_region_bounds(info, Reduction::sr_degraded_y2_better);
    CHECK(*y2b.b_r0 == *b2.b_r0);
    CHECK(*y2b.b_r0_r1 == *b2.b_r0_r1);
    auto sc = reduced_region_bounds(info, Reduction::sc_y2_better);
    CHECK(*sc.b_r0 == doctest::Approx(info.H(S2, Y1) + info.I(U0 | U1, S1, S2 | Y1)).epsilon(1e-12));
    CHECK(!sc.b_r0_r2);

    ExtensionInfo cinfo(src, AuxChannel::constant(2, 2));
    auto ll = reduced_region_bounds(cinfo, Reduction::sc_lossless);
    CHECK(*ll.b_r0 == doctest::Approx(cinfo.H(S1 | S2, Y1)).epsilon(1e-12));
    CHECK(*ll.b_r0_r2 == doctest::Approx(cinfo.H(S1 | S2, Y2) + cinfo.H(S1, S2 | Y1) -
                                         cinfo.H(S1, S2 | Y2))
                             .epsilon(1e-12));
    auto cy = reduced_region_bounds(cinfo, Reduction::sc_y2_better);
    CHECK(*cy.b_r0 == doctest::Approx(cinfo.H(S2, Y1)).epsilon(1e-12));
}

TEST_CASE("bounds are invariant under relabeling")
{
    testutil::Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        auto src = testutil::random_source(rng, 3, 2, 2, 2, 0.2);
        auto chan = testutil::random_channel(rng, 3, 2, 2, 2, 0.2);
        // permute S1 symbols and U0 symbols
        std::vector<std::size_t> ps1{2, 0, 1}, pu0{1, 0};
        std::vector<double> probs(src.pmf().size());
        for (std::size_t s1 = 0; s1 < 3; ++s1)
            for (std::size_t rest = 0; rest < 8; ++rest)
                probs[ps1[s1] * 8 + rest] = src.pmf().probs()[s1 * 8 + rest];
        JointSourcePmf psrc(FiniteAlphabet::indexed(3), FiniteAlphabet::indexed(2),
                            FiniteAlphabet::indexed(2), FiniteAlphabet::indexed(2), probs);
        std::vector<double> cond(chan.table().size());
        for (std::size_t s1 = 0; s1 < 3; ++s1)
            for (std::size_t s2 = 0; s2 < 2; ++s2)
                for (std::size_t u0 = 0; u0 < 2; ++u0)
                    for (std::size_t u1 = 0; u1 < 2; ++u1)
                        cond[((ps1[s1] * 2 + s2) * 2 + pu0[u0]) * 2 + u1] = chan(s1, s2, u0, u1);
        AuxChannel pchan(3, 2, FiniteAlphabet::indexed(2), FiniteAlphabet::indexed(2), cond);
        auto a = theorem1_bounds(ExtensionInfo(src, chan));
        auto b = theorem1_bounds(ExtensionInfo(psrc, pchan));
        CHECK(std::abs(*a.b_r0_r1 - *b.b_r0_r1) <= 1e-12);
        CHECK(std::abs(*a.b_r0_r2 - *b.b_r0_r2) <= 1e-12);
        CHECK(std::abs(*a.b_sum - *b.b_sum) <= 1e-12);
    }
}
