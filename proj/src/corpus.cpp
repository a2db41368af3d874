#include "gwrd/corpus.hpp"

#include <cmath>
#include <stdexcept>

namespace gwrd {

namespace {

FiniteAlphabet bits(std::size_t width)
{
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < (std::size_t(1) << width); ++v) {
        std::string s;
        for (std::size_t b = width; b-- > 0;)
            s += ((v >> b) & 1) ? '1' : '0';
        labels.push_back(s);
    }
    return FiniteAlphabet(std::move(labels));
}

std::size_t bit(std::size_t x, std::size_t i) { return (x >> i) & 1; }

} // namespace

NamedSource build_example1()
{
    // x = (x1 x2 x3 x4), x1 most significant
    std::vector<double> probs(8 * 2 * 4 * 4, 0.0);
    for (std::size_t x = 0; x < 16; ++x) {
        std::size_t x1 = bit(x, 3), x2 = bit(x, 2), x3 = bit(x, 1), x4 = bit(x, 0);
        std::size_t s1 = x1 * 4 + x2 * 2 + x3, s2 = x4, y1 = x1 * 2 + x4, y2 = x2 * 2 + x3;
        probs[((s1 * 2 + s2) * 4 + y1) * 4 + y2] = 1.0 / 16.0;
    }
    NamedSource ns{"example1", JointSourcePmf(bits(3), bits(1), bits(2), bits(2), probs), Variant::sr, {}, {}, {}, {}};
    std::vector<std::size_t> f0(16), f1(16, 0);
    for (std::size_t s1 = 0; s1 < 8; ++s1)
        for (std::size_t s2 = 0; s2 < 2; ++s2)
            f0[s1 * 2 + s2] = s1 & 3;
    ns.documented_channel = AuxChannel::deterministic(8, 2, bits(2), FiniteAlphabet::indexed(1), f0, f1);
    ns.documented_frontier = {{{1, 0, 0}, 1.0}, {{1, 1, 0}, 2.0}};
    return ns;
}

NamedSource build_example2()
{
    std::vector<double> probs(4 * 2 * 4 * 2, 0.0);
    for (std::size_t x = 0; x < 8; ++x) {
        std::size_t x1 = bit(x, 2), x2 = bit(x, 1), x3 = bit(x, 0);
        std::size_t s1 = x1 * 2 + x3, s2 = x2, y1 = x1 * 2 + x2, y2 = x3;
        probs[((s1 * 2 + s2) * 4 + y1) * 2 + y2] = 1.0 / 8.0;
    }
    NamedSource ns{"example2", JointSourcePmf(bits(2), bits(1), bits(2), bits(1), probs), Variant::sc, {}, {}, {}, {}};
    std::vector<std::size_t> x3(8), zero(8, 0);
    for (std::size_t s1 = 0; s1 < 4; ++s1)
        for (std::size_t s2 = 0; s2 < 2; ++s2)
            x3[s1 * 2 + s2] = s1 & 1;
    ns.documented_channel =
        AuxChannel::deterministic(4, 2, bits(1), FiniteAlphabet::indexed(1), x3, zero);
    ns.documented_frontier = {{{1, 0, 0}, 1.0}};
    ns.suboptimal_channel =
        AuxChannel::deterministic(4, 2, FiniteAlphabet::indexed(1), bits(1), zero, x3);
    ns.suboptimal_frontier = {{{1, 0, 0}, 1.0}, {{1, 0, 1}, 2.0}};
    return ns;
}

NamedSource build_bs_lossless(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("crossover probability must lie in [0,1]");
    std::vector<double> probs(2 * 2 * 2 * 2, 0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y1 = 0; y1 < 2; ++y1)
            for (std::size_t y2 = 0; y2 < 2; ++y2)
                probs[((x * 2 + x) * 2 + y1) * 2 + y2] =
                    0.5 * (y1 == x ? 1.0 - p : p) * (y2 == x ? 1.0 - p : p);
    NamedSource ns{"bs-lossless", JointSourcePmf(bits(1), bits(1), bits(1), bits(1), probs), Variant::gw, {}, {}, {}, {}};
    ns.documented_channel = AuxChannel::constant(2, 2);
    return ns;
}

NamedSource builtin_source(const std::string& name)
{
    if (name == "example1")
        return build_example1();
    if (name == "example2")
        return build_example2();
    const std::string prefix = "bs-lossless:";
    if (name.rfind(prefix, 0) == 0) {
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(name.substr(prefix.size()), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != name.size() - prefix.size())
            throw std::invalid_argument("bad crossover in '" + name + "'");
        return build_bs_lossless(p);
    }
    throw std::invalid_argument("unknown builtin source '" + name +
                                "' (example1, example2, bs-lossless:<p>)");
}

namespace {

constexpr double kFrontierTol = 1e-9;

std::vector<FrontierCheck> check_frontier(const JointSourcePmf& source, const AuxChannel& chan,
                                          Variant variant, const std::vector<FrontierClaim>& frontier)
{
    const auto bounds = bounds_for(variant, ExtensionInfo(source, chan));
    std::vector<FrontierCheck> out;
    for (const auto& c : frontier) {
        FrontierCheck f;
        f.claim = c;
        f.achieved = min_weighted_rates(bounds, c.weights).value;
        f.match = std::abs(f.achieved - c.value) <= kFrontierTol;
        out.push_back(f);
    }
    return out;
}

NamedSource claim_source(const std::string& name)
{
    if (name == "claim1")
        return build_example1();
    if (name == "claim2")
        return build_example2();
    throw std::invalid_argument("unknown claim '" + name + "' (claim1, claim2)");
}

} // namespace

bool ClaimReport::achievability_pass() const
{
    if (achievability.empty() || documented_d1 > d_max + 1e-12)
        return false;
    for (const auto& f : achievability)
        if (!f.match)
            return false;
    for (const auto& f : suboptimal)
        if (!f.match)
            return false;
    return true;
}

ClaimReport verify_claim(const std::string& name, const SearchConfig& cfg)
{
    return verify_claim(name, cfg, claim_source(name).documented_frontier);
}

ClaimReport verify_claim(const std::string& name, const SearchConfig& cfg,
                         const std::vector<FrontierClaim>& frontier)
{
    const NamedSource ns = claim_source(name);
    const auto d = DistortionMeasure::hamming(ns.source.alphabet(Role::S1));
    ClaimReport r;
    r.claim = name;
    r.source = ns.name;
    r.variant = ns.variant;
    r.d_max = 0.0;
    r.documented_d1 = optimal_phi(extend_with_aux(ns.source, *ns.documented_channel), d).distortion;
    r.achievability = check_frontier(ns.source, *ns.documented_channel, ns.variant, frontier);
    if (ns.suboptimal_channel)
        r.suboptimal = check_frontier(ns.source, *ns.suboptimal_channel, ns.variant, ns.suboptimal_frontier);

    std::vector<ClaimedBound> claims;
    for (const auto& c : frontier)
        claims.push_back({c.weights, c.value});
    r.converse = converse_sample_check(ns.source, d, r.d_max, claims, ns.variant, cfg);
    return r;
}

} // namespace gwrd
