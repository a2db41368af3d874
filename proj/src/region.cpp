#include "gwrd/region.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gwrd {

namespace {

constexpr VarSet S1{Role::S1}, S2{Role::S2}, Y1{Role::Y1}, Y2{Role::Y2}, U0{Role::U0},
    U1{Role::U1};

} // namespace

ExtensionInfo::ExtensionInfo(const JointPmf& ext) : vars_(ext.vars())
{
    const auto& roles = ext.roles();
    for (std::size_t i = 0; i < roles.size(); ++i)
        card_[std::size_t(roles[i])] = ext.alphabet(roles[i]).size();
    std::vector<std::size_t> digit(roles.size(), 0);
    auto probs = ext.probs();
    for (std::size_t off = 0; off < probs.size(); ++off) {
        if (probs[off] > 0.0) {
            Atom a{{}, probs[off]};
            for (std::size_t i = 0; i < roles.size(); ++i)
                a.idx[std::size_t(roles[i])] = std::uint16_t(digit[i]);
            atoms_.push_back(a);
        }
        for (std::size_t i = roles.size(); i-- > 0;) {
            if (++digit[i] < ext.alphabet(roles[i]).size())
                break;
            digit[i] = 0;
        }
    }
    init_scratch();
}

ExtensionInfo::ExtensionInfo(const JointSourcePmf& source, const AuxChannel& chan)
    : vars_{Role::S1, Role::S2, Role::Y1, Role::Y2, Role::U0, Role::U1}
{
    if (chan.s1_card() != source.card(Role::S1) || chan.s2_card() != source.card(Role::S2))
        throw std::invalid_argument("channel conditioning alphabets do not match S1, S2");
    for (Role r : {Role::S1, Role::S2, Role::Y1, Role::Y2})
        card_[std::size_t(r)] = source.card(r);
    const std::size_t n0 = chan.u0_alphabet().size(), n1 = chan.u1_alphabet().size();
    card_[4] = n0;
    card_[5] = n1;
    const auto& cond = chan.table();
    for (const auto& s : source.support()) {
        const double* row = &cond[(s.s1 * chan.s2_card() + s.s2) * n0 * n1];
        for (std::size_t u0 = 0; u0 < n0; ++u0)
            for (std::size_t u1 = 0; u1 < n1; ++u1) {
                double c = row[u0 * n1 + u1];
                if (c > 0.0)
                    atoms_.push_back({{std::uint16_t(s.s1), std::uint16_t(s.s2),
                                       std::uint16_t(s.y1), std::uint16_t(s.y2),
                                       std::uint16_t(u0), std::uint16_t(u1)},
                                      s.p * c});
            }
    }
    init_scratch();
}

void ExtensionInfo::init_scratch()
{
    std::size_t total = 1;
    for (std::size_t c : card_)
        if (c)
            total *= c;
    scratch_.assign(total, 0.0);
}

double ExtensionInfo::H(VarSet t) const
{
    if (!t.subset_of(vars_))
        throw std::invalid_argument("unknown variable role in " + t.to_string());
    if (t.empty())
        return 0.0;
    if (cached_[t.mask()])
        return cache_[t.mask()];
    std::array<std::size_t, kNumRoles> stride{};
    std::size_t total = 1;
    for (std::size_t r = kNumRoles; r-- > 0;)
        if (t.contains(Role(r))) {
            stride[r] = total;
            total *= card_[r];
        }
    touched_.clear();
    for (const auto& a : atoms_) {
        std::size_t key = 0;
        for (std::size_t r = 0; r < kNumRoles; ++r)
            key += a.idx[r] * stride[r];
        if (scratch_[key] == 0.0)
            touched_.push_back(key);
        scratch_[key] += a.p;
    }
    double h = 0.0;
    for (std::size_t k : touched_) {
        double p = scratch_[k];
        h -= p * std::log2(p);
        scratch_[k] = 0.0;
    }
    cached_[t.mask()] = true;
    cache_[t.mask()] = h;
    return h;
}

double ExtensionInfo::H(VarSet t, VarSet given) const
{
    if (t.intersects(given))
        throw std::invalid_argument("conditional_entropy: overlapping variable sets");
    return H(t | given) - H(given);
}

double ExtensionInfo::I(VarSet a, VarSet b, VarSet given) const
{
    if (a.intersects(b) || a.intersects(given) || b.intersects(given))
        throw std::invalid_argument("conditional_mutual_information: overlapping variable sets");
    return H(a | given) + H(b | given) - H(a | b | given) - H(given);
}

std::string_view variant_name(Variant v)
{
    switch (v) {
    case Variant::gw: return "gw";
    case Variant::sr: return "sr";
    case Variant::sc: return "sc";
    }
    return "?";
}

Variant parse_variant(std::string_view s)
{
    for (Variant v : {Variant::gw, Variant::sr, Variant::sc})
        if (variant_name(v) == s)
            return v;
    throw std::invalid_argument("unknown variant '" + std::string(s) + "' (gw, sr, sc)");
}

std::string_view reduction_name(Reduction r)
{
    switch (r) {
    case Reduction::sr_degraded_y1_better: return "sr_degraded_y1_better";
    case Reduction::sr_degraded_y2_better: return "sr_degraded_y2_better";
    case Reduction::sc_lossless: return "sc_lossless";
    case Reduction::sc_y2_better: return "sc_y2_better";
    }
    return "?";
}

Reduction parse_reduction(std::string_view s)
{
    for (Reduction r : {Reduction::sr_degraded_y1_better, Reduction::sr_degraded_y2_better,
                        Reduction::sc_lossless, Reduction::sc_y2_better})
        if (reduction_name(r) == s)
            return r;
    throw std::invalid_argument("unknown reduction '" + std::string(s) + "'");
}

namespace {

void require_aux(const ExtensionInfo& info)
{
    if (!(S1 | S2 | Y1 | Y2 | U0 | U1).subset_of(info.vars()))
        throw std::invalid_argument("bounds need a pmf over S1, S2, Y1, Y2, U0, U1");
}

struct Terms {
    double a1; // H(S2|Y1) + I(U0U1;S1|S2Y1)
    double a2; // H(S2|Y2) + I(U0;S1|S2Y2)
    double c;  // I(U1;S1|U0S2Y1)
};

Terms terms(const ExtensionInfo& info)
{
    require_aux(info);
    return {info.H(S2, Y1) + info.I(U0 | U1, S1, S2 | Y1),
            info.H(S2, Y2) + info.I(U0, S1, S2 | Y2), info.I(U1, S1, U0 | S2 | Y1)};
}

} // namespace

RateBounds theorem1_bounds(const ExtensionInfo& info)
{
    Terms t = terms(info);
    RateBounds b;
    b.variant = Variant::gw;
    b.b_r0_r1 = t.a1;
    b.b_r0_r2 = t.a2;
    b.b_sum = t.a2 + t.c;
    return b;
}

RateBounds theorem2_bounds(const ExtensionInfo& info)
{
    Terms t = terms(info);
    RateBounds b;
    b.variant = Variant::sr;
    b.b_r0 = t.a2;
    b.b_r0_r1 = t.a1;
    b.b_sum = t.a2 + t.c;
    return b;
}

RateBounds theorem3_bounds(const ExtensionInfo& info)
{
    Terms t = terms(info);
    RateBounds b;
    b.variant = Variant::sc;
    b.b_r0 = t.a1;
    b.b_r0_r2 = t.a2 + t.c;
    return b;
}

RateBounds bounds_for(Variant v, const ExtensionInfo& info)
{
    switch (v) {
    case Variant::gw: return theorem1_bounds(info);
    case Variant::sr: return theorem2_bounds(info);
    case Variant::sc: return theorem3_bounds(info);
    }
    throw std::invalid_argument("unknown variant");
}

RateBounds reduced_region_bounds(const ExtensionInfo& info, Reduction r)
{
    Terms t = terms(info);
    RateBounds b;
    switch (r) {
    case Reduction::sr_degraded_y1_better:
        b.variant = Variant::sr;
        b.b_r0 = t.a2;
        b.b_sum = t.a2 + t.c;
        break;
    case Reduction::sr_degraded_y2_better:
        b.variant = Variant::sr;
        b.b_r0 = t.a2;
        b.b_r0_r1 = t.a1;
        break;
    case Reduction::sc_lossless:
        b.variant = Variant::sc;
        b.b_r0 = info.H(S1 | S2, Y1);
        b.b_r0_r2 = info.H(S1 | S2, Y2) + info.H(S1, U0 | S2 | Y1) - info.H(S1, U0 | S2 | Y2);
        break;
    case Reduction::sc_y2_better:
        b.variant = Variant::sc;
        b.b_r0 = t.a1;
        break;
    }
    return b;
}

bool point_in_region(const RateDistortionPoint& p, const RateBounds& b, double tol)
{
    const double r1 = b.variant == Variant::sc ? 0.0 : p.r1;
    const double r2 = b.variant == Variant::sr ? 0.0 : p.r2;
    auto ok = [tol](double lhs, const std::optional<double>& rhs) {
        return !rhs || lhs >= *rhs - tol;
    };
    return ok(p.r0, b.b_r0) && ok(p.r0 + r1, b.b_r0_r1) && ok(p.r0 + r2, b.b_r0_r2) &&
           ok(p.r0 + r1 + r2, b.b_sum);
}

std::map<std::string, double> achievability_constants(const ExtensionInfo& info)
{
    const VarSet s1{Role::S1}, s2{Role::S2}, y1{Role::Y1}, y2{Role::Y2}, u0{Role::U0}, u1{Role::U1};
    const VarSet v0 = u0 | s2;
    return {
        {kCa, info.H(v0) + info.H(s1 | s2) - info.H(v0 | s1)},
        {kCb, info.I(u1, s1, v0)},
        {kC1, info.I(v0, y1)},
        {kC2, info.I(v0, y2)},
        {kCd, info.I(u1, y1, v0)},
    };
}

} // namespace gwrd
