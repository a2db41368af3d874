#include "gwrd/aux_model.hpp"

#include "gwrd/format.hpp"

#include <cmath>
#include <stdexcept>

namespace gwrd {

AuxChannel::AuxChannel(std::size_t s1_card, std::size_t s2_card, FiniteAlphabet u0,
                       FiniteAlphabet u1, std::vector<double> cond)
    : s1_card_(s1_card), s2_card_(s2_card), u0_(std::move(u0)), u1_(std::move(u1)),
      cond_(std::move(cond))
{
    if (s1_card_ == 0 || s2_card_ == 0)
        throw std::invalid_argument("channel needs non-empty S1 and S2 alphabets");
    if (cond_.size() != rows() * cols())
        throw std::invalid_argument("channel table has " + std::to_string(cond_.size()) +
                                    " entries, expected " + std::to_string(rows() * cols()));
    for (std::size_t r = 0; r < rows(); ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < cols(); ++c) {
            double p = cond_[r * cols() + c];
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("channel entries must be finite and nonnegative");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kNormTolerance)
            throw std::invalid_argument("channel row " + std::to_string(r) + " sums to " +
                                        fmt17(sum));
    }
}

AuxChannel AuxChannel::deterministic(std::size_t s1_card, std::size_t s2_card, FiniteAlphabet u0,
                                     FiniteAlphabet u1, const std::vector<std::size_t>& f0,
                                     const std::vector<std::size_t>& f1)
{
    const std::size_t rows = s1_card * s2_card, n0 = u0.size(), n1 = u1.size();
    if (f0.size() != rows || f1.size() != rows)
        throw std::invalid_argument("deterministic channel maps must cover S1 x S2");
    std::vector<double> cond(rows * n0 * n1, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        if (f0[r] >= n0 || f1[r] >= n1)
            throw std::invalid_argument("deterministic channel map out of range");
        cond[r * n0 * n1 + f0[r] * n1 + f1[r]] = 1.0;
    }
    return AuxChannel(s1_card, s2_card, std::move(u0), std::move(u1), std::move(cond));
}

AuxChannel AuxChannel::constant(std::size_t s1_card, std::size_t s2_card)
{
    return AuxChannel(s1_card, s2_card, FiniteAlphabet::indexed(1), FiniteAlphabet::indexed(1),
                      std::vector<double>(s1_card * s2_card, 1.0));
}

std::string AuxChannel::serialize() const
{
    std::string out;
    for (std::size_t r = 0; r < rows(); ++r) {
        if (r)
            out += ';';
        for (std::size_t c = 0; c < cols(); ++c) {
            if (c)
                out += ' ';
            out += fmt17(cond_[r * cols() + c]);
        }
    }
    return out;
}

DistortionMeasure::DistortionMeasure(std::size_t s1_card, FiniteAlphabet reconstruction,
                                     std::vector<double> table)
    : s1_card_(s1_card), shat_(std::move(reconstruction)), table_(std::move(table))
{
    if (table_.size() != s1_card_ * shat_.size())
        throw std::invalid_argument("distortion table shape mismatch");
    for (double v : table_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("distortion entries must be finite and nonnegative");
}

DistortionMeasure DistortionMeasure::hamming(const FiniteAlphabet& s1)
{
    const std::size_t n = s1.size();
    std::vector<double> t(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        t[i * n + i] = 0.0;
    return DistortionMeasure(n, s1, std::move(t));
}

ReconstructionRule::ReconstructionRule(std::size_t y1_card, std::size_t u0_card,
                                       std::size_t u1_card, std::size_t s2_card,
                                       std::vector<std::size_t> map)
    : y1_card_(y1_card), u0_card_(u0_card), u1_card_(u1_card), s2_card_(s2_card),
      map_(std::move(map))
{
    if (map_.size() != y1_card_ * u0_card_ * u1_card_ * s2_card_)
        throw std::invalid_argument("reconstruction rule must cover Y1 x U0 x U1 x S2");
}

namespace {

void check_conditioning(const JointSourcePmf& source, const AuxChannel& chan)
{
    if (chan.s1_card() != source.card(Role::S1) || chan.s2_card() != source.card(Role::S2))
        throw std::invalid_argument("channel conditioning alphabets do not match S1, S2");
}

} // namespace

JointPmf extend_with_aux(const JointSourcePmf& source, const AuxChannel& chan)
{
    return extension_marginal(source, chan,
                              {Role::S1, Role::S2, Role::Y1, Role::Y2, Role::U0, Role::U1});
}

JointPmf extension_marginal(const JointSourcePmf& source, const AuxChannel& chan, VarSet keep)
{
    check_conditioning(source, chan);
    if (keep.empty())
        throw std::invalid_argument("marginal needs a non-empty variable set");

    const std::size_t n0 = chan.u0_alphabet().size(), n1 = chan.u1_alphabet().size();
    std::vector<Role> roles;
    std::vector<FiniteAlphabet> alph;
    for (Role r : keep.roles()) {
        roles.push_back(r);
        if (r == Role::U0)
            alph.push_back(chan.u0_alphabet());
        else if (r == Role::U1)
            alph.push_back(chan.u1_alphabet());
        else
            alph.push_back(source.alphabet(r));
    }
    std::size_t stride[kNumRoles] = {};
    std::size_t total = 1;
    for (std::size_t i = roles.size(); i-- > 0;) {
        stride[std::size_t(roles[i])] = total;
        total *= alph[i].size();
    }
    std::vector<double> out(total, 0.0);
    const auto& cond = chan.table();
    for (const auto& a : source.support()) {
        const std::size_t base = a.s1 * stride[0] + a.s2 * stride[1] + a.y1 * stride[2] +
                                 a.y2 * stride[3];
        const double* row = &cond[(a.s1 * chan.s2_card() + a.s2) * n0 * n1];
        for (std::size_t u0 = 0; u0 < n0; ++u0)
            for (std::size_t u1 = 0; u1 < n1; ++u1) {
                double c = row[u0 * n1 + u1];
                if (c > 0.0)
                    out[base + u0 * stride[4] + u1 * stride[5]] += a.p * c;
            }
    }
    return JointPmf(std::move(roles), std::move(alph), std::move(out));
}

namespace {

// Dense view of P(s1, s2, y1, u0, u1).
struct PhiTable {
    std::size_t n_s1, n_s2, n_y1, n_u0, n_u1;
    JointPmf m;

    explicit PhiTable(const JointPmf& ext)
        : m(ext.marginal({Role::S1, Role::S2, Role::Y1, Role::U0, Role::U1}))
    {
        n_s1 = m.card(Role::S1);
        n_s2 = m.card(Role::S2);
        n_y1 = m.card(Role::Y1);
        n_u0 = m.card(Role::U0);
        n_u1 = m.card(Role::U1);
    }

    double p(std::size_t s1, std::size_t s2, std::size_t y1, std::size_t u0, std::size_t u1) const
    {
        return m.probs()[(((s1 * n_s2 + s2) * n_y1 + y1) * n_u0 + u0) * n_u1 + u1];
    }
};

} // namespace

double expected_distortion(const JointPmf& ext, const ReconstructionRule& phi,
                           const DistortionMeasure& d)
{
    PhiTable t(ext);
    if (phi.y1_card() != t.n_y1 || phi.u0_card() != t.n_u0 || phi.u1_card() != t.n_u1 ||
        phi.s2_card() != t.n_s2)
        throw std::invalid_argument("reconstruction rule shape does not match the pmf");
    if (d.s1_card() != t.n_s1)
        throw std::invalid_argument("distortion measure shape does not match S1");
    double sum = 0.0;
    for (std::size_t s1 = 0; s1 < t.n_s1; ++s1)
        for (std::size_t s2 = 0; s2 < t.n_s2; ++s2)
            for (std::size_t y1 = 0; y1 < t.n_y1; ++y1)
                for (std::size_t u0 = 0; u0 < t.n_u0; ++u0)
                    for (std::size_t u1 = 0; u1 < t.n_u1; ++u1) {
                        double p = t.p(s1, s2, y1, u0, u1);
                        if (p > 0.0) {
                            std::size_t shat = phi(y1, u0, u1, s2);
                            if (shat >= d.reconstruction().size())
                                throw std::invalid_argument("reconstruction index out of range");
                            sum += p * d(s1, shat);
                        }
                    }
    return sum;
}

OptimalPhi optimal_phi(const JointPmf& ext, const DistortionMeasure& d)
{
    PhiTable t(ext);
    if (d.s1_card() != t.n_s1)
        throw std::invalid_argument("distortion measure shape does not match S1");
    const std::size_t n_hat = d.reconstruction().size();
    std::vector<std::size_t> map(t.n_y1 * t.n_u0 * t.n_u1 * t.n_s2, 0);
    std::vector<double> col(t.n_s1);
    double total = 0.0;
    std::size_t cell = 0;
    for (std::size_t y1 = 0; y1 < t.n_y1; ++y1)
        for (std::size_t u0 = 0; u0 < t.n_u0; ++u0)
            for (std::size_t u1 = 0; u1 < t.n_u1; ++u1)
                for (std::size_t s2 = 0; s2 < t.n_s2; ++s2, ++cell) {
                    double mass = 0.0;
                    for (std::size_t s1 = 0; s1 < t.n_s1; ++s1) {
                        col[s1] = t.p(s1, s2, y1, u0, u1);
                        mass += col[s1];
                    }
                    if (mass <= 0.0)
                        continue;
                    std::size_t best = 0;
                    double best_cost = 0.0;
                    for (std::size_t h = 0; h < n_hat; ++h) {
                        double cost = 0.0;
                        for (std::size_t s1 = 0; s1 < t.n_s1; ++s1)
                            if (col[s1] > 0.0)
                                cost += col[s1] * d(s1, h);
                        if (h == 0 || cost < best_cost) {
                            best = h;
                            best_cost = cost;
                        }
                    }
                    map[cell] = best;
                    total += best_cost;
                }
    return {ReconstructionRule(t.n_y1, t.n_u0, t.n_u1, t.n_s2, std::move(map)), total};
}

} // namespace gwrd
