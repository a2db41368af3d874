#include "gwrd/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gwrd {

namespace {

constexpr std::string_view kRoleNames[kNumRoles] = {"S1", "S2", "Y1", "Y2", "U0", "U1"};

} // namespace

std::string_view role_name(Role r) { return kRoleNames[std::size_t(r)]; }

Role parse_role(std::string_view name)
{
    for (std::size_t i = 0; i < kNumRoles; ++i)
        if (kRoleNames[i] == name)
            return Role(i);
    throw std::invalid_argument("unknown variable role '" + std::string(name) + "'");
}

std::vector<Role> VarSet::roles() const
{
    std::vector<Role> out;
    for (std::size_t i = 0; i < kNumRoles; ++i)
        if (contains(Role(i)))
            out.push_back(Role(i));
    return out;
}

std::string VarSet::to_string() const
{
    std::string s = "{";
    for (Role r : roles()) {
        if (s.size() > 1)
            s += ",";
        s += role_name(r);
    }
    return s + "}";
}

FiniteAlphabet::FiniteAlphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols))
{
    if (symbols_.empty())
        throw std::invalid_argument("alphabet must have at least one symbol");
    std::set<std::string> seen;
    for (const auto& s : symbols_)
        if (!seen.insert(s).second)
            throw std::invalid_argument("duplicate alphabet label '" + s + "'");
}

FiniteAlphabet FiniteAlphabet::indexed(std::size_t n)
{
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(std::to_string(i));
    return FiniteAlphabet(std::move(labels));
}

std::size_t FiniteAlphabet::index_of(std::string_view label) const
{
    auto it = std::find(symbols_.begin(), symbols_.end(), label);
    if (it == symbols_.end())
        throw std::invalid_argument("unknown symbol '" + std::string(label) + "'");
    return std::size_t(it - symbols_.begin());
}

JointPmf::JointPmf(std::vector<Role> roles, std::vector<FiniteAlphabet> alphabets,
                   std::vector<double> probs)
    : roles_(std::move(roles)), alphabets_(std::move(alphabets)), probs_(std::move(probs))
{
    if (roles_.empty())
        throw std::invalid_argument("pmf needs at least one variable");
    if (roles_.size() != alphabets_.size())
        throw std::invalid_argument("pmf roles and alphabets differ in count");
    for (Role r : roles_) {
        if (vars_.contains(r))
            throw std::invalid_argument("role " + std::string(role_name(r)) + " declared twice");
        vars_ = vars_ | VarSet{r};
    }
    strides_.assign(roles_.size(), 1);
    std::size_t total = 1;
    for (std::size_t i = roles_.size(); i-- > 0;) {
        strides_[i] = total;
        total *= alphabets_[i].size();
    }
    if (probs_.size() != total)
        throw std::invalid_argument("pmf table has " + std::to_string(probs_.size()) +
                                    " entries, expected " + std::to_string(total));
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("pmf entries must be finite and nonnegative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probabilities sum to " << sum << " (deficit " << 1.0 - sum << ")";
        throw std::invalid_argument(msg.str());
    }
}

std::size_t JointPmf::position(Role r) const
{
    auto it = std::find(roles_.begin(), roles_.end(), r);
    if (it == roles_.end())
        throw std::invalid_argument("pmf has no variable " + std::string(role_name(r)));
    return std::size_t(it - roles_.begin());
}

std::size_t JointPmf::offset(std::span<const std::size_t> index) const
{
    if (index.size() != roles_.size())
        throw std::invalid_argument("index arity mismatch");
    std::size_t off = 0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (index[i] >= alphabets_[i].size())
            throw std::out_of_range("symbol index out of range");
        off += index[i] * strides_[i];
    }
    return off;
}

JointPmf JointPmf::marginal(VarSet keep) const
{
    if (keep.empty())
        throw std::invalid_argument("marginal needs a non-empty variable set");
    if (!keep.subset_of(vars_))
        throw std::invalid_argument("unknown variable role in " + keep.to_string());
    if (keep == vars_)
        return *this;

    std::vector<Role> out_roles;
    std::vector<FiniteAlphabet> out_alph;
    for (std::size_t i = 0; i < roles_.size(); ++i) {
        if (keep.contains(roles_[i])) {
            out_roles.push_back(roles_[i]);
            out_alph.push_back(alphabets_[i]);
        }
    }
    // Stride of each source digit inside the output table (0 if summed out).
    std::vector<std::size_t> out_stride(roles_.size(), 0);
    std::size_t total = 1;
    for (std::size_t i = roles_.size(); i-- > 0;) {
        if (keep.contains(roles_[i])) {
            out_stride[i] = total;
            total *= alphabets_[i].size();
        }
    }
    std::vector<double> out(total, 0.0);
    std::vector<std::size_t> digit(roles_.size(), 0);
    std::size_t out_off = 0;
    const std::size_t last = roles_.size() - 1;
    for (std::size_t off = 0; off < probs_.size(); ++off) {
        out[out_off] += probs_[off];
        // odometer increment, least significant digit last
        for (std::size_t i = last;; --i) {
            if (++digit[i] < alphabets_[i].size()) {
                out_off += out_stride[i];
                break;
            }
            out_off -= out_stride[i] * (digit[i] - 1);
            digit[i] = 0;
            if (i == 0)
                break;
        }
    }
    // No renormalization: it would perturb exact dyadic values.
    return JointPmf(std::move(out_roles), std::move(out_alph), std::move(out));
}

double binary_entropy(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    double h = 0.0;
    if (alpha > 0.0)
        h -= alpha * std::log2(alpha);
    if (alpha < 1.0)
        h -= (1.0 - alpha) * std::log2(1.0 - alpha);
    return h;
}

double table_entropy(std::span<const double> probs)
{
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0)
            h -= p * std::log2(p);
    return h;
}

double entropy(const JointPmf& pmf, VarSet targets)
{
    if (!targets.subset_of(pmf.vars()))
        throw std::invalid_argument("unknown variable role in " + targets.to_string());
    if (targets.empty())
        return 0.0;
    if (targets == pmf.vars())
        return table_entropy(pmf.probs());
    return table_entropy(pmf.marginal(targets).probs());
}

double conditional_entropy(const JointPmf& pmf, VarSet targets, VarSet given)
{
    if (targets.intersects(given))
        throw std::invalid_argument("conditional_entropy: overlapping variable sets");
    return entropy(pmf, targets | given) - entropy(pmf, given);
}

double mutual_information(const JointPmf& pmf, VarSet a, VarSet b)
{
    return conditional_mutual_information(pmf, a, b, VarSet{});
}

double conditional_mutual_information(const JointPmf& pmf, VarSet a, VarSet b, VarSet given)
{
    if (a.intersects(b) || a.intersects(given) || b.intersects(given))
        throw std::invalid_argument("conditional_mutual_information: overlapping variable sets");
    return entropy(pmf, a | given) + entropy(pmf, b | given) - entropy(pmf, a | b | given) -
           entropy(pmf, given);
}

} // namespace gwrd

namespace gwrd {

JointSourcePmf::JointSourcePmf(FiniteAlphabet s1, FiniteAlphabet s2, FiniteAlphabet y1,
                               FiniteAlphabet y2, std::vector<double> probs)
    : JointSourcePmf(JointPmf({Role::S1, Role::S2, Role::Y1, Role::Y2},
                              {std::move(s1), std::move(s2), std::move(y1), std::move(y2)},
                              std::move(probs)))
{
}

JointSourcePmf::JointSourcePmf(JointPmf pmf) : pmf_(std::move(pmf))
{
    const std::vector<Role> expected{Role::S1, Role::S2, Role::Y1, Role::Y2};
    if (pmf_.roles() != expected)
        throw std::invalid_argument("source pmf must be declared over (S1, S2, Y1, Y2)");
    const std::size_t n1 = card(Role::S1), n2 = card(Role::S2), m1 = card(Role::Y1),
                      m2 = card(Role::Y2);
    auto probs = pmf_.probs();
    std::size_t off = 0;
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b)
            for (std::size_t c = 0; c < m1; ++c)
                for (std::size_t d = 0; d < m2; ++d, ++off)
                    if (probs[off] > 0.0)
                        support_.push_back({a, b, c, d, probs[off]});
}

double JointSourcePmf::prob(std::size_t s1, std::size_t s2, std::size_t y1, std::size_t y2) const
{
    const std::size_t idx[4] = {s1, s2, y1, y2};
    return pmf_.at(idx);
}

} // namespace gwrd
