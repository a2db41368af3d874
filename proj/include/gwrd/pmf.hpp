#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gwrd {

// Variable roles of the source and its auxiliary extension.
enum class Role : std::uint8_t { S1, S2, Y1, Y2, U0, U1 };

inline constexpr std::size_t kNumRoles = 6;

std::string_view role_name(Role r);
Role parse_role(std::string_view name);

// Small set of roles, stored as a bitmask.
class VarSet {
public:
    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<Role> roles)
    {
        for (Role r : roles)
            mask_ |= bit(r);
    }

    constexpr bool contains(Role r) const { return (mask_ & bit(r)) != 0; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr bool intersects(VarSet o) const { return (mask_ & o.mask_) != 0; }
    constexpr bool subset_of(VarSet o) const { return (mask_ & ~o.mask_) == 0; }
    constexpr std::uint8_t mask() const { return mask_; }

    constexpr VarSet operator|(VarSet o) const { return from_mask(mask_ | o.mask_); }
    constexpr bool operator==(const VarSet&) const = default;

    std::vector<Role> roles() const;
    std::string to_string() const;

private:
    static constexpr std::uint8_t bit(Role r) { return std::uint8_t(1u << unsigned(r)); }
    static constexpr VarSet from_mask(unsigned m)
    {
        VarSet s;
        s.mask_ = std::uint8_t(m);
        return s;
    }
    std::uint8_t mask_ = 0;
};

// Ordered list of distinct symbol labels.
class FiniteAlphabet {
public:
    explicit FiniteAlphabet(std::vector<std::string> symbols);

    // Alphabet {"0", "1", ..., "n-1"}.
    static FiniteAlphabet indexed(std::size_t n);

    std::size_t size() const { return symbols_.size(); }
    const std::string& label(std::size_t i) const { return symbols_.at(i); }
    const std::vector<std::string>& symbols() const { return symbols_; }

    // Throws std::invalid_argument when the label is unknown.
    std::size_t index_of(std::string_view label) const;

    bool operator==(const FiniteAlphabet&) const = default;

private:
    std::vector<std::string> symbols_;
};

// Dense joint probability table over a list of roles, indexed in mixed radix
// with the first declared role most significant.
class JointPmf {
public:
    JointPmf(std::vector<Role> roles, std::vector<FiniteAlphabet> alphabets,
             std::vector<double> probs);

    const std::vector<Role>& roles() const { return roles_; }
    VarSet vars() const { return vars_; }
    bool has(Role r) const { return vars_.contains(r); }
    std::size_t position(Role r) const;
    const FiniteAlphabet& alphabet(Role r) const { return alphabets_[position(r)]; }
    std::size_t card(Role r) const { return alphabet(r).size(); }

    std::size_t size() const { return probs_.size(); }
    std::span<const double> probs() const { return probs_; }
    std::size_t stride(Role r) const { return strides_[position(r)]; }

    std::size_t offset(std::span<const std::size_t> index) const;
    double at(std::span<const std::size_t> index) const { return probs_[offset(index)]; }

    // Marginal on `keep`, which must be a non-empty subset of vars(); declared
    // role order is preserved.
    JointPmf marginal(VarSet keep) const;

private:
    std::vector<Role> roles_;
    std::vector<FiniteAlphabet> alphabets_;
    std::vector<std::size_t> strides_;
    std::vector<double> probs_;
    VarSet vars_;
};

// Probabilities must sum to one within this tolerance.
inline constexpr double kNormTolerance = 1e-9;

double binary_entropy(double alpha);

// Shannon measures in bits. The empty set is allowed as a conditioning set.
double entropy(const JointPmf& pmf, VarSet targets);
double conditional_entropy(const JointPmf& pmf, VarSet targets, VarSet given);
double mutual_information(const JointPmf& pmf, VarSet a, VarSet b);
double conditional_mutual_information(const JointPmf& pmf, VarSet a, VarSet b, VarSet given);

// -sum p log2 p over a table, with 0 log 0 = 0.
double table_entropy(std::span<const double> probs);

} // namespace gwrd

namespace gwrd {

// Joint pmf of (S1, S2, Y1, Y2), in that declared order.
class JointSourcePmf {
public:
    struct Atom {
        std::size_t s1, s2, y1, y2;
        double p;
    };

    JointSourcePmf(FiniteAlphabet s1, FiniteAlphabet s2, FiniteAlphabet y1, FiniteAlphabet y2,
                   std::vector<double> probs);
    explicit JointSourcePmf(JointPmf pmf);

    const JointPmf& pmf() const { return pmf_; }
    const FiniteAlphabet& alphabet(Role r) const { return pmf_.alphabet(r); }
    std::size_t card(Role r) const { return pmf_.card(r); }
    double prob(std::size_t s1, std::size_t s2, std::size_t y1, std::size_t y2) const;

    // Atoms with positive probability, in table order.
    const std::vector<Atom>& support() const { return support_; }

private:
    JointPmf pmf_;
    std::vector<Atom> support_;
};

} // namespace gwrd
