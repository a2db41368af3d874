#pragma once

#include "gwrd/pmf.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gwrd {

// Conditional pmf P(u0, u1 | s1, s2), stored row-major: one row per (s1, s2),
// each row indexed by u0 * |U1| + u1.
class AuxChannel {
public:
    AuxChannel(std::size_t s1_card, std::size_t s2_card, FiniteAlphabet u0, FiniteAlphabet u1,
               std::vector<double> cond);

    // Point-mass channel from two maps indexed by s1 * |S2| + s2.
    static AuxChannel deterministic(std::size_t s1_card, std::size_t s2_card, FiniteAlphabet u0,
                                    FiniteAlphabet u1, const std::vector<std::size_t>& f0,
                                    const std::vector<std::size_t>& f1);
    static AuxChannel constant(std::size_t s1_card, std::size_t s2_card);

    std::size_t s1_card() const { return s1_card_; }
    std::size_t s2_card() const { return s2_card_; }
    const FiniteAlphabet& u0_alphabet() const { return u0_; }
    const FiniteAlphabet& u1_alphabet() const { return u1_; }
    std::size_t rows() const { return s1_card_ * s2_card_; }
    std::size_t cols() const { return u0_.size() * u1_.size(); }

    double operator()(std::size_t s1, std::size_t s2, std::size_t u0, std::size_t u1) const
    {
        return cond_[(s1 * s2_card_ + s2) * cols() + u0 * u1_.size() + u1];
    }
    const std::vector<double>& table() const { return cond_; }

    // Rows joined by ';', entries by ' ', 17 significant digits.
    std::string serialize() const;

private:
    std::size_t s1_card_, s2_card_;
    FiniteAlphabet u0_, u1_;
    std::vector<double> cond_;
};

// d1(s1, shat); the reconstruction alphabet is Shat1.
class DistortionMeasure {
public:
    DistortionMeasure(std::size_t s1_card, FiniteAlphabet reconstruction, std::vector<double> table);

    // d1(s1, shat) = [s1 != shat] with Shat1 = S1.
    static DistortionMeasure hamming(const FiniteAlphabet& s1);

    std::size_t s1_card() const { return s1_card_; }
    const FiniteAlphabet& reconstruction() const { return shat_; }
    double operator()(std::size_t s1, std::size_t shat) const { return table_[s1 * shat_.size() + shat]; }

private:
    std::size_t s1_card_;
    FiniteAlphabet shat_;
    std::vector<double> table_;
};

// phi(y1, u0, u1, s2) -> shat index, dense over Y1 x U0 x U1 x S2.
class ReconstructionRule {
public:
    ReconstructionRule(std::size_t y1_card, std::size_t u0_card, std::size_t u1_card,
                       std::size_t s2_card, std::vector<std::size_t> map);

    std::size_t operator()(std::size_t y1, std::size_t u0, std::size_t u1, std::size_t s2) const
    {
        return map_[((y1 * u0_card_ + u0) * u1_card_ + u1) * s2_card_ + s2];
    }
    std::size_t y1_card() const { return y1_card_; }
    std::size_t u0_card() const { return u0_card_; }
    std::size_t u1_card() const { return u1_card_; }
    std::size_t s2_card() const { return s2_card_; }
    const std::vector<std::size_t>& map() const { return map_; }

private:
    std::size_t y1_card_, u0_card_, u1_card_, s2_card_;
    std::vector<std::size_t> map_;
};

struct RateDistortionPoint {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    double d1 = 0.0;
};

// Joint pmf over (S1, S2, Y1, Y2, U0, U1).
JointPmf extend_with_aux(const JointSourcePmf& source, const AuxChannel& chan);

// Marginal of the extension on `keep`, built without materializing the full table.
JointPmf extension_marginal(const JointSourcePmf& source, const AuxChannel& chan, VarSet keep);

// ext must hold S1, S2, Y1, U0, U1.
double expected_distortion(const JointPmf& ext, const ReconstructionRule& phi,
                           const DistortionMeasure& d);

struct OptimalPhi {
    ReconstructionRule rule;
    double distortion;
};

// Per-cell minimizer; ties go to the lowest index, zero-mass cells to index 0.
OptimalPhi optimal_phi(const JointPmf& ext, const DistortionMeasure& d);

} // namespace gwrd
