#pragma once

#include "gwrd/aux_model.hpp"
#include "gwrd/pmf.hpp"
#include "gwrd/region.hpp"
#include "gwrd/search.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gwrd {

struct FrontierClaim {
    std::array<double, 3> weights;
    double value;
};

struct NamedSource {
    std::string name;
    JointSourcePmf source;
    Variant variant = Variant::gw;
    std::optional<AuxChannel> documented_channel;
    std::vector<FrontierClaim> documented_frontier;
    // Region for the channel with U0 constant, when the example discusses one.
    std::optional<AuxChannel> suboptimal_channel;
    std::vector<FrontierClaim> suboptimal_frontier;
};

// X1..X4 iid Ber(1/2); S1=(X1,X2,X3), S2=X4, Y1=(X1,X4), Y2=(X2,X3).
NamedSource build_example1();

// X1..X3 iid Ber(1/2); S1=(X1,X3), S2=X2, Y1=(X1,X2), Y2=X3.
NamedSource build_example2();

// S1=S2=X ~ Ber(1/2); Y1, Y2 independent BSC(p) outputs of X.
NamedSource build_bs_lossless(double p);

// "example1", "example2" or "bs-lossless:<p>".
NamedSource builtin_source(const std::string& name);

struct FrontierCheck {
    FrontierClaim claim;
    double achieved = 0.0;
    bool match = false;
};

struct ClaimReport {
    std::string claim;
    std::string source;
    Variant variant = Variant::gw;
    double d_max = 0.0;
    // Hamming distortion of the documented channel under the optimal phi.
    double documented_d1 = 0.0;
    std::vector<FrontierCheck> achievability;
    // U0-constant comparison, when the example has one.
    std::vector<FrontierCheck> suboptimal;
    ConverseReport converse;

    bool achievability_pass() const;
    bool converse_pass() const { return !converse.any_violation(); }
    bool pass() const { return achievability_pass() && converse_pass(); }
};

// "claim1" (example1, sr) or "claim2" (example2, sc), both at D1 = 0 under
// Hamming distortion. A frontier value matches when the minimum weighted
// rate at the documented channel is within 1e-9 of it.
ClaimReport verify_claim(const std::string& name, const SearchConfig& cfg);

// Same, with the documented frontier replaced.
ClaimReport verify_claim(const std::string& name, const SearchConfig& cfg,
                         const std::vector<FrontierClaim>& frontier);

} // namespace gwrd
