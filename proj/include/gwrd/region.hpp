#pragma once

#include "gwrd/aux_model.hpp"
#include "gwrd/fme.hpp"
#include "gwrd/pmf.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace gwrd {

// Entropies of an extended pmf, computed over its support and cached per
// variable set. Not shareable across threads.
class ExtensionInfo {
public:
    explicit ExtensionInfo(const JointPmf& ext);
    ExtensionInfo(const JointSourcePmf& source, const AuxChannel& chan);

    VarSet vars() const { return vars_; }
    double H(VarSet t) const;
    double H(VarSet t, VarSet given) const;
    double I(VarSet a, VarSet b, VarSet given = {}) const;

private:
    struct Atom {
        std::array<std::uint16_t, kNumRoles> idx;
        double p;
    };
    void init_scratch();

    VarSet vars_;
    std::array<std::size_t, kNumRoles> card_{};
    std::vector<Atom> atoms_;
    mutable std::array<double, 64> cache_{};
    mutable std::array<bool, 64> cached_{};
    mutable std::vector<double> scratch_;
    mutable std::vector<std::size_t> touched_;
};

enum class Variant { gw, sr, sc };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view s);

enum class Reduction { sr_degraded_y1_better, sr_degraded_y2_better, sc_lossless, sc_y2_better };

std::string_view reduction_name(Reduction r);
Reduction parse_reduction(std::string_view s);

// Right-hand sides of R0 >= b_r0, R0+R1 >= b_r0_r1, R0+R2 >= b_r0_r2,
// R0+R1+R2 >= b_sum. Absent fields impose nothing.
struct RateBounds {
    Variant variant = Variant::gw;
    std::optional<double> b_r0, b_r0_r1, b_r0_r2, b_sum;
};

RateBounds theorem1_bounds(const ExtensionInfo& info);
RateBounds theorem2_bounds(const ExtensionInfo& info);
RateBounds theorem3_bounds(const ExtensionInfo& info);
RateBounds bounds_for(Variant v, const ExtensionInfo& info);

inline RateBounds theorem1_bounds(const JointPmf& ext) { return theorem1_bounds(ExtensionInfo(ext)); }
inline RateBounds theorem2_bounds(const JointPmf& ext) { return theorem2_bounds(ExtensionInfo(ext)); }
inline RateBounds theorem3_bounds(const JointPmf& ext) { return theorem3_bounds(ExtensionInfo(ext)); }

RateBounds reduced_region_bounds(const ExtensionInfo& info, Reduction r);

// The link absent from the variant (R2 for sr, R1 for sc) counts as zero.
// Each inequality may fail by at most tol.
bool point_in_region(const RateDistortionPoint& p, const RateBounds& b, double tol = 0.0);

// The five constants of build_achievability_system with V0 = (U0, S2),
// keyed by kCa, kCb, kC1, kC2, kCd.
std::map<std::string, double> achievability_constants(const ExtensionInfo& info);

} // namespace gwrd
