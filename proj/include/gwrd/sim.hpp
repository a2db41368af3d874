#pragma once

#include "gwrd/aux_model.hpp"
#include "gwrd/pmf.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwrd {

struct SchemeParams {
    double t0 = 0, t1 = 0;
    double t00 = 0, t0p = 0, t10 = 0, t11 = 0;
    double rb00 = 0, rb01 = 0, rb02 = 0, rb10 = 0, rb11 = 0;

    double r0() const { return rb00 + rb10; }
    double r1() const { return rb01 + rb11; }
    double r2() const { return rb02; }

    // Throws std::invalid_argument naming the first broken relation (tolerance 1e-9).
    void validate() const;
};

struct SimConfig {
    std::size_t n = 10;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    double typ_delta = 0.15;
    double rate_margin = 0.25;
    // Total stored symbols n * (|V0 book| + |U1 book per v0 word|).
    std::uint64_t memory_budget = std::uint64_t(1) << 26;
    // Draw one codebook for all trials instead of one per trial.
    bool fixed_codebook = false;
};

// Thrown before any work when the codebooks would not fit the budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Covering rates I + margin (zero when I is zero), packing slack I - margin
// clamped at zero, common superbins filled first.
SchemeParams derive_params(const JointSourcePmf& source, const AuxChannel& chan, const SimConfig& cfg);

// ceil(2^(n * rate)), with values within 1e-9 of an integer taken as that integer.
std::uint64_t codebook_size(std::size_t n, double rate);

struct CodebookSizes {
    std::uint64_t n00 = 1, n0p = 1, n10 = 1, n11 = 1;
    std::uint64_t b00 = 1, b01 = 1, b02 = 1, b10 = 1, b11 = 1;

    std::uint64_t n0() const { return n00 * n0p; }
    std::uint64_t n1() const { return n10 * n11; }
};

CodebookSizes codebook_sizes(const SchemeParams& p, std::size_t n);

// Throws BudgetError when n * (n0 + n1) exceeds the budget.
void check_budget(const CodebookSizes& sizes, std::size_t n, std::uint64_t budget);

using Symbol = std::uint16_t;

// Per-letter statistics of the extension that the scheme needs. V0 is the
// pair (u0, s2) with index u0 * |S2| + s2.
class SchemeModel {
public:
    SchemeModel(const JointSourcePmf& source, const AuxChannel& chan);

    std::size_t s1_card, s2_card, y1_card, y2_card, u0_card, u1_card, v0_card;

    struct SourceLetter {
        Symbol s1, s2, y1, y2;
    };
    std::vector<SourceLetter> atoms;
    std::vector<double> atom_cdf;
    std::vector<double> v0_cdf;
    // Row v0 holds the cdf of U1 given V0 = v0.
    std::vector<std::vector<double>> u1_cdf;

    // Dense reference pmfs for the typicality tests.
    std::vector<double> p_s1s2v0;   // (s1, s2, v0)
    std::vector<double> p_s1s2v0u1; // (s1, s2, v0, u1)
    std::vector<double> p_v0u1y1;   // (v0, u1, y1)
    std::vector<double> p_v0y2;     // (v0, y2)
};

class Codebooks {
public:
    // Throws BudgetError before allocating.
    Codebooks(const SchemeModel& model, const SchemeParams& params, std::size_t n, std::uint64_t seed,
              std::uint64_t budget);

    std::size_t n() const { return n_; }
    const CodebookSizes& sizes() const { return sizes_; }

    const Symbol* v0_word(std::uint64_t k0) const { return v0_.data() + k0 * n_; }
    // u1 words are drawn on demand from a stream keyed by (seed, k0, k1).
    void u1_word(std::uint64_t k0, std::uint64_t k1, Symbol* out) const;

    std::uint64_t k0(std::uint64_t k00, std::uint64_t k0p) const { return k00 * sizes_.n0p + k0p; }
    std::uint64_t k1(std::uint64_t k10, std::uint64_t k11) const { return k10 * sizes_.n11 + k11; }

    // Bin maps and their inverses.
    std::vector<std::uint32_t> w00, w01, w02, w10, w11;
    std::vector<std::vector<std::uint32_t>> bin00, bin01, bin02, bin10, bin11;

private:
    const SchemeModel* model_;
    std::size_t n_;
    std::uint64_t seed_;
    CodebookSizes sizes_;
    std::vector<Symbol> v0_;
};

struct Messages {
    std::uint32_t w00 = 0, w10 = 0; // W0
    std::uint32_t w01 = 0, w11 = 0; // W1
    std::uint32_t w02 = 0;          // W2
    std::uint64_t k0 = 0, k1 = 0;
};

enum class DecodeStatus { ok, not_found, ambiguous };

struct Decoded1 {
    DecodeStatus status = DecodeStatus::not_found;
    std::vector<Symbol> s2_hat, s1_hat;
};

struct Decoded2 {
    DecodeStatus status = DecodeStatus::not_found;
    std::vector<Symbol> s2_hat;
};

// First-match encoding; nullopt when no typical codeword exists at either stage.
std::optional<Messages> encode(const std::vector<Symbol>& s1, const std::vector<Symbol>& s2,
                               const Codebooks& books, const SchemeModel& model, double typ_delta);

Decoded1 decode1(const Messages& m, const std::vector<Symbol>& y1, const Codebooks& books,
                 const SchemeModel& model, const ReconstructionRule& phi, double typ_delta);

Decoded2 decode2(const Messages& m, const std::vector<Symbol>& y2, const Codebooks& books,
                 const SchemeModel& model, double typ_delta);

// Total-variation distance between the joint type of the index sequence and
// ref, or 2 when some letter falls outside the support of ref.
double type_distance(const std::vector<double>& ref, const std::vector<std::uint32_t>& letters);

struct SimResult {
    std::size_t n = 0, trials = 0;
    std::uint64_t seed = 0;
    double r0 = 0, r1 = 0, r2 = 0;
    double p_e = 0;
    double avg_d1 = 0;
    std::size_t encode_failures = 0;
    std::size_t decode1_failures = 0, decode2_failures = 0;
    std::size_t decode1_ambiguous = 0, decode2_ambiguous = 0;
    std::size_t s2_mismatches = 0;
    // Trials where decoder 1 produced an output (the avg_d1 population).
    std::size_t distortion_trials = 0;
    // Trials where both decoders produced outputs, and those where both equal S2.
    std::size_t both_decoded = 0, both_s2_correct = 0;
};

SimResult run_trials(const JointSourcePmf& source, const AuxChannel& chan, const ReconstructionRule& phi,
                     const DistortionMeasure& d, const SimConfig& cfg);

// Same, with explicit scheme parameters instead of derive_params.
SimResult run_trials(const JointSourcePmf& source, const AuxChannel& chan, const ReconstructionRule& phi,
                     const DistortionMeasure& d, const SimConfig& cfg, const SchemeParams& params);

} // namespace gwrd
