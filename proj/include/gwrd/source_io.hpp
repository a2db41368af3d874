#pragma once

#include "gwrd/aux_model.hpp"
#include "gwrd/corpus.hpp"
#include "gwrd/pmf.hpp"

#include <optional>
#include <string>

#include "json.hpp"

namespace gwrd {

// {"alphabets": {"S1": [...], "S2": [...], "Y1": [...], "Y2": [...]},
//  "probs": [{"s1": .., "s2": .., "y1": .., "y2": .., "p": ..}, ...],
//  "distortion": {"alphabet": [...], "table": {"<s1>": [d per symbol], ...}},
//  "aux": {"u0": [...], "u1": [...],
//          "table": [{"s1": .., "s2": .., "u0": .., "u1": .., "p": ..}, ...]}}
// Labels may be strings or integers. Unlisted atoms are zero. distortion
// and aux are optional.
struct SourceSpec {
    JointSourcePmf source;
    std::optional<DistortionMeasure> distortion;
    std::optional<AuxChannel> aux;

    // The given distortion, or Hamming on S1.
    DistortionMeasure distortion_or_hamming() const;
};

// Errors are std::invalid_argument; messages carry line:column for syntax
// errors and the offending JSON path otherwise.
SourceSpec source_spec_from_json(const nlohmann::json& j);
SourceSpec parse_source_spec(const std::string& text);
SourceSpec load_source_spec(const std::string& path);

nlohmann::json source_spec_to_json(const SourceSpec& spec);

// A builtin with its documented channel as aux and Hamming distortion.
SourceSpec spec_from_builtin(const NamedSource& ns);

} // namespace gwrd
