#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcfill/integration.hpp"
#include "mcfill/mcfilling.hpp"
#include "mcfill/model.hpp"
#include "mcfill/verdict.hpp"

namespace mcfill {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& value);

// FNV-1a over the raw bytes, for the replayable input record in reports.
std::string file_hash(const std::string& path);

// {"blocks":[{"measure":"1/4","points":["a","b"]},...]}
GroundModel model_from_json(const Json& j);
Json model_to_json(const GroundModel& model);

// A family plus the translation between internal ints and the external
// element spelling: point names (model-bound or self-interned), plain
// naturals, or leaf bit strings.
struct LoadedFamily {
    std::unique_ptr<HereditaryFamily> family;
    std::vector<std::string> names;  // element id -> name, when named
    bool uses_names = false;
    int leaf_length = 0;  // when ground kind is Leaves
    Json spec;            // the family file content, echoed in reports

    int element_from_json(const Json& e) const;
    Json element_to_json(int e) const;
    std::vector<int> set_from_json(const Json& list) const;
    Json set_to_json(std::span<const int> set) const;
};

// kinds: explicit, partition (members as point names or integers),
// schreier, dyadicD {"length":L}, all, sizeAtMost {"max":k}. With a model
// bound, named elements resolve to its points; standalone named families
// intern their own universe.
LoadedFamily family_from_json(const Json& j, const GroundModel* model);

std::vector<PointSet> partition_from_json(const Json& j, const GroundModel& model);
Json partition_to_json(const std::vector<PointSet>& parts, const GroundModel& model);

IndicatorFunctionModel indicator_from_json(const Json& j, const GroundModel& model);
Json indicator_to_json(const IndicatorFunctionModel& fm, const GroundModel& model);

TaggedFamily tagged_from_json(const Json& j, const GroundModel& model);

TransversalSystem transversals_from_json(const Json& j, const GroundModel& model);

CubeModel cube_from_json(const Json& j);

OrthoSystem ortho_from_json(const Json& j, const GroundModel& model);

Json measurable_to_json(const MeasurableSet& blocks);
MeasurableSet measurable_from_json(const Json& j);

// Verdict payloads; element spelling for the witness comes from the
// family when given, else from the model's point names.
Json verdict_to_json(const Verdict& verdict, const GroundModel* model,
                     const LoadedFamily* family);
Verdict verdict_from_json(const Json& j, const GroundModel* model, const LoadedFamily* family);

// Recomputes the certificate's value from scratch with the module
// evaluators; the caller compares it against the recorded one.
Rational replay_certificate(const Verdict& verdict, const GroundModel* model,
                            const HereditaryFamily* family, const IndicatorFunctionModel* fm);

}  // namespace mcfill
