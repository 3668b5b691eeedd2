#include "mcfill/json_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mcfill/dyadic.hpp"
#include "mcfill/errors.hpp"

namespace mcfill {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& value) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << value.dump(2) << "\n";
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

namespace {

const Json& need(const Json& j, const char* key, const char* what) {
    if (!j.contains(key))
        throw InputError(std::string(what) + " is missing the '" + key + "' field");
    return j.at(key);
}

Rational rational_field(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw InputError("rationals must be \"p/q\" strings");
}

}  // namespace

GroundModel model_from_json(const Json& j) {
    const Json& blocks_json = need(j, "blocks", "model file");
    if (!blocks_json.is_array()) throw InputError("model 'blocks' must be an array");

    // collect names first so ids follow block order deterministically
    std::vector<std::string> names;
    std::map<std::string, PointId> ids;
    std::vector<Block> blocks;
    for (const Json& bj : blocks_json) {
        Block block;
        block.measure = rational_field(need(bj, "measure", "block"));
        for (const Json& pj : need(bj, "points", "block")) {
            if (!pj.is_string()) throw InputError("point ids must be strings");
            std::string name = pj.get<std::string>();
            auto [it, fresh] = ids.emplace(name, static_cast<PointId>(names.size()));
            if (fresh) names.push_back(name);
            block.points.push_back(it->second);
        }
        blocks.push_back(std::move(block));
    }
    return GroundModel::make(std::move(blocks), std::move(names));
}

Json model_to_json(const GroundModel& model) {
    Json blocks = Json::array();
    for (BlockId b = 0; b < model.block_count(); ++b) {
        Json points = Json::array();
        for (PointId p : model.block(b).points) points.push_back(model.point_name(p));
        blocks.push_back({{"measure", format_rational(model.block(b).measure)},
                          {"points", points}});
    }
    return Json{{"blocks", blocks}};
}

// ---------------------------------------------------------------------------
// families

int LoadedFamily::element_from_json(const Json& e) const {
    if (family->ground_kind() == GroundKind::Leaves) {
        if (!e.is_string()) throw InputError("leaves must be bit strings");
        NodeCode code = parse_node(e.get<std::string>());
        if (!is_valid_leaf(code, leaf_length))
            throw InputError("leaf '" + e.get<std::string>() + "' does not have length " +
                             std::to_string(leaf_length));
        return code;
    }
    if (e.is_string()) {
        if (!uses_names) throw InputError("this family's elements are integers, not names");
        const std::string name = e.get<std::string>();
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw InputError("unknown element '" + name + "'");
    }
    if (e.is_number_integer()) {
        if (uses_names) throw InputError("this family's elements are names, not integers");
        return e.get<int>();
    }
    throw InputError("elements must be strings or integers");
}

Json LoadedFamily::element_to_json(int e) const {
    if (family->ground_kind() == GroundKind::Leaves) return format_node(e);
    if (uses_names) {
        if (e < 0 || e >= static_cast<int>(names.size()))
            throw InvariantError("element id out of the name table");
        return names[e];
    }
    return e;
}

std::vector<int> LoadedFamily::set_from_json(const Json& list) const {
    if (!list.is_array()) throw InputError("element sets must be arrays");
    std::vector<int> out;
    for (const Json& e : list) out.push_back(element_from_json(e));
    return normalized(std::move(out));
}

Json LoadedFamily::set_to_json(std::span<const int> set) const {
    Json out = Json::array();
    for (int e : set) out.push_back(element_to_json(e));
    return out;
}

namespace {

// members given as strings bind to the model (or a self-made universe);
// integer members are naturals
std::vector<std::vector<int>> resolve_members(const Json& lists, const GroundModel* model,
                                              LoadedFamily& out) {
    bool any_string = false, any_int = false;
    for (const Json& member : lists) {
        if (!member.is_array()) throw InputError("family members must be arrays");
        for (const Json& e : member) {
            if (e.is_string()) any_string = true;
            else if (e.is_number_integer()) any_int = true;
            else throw InputError("family elements must be strings or integers");
        }
    }
    if (any_string && any_int)
        throw InputError("family mixes named and integer elements");

    std::vector<std::vector<int>> members;
    if (any_string) {
        out.uses_names = true;
        if (model) {
            for (PointId p = 0; p < model->point_count(); ++p)
                out.names.push_back(model->point_name(p));
            for (const Json& member : lists) {
                std::vector<int> m;
                for (const Json& e : member) m.push_back(model->require_point(e));
                members.push_back(normalized(std::move(m)));
            }
        } else {
            std::set<std::string> universe;
            for (const Json& member : lists)
                for (const Json& e : member) universe.insert(e.get<std::string>());
            out.names.assign(universe.begin(), universe.end());
            auto id_of = [&](const std::string& name) {
                return static_cast<int>(std::lower_bound(out.names.begin(), out.names.end(),
                                                         name) -
                                        out.names.begin());
            };
            for (const Json& member : lists) {
                std::vector<int> m;
                for (const Json& e : member) m.push_back(id_of(e.get<std::string>()));
                members.push_back(normalized(std::move(m)));
            }
        }
    } else {
        for (const Json& member : lists) {
            std::vector<int> m;
            for (const Json& e : member) m.push_back(e.get<int>());
            members.push_back(normalized(std::move(m)));
        }
    }
    return members;
}

}  // namespace

LoadedFamily family_from_json(const Json& j, const GroundModel* model) {
    LoadedFamily out;
    out.spec = j;
    const std::string kind = need(j, "kind", "family file").get<std::string>();
    if (kind == "explicit") {
        auto members = resolve_members(need(j, "members", "explicit family"), model, out);
        out.family = std::make_unique<ExplicitFamily>(
            members, out.uses_names ? GroundKind::Points : GroundKind::Naturals);
    } else if (kind == "partition") {
        auto classes = resolve_members(need(j, "classes", "partition family"), model, out);
        out.family = std::make_unique<PartitionFamily>(
            classes, out.uses_names ? GroundKind::Points : GroundKind::Naturals);
    } else if (kind == "schreier") {
        if (model) {
            // points play the naturals 1..n in model order
            out.family = std::make_unique<ShiftedNaturalsFamily>(
                std::make_unique<SchreierFamily>());
            out.uses_names = true;
            for (PointId p = 0; p < model->point_count(); ++p)
                out.names.push_back(model->point_name(p));
        } else {
            out.family = std::make_unique<SchreierFamily>();
        }
    } else if (kind == "dyadicD") {
        out.leaf_length = need(j, "length", "dyadicD family").get<int>();
        out.family = std::make_unique<DyadicDFamily>(out.leaf_length);
    } else if (kind == "all") {
        out.family = std::make_unique<AllSubsetsFamily>(
            model ? GroundKind::Points : GroundKind::Naturals);
        if (model) {
            out.uses_names = true;
            for (PointId p = 0; p < model->point_count(); ++p)
                out.names.push_back(model->point_name(p));
        }
    } else if (kind == "sizeAtMost") {
        out.family = std::make_unique<SizeAtMostFamily>(
            need(j, "max", "sizeAtMost family").get<int>(),
            model ? GroundKind::Points : GroundKind::Naturals);
        if (model) {
            out.uses_names = true;
            for (PointId p = 0; p < model->point_count(); ++p)
                out.names.push_back(model->point_name(p));
        }
    } else {
        throw InputError("unknown family kind '" + kind + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------
// point structures

namespace {

PointSet point_set_from_json(const Json& list, const GroundModel& model) {
    if (!list.is_array()) throw InputError("point sets must be arrays");
    PointSet out;
    for (const Json& e : list) {
        if (!e.is_string()) throw InputError("points must be referenced by name");
        out.push_back(model.require_point(e.get<std::string>()));
    }
    return normalized(std::move(out));
}

Json point_set_to_json(const PointSet& set, const GroundModel& model) {
    Json out = Json::array();
    for (PointId p : set) out.push_back(model.point_name(p));
    return out;
}

}  // namespace

std::vector<PointSet> partition_from_json(const Json& j, const GroundModel& model) {
    const Json& parts_json = j.is_array() ? j : need(j, "parts", "partition file");
    std::vector<PointSet> parts;
    for (const Json& part : parts_json) parts.push_back(point_set_from_json(part, model));
    validate_partition(model, parts);
    return parts;
}

Json partition_to_json(const std::vector<PointSet>& parts, const GroundModel& model) {
    Json out = Json::array();
    for (const PointSet& part : parts) out.push_back(point_set_to_json(part, model));
    return out;
}

IndicatorFunctionModel indicator_from_json(const Json& j, const GroundModel& model) {
    const Json& functionals = need(j, "functionals", "indicator-model file");
    if (!functionals.is_object()) throw InputError("'functionals' must be an object");
    IndicatorFunctionModel fm;
    std::map<std::string, PointSet> sorted;  // deterministic order by name
    for (const auto& [name, set] : functionals.items())
        sorted[name] = point_set_from_json(set, model);
    for (auto& [name, set] : sorted) fm.functionals.emplace_back(name, std::move(set));
    validate_indicator_model(model, fm);
    return fm;
}

Json indicator_to_json(const IndicatorFunctionModel& fm, const GroundModel& model) {
    Json functionals = Json::object();
    for (const auto& [name, set] : fm.functionals)
        functionals[name] = point_set_to_json(set, model);
    return Json{{"functionals", functionals}};
}

Json measurable_to_json(const MeasurableSet& blocks) {
    Json out = Json::array();
    for (BlockId b : blocks) out.push_back(b);
    return out;
}

MeasurableSet measurable_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("block sets must be arrays of indices");
    MeasurableSet out;
    for (const Json& e : j) {
        if (!e.is_number_integer()) throw InputError("block ids must be integers");
        out.push_back(e.get<int>());
    }
    return normalized(std::move(out));
}

TaggedFamily tagged_from_json(const Json& j, const GroundModel& model) {
    TaggedFamily tagged;
    for (const Json& pj : need(j, "pieces", "tagged-family file")) {
        TaggedPiece piece;
        piece.piece = measurable_from_json(need(pj, "blocks", "tagged piece"));
        piece.tag = model.require_point(need(pj, "tag", "tagged piece").get<std::string>());
        tagged.push_back(std::move(piece));
    }
    validate_tagged(model, tagged);
    return tagged;
}

TransversalSystem transversals_from_json(const Json& j, const GroundModel& model) {
    TransversalSystem ts;
    for (const Json& fiber : need(j, "classes", "transversal file"))
        ts.fibers.push_back(point_set_from_json(fiber, model));
    validate_transversals(model, ts);
    return ts;
}

CubeModel cube_from_json(const Json& j) {
    std::vector<std::vector<int>> classes;
    for (const Json& cls : need(j, "classes", "cube file"))
        classes.push_back(cls.get<std::vector<int>>());
    return make_cube(need(j, "kappa", "cube file").get<int>(), std::move(classes));
}

OrthoSystem ortho_from_json(const Json& j, const GroundModel& model) {
    OrthoSystem ortho;
    ortho.dimension = need(j, "dimension", "ortho file").get<int>();
    for (const Json& group : need(j, "groups", "ortho file"))
        ortho.groups.push_back(group.get<std::vector<int>>());
    const Json& injection = need(j, "injection", "ortho file");
    ortho.vector_of_point.assign(model.point_count(), 0);
    for (const auto& [name, v] : injection.items())
        ortho.vector_of_point[model.require_point(name)] = v.get<int>();
    return ortho;
}

// ---------------------------------------------------------------------------
// verdicts and replay

namespace {

Json elements_to_json(std::span<const int> elems, const GroundModel* model,
                      const LoadedFamily* family) {
    if (family) return family->set_to_json(elems);
    Json out = Json::array();
    for (int e : elems) out.push_back(model ? Json(model->point_name(e)) : Json(e));
    return out;
}

std::vector<int> elements_from_json(const Json& j, const GroundModel* model,
                                    const LoadedFamily* family) {
    if (family) return family->set_from_json(j);
    std::vector<int> out;
    for (const Json& e : j) {
        if (e.is_string()) {
            if (!model) throw InputError("named elements need a model");
            out.push_back(model->require_point(e.get<std::string>()));
        } else {
            out.push_back(e.get<int>());
        }
    }
    return normalized(std::move(out));
}

}  // namespace

Json verdict_to_json(const Verdict& verdict, const GroundModel* model,
                     const LoadedFamily* family) {
    Json cert;
    cert["kind"] = verdict.certificate.kind;
    if (!verdict.certificate.partition.empty()) {
        if (!model) throw InvariantError("partition certificates need a model");
        cert["partition"] = partition_to_json(verdict.certificate.partition, *model);
    }
    if (!verdict.certificate.covers.empty()) {
        Json covers = Json::array();
        for (const MeasurableSet& c : verdict.certificate.covers)
            covers.push_back(measurable_to_json(c));
        cert["covers"] = covers;
    }
    if (!verdict.certificate.witness.empty() || verdict.certificate.kind == "filling-H")
        cert["witness"] = elements_to_json(verdict.certificate.witness, model, family);
    if (!verdict.certificate.tags.empty()) {
        Json tags = Json::array();
        for (int t : verdict.certificate.tags) {
            if (t < 0)
                tags.push_back(nullptr);
            else
                tags.push_back(model ? Json(model->point_name(t)) : Json(t));
        }
        cert["tags"] = tags;
    }
    if (!verdict.certificate.functional.empty())
        cert["functional"] = verdict.certificate.functional;

    return Json{{"holds", verdict.holds},
                {"epsilon", format_rational(verdict.epsilon)},
                {"value", format_rational(verdict.value)},
                {"certificate", cert}};
}

Verdict verdict_from_json(const Json& j, const GroundModel* model, const LoadedFamily* family) {
    Verdict verdict;
    verdict.holds = need(j, "holds", "verdict").get<bool>();
    verdict.epsilon = rational_field(need(j, "epsilon", "verdict"));
    verdict.value = rational_field(need(j, "value", "verdict"));
    const Json& cert = need(j, "certificate", "verdict");
    verdict.certificate.kind = need(cert, "kind", "certificate").get<std::string>();
    if (cert.contains("partition")) {
        if (!model) throw InputError("partition certificates need a model");
        verdict.certificate.partition = partition_from_json(cert.at("partition"), *model);
    }
    if (cert.contains("covers"))
        for (const Json& c : cert.at("covers"))
            verdict.certificate.covers.push_back(measurable_from_json(c));
    if (cert.contains("witness"))
        verdict.certificate.witness = elements_from_json(cert.at("witness"), model, family);
    if (cert.contains("tags"))
        for (const Json& t : cert.at("tags")) {
            if (t.is_null())
                verdict.certificate.tags.push_back(-1);
            else
                verdict.certificate.tags.push_back(
                    t.is_string() ? (model ? model->require_point(t.get<std::string>()) : -1)
                                  : t.get<int>());
        }
    if (cert.contains("functional"))
        verdict.certificate.functional = cert.at("functional").get<std::string>();
    return verdict;
}

Rational replay_certificate(const Verdict& verdict, const GroundModel* model,
                            const HereditaryFamily* family, const IndicatorFunctionModel* fm) {
    const std::string& kind = verdict.certificate.kind;
    if (kind == "mc-partition") {
        if (!model || !family) throw InputError("replay needs the model and family");
        return mc_value(*model, *family, verdict.certificate.partition).value;
    }
    if (kind == "mc-partition-covers") {
        if (!model || !family) throw InputError("replay needs the model and family");
        return cover_mc_value(*model, *family, verdict.certificate.partition,
                              verdict.certificate.covers)
            .value;
    }
    if (kind == "filling-H") {
        if (!family) throw InputError("replay needs the family");
        auto best = max_member_size(*family, verdict.certificate.witness);
        int best_size = best ? static_cast<int>(best->size()) : 0;
        if (verdict.certificate.witness.empty())
            throw InputError("filling certificate lacks the violating H");
        return Rational(best_size, static_cast<int>(verdict.certificate.witness.size()));
    }
    if (kind == "filling-vacuous") return Rational(1);
    if (kind == "mc3-partition") {
        if (!model || !fm) throw InputError("replay needs the model and indicator model");
        return mc3_partition_value(*model, *fm, verdict.certificate.partition);
    }
    throw InputError("unknown certificate kind '" + kind + "'");
}

}  // namespace mcfill
