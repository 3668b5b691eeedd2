// Command-line front end: loads block models, families and the other
// structures, dispatches to the library, and emits replayable JSON
// reports. Exit codes: 0 = property holds / success, 1 = property
// refuted (or certificate mismatch in verify-certificate), 2 = input or
// resource error.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mcfill/dyadic.hpp"
#include "mcfill/errors.hpp"
#include "mcfill/integration.hpp"
#include "mcfill/json_io.hpp"
#include "mcfill/mcfilling.hpp"

namespace {

using namespace mcfill;

struct ReportSink {
    Json report;
    Json inputs = Json::object();
    Json params = Json::object();
    Json caps = Json::object();
    std::string out_path;
    std::uint64_t seed = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void input(const std::string& role, const std::string& path) {
        inputs[role] = Json{{"path", path}, {"hash", file_hash(path)}};
    }

    void emit(const std::string& command, const Json& payload) {
        report["command"] = command;
        report["inputs"] = inputs;
        report["params"] = params;
        report["caps"] = caps;
        report["seed"] = seed;
        report["payload"] = payload;
        auto elapsed = std::chrono::steady_clock::now() - start;
        report["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        if (!out_path.empty()) write_json_file(out_path, report);
        std::cout << report.dump(2) << "\n";
    }
};

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(token);
    }
    return out;
}

std::vector<int> parse_element_set(const std::string& text, const LoadedFamily& family) {
    Json list = Json::array();
    for (const std::string& token : split_commas(text)) {
        if (family.family->ground_kind() == GroundKind::Leaves || family.uses_names)
            list.push_back(token);
        else
            list.push_back(std::stoll(token));
    }
    return family.set_from_json(list);
}

std::vector<int> parse_naturals(const std::string& text) {
    std::vector<int> out;
    for (const std::string& token : split_commas(text)) out.push_back(std::stoi(token));
    return normalized(std::move(out));
}

std::vector<NodeCode> read_node_lines(const std::string& path, int* leaf_length) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::vector<NodeCode> nodes;
    std::string line;
    int length = -1;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (line == "-") {
            nodes.push_back(kRootCode);
            continue;
        }
        nodes.push_back(parse_node(line));
        if (length < 0) length = static_cast<int>(line.size());
    }
    if (leaf_length) *leaf_length = length;
    return nodes;
}

int run(int argc, char** argv) {
    CLI::App app{"exact checkers for filling families, MC-filling and Riemann-McShane sums "
                 "on finite block models"};
    app.require_subcommand(1);

    ReportSink sink;
    std::string model_path, family_path, indicator_path, partition_path, tagged_path;
    std::string transversal_path, classes_path, cube_path, ortho_path, leaves_path, nodes_path;
    std::string epsilon_text = "1/2", eta1_text = "1/10", set_text, fix_text;
    std::string report_path;
    int max_points = 10, max_h = 10, threads = 1, beta = 1, leaf_length = 0;
    bool covers = false, allow_nonnull = false, verify_filling = false;
    std::uint64_t search_cap = SearchLimits{}.max_nodes;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--report", report_path, "also write the report to this file");
        cmd->add_option("--seed", sink.seed, "echoed in the report; all sweeps are deterministic");
        cmd->add_option("--max-subset", search_cap, "member search node cap");
    };

    auto* check_filling = app.add_subcommand("check-filling",
                                             "filling property restricted to |H| <= max-h");
    check_filling->add_option("--family", family_path)->required();
    check_filling->add_option("--model", model_path, "bind named family elements to this model");
    check_filling->add_option("--set", set_text, "ground set, comma separated")->required();
    check_filling->add_option("--epsilon", epsilon_text);
    check_filling->add_option("--max-h", max_h);
    add_common(check_filling);

    auto* check_mc = app.add_subcommand("check-mcfilling", "MC-filling minimax over partitions");
    check_mc->add_option("--model", model_path)->required();
    check_mc->add_option("--family", family_path)->required();
    check_mc->add_option("--epsilon", epsilon_text);
    check_mc->add_flag("--covers", covers, "adversary picks explicit covers (hull evaluation)");
    check_mc->add_option("--max-points", max_points);
    check_mc->add_option("--threads", threads);
    add_common(check_mc);

    auto* decide = app.add_subcommand("decide-mc", "MC-integrability: tagged-assembly minimax");
    decide->add_option("--model", model_path)->required();
    decide->add_option("--indicator", indicator_path)->required();
    decide->add_option("--epsilon", epsilon_text);
    decide->add_flag("--allow-nonnull", allow_nonnull,
                     "lift the outer-measure-0 demand on functional sets");
    decide->add_option("--max-points", max_points);
    add_common(decide);

    auto* riemann = app.add_subcommand("riemann", "Riemann sum norm of a tagged family");
    riemann->add_option("--model", model_path)->required();
    riemann->add_option("--indicator", indicator_path)->required();
    riemann->add_option("--tagged", tagged_path)->required();
    add_common(riemann);

    auto* schreier = app.add_subcommand("schreier-extract", "top half of a finite set");
    std::string schreier_set;
    schreier->add_option("set", schreier_set, "comma separated naturals")->required();
    add_common(schreier);

    auto* dyadic = app.add_subcommand("dyadic-extract", "certified member inside a leaf set");
    int max_leaves = 4096;
    dyadic->add_option("--leaves", leaves_path, "file, one leaf bit string per line")->required();
    dyadic->add_option("--length", leaf_length, "leaf width (default: first line's length)");
    dyadic->add_option("--max-leaves", max_leaves, "input size cap");
    add_common(dyadic);

    auto* chain = app.add_subcommand("chain-extract", "long chain in a meet-closed node set");
    chain->add_option("--nodes", nodes_path, "file, one node per line ('-' = root)")->required();
    add_common(chain);

    auto* pipeline = app.add_subcommand("pipeline-filling2mc",
                                        "filling family => MC-filling witness");
    pipeline->add_option("--model", model_path)->required();
    pipeline->add_option("--family", family_path)->required();
    pipeline->add_option("--set", set_text, "the set A the family fills")->required();
    pipeline->add_option("--epsilon", epsilon_text);
    pipeline->add_option("--eta1", eta1_text);
    pipeline->add_option("--partition", partition_path)->required();
    pipeline->add_flag("--verify-filling", verify_filling);
    pipeline->add_option("--max-h", max_h, "filling verification sweep bound");
    add_common(pipeline);

    auto* greedy = app.add_subcommand("greedy-select", "transversal witness selection");
    greedy->add_option("--model", model_path)->required();
    greedy->add_option("--transversals", transversal_path)->required();
    greedy->add_option("--class-family", family_path)->required();
    greedy->add_option("--partition", partition_path)->required();
    greedy->add_option("--epsilon", epsilon_text);
    add_common(greedy);

    auto* gamma = app.add_subcommand("gamma-select", "signature class selection");
    gamma->add_option("--model", model_path)->required();
    gamma->add_option("--classes", classes_path, "partition file: the classes C_gamma")
        ->required();
    gamma->add_option("--partition", partition_path)->required();
    gamma->add_option("--epsilon", epsilon_text);
    add_common(gamma);

    auto* cube = app.add_subcommand("cube-witness", "cylinder-compatible point in E_beta");
    cube->add_option("--cube", cube_path)->required();
    cube->add_option("--fix", fix_text, "partial assignment like 3=1,5=0");
    cube->add_option("--beta", beta)->required();
    add_common(cube);

    auto* uec = app.add_subcommand("uec-partition", "uniform-control partition and 2eps bound");
    uec->add_option("--model", model_path)->required();
    uec->add_option("--ortho", ortho_path)->required();
    uec->add_option("--epsilon", epsilon_text);
    add_common(uec);

    auto* verify = app.add_subcommand("verify-certificate", "replay a report's certificate");
    std::string verify_report;
    verify->add_option("report", verify_report)->required();
    verify->add_option("--model", model_path, "override the recorded model path");
    verify->add_option("--family", family_path, "override the recorded family path");
    verify->add_option("--indicator", indicator_path, "override the recorded indicator path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // malformed invocation is an input error
    }
    sink.out_path = report_path;

    if (check_filling->parsed()) {
        std::optional<GroundModel> model;
        if (!model_path.empty()) {
            model = model_from_json(read_json_file(model_path));
            sink.input("model", model_path);
        }
        LoadedFamily family =
            family_from_json(read_json_file(family_path), model ? &*model : nullptr);
        sink.input("family", family_path);
        Rational eps = parse_rational(epsilon_text);
        std::vector<int> ground = parse_element_set(set_text, family);
        FillingOptions options;
        options.max_h = max_h;
        options.search.max_nodes = search_cap;
        sink.params = {{"epsilon", epsilon_text}, {"set", family.set_to_json(ground)}};
        sink.caps = {{"max_h", max_h}, {"search_nodes", search_cap}};
        Verdict verdict = is_filling(*family.family, ground, eps, options);
        sink.emit("check-filling",
                  verdict_to_json(verdict, model ? &*model : nullptr, &family));
        return verdict.holds ? 0 : 1;
    }

    if (check_mc->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        LoadedFamily family = family_from_json(read_json_file(family_path), &model);
        sink.input("family", family_path);
        Rational eps = parse_rational(epsilon_text);
        McOptions options;
        options.max_points = max_points;
        options.threads = threads;
        options.search.max_nodes = search_cap;
        sink.params = {{"epsilon", epsilon_text}, {"covers", covers}, {"threads", threads}};
        sink.caps = {{"max_points", max_points}, {"search_nodes", search_cap}};
        Verdict verdict = covers ? check_mc_filling_covers(model, *family.family, eps, options)
                                 : check_mc_filling(model, *family.family, eps, options);
        sink.emit("check-mcfilling", verdict_to_json(verdict, &model, &family));
        return verdict.holds ? 0 : 1;
    }

    if (decide->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        IndicatorFunctionModel fm = indicator_from_json(read_json_file(indicator_path), model);
        sink.input("indicator", indicator_path);
        Rational eps = parse_rational(epsilon_text);
        DecideOptions options;
        options.max_points = max_points;
        options.require_null = !allow_nonnull;
        options.search.max_nodes = search_cap;
        sink.params = {{"epsilon", epsilon_text}, {"allow_nonnull", allow_nonnull}};
        sink.caps = {{"max_points", max_points}, {"search_nodes", search_cap}};
        Verdict verdict = decide_mc_integrability(model, fm, eps, options);
        sink.emit("decide-mc", verdict_to_json(verdict, &model, nullptr));
        return verdict.holds ? 0 : 1;
    }

    if (riemann->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        IndicatorFunctionModel fm = indicator_from_json(read_json_file(indicator_path), model);
        sink.input("indicator", indicator_path);
        TaggedFamily tagged = tagged_from_json(read_json_file(tagged_path), model);
        sink.input("tagged", tagged_path);
        RiemannValue value = riemann_norm(model, fm, tagged);
        Json tags = Json::array();
        for (PointId p : value.tags_in) tags.push_back(model.point_name(p));
        sink.emit("riemann", Json{{"value", format_rational(value.value)},
                                  {"functional", value.functional},
                                  {"tags_counted", tags}});
        return 0;
    }

    if (schreier->parsed()) {
        std::vector<int> h = parse_naturals(schreier_set);
        std::vector<int> member = schreier_extract(h);
        sink.params = {{"set", h}};
        sink.emit("schreier-extract", Json{{"member", member}});
        return 0;
    }

    if (dyadic->parsed()) {
        int inferred = 0;
        std::vector<NodeCode> leaves = read_node_lines(leaves_path, &inferred);
        sink.input("leaves", leaves_path);
        if (static_cast<int>(leaves.size()) > max_leaves)
            throw ResourceError("leaf file holds " + std::to_string(leaves.size()) +
                                " leaves; raise --max-leaves past that to proceed");
        sink.caps = {{"max_leaves", max_leaves}};
        int length = leaf_length > 0 ? leaf_length : inferred;
        DyadicExtraction extraction = dyadicD_extract(leaves, length);
        auto nodes_json = [](const std::vector<NodeCode>& nodes) {
            Json out = Json::array();
            for (NodeCode n : nodes) out.push_back(format_node(n));
            return out;
        };
        sink.params = {{"length", length}, {"leaf_count", leaves.size()}};
        sink.emit("dyadic-extract", Json{{"member", nodes_json(extraction.member)},
                                         {"chain", nodes_json(extraction.chain)},
                                         {"schreier_top", nodes_json(extraction.top)},
                                         {"member_size", extraction.member.size()}});
        return 0;
    }

    if (chain->parsed()) {
        std::vector<NodeCode> nodes = read_node_lines(nodes_path, nullptr);
        sink.input("nodes", nodes_path);
        std::vector<NodeCode> result = chain_extract(nodes);
        Json out = Json::array();
        for (NodeCode n : result) out.push_back(n == kRootCode ? "-" : format_node(n));
        sink.emit("chain-extract", Json{{"chain", out}, {"length", result.size()}});
        return 0;
    }

    if (pipeline->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        LoadedFamily family = family_from_json(read_json_file(family_path), &model);
        sink.input("family", family_path);
        auto parts = partition_from_json(read_json_file(partition_path), model);
        sink.input("partition", partition_path);
        Rational eps = parse_rational(epsilon_text);
        Rational eta1 = parse_rational(eta1_text);
        std::vector<int> ground = parse_element_set(set_text, family);
        PipelineOptions options;
        options.verify_filling = verify_filling;
        options.filling_max_h = max_h;
        options.search.max_nodes = search_cap;
        sink.params = {{"epsilon", epsilon_text},
                       {"eta1", eta1_text},
                       {"set", family.set_to_json(ground)},
                       {"verify_filling", verify_filling}};
        sink.caps = {{"search_nodes", search_cap}, {"filling_max_h", max_h}};
        PipelineResult result =
            filling_to_mc_pipeline(model, ground, *family.family, eps, eta1, parts, options);
        Json covers_json = Json::array();
        for (const MeasurableSet& c : result.covers) covers_json.push_back(measurable_to_json(c));
        sink.emit("pipeline-filling2mc",
                  Json{{"member", family.set_to_json(result.selection.member)},
                       {"value", format_rational(result.selection.value)},
                       {"bound", format_rational(result.bound)},
                       {"eta", format_rational(result.eta)},
                       {"eta2", format_rational(result.eta2)},
                       {"eta3", format_rational(result.eta3)},
                       {"theta", format_rational(result.theta)},
                       {"m0", result.m0},
                       {"q", result.q.str()},
                       {"tag_counts", result.tag_counts},
                       {"witness_pool", family.set_to_json(result.witness_pool)},
                       {"covers", covers_json},
                       {"filling_hypothesis",
                        result.filling_verified ? "verified" : "assumed"}});
        return 0;
    }

    if (greedy->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        TransversalSystem ts = transversals_from_json(read_json_file(transversal_path), model);
        sink.input("transversals", transversal_path);
        LoadedFamily class_family = family_from_json(read_json_file(family_path), nullptr);
        sink.input("class_family", family_path);
        auto parts = partition_from_json(read_json_file(partition_path), model);
        sink.input("partition", partition_path);
        Rational eps = parse_rational(epsilon_text);
        SearchLimits limits;
        limits.max_nodes = search_cap;
        sink.params = {{"epsilon", epsilon_text}};
        GreedyResult result = greedy_select(model, ts, *class_family.family, parts, eps, limits);
        Json member = Json::array();
        for (PointId p : result.member) member.push_back(model.point_name(p));
        sink.emit("greedy-select", Json{{"member", member},
                                        {"value", format_rational(result.value)},
                                        {"chosen_classes", result.chosen_classes},
                                        {"n", result.n},
                                        {"k_of_class", result.k_of_class},
                                        {"class_sequence", result.class_sequence},
                                        {"part_sequence", result.part_sequence}});
        return 0;
    }

    if (gamma->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        auto classes = partition_from_json(read_json_file(classes_path), model);
        sink.input("classes", classes_path);
        auto parts = partition_from_json(read_json_file(partition_path), model);
        sink.input("partition", partition_path);
        Rational eps = parse_rational(epsilon_text);
        sink.params = {{"epsilon", epsilon_text}};
        GammaSelection result = gamma_select(model, classes, parts, eps);
        Json member = Json::array();
        for (PointId p : result.member) member.push_back(model.point_name(p));
        sink.emit("gamma-select", Json{{"signature", result.signature},
                                       {"finite_b", result.finite_b},
                                       {"gamma", result.gamma},
                                       {"member", member},
                                       {"value", format_rational(result.value)}});
        return 0;
    }

    if (cube->parsed()) {
        CubeModel cube_model = cube_from_json(read_json_file(cube_path));
        sink.input("cube", cube_path);
        CubeAssignment fixed;
        for (const std::string& token : split_commas(fix_text)) {
            auto eq = token.find('=');
            if (eq == std::string::npos)
                throw InputError("fixed coordinates look like '3=1', got '" + token + "'");
            fixed.emplace_back(std::stoi(token.substr(0, eq)), std::stoi(token.substr(eq + 1)));
        }
        sink.params = {{"fix", fix_text}, {"beta", beta}};
        CubePoint x = cube_witness(cube_model, fixed, beta);
        std::string bits(cube_model.kappa, '0');
        for (int g = 1; g <= cube_model.kappa; ++g)
            if (x & (std::uint64_t{1} << (g - 1))) bits[g - 1] = '1';
        sink.emit("cube-witness", Json{{"point", bits}, {"beta", beta}});
        return 0;
    }

    if (uec->parsed()) {
        GroundModel model = model_from_json(read_json_file(model_path));
        sink.input("model", model_path);
        OrthoSystem ortho = ortho_from_json(read_json_file(ortho_path), model);
        sink.input("ortho", ortho_path);
        Rational eps = parse_rational(epsilon_text);
        sink.params = {{"epsilon", epsilon_text}};
        UecResult result = uec_partition(model, ortho, eps);
        Json cells = Json::array();
        for (std::size_t c = 0; c < result.parts.size(); ++c) {
            Json points = Json::array();
            for (PointId p : result.parts[c]) points.push_back(model.point_name(p));
            cells.push_back(Json{{"group", result.cell_labels[c].first},
                                 {"cover_index", result.cell_labels[c].second},
                                 {"points", points},
                                 {"cover", measurable_to_json(result.covers[c])}});
        }
        sink.emit("uec-partition",
                  Json{{"certified", result.certified},
                       {"max_norm_sq", format_rational(result.max_norm_sq)},
                       {"norm_bound_sq", format_rational(result.norm_bound_sq)},
                       {"assemblies_swept", result.assemblies_swept},
                       {"functionals_swept", result.functionals_swept},
                       {"grid", result.grid},
                       {"cells", cells}});
        return result.certified ? 0 : 1;
    }

    if (verify->parsed()) {
        Json report = read_json_file(verify_report);
        const Json& inputs = report.contains("inputs") ? report.at("inputs") : Json::object();
        auto recorded = [&](const char* role) -> std::string {
            if (inputs.contains(role)) return inputs.at(role).at("path").get<std::string>();
            return "";
        };
        if (model_path.empty()) model_path = recorded("model");
        if (family_path.empty()) family_path = recorded("family");
        if (indicator_path.empty()) indicator_path = recorded("indicator");

        std::optional<GroundModel> model;
        if (!model_path.empty()) model = model_from_json(read_json_file(model_path));
        std::optional<LoadedFamily> family;
        if (!family_path.empty())
            family = family_from_json(read_json_file(family_path), model ? &*model : nullptr);
        std::optional<IndicatorFunctionModel> fm;
        if (!indicator_path.empty()) {
            if (!model) throw InputError("indicator models need the model");
            fm = indicator_from_json(read_json_file(indicator_path), *model);
        }

        Verdict verdict = verdict_from_json(report.at("payload"), model ? &*model : nullptr,
                                            family ? &*family : nullptr);
        Rational replayed =
            replay_certificate(verdict, model ? &*model : nullptr,
                               family ? family->family.get() : nullptr, fm ? &*fm : nullptr);
        bool matches = replayed == verdict.value;
        if (!verdict.holds && matches) {
            // a refutation must actually refute
            matches = replayed <= verdict.epsilon;
        }
        std::cout << Json{{"command", "verify-certificate"},
                          {"claimed", format_rational(verdict.value)},
                          {"replayed", format_rational(replayed)},
                          {"matches", matches}}
                         .dump(2)
                  << "\n";
        return matches ? 0 : 1;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mcfill::InputError& e) {
        std::cout << mcfill::Json{{"error", "input"}, {"message", e.what()}}.dump(2) << "\n";
        return 2;
    } catch (const mcfill::ResourceError& e) {
        std::cout << mcfill::Json{{"error", "resource"}, {"message", e.what()}}.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cout << mcfill::Json{{"error", "internal"}, {"message", e.what()}}.dump(2) << "\n";
        return 2;
    }
}
