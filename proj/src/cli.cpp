#include "lorlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "lorlab/comparison.hpp"
#include "lorlab/errors.hpp"
#include "lorlab/gh.hpp"
#include "lorlab/globalisation.hpp"
#include "lorlab/model.hpp"
#include "lorlab/null_distance.hpp"
#include "lorlab/spaces.hpp"

namespace lorlab {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Schema helpers: every unknown key is rejected with its field path.

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ParseError("manifest: expected object at " + path);
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ParseError("manifest: unknown key " + path + "." + key);
    }
}

const json& at(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ParseError("manifest: missing key " + path + "." + key);
    return j[key];
}

double num_at(const json& j, const std::string& path, const char* key) {
    const json& v = at(j, path, key);
    if (!v.is_number()) throw ParseError("manifest: " + path + "." + key + " must be a number");
    return v.get<double>();
}

int int_at(const json& j, const std::string& path, const char* key) {
    const json& v = at(j, path, key);
    if (!v.is_number_integer()) {
        throw ParseError("manifest: " + path + "." + key + " must be an integer");
    }
    return v.get<int>();
}

std::string str_at(const json& j, const std::string& path, const char* key) {
    const json& v = at(j, path, key);
    if (!v.is_string()) throw ParseError("manifest: " + path + "." + key + " must be a string");
    return v.get<std::string>();
}

Event event_at(const json& j, const std::string& path, const char* key) {
    const json& v = at(j, path, key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError("manifest: " + path + "." + key + " must be [t, x]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

Region parse_region(const json& j, const std::string& path) {
    const std::string kind = str_at(j, path, "kind");
    if (kind == "flat-diamond") {
        check_keys(j, path, {"kind", "past", "future"});
        return Region::flat_diamond(event_at(j, path, "past"), event_at(j, path, "future"));
    }
    if (kind == "flat-slab") {
        check_keys(j, path, {"kind", "t0", "t1", "x0", "x1"});
        return Region::flat_slab(num_at(j, path, "t0"), num_at(j, path, "t1"),
                                 num_at(j, path, "x0"), num_at(j, path, "x1"));
    }
    if (kind == "model-K-patch") {
        check_keys(j, path, {"kind", "K", "theta_max", "xi_max"});
        return Region::model_patch(num_at(j, path, "K"), num_at(j, path, "theta_max"),
                                   num_at(j, path, "xi_max"));
    }
    throw ParseError("manifest: " + path + ".kind must be flat-diamond | flat-slab | model-K-patch");
}

FlatTriangle parse_triangle(const json& j, const std::string& path) {
    check_keys(j, path, {"p", "q", "r"});
    return make_flat_triangle(event_at(j, path, "p"), event_at(j, path, "q"),
                              event_at(j, path, "r"));
}

// ---------------------------------------------------------------------------
// Run context

struct RunContext {
    json manifest;
    std::string manifest_bytes;
    std::string command;
    std::filesystem::path out;
    std::uint64_t seed = 0;
    ModelConfig cfg = make_model(0.0);
    double tol = 1e-6;
    json params;  // empty object when absent
};

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open output file " + p.string());
    out << bytes;
}

void write_json(const std::filesystem::path& p, const json& doc) {
    write_file(p, doc.dump(1) + "\n");
}

DiscreteSpace build_space(const RunContext& ctx) {
    const json& space = at(ctx.manifest, "$", "space");
    check_keys(space, "$.space", {"load", "generate"});
    if (space.contains("load")) {
        return load_space(str_at(space, "$.space", "load"));
    }
    if (!space.contains("generate")) {
        throw ParseError("manifest: $.space needs load or generate");
    }
    const json& gen = space["generate"];
    check_keys(gen, "$.space.generate", {"region", "n", "seed"});
    const Region region = parse_region(at(gen, "$.space.generate", "region"),
                                       "$.space.generate.region");
    const int n = int_at(gen, "$.space.generate", "n");
    const std::uint64_t seed =
        gen.contains("seed") ? gen["seed"].get<std::uint64_t>() : ctx.seed;
    return DiscreteSpace::sprinkle(region, n, seed);
}

json entry_to_json(const ReportEntry& e) {
    const char* names[] = {"p", "q", "r"};
    return {{"mode", e.mode},
            {"vertex", names[static_cast<int>(e.vertex)]},
            {"measured", e.measured},
            {"comparison", e.comparison},
            {"margin", e.margin},
            {"holds", e.holds},
            {"converged", e.converged}};
}

// ---------------------------------------------------------------------------
// Command pipelines; each returns "verdicts all ok".

bool cmd_sprinkle(const RunContext& ctx) {
    const DiscreteSpace space = build_space(ctx);
    const TimeFunctionAssignment T = coordinate_time(space);
    save_space(space, (ctx.out / "space.json").string(), &T.values);
    write_json(ctx.out / "sprinkle.json",
               json{{"n", space.size()},
                    {"seed", space.seed().value_or(ctx.seed)},
                    {"edges", space.edges().size()}});
    return true;
}

bool cmd_tau(const RunContext& ctx) {
    const DiscreteSpace space = build_space(ctx);
    std::ostringstream csv;
    csv.precision(17);
    csv << "p";
    for (int j = 0; j < space.size(); ++j) csv << "," << j;
    csv << "\n";
    double max_tau = 0.0;
    for (int i = 0; i < space.size(); ++i) {
        csv << i;
        for (int j = 0; j < space.size(); ++j) {
            csv << "," << space.tau(i, j);
            max_tau = std::max(max_tau, space.tau(i, j));
        }
        csv << "\n";
    }
    write_file(ctx.out / "tau.csv", csv.str());
    write_json(ctx.out / "tau.json", json{{"n", space.size()}, {"max_tau", max_tau}});
    return true;
}

bool cmd_nulldist(const RunContext& ctx) {
    const DiscreteSpace space = build_space(ctx);
    const TimeFunctionAssignment T = coordinate_time(space);
    write_file(ctx.out / "nulldist.csv", null_distance_csv(space, T));
    const auto components = check_piecewise_connectivity(space);
    const int ncomp = components.empty()
                          ? 0
                          : 1 + *std::max_element(components.begin(), components.end());
    write_json(ctx.out / "nulldist.json", json{{"n", space.size()}, {"components", ncomp}});
    return true;
}

bool cmd_check(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"mode", "triangle", "p", "q", "r", "samples"});
    const std::string mode = str_at(ctx.params, "$.params", "mode");
    if (mode != "angle" && mode != "hinge" && mode != "triangle") {
        throw ParseError("manifest: $.params.mode must be angle | hinge | triangle");
    }
    const int samples =
        ctx.params.contains("samples") ? int_at(ctx.params, "$.params", "samples") : 200;

    ComparisonReport report;
    if (ctx.manifest.contains("space")) {
        const DiscreteSpace space = build_space(ctx);
        const TriangleInstance tri =
            make_triangle(space, int_at(ctx.params, "$.params", "p"),
                          int_at(ctx.params, "$.params", "q"), int_at(ctx.params, "$.params", "r"));
        if (mode == "triangle") {
            report.entries.push_back(
                check_triangle_condition(space, tri, ctx.cfg, samples, ctx.seed));
        } else {
            for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
                report.entries.push_back(mode == "angle"
                                             ? check_angle_condition(space, tri, ctx.cfg, v)
                                             : check_hinge_condition(space, tri, ctx.cfg, v));
            }
        }
    } else {
        const FlatTriangle tri =
            parse_triangle(at(ctx.params, "$.params", "triangle"), "$.params.triangle");
        if (mode == "triangle") {
            report.entries.push_back(
                check_triangle_condition(tri, ctx.cfg, samples, ctx.seed, ctx.tol));
        } else {
            for (Vertex v : {Vertex::P, Vertex::Q, Vertex::R}) {
                report.entries.push_back(mode == "angle"
                                             ? check_angle_condition(tri, ctx.cfg, v, ctx.tol)
                                             : check_hinge_condition(tri, ctx.cfg, v, ctx.tol));
            }
        }
    }
    write_file(ctx.out / "check.json", report_json({report}));
    write_file(ctx.out / "check.csv", report_csv({report}));
    return report.all_hold();
}

bool cmd_alexandrov(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"triangle", "fraction"});
    const FlatTriangle tri =
        parse_triangle(at(ctx.params, "$.params", "triangle"), "$.params.triangle");
    const AlexandrovResult res =
        verify_alexandrov_future(tri, num_at(ctx.params, "$.params", "fraction"), ctx.cfg);
    auto name = [](AlexandrovClass c) {
        switch (c) {
            case AlexandrovClass::Convex: return "convex";
            case AlexandrovClass::Concave: return "concave";
            default: return "degenerate";
        }
    };
    write_json(ctx.out / "alexandrov.json", json{{"by_angle", name(res.by_angle)},
                {"by_tau", name(res.by_tau)},
                {"angle_qr", res.angle_qr},
                {"angle_pr", res.angle_pr},
                {"tau_xr", res.tau_xr},
                {"tau_tilde", res.tau_tilde},
                {"agree", res.agree}});
    return res.agree;
}

bool cmd_glue(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"triangle", "fraction"});
    const FlatTriangle tri =
        parse_triangle(at(ctx.params, "$.params", "triangle"), "$.params.triangle");
    const GluingVerdicts v =
        gluing_subdivide(tri, num_at(ctx.params, "$.params", "fraction"), ctx.cfg, ctx.tol);
    write_json(ctx.out / "glue.json", json{{"parent_at_p", entry_to_json(v.parent_at_p)},
                                       {"at_x_in_pxr", entry_to_json(v.at_x_in_pxr)},
                                       {"at_p_in_pxr", entry_to_json(v.at_p_in_pxr)},
                                       {"at_x_in_xqr", entry_to_json(v.at_x_in_xqr)},
                                       {"some_sub_fails", v.some_sub_fails}});
    // The lemma's disjunction: a failing parent must fail somewhere below.
    return v.parent_at_p.holds || v.some_sub_fails;
}

bool cmd_cradle(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"triangle", "eps", "p", "q", "r"});
    const double eps = num_at(ctx.params, "$.params", "eps");
    CatsCradleTrace trace;
    if (ctx.manifest.contains("space")) {
        const DiscreteSpace space = build_space(ctx);
        const TimeFunctionAssignment T = coordinate_time(space);
        const TriangleInstance tri =
            make_triangle(space, int_at(ctx.params, "$.params", "p"),
                          int_at(ctx.params, "$.params", "q"), int_at(ctx.params, "$.params", "r"));
        trace = cats_cradle(space, T, tri, ctx.cfg, eps);
    } else {
        const FlatTriangle tri =
            parse_triangle(at(ctx.params, "$.params", "triangle"), "$.params.triangle");
        trace = cats_cradle(tri, ctx.cfg, eps);
    }
    write_json(ctx.out / "cradle.json", json{{"eps", trace.eps},
                                         {"L", trace.L},
                                         {"swapped", trace.swapped},
                                         {"tau_pr", trace.tau_pr},
                                         {"steps", trace.steps},
                                         {"termination", trace.termination},
                                         {"l", trace.l},
                                         {"model_pr", trace.model_pr},
                                         {"omega_bar", trace.omega_bar}});
    write_file(ctx.out / "cradle_l.tsv", trace_series_tsv(trace.l));
    write_file(ctx.out / "cradle_model_pr.tsv", trace_series_tsv(trace.model_pr));
    return trace.termination == "converged";
}

bool cmd_lebesgue(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"x", "y", "target_diameter"});
    const DiscreteSpace space = build_space(ctx);
    const TimeFunctionAssignment T = coordinate_time(space);
    const int x = int_at(ctx.params, "$.params", "x");
    const int y = int_at(ctx.params, "$.params", "y");
    const DiamondCover cover =
        generate_cover(space, T, x, y, num_at(ctx.params, "$.params", "target_diameter"));
    const LebesgueResult res = lebesgue_number(space, T, cover);
    json elements = json::array();
    for (const auto& el : cover.elements) elements.push_back({el.first, el.second});
    write_json(ctx.out / "lebesgue.json", json{{"x", x},
                                           {"y", y},
                                           {"elements", elements},
                                           {"epsilon", res.unconstrained ? -1.0 : res.epsilon},
                                           {"unconstrained", res.unconstrained}});
    return res.unconstrained || res.epsilon > 0.0;
}

bool cmd_scan(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"region", "triangles"});
    const Region region = parse_region(at(ctx.params, "$.params", "region"), "$.params.region");
    const auto reports = scan_global_bound(region, ctx.cfg,
                                           int_at(ctx.params, "$.params", "triangles"), ctx.seed,
                                           ctx.tol);
    int failures = 0;
    for (const auto& r : reports)
        for (const auto& e : r.entries)
            if (!e.holds) ++failures;
    write_file(ctx.out / "scan.csv", report_csv(reports));
    write_json(ctx.out / "scan.json", json{{"triangles", reports.size()}, {"failures", failures}, {"K", ctx.cfg.K}});
    return failures == 0;
}

bool cmd_diameter(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"region", "sizes"});
    const Region region = parse_region(at(ctx.params, "$.params", "region"), "$.params.region");
    const json& js = at(ctx.params, "$.params", "sizes");
    if (!js.is_array() || js.empty()) throw ParseError("manifest: $.params.sizes must be an array");
    std::vector<int> sizes;
    for (const auto& v : js) sizes.push_back(v.get<int>());
    const BonnetMyersResult res = bonnet_myers_check(region, ctx.cfg, sizes, ctx.seed, ctx.tol);
    std::ostringstream tsv;
    tsv.precision(17);
    tsv << "n\tdiameter\n";
    for (std::size_t i = 0; i < res.sizes.size(); ++i) {
        tsv << res.sizes[i] << "\t" << res.diameters[i] << "\n";
    }
    write_file(ctx.out / "diameter.tsv", tsv.str());
    write_json(ctx.out / "diameter.json", json{{"bound", res.bound},
                                           {"sizes", res.sizes},
                                           {"diameters", res.diameters},
                                           {"within_bound", res.within_bound},
                                           {"monotone", res.monotone}});
    return res.within_bound && res.monotone;
}

bool cmd_gh(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"x", "y", "mode"});
    const BoundedLorentzianSpace X = load_bounded(str_at(ctx.params, "$.params", "x"));
    const BoundedLorentzianSpace Y = load_bounded(str_at(ctx.params, "$.params", "y"));
    const std::string mode = str_at(ctx.params, "$.params", "mode");
    if (mode != "exact" && mode != "search") {
        throw ParseError("manifest: $.params.mode must be exact | search");
    }
    const GhResult res =
        gh_distance(X, Y, mode == "exact" ? GhMode::Exact : GhMode::Search, ctx.seed);
    write_json(ctx.out / "gh.json", json{{"value", res.value},
                                     {"is_upper_bound", res.is_upper_bound},
                                     {"normalisation", GhResult::normalisation},
                                     {"mode", mode}});
    return true;
}

bool cmd_stability(const RunContext& ctx) {
    check_keys(ctx.params, "$.params", {"spaces"});
    const json& js = at(ctx.params, "$.params", "spaces");
    if (!js.is_array() || js.size() < 2) {
        throw ParseError("manifest: $.params.spaces needs at least two entries");
    }
    std::vector<DiscreteSpace> spaces;
    for (std::size_t i = 0; i < js.size(); ++i) {
        const std::string path = "$.params.spaces[" + std::to_string(i) + "]";
        check_keys(js[i], path, {"region", "n", "seed"});
        const Region region = parse_region(at(js[i], path, "region"), path + ".region");
        const std::uint64_t seed =
            js[i].contains("seed") ? js[i]["seed"].get<std::uint64_t>() : ctx.seed;
        spaces.push_back(DiscreteSpace::sprinkle(region, int_at(js[i], path, "n"), seed));
    }
    const StabilityReport rep = stability_experiment(spaces, ctx.cfg.K, ctx.seed);
    write_file(ctx.out / "stability.csv", gh_csv(rep.pairwise));
    write_json(ctx.out / "stability.json", json{{"pairs", rep.pairwise.size()},
                                            {"final_triangles", rep.final_triangles},
                                            {"final_failures", rep.final_failures}});
    return true;  // observational: numbers are reported, nothing is asserted
}

}  // namespace

int run_manifest(const CliOptions& options) {
    RunContext ctx;
    try {
        std::ifstream in(options.manifest_path, std::ios::binary);
        if (!in) throw ParseError("cannot open manifest " + options.manifest_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        ctx.manifest_bytes = buf.str();
        try {
            ctx.manifest = json::parse(ctx.manifest_bytes);
        } catch (const json::exception& e) {
            throw ParseError(std::string("manifest: ") + e.what());
        }
        check_keys(ctx.manifest, "$", {"command", "space", "cfg", "params", "seed", "out"});
        ctx.command = str_at(ctx.manifest, "$", "command");
        if (options.expected_command && ctx.command != *options.expected_command) {
            throw ParseError("manifest: $.command is " + ctx.command + ", but the " +
                             *options.expected_command + " subcommand was invoked");
        }
        if (options.seed) {
            ctx.seed = *options.seed;
        } else if (ctx.manifest.contains("seed")) {
            ctx.seed = ctx.manifest["seed"].get<std::uint64_t>();
        }
        if (ctx.manifest.contains("cfg")) {
            const json& cfg = ctx.manifest["cfg"];
            check_keys(cfg, "$.cfg", {"K", "tol"});
            ctx.cfg = make_model(num_at(cfg, "$.cfg", "K"));
            if (cfg.contains("tol")) ctx.tol = num_at(cfg, "$.cfg", "tol");
        }
        ctx.params = ctx.manifest.value("params", json::object());
        if (!ctx.params.is_object()) throw ParseError("manifest: $.params must be an object");

        std::string out_dir;
        if (options.out_dir) {
            out_dir = *options.out_dir;
        } else if (const char* env = std::getenv("LORLAB_OUT"); env && *env) {
            out_dir = env;
        } else if (ctx.manifest.contains("out")) {
            out_dir = str_at(ctx.manifest, "$", "out");
        } else {
            out_dir = ".";
        }
        ctx.out = out_dir;
        std::filesystem::create_directories(ctx.out);

        bool ok;
        if (ctx.command == "sprinkle") ok = cmd_sprinkle(ctx);
        else if (ctx.command == "tau") ok = cmd_tau(ctx);
        else if (ctx.command == "nulldist") ok = cmd_nulldist(ctx);
        else if (ctx.command == "check") ok = cmd_check(ctx);
        else if (ctx.command == "alexandrov") ok = cmd_alexandrov(ctx);
        else if (ctx.command == "glue") ok = cmd_glue(ctx);
        else if (ctx.command == "cradle") ok = cmd_cradle(ctx);
        else if (ctx.command == "lebesgue") ok = cmd_lebesgue(ctx);
        else if (ctx.command == "scan") ok = cmd_scan(ctx);
        else if (ctx.command == "diameter") ok = cmd_diameter(ctx);
        else if (ctx.command == "gh") ok = cmd_gh(ctx);
        else if (ctx.command == "stability") ok = cmd_stability(ctx);
        else throw ParseError("manifest: unknown command " + ctx.command);

        // Reproducibility stamp and one-row run summary.
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(fnv1a(ctx.manifest_bytes)));
        write_json(ctx.out / "stamp.json", json{{"seed", ctx.seed}, {"version", kVersion}, {"manifest_hash", hash}});
        write_file(ctx.out / "summary.csv", "command,verdict\n" + ctx.command + "," +
                                                (ok ? "ok" : "fail") + "\n");
        if (!ok && options.strict) return 1;
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Synthetic Lorentzian geometry toolbox"};
    app.require_subcommand(1);

    CliOptions options;
    std::uint64_t seed = 0;
    std::string out_dir;
    const char* commands[] = {"sprinkle", "tau",      "nulldist", "check",
                              "alexandrov", "glue",   "cradle",   "lebesgue",
                              "scan",     "diameter", "gh",       "stability"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name, std::string("run a ") + name + " manifest");
        sub->add_option("--manifest", options.manifest_path, "manifest JSON path")->required();
        auto* out_opt = sub->add_option("--out", out_dir, "output directory");
        auto* seed_opt = sub->add_option("--seed", seed, "seed override");
        sub->add_flag("--strict", options.strict, "verdict failures exit 1");
        sub->add_option("--jobs", options.jobs, "worker threads");
        sub->callback([&, name, out_opt, seed_opt] {
            options.expected_command = name;
            if (out_opt->count() > 0) options.out_dir = out_dir;
            if (seed_opt->count() > 0) options.seed = seed;
        });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return run_manifest(options);
}

}  // namespace lorlab
