// Command-line entry points over the core library. Exit codes: 0 success,
// 1 parse/usage error, 2 geometric failure (invalid collection, degenerate
// position, exhausted retries). With --json every result and machine-readable
// diagnostic goes to stdout as a single JSON object.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bmz/experiments.hpp"
#include "bmz/io.hpp"
#include "bmz/parallel.hpp"

namespace {

using bmz::io::json;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitGeometric = 2;
constexpr std::uint64_t kDefaultRaySeed = 0xb32fa11bacc5ULL;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bmz::io::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

void emit(bool as_json, const json& j, const std::string& human) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human;
}

int fail_geometric(bool as_json, const json& diagnostics, const std::string& human) {
    if (as_json)
        std::cout << json{{"status", "error"}, {"error", diagnostics}}.dump(2) << "\n";
    else
        std::cerr << human;
    return kExitGeometric;
}

struct LoadedCollection {
    bmz::io::CollectionDocument doc;
};

// Parses and validates; throws ParseError (exit 1) or returns violations via
// the out-param for the exit-2 path.
std::optional<LoadedCollection> load_collection(const std::string& path,
                                                bool as_json, int* exit_code) {
    bmz::io::CollectionDocument doc =
        bmz::io::parse_collection_document(read_file(path));
    const auto violations = bmz::validate_collection(doc.collection);
    if (!violations.empty()) {
        json vj = json::array();
        for (const auto& v : violations) vj.push_back(v);
        *exit_code = fail_geometric(
            as_json, json{{"kind", "invalid-collection"}, {"violations", vj}},
            "invalid collection:\n  - " + violations.front() + "\n");
        return std::nullopt;
    }
    return LoadedCollection{std::move(doc)};
}

std::string signs_line(const bmz::DegreeHit& h) {
    std::ostringstream ss;
    ss << "  #" << h.placement_index << " csgn=" << h.signs.csgn
       << " gsgn=" << h.signs.gsgn << " sgn=" << h.signs.sgn
       << " t=" << bmz::to_string(h.hit.t) << "\n";
    return ss.str();
}

int cmd_degree(const std::string& file, const std::string& ray_mode, int threads,
               bool as_json) {
    int code = kExitOk;
    auto loaded = load_collection(file, as_json, &code);
    if (!loaded) return code;
    const auto& c = loaded->doc.collection;
    const bmz::WBasis w = bmz::make_w_basis(c.r);

    bmz::GenPosOptions gopts;
    gopts.threads = threads;
    const auto genpos = bmz::check_sufficient(c, w, gopts);
    if (!(genpos.sufficiently_general && *genpos.sufficiently_general)) {
        return fail_geometric(
            as_json,
            json{{"kind", "not-sufficiently-general"},
                 {"genpos", bmz::io::genpos_report_json(genpos)}},
            "collection is not in sufficiently general position (" +
                std::to_string(genpos.violation_count) + " violations)\n");
    }

    bool start_default = true;
    std::uint64_t seed = kDefaultRaySeed;
    if (ray_mode != "default") {
        if (ray_mode.rfind("seed=", 0) != 0) {
            std::cerr << "--ray must be 'default' or 'seed=K'\n";
            return kExitParse;
        }
        start_default = false;
        seed = std::stoull(ray_mode.substr(5));
    }

    try {
        auto outcome = bmz::compute_degree_auto(c, w, threads, seed, 16, start_default);
        if (auto* err = std::get_if<bmz::DegreeError>(&outcome)) {
            return fail_geometric(as_json,
                                  json{{"kind", "degree-failure"},
                                       {"detail", bmz::io::degree_error_json(*err)}},
                                  "degenerate facet encountered; the collection "
                                  "is not in sufficiently general position\n");
        }
        const auto& res = std::get<bmz::DegreeAutoResult>(outcome);
        json j = bmz::io::degree_report_json(res.report);
        j["ray_used"] = res.ray.used_default ? "default" : "sampled";
        j["ray_attempts"] = res.ray.attempts;
        std::ostringstream human;
        human << "degree: " << res.report.degree << "\n"
              << "residue mod " << res.report.modulus << ": " << res.report.residue
              << "\n"
              << "hits: " << res.report.hits.size() << " ("
              << (res.ray.used_default ? "default ray" : "sampled ray") << ", attempt "
              << res.ray.attempts << ")\n";
        std::size_t shown = 0;
        for (const auto& h : res.report.hits) {
            if (shown++ == 200) {
                human << "  ... (" << res.report.hits.size() - 200 << " more)\n";
                break;
            }
            human << signs_line(h);
        }
        emit(as_json, j, human.str());
        return kExitOk;
    } catch (const bmz::ExhaustedRetriesError& e) {
        return fail_geometric(as_json,
                              json{{"kind", "exhausted-retries"}, {"detail", e.what()}},
                              std::string(e.what()) + "\n");
    }
}

int cmd_check(const std::string& file, bool also_almost, int threads, bool as_json) {
    int code = kExitOk;
    auto loaded = load_collection(file, as_json, &code);
    if (!loaded) return code;
    const auto& c = loaded->doc.collection;
    const bmz::WBasis w = bmz::make_w_basis(c.r);
    bmz::GenPosOptions gopts;
    gopts.threads = threads;
    auto report = bmz::check_sufficient(c, w, gopts);
    if (also_almost && !(report.sufficiently_general && *report.sufficiently_general)) {
        const auto almost = bmz::check_almost(c, w, gopts);
        report.almost_general = almost.almost_general;
        for (const auto& v : almost.violations) report.violations.push_back(v);
        report.violation_count += almost.violation_count;
    }
    const bool ok = report.sufficiently_general && *report.sufficiently_general;
    std::ostringstream human;
    human << "sufficiently general: " << (ok ? "yes" : "no") << "\n";
    if (report.almost_general)
        human << "almost general: " << (*report.almost_general ? "yes" : "no") << "\n";
    for (const auto& v : report.violations)
        human << "  violation: " << v.condition << " at placement #"
              << v.placement_index << " point " << v.point << "\n";
    emit(as_json, bmz::io::genpos_report_json(report), human.str());
    return ok ? kExitOk : kExitGeometric;
}

int cmd_perturb(const std::string& file, const std::string& epsilon_text,
                std::uint64_t seed, const std::string& output, int threads,
                bool as_json) {
    int code = kExitOk;
    auto loaded = load_collection(file, as_json, &code);
    if (!loaded) return code;
    const auto epsilon = bmz::parse_rational(epsilon_text);
    if (!epsilon || bmz::sign(*epsilon) <= 0) {
        std::cerr << "--epsilon must be a positive rational like 1/100\n";
        return kExitParse;
    }
    bmz::Rng rng(seed);
    bmz::PerturbOptions popts;
    popts.threads = threads;
    try {
        bmz::io::CollectionDocument out = loaded->doc;
        out.collection = bmz::perturb(loaded->doc.collection, *epsilon, rng, popts);
        out.provenance = "bmz perturb seed=" + std::to_string(seed) +
                         " epsilon=" + epsilon_text;
        const std::string text = bmz::io::serialize_collection_document(out);
        if (!output.empty()) {
            write_file(output, text);
            emit(as_json, json{{"status", "ok"}, {"output", output}},
                 "wrote " + output + "\n");
        } else {
            std::cout << text;
        }
        return kExitOk;
    } catch (const bmz::ExhaustedRetriesError& e) {
        return fail_geometric(as_json,
                              json{{"kind", "exhausted-retries"}, {"detail", e.what()}},
                              std::string(e.what()) + "\n");
    }
}

int cmd_special(int d, int r, const std::string& radius_text,
                const std::string& output, int threads, bool as_json) {
    auto radius = bmz::default_cluster_radius();
    if (!radius_text.empty()) {
        const auto parsed = bmz::parse_rational(radius_text);
        if (!parsed || bmz::sign(*parsed) <= 0) {
            std::cerr << "--radius must be a positive rational\n";
            return kExitParse;
        }
        radius = *parsed;
    }
    try {
        bmz::io::CollectionDocument doc;
        doc.collection = bmz::special_collection(d, r, radius, threads);
        doc.label = "special d=" + std::to_string(d) + " r=" + std::to_string(r);
        doc.provenance = "bmz special";
        const std::string text = bmz::io::serialize_collection_document(doc);
        if (!output.empty()) {
            write_file(output, text);
            emit(as_json, json{{"status", "ok"}, {"output", output}},
                 "wrote " + output + "\n");
        } else {
            std::cout << text;
        }
        return kExitOk;
    } catch (const bmz::ExhaustedRetriesError& e) {
        return fail_geometric(as_json,
                              json{{"kind", "exhausted-retries"}, {"detail", e.what()}},
                              std::string(e.what()) + "\n");
    }
}

int cmd_search(int d, int r, std::uint64_t budget, std::uint64_t seed,
               const std::string& out_dir, int threads, bool as_json) {
    const auto log = bmz::search_degree_zero(d, r, budget, seed, threads);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (const auto& find : log.found) {
            bmz::io::CollectionDocument doc;
            doc.collection = find.collection;
            doc.label = "degree-zero find, trial " + std::to_string(find.trial);
            doc.provenance = "bmz search seed=" + std::to_string(seed);
            write_file(out_dir + "/find-" + std::to_string(find.trial) +
                           ".collection.json",
                       bmz::io::serialize_collection_document(doc));
            json rj{{"degree_report", bmz::io::degree_report_json(find.report)},
                    {"census", bmz::io::census_json(find.census)}};
            write_file(out_dir + "/find-" + std::to_string(find.trial) +
                           ".report.json",
                       rj.dump(2) + "\n");
        }
    }
    std::ostringstream human;
    human << "trials: " << log.trials << ", skipped: " << log.skipped
          << ", degree-0 finds: " << log.found.size() << "\n";
    for (const auto& f : log.found) {
        human << "  trial " << f.trial << ": census " << f.census.tverberg.size()
              << " placements, " << f.census.class_count << " classes\n";
        if (f.census.tverberg.empty())
            human << "  RESEARCH ALARM: degree-0 collection with EMPTY census "
                     "(would refute the conjecture instance); saved for review\n";
    }
    emit(as_json, bmz::io::search_log_json(log), human.str());
    return kExitOk;
}

int cmd_census(const std::string& file, int threads, bool as_json) {
    int code = kExitOk;
    auto loaded = load_collection(file, as_json, &code);
    if (!loaded) return code;
    const auto census = bmz::tverberg_census(loaded->doc.collection, threads);
    std::ostringstream human;
    human << "tverberg placements: " << census.tverberg.size() << "\n"
          << "equivalence classes touched: " << census.class_count << "\n"
          << "classes fully tverberg: "
          << (census.classes_fully_tverberg ? "yes" : "no") << "\n";
    emit(as_json, bmz::io::census_json(census), human.str());
    return kExitOk;
}

int cmd_motion(const std::string& file0, const std::string& file1, int steps,
               int threads, bool as_json) {
    int code = kExitOk;
    auto a = load_collection(file0, as_json, &code);
    if (!a) return code;
    auto b = load_collection(file1, as_json, &code);
    if (!b) return code;
    try {
        const auto trace =
            bmz::motion_scan(a->doc.collection, b->doc.collection, steps, threads);
        std::ostringstream human;
        human << "t\tsufficient\tdegree\tresidue(mod " << trace.modulus << ")\n";
        for (const auto& s : trace.samples) {
            human << bmz::to_string(s.t) << "\t"
                  << (s.sufficiently_general ? "yes" : "no") << "\t";
            if (s.degree)
                human << *s.degree << "\t" << *s.residue << "\n";
            else
                human << "-\t-\n";
        }
        emit(as_json, bmz::io::motion_trace_json(trace), human.str());
        return kExitOk;
    } catch (const bmz::ResidueMismatchError& e) {
        return fail_geometric(as_json,
                              json{{"kind", "residue-mismatch"}, {"detail", e.what()}},
                              std::string(e.what()) + "\n");
    }
}

int cmd_solve(const std::string& file, int threads, bool as_json) {
    const auto doc = bmz::io::parse_colored_classes(read_file(file));
    try {
        const auto result =
            bmz::solve_colored_tverberg(doc.classes, doc.z, threads);
        if (!result) {
            return fail_geometric(
                as_json, json{{"kind", "not-found"}},
                "no Tverberg rainbow partition found (composite r?)\n");
        }
        std::ostringstream human;
        human << "found a Tverberg rainbow partition of " << result->class_points.size()
              << " classes\nwitness:";
        for (const auto& q : result->witness) human << " " << bmz::to_string(q);
        human << "\n";
        for (std::size_t i = 0; i < result->class_indices.size(); ++i) {
            human << "  R" << i + 1 << ": points";
            for (int idx : result->class_indices[i]) human << " " << idx + 1;
            human << "\n";
        }
        emit(as_json, bmz::io::colored_solve_json(*result), human.str());
        return kExitOk;
    } catch (const bmz::WrongShapeError& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
}

int cmd_sign_case(const std::string& file, int case_id, bool as_json) {
    int code = kExitOk;
    auto loaded = load_collection(file, as_json, &code);
    if (!loaded) return code;
    try {
        const auto report = bmz::sign_case_study(loaded->doc.collection, case_id);
        std::ostringstream human;
        human << "case " << report.case_id << ": csgn=" << report.signs.csgn
              << " gsgn=" << report.signs.gsgn << " sgn=" << report.signs.sgn << "\n";
        for (const auto& p : report.predicates)
            human << "  " << p.name << " = " << p.sign << "\n";
        human << "  degeneracy condition holds: "
              << (report.dictionary_condition ? "yes" : "no") << "\n";
        emit(as_json, bmz::io::sign_case_json(report), human.str());
        return kExitOk;
    } catch (const bmz::WrongShapeError& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic toolkit for degrees of BMZ-collections and "
                 "Tverberg rainbow partitions"};
    app.require_subcommand(1);
    int threads = 0;  // 0 -> $BMZ_THREADS or hardware
    app.add_option("--threads", threads, "worker threads (default: BMZ_THREADS or all cores)");

    std::string file, file1, ray_mode = "default", epsilon, radius, output, out_dir;
    std::uint64_t seed = 0, budget = 10000;
    int d = 2, r = 3, steps = 50, case_id = 1;
    bool as_json = false, also_almost = false;

    auto add_json = [&](CLI::App* cmd) { cmd->add_flag("--json", as_json, "JSON output"); };

    auto* c_degree = app.add_subcommand("degree", "degree of a collection");
    c_degree->add_option("file", file)->required();
    c_degree->add_option("--ray", ray_mode, "default | seed=K");
    add_json(c_degree);

    auto* c_check = app.add_subcommand("check", "general-position check");
    c_check->add_option("file", file)->required();
    c_check->add_flag("--almost", also_almost, "also run the almost-general check");
    add_json(c_check);

    auto* c_perturb = app.add_subcommand("perturb", "perturb into general position");
    c_perturb->add_option("file", file)->required();
    c_perturb->add_option("--epsilon", epsilon, "max per-coordinate move")->required();
    c_perturb->add_option("--seed", seed);
    c_perturb->add_option("--output,-o", output);
    add_json(c_perturb);

    auto* c_special = app.add_subcommand("special", "cluster collection with known degree");
    c_special->add_option("--d", d)->required();
    c_special->add_option("--r", r)->required();
    c_special->add_option("--radius", radius);
    c_special->add_option("--output,-o", output);
    add_json(c_special);

    auto* c_search = app.add_subcommand("search", "random search for degree-0 collections");
    c_search->add_option("--d", d)->required();
    c_search->add_option("--r", r)->required();
    c_search->add_option("--budget", budget);
    c_search->add_option("--seed", seed);
    c_search->add_option("--out-dir", out_dir, "directory for found collections");
    add_json(c_search);

    auto* c_census = app.add_subcommand("census", "all Tverberg placements");
    c_census->add_option("file", file)->required();
    add_json(c_census);

    auto* c_motion = app.add_subcommand("motion", "degree trace along an interpolation");
    c_motion->add_option("file0", file)->required();
    c_motion->add_option("file1", file1)->required();
    c_motion->add_option("--steps", steps);
    add_json(c_motion);

    auto* c_solve = app.add_subcommand("solve", "colored Tverberg via the extra-point reduction");
    c_solve->add_option("file", file)->required();
    add_json(c_solve);

    auto* c_sign = app.add_subcommand("sign-case", "planar r=3 sign case study");
    c_sign->add_option("file", file)->required();
    c_sign->add_option("--case", case_id)->check(CLI::Range(1, 3));
    add_json(c_sign);

    CLI11_PARSE(app, argc, argv);
    threads = bmz::resolve_threads(threads);

    try {
        if (c_degree->parsed()) return cmd_degree(file, ray_mode, threads, as_json);
        if (c_check->parsed()) return cmd_check(file, also_almost, threads, as_json);
        if (c_perturb->parsed())
            return cmd_perturb(file, epsilon, seed, output, threads, as_json);
        if (c_special->parsed())
            return cmd_special(d, r, radius, output, threads, as_json);
        if (c_search->parsed())
            return cmd_search(d, r, budget, seed, out_dir, threads, as_json);
        if (c_census->parsed()) return cmd_census(file, threads, as_json);
        if (c_motion->parsed()) return cmd_motion(file, file1, steps, threads, as_json);
        if (c_solve->parsed()) return cmd_solve(file, threads, as_json);
        if (c_sign->parsed()) return cmd_sign_case(file, case_id, as_json);
    } catch (const bmz::io::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const bmz::BudgetExceededError& e) {
        std::cerr << e.what() << "\n";
        return kExitGeometric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGeometric;
    }
    return kExitParse;
}
