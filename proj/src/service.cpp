#include "bmz/service.hpp"

#include "bmz/experiments.hpp"
#include "bmz/io.hpp"

namespace bmz::service {

namespace {

using bmz::io::json;

void reply_json(httplib::Response& res, int code, const json& j) {
    res.status = code;
    res.set_content(j.dump(), "application/json");
}

// Shared request plumbing: parse -> 400, validate -> 422, else run.
template <typename Fn>
void with_collection(httplib::Response& res, const json& body, const Fn& fn) {
    if (!body.contains("collection")) {
        reply_json(res, 400, json{{"error", "missing collection"}});
        return;
    }
    bmz::io::CollectionDocument doc;
    try {
        doc = bmz::io::collection_document_from_json(body["collection"]);
    } catch (const bmz::io::ParseError& e) {
        reply_json(res, 400, json{{"error", e.what()}});
        return;
    }
    const auto violations = bmz::validate_collection(doc.collection);
    if (!violations.empty()) {
        json vj = json::array();
        for (const auto& v : violations) vj.push_back(v);
        reply_json(res, 422,
                   json{{"error", "invalid collection"}, {"violations", vj}});
        return;
    }
    fn(doc);
}

json evaluate(const ServeConfig& cfg, const bmz::io::CollectionDocument& doc,
              const json& options) {
    const auto& c = doc.collection;
    const bmz::WBasis w = bmz::make_w_basis(c.r);
    json out;
    json warnings = json::array();

    const bool want_census = options.value("census", false);
    const bool want_genpos = options.value("genpos", true);

    if (want_genpos) {
        bmz::GenPosOptions gopts;
        gopts.threads = cfg.threads;
        const auto genpos = bmz::check_sufficient(c, w, gopts);
        out["genpos"] = bmz::io::genpos_report_json(genpos);
        if (!(genpos.sufficiently_general && *genpos.sufficiently_general)) {
            out["status"] = "non-generic";
            out["warnings"] = warnings;
            return out;
        }
    }

    bool start_default = true;
    std::uint64_t seed = cfg.default_ray_seed;
    if (options.contains("ray_seed") && !options["ray_seed"].is_null()) {
        start_default = false;
        seed = options["ray_seed"].get<std::uint64_t>();
    }
    try {
        auto outcome =
            bmz::compute_degree_auto(c, w, cfg.threads, seed, 16, start_default);
        if (auto* err = std::get_if<bmz::DegreeError>(&outcome)) {
            out["status"] = "degenerate";
            out["detail"] = bmz::io::degree_error_json(*err);
            out["warnings"] = warnings;
            return out;
        }
        const auto& res = std::get<bmz::DegreeAutoResult>(outcome);
        out["degree_report"] = bmz::io::degree_report_json(res.report);
        out["ray_used"] = res.ray.used_default ? "default" : "sampled";
    } catch (const bmz::ExhaustedRetriesError& e) {
        out["status"] = "non-generic";
        out["detail"] = e.what();
        out["warnings"] = warnings;
        return out;
    }

    if (want_census) {
        const auto count = bmz::placement_count(c.d, c.r);
        if (!count || *count > cfg.census_budget) {
            warnings.push_back(
                "census skipped: (r!)^(d+1) exceeds the interactive budget; "
                "use the CLI census command");
        } else {
            out["census"] =
                bmz::io::census_json(bmz::tverberg_census(c, cfg.threads));
        }
    }
    out["status"] = "ok";
    out["warnings"] = warnings;
    return out;
}

}  // namespace

void register_routes(httplib::Server& server, const ServeConfig& config) {
    const ServeConfig cfg = config;

    server.Post("/evaluate", [cfg](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            reply_json(res, 400, json{{"error", e.what()}});
            return;
        }
        with_collection(res, body, [&](const bmz::io::CollectionDocument& doc) {
            const json options =
                body.contains("options") && body["options"].is_object()
                    ? body["options"]
                    : json::object();
            reply_json(res, 200, evaluate(cfg, doc, options));
        });
    });

    server.Get("/special", [cfg](const httplib::Request& req, httplib::Response& res) {
        int d = 2, r = 3;
        try {
            if (req.has_param("d")) d = std::stoi(req.get_param_value("d"));
            if (req.has_param("r")) r = std::stoi(req.get_param_value("r"));
        } catch (const std::exception&) {
            reply_json(res, 400, json{{"error", "d and r must be integers"}});
            return;
        }
        bmz::Rational radius = bmz::default_cluster_radius();
        if (req.has_param("radius")) {
            const auto parsed = bmz::parse_rational(req.get_param_value("radius"));
            if (!parsed || bmz::sign(*parsed) <= 0) {
                reply_json(res, 400,
                           json{{"error", "radius must be a positive rational"}});
                return;
            }
            radius = *parsed;
        }
        if (d < 1 || r < 2 || !bmz::placement_count(d, r)) {
            reply_json(res, 400, json{{"error", "need d >= 1 and r >= 2 within range"}});
            return;
        }
        try {
            bmz::io::CollectionDocument doc;
            doc.collection = bmz::special_collection(d, r, radius, cfg.threads);
            doc.label = "special d=" + std::to_string(d) + " r=" + std::to_string(r);
            reply_json(res, 200, bmz::io::collection_document_to_json(doc));
        } catch (const bmz::ExhaustedRetriesError& e) {
            reply_json(res, 200, json{{"status", "non-generic"}, {"detail", e.what()}});
        }
    });

    server.Post("/perturb", [cfg](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            reply_json(res, 400, json{{"error", e.what()}});
            return;
        }
        with_collection(res, body, [&](const bmz::io::CollectionDocument& doc) {
            const std::string eps_text = body.value("epsilon", std::string("1/1000"));
            const auto epsilon = bmz::parse_rational(eps_text);
            if (!epsilon || bmz::sign(*epsilon) <= 0) {
                reply_json(res, 400,
                           json{{"error", "epsilon must be a positive rational"}});
                return;
            }
            bmz::Rng rng(body.value("seed", std::uint64_t{0}));
            bmz::PerturbOptions popts;
            popts.threads = cfg.threads;
            try {
                bmz::io::CollectionDocument out = doc;
                out.collection = bmz::perturb(doc.collection, *epsilon, rng, popts);
                reply_json(
                    res, 200,
                    json{{"status", "ok"},
                         {"collection", bmz::io::collection_document_to_json(out)}});
            } catch (const bmz::ExhaustedRetriesError& e) {
                reply_json(res, 200,
                           json{{"status", "non-generic"}, {"detail", e.what()}});
            }
        });
    });

    server.Post("/sign-case", [cfg](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception& e) {
            reply_json(res, 400, json{{"error", e.what()}});
            return;
        }
        with_collection(res, body, [&](const bmz::io::CollectionDocument& doc) {
            const int case_id = body.value("case", 1);
            try {
                reply_json(res, 200,
                           bmz::io::sign_case_json(
                               bmz::sign_case_study(doc.collection, case_id)));
            } catch (const bmz::WrongShapeError& e) {
                reply_json(res, 422, json{{"error", e.what()}});
            } catch (const std::invalid_argument& e) {
                reply_json(res, 400, json{{"error", e.what()}});
            }
        });
    });
}

}  // namespace bmz::service
