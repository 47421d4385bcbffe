#pragma once

#include <cstdint>

#include <httplib.h>

// Stateless HTTP facade over the core. Malformed bodies get 400, invalid
// collection shapes 422; geometric outcomes (degenerate positions from
// dragged points included) are ordinary 200 responses with a status field so
// interactive clients can render them. No handler mutates shared state, so
// identical requests yield byte-identical responses.

namespace bmz::service {

struct ServeConfig {
    int threads = 1;                      // per-request worker budget
    std::uint64_t census_budget = 20000;  // max (r!)^(d+1) for census requests
    std::uint64_t default_ray_seed = 0xb32fa11bacc5ULL;
};

// POST /evaluate, GET /special, POST /perturb, POST /sign-case.
void register_routes(httplib::Server& server, const ServeConfig& config);

}  // namespace bmz::service
