#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmz/model.hpp"
#include "bmz/rational.hpp"
#include "bmz/rng.hpp"
#include "bmz/transform.hpp"

// Sufficiently general position: every facet F_R is an (N-1)-simplex and for
// every placement R and every point a, the affine span of Phi(R - a) avoids
// the origin. Almost general position: every ridge conv(Phi(R - z - a))
// avoids the origin. Both verified exhaustively by exact rank tests / LPs.

namespace bmz {

struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenPosViolation {
    std::uint64_t placement_index = 0;
    RookPlacement placement;
    std::string condition;  // facet-degenerate | origin-in-facet-span | origin-in-ridge
    int point = 0;          // 1-based dropped point (N+1 = z), 0 = whole facet
};

struct GenPosReport {
    std::optional<bool> sufficiently_general;
    std::optional<bool> almost_general;  // implied true when sufficient
    std::vector<GenPosViolation> violations;  // capped; see total below
    std::uint64_t violation_count = 0;

    bool passed() const {
        return (sufficiently_general && *sufficiently_general) ||
               (!sufficiently_general && almost_general && *almost_general);
    }
};

struct GenPosOptions {
    int threads = 1;
    std::uint64_t budget = 100'000'000;  // rank tests / hull tests
    std::size_t max_recorded_violations = 100;
};

GenPosReport check_sufficient(const BmzCollection& c, const WBasis& w,
                              const GenPosOptions& opts = {});

GenPosReport check_almost(const BmzCollection& c, const WBasis& w,
                          const GenPosOptions& opts = {});

struct PerturbOptions {
    std::uint64_t jitter_denom = 1'000'000;
    int max_retries = 64;
    int threads = 1;
};

// A collection within per-coordinate distance epsilon of c that passes
// check_sufficient. The input itself is returned when it already passes.
// Throws ExhaustedRetriesError (from degree.hpp) when no jitter works.
BmzCollection perturb(const BmzCollection& c, const Rational& epsilon, Rng& rng,
                      const PerturbOptions& opts = {});

}  // namespace bmz
