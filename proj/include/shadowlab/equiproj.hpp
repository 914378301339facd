#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shadowlab/polytope.hpp"
#include "shadowlab/shadow.hpp"
#include "shadowlab/walk.hpp"

namespace shadowlab {

// A pair (F, F') of parallel 2-faces, F' possibly absent. Stored with face < partner.
struct FacePair {
    int face = -1;
    std::optional<int> partner;
    auto operator<=>(const FacePair&) const = default;
};

struct VisibilityCertificate {
    FacePair pair;
    int class_id = -1;
    Subspace orthogonal{0};                 // witness W-perp
    std::pair<int, int> fixed_points;       // of F
    std::optional<std::pair<int, int>> partner_fixed_points;
    Chains chains;                          // V(F), I(F)
    std::optional<Chains> partner_chains;   // V(F'), I(F')
};

struct VisibilitySearch {
    std::vector<VisibilityCertificate> certificates;
    std::vector<FacePair> not_found;        // candidates without a witness
    bool exhaustive = false;                // d = 3: the witness space was covered arc by arc
    std::size_t witnesses_tried = 0;
};

// Witnesses per class in d >= 4.
constexpr std::size_t kDefaultWitnessBudget = 24;

VisibilitySearch visible_pairs(const Polytope& p, std::uint64_t seed, std::size_t budget = kDefaultWitnessBudget);
// Exact check of one witness; the certificate is returned when it is valid.
std::optional<VisibilityCertificate> certify_witness(const Polytope& p, int class_id, const Subspace& orthogonal);

struct EdgeTwoFace {
    int edge = -1;
    int face = -1;
    std::optional<int> partner;
    int orientation = 0;  // +1 along the edge's canonical direction, -1 against
    auto operator<=>(const EdgeTwoFace&) const = default;
};

// Orientations of the edges of F (and F'). With a partner the lower-id face is
// traversed clockwise and the higher-id one counter-clockwise in the (f1, f2)
// frame, i.e. both counter-clockwise seen from outside the slice. Without a
// partner F is traversed counter-clockwise, or clockwise when `flip` is set.
std::vector<EdgeTwoFace> orient(const Polytope& p, const FacePair& pair, bool flip = false);
std::vector<EdgeTwoFace> edge_two_faces(const Polytope& p, const std::vector<VisibilityCertificate>& certs,
                                        bool flip_singletons = false);

bool compensate(const Polytope& p, const EdgeTwoFace& a, const EdgeTwoFace& b);

struct CompensationResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // indices into the edge-2-face list
    std::optional<std::vector<std::size_t>> obstruction;     // a group with no perfect matching
    bool ok() const { return !obstruction.has_value(); }
};

CompensationResult compensation_partition(const Polytope& p, const std::vector<EdgeTwoFace>& items);

struct Verdict {
    bool equiprojective = false;
    std::optional<std::size_t> k;
    bool best_effort = false;
    std::string method;
    VisibilitySearch search;
    std::vector<EdgeTwoFace> items;
    CompensationResult pairing;
    // Sampled mode: two planes with different shadow sizes.
    std::optional<std::pair<ProjectionPlane, ProjectionPlane>> counterexample;
    std::optional<std::pair<std::size_t, std::size_t>> counterexample_k;
    std::size_t trials = 0;
};

Verdict is_equiprojective_combinatorial(const Polytope& p, std::uint64_t seed,
                                        std::size_t budget = kDefaultWitnessBudget);
Verdict is_equiprojective_sampled(const Polytope& p, std::uint64_t seed, std::size_t trials);

struct InteriorCase {
    Subspace orthogonal{0};
    IdList degenerating_classes;
    std::size_t k = 0;
    std::size_t k_minus = 0;  // admissible neighbours on either side
    std::size_t k_plus = 0;
    bool matches() const { return k == k_minus && k == k_plus; }
};

struct EquivalenceReport {
    std::vector<InteriorCase> cases;
    std::optional<std::size_t> sampled_k;  // constant k over admissible samples, if any
    bool vacuous() const { return cases.empty(); }
    bool passed() const;
};

// Planes whose degenerations all lie strictly inside the shadow keep the k of
// nearby admissible planes. `extra` planes are tested in addition to sampled ones.
EquivalenceReport definitions_equivalence_check(const Polytope& p, std::uint64_t seed, std::size_t trials,
                                                const std::vector<ProjectionPlane>& extra = {});

} // namespace shadowlab
