#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/polytope.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {

// t -> (base_i + t * slope_i)_i for t in [t_begin, t_end].
struct WalkSegment {
    std::vector<Vec> base;
    std::vector<Vec> slope;
    Rat t_begin{0};
    Rat t_end{1};
    std::string kind;

    std::vector<Vec> at(const Rat& t) const;
    Subspace span_at(const Rat& t) const;
    WalkSegment reversed() const;
};

struct AffinePoly {
    Rat constant;
    Rat linear;
    Rat operator()(const Rat& t) const { return constant + linear * t; }
    bool identically_zero() const { return constant == 0 && linear == 0; }
    std::optional<Rat> root() const;
};

struct DegenerationEvent {
    std::size_t segment = 0;
    Rat time;
    int class_id = -1;
    bool operator==(const DegenerationEvent&) const = default;
};

struct WalkPlan {
    std::vector<WalkSegment> segments;
    std::vector<DegenerationEvent> events;
    Mat isometry;
    Mat inverse;
    std::optional<Subspace> from;
    std::optional<Subspace> to;
};

struct EtaVector {
    int class_id = -1;
    Vec eta;
};

struct ReferenceIsometry {
    Mat q;
    Mat q_inverse;
    std::vector<EtaVector> etas;
    std::size_t rotations = 0;
};

// The class direction planes after applying q. This is all the walk needs:
// degenerations only depend on Span[F].
struct WalkFrame {
    std::size_t dim = 0;
    std::vector<Subspace> planes;
    std::vector<Vec> etas;  // empty unless the reference conditions hold
};

WalkFrame make_frame(const Polytope& p, const Mat& q);
// Conditions (a) and (b) of the reference isometry, checked exactly.
bool reference_conditions_hold(const Polytope& p, const Mat& q);
ReferenceIsometry reference_isometry(const Polytope& p);

// Coefficients c_0..c_k of t -> det(g_1(t), ..., g_k(t), f_1, f_2), by exact interpolation.
std::vector<Rat> determinant_polynomial(const WalkSegment& seg, const Subspace& class_plane);
// Throws WalkError when the polynomial has degree above one.
AffinePoly degeneration_polynomial(const WalkSegment& seg, const Subspace& class_plane);

std::vector<WalkSegment> walk_to_hyperplane(const WalkFrame& frame, const Subspace& start, std::uint64_t seed);
std::vector<WalkSegment> walk_within_hyperplane(const WalkFrame& frame, const Subspace& start, std::uint64_t seed);
// Overloads on a polytope that already satisfies the reference conditions.
std::vector<WalkSegment> walk_to_hyperplane(const Polytope& p, const Subspace& start, std::uint64_t seed);
std::vector<WalkSegment> walk_within_hyperplane(const Polytope& p, const Subspace& start, std::uint64_t seed);

WalkPlan full_walk(const Polytope& p, const Subspace& from, const Subspace& to, std::uint64_t seed);

// Events of one segment for the given class planes (roots in the closed range).
std::vector<DegenerationEvent> segment_events(const WalkSegment& seg, const std::vector<Subspace>& planes,
                                              std::size_t index = 0);

struct WalkViolation {
    std::string kind;  // non-affine, identically-degenerate, simultaneous-degeneration, not-free,
                       // junction-mismatch, endpoint-mismatch, event-log-mismatch, empty-range
    std::size_t segment = 0;
    std::optional<Rat> time;
    std::string detail;
};

struct WalkCertificate {
    bool valid = true;
    std::vector<DegenerationEvent> events;
    std::vector<WalkViolation> violations;
};

WalkCertificate verify_walk(const Polytope& p, const WalkPlan& plan);

struct Chains {
    IdList visible;    // edge ids of F on the shadow boundary just before the event
    IdList invisible;  // the other chain between the fixed points
};

struct ElementaryTransformation {
    int face = -1;
    std::optional<int> partner;
    std::vector<Vec> orthogonal;  // (u_1, ..., u_{d-2}) with u_1 in Span[F]
    Vec direction;                // v spanning (W-perp + Span[F])-perp
    Rat epsilon;
    WalkSegment before;           // t in [-eps, 0]
    WalkSegment after;            // t in [0, eps]
    int sign_before = 0;          // sign of <pi_{W_t}(u_1), w_2> at -eps/2
    int sign_after = 0;           // same at +eps/2
    std::pair<int, int> fixed_points{-1, -1};
    std::optional<std::pair<int, int>> partner_fixed_points;
    Chains chains;
    std::optional<Chains> partner_chains;
    IdList visible_after;         // F's edges on the boundary at +eps/2
    std::optional<IdList> partner_visible_after;
    std::size_t k_before = 0;     // shadow size at -eps/2
    std::size_t k_after = 0;      // shadow size at +eps/2

    bool swapped() const;
    bool balanced() const;
};

// `orthogonal` spans W-perp of a plane where only F's class degenerates and
// F (and the partner) lie on the shadow boundary. `direction`, if given, must
// span the same line as the canonical v; its sign picks the sense of travel.
ElementaryTransformation elementary_transformation(const Polytope& p, int face, std::optional<int> partner,
                                                   const Subspace& orthogonal,
                                                   const std::optional<Vec>& direction = std::nullopt);

struct ChainSplit {
    ElementaryTransformation first;   // at lambda - eps
    ElementaryTransformation second;  // at lambda + eps
    Rat lambda;
    Rat epsilon;
    IdList difference;                // symmetric difference of the visible chains of F
};

ChainSplit chain_split_transformations(const Polytope& p, int face, std::optional<int> partner,
                                       const Subspace& orthogonal, int edge);

} // namespace shadowlab
