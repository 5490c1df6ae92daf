#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "squarepeg/errors.hpp"
#include "squarepeg/geom.hpp"
#include "squarepeg/line_square.hpp"

namespace squarepeg {

/// Relative distance (times diameter) at which a square vertex is considered
/// to sit on a polygon vertex.
inline constexpr double kEpsVertex = 1e-7;
/// Relative distance (times diameter) under which two squares are the same.
inline constexpr double kEpsSameSquare = 1e-7;

struct Attachment {
    std::size_t edge = 0;
    double t = 0;  // parameter along the edge, in [0, 1] up to tolerance
};

using EdgeQuad = std::array<std::size_t, 4>;

struct InscribedSquare {
    Square square;
    std::array<Attachment, 4> attachments;  // in the square's clockwise vertex order
    bool touches_vertex = false;
    bool repeated_edge = false;

    EdgeQuad edges() const
    {
        return {attachments[0].edge, attachments[1].edge, attachments[2].edge, attachments[3].edge};
    }
};

enum class ViolationKind { OrthogonalEdgePair, SingularQuadruple, SquareVertexAtPolygonVertex, NonObtuseAngle };

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> indices;  // edges, quadruple, or vertex indices depending on kind
    std::string witness;
};

struct GenericityReport {
    std::vector<Violation> violations;

    /// No violations other than the informational non-obtuse ones.
    bool generic() const;
    /// All interior angles strictly inside (pi/2, 3pi/2).
    bool obtuse() const;
    std::size_t count(ViolationKind kind) const;
};

class NonGenericInput : public Error {
public:
    NonGenericInput(const std::string& what, GenericityReport report)
        : Error(ErrorKind::NonGeneric, what), report_(std::move(report))
    {
    }
    const GenericityReport& report() const noexcept { return report_; }

private:
    GenericityReport report_;
};

/// Smallest cyclic rotation of q.
EdgeQuad canonical_rotation(const EdgeQuad& q);
bool is_cyclic_canonical(const EdgeQuad& q);

/// Max vertex distance between two squares, minimized over cyclic relabelings.
double square_distance(const Square& a, const Square& b);

/// The inscribed square (if any) for one edge quadruple: solves the
/// supporting-line system and keeps a Unique solution whose vertices lie on
/// the closed edges within tol * diameter.
std::optional<InscribedSquare> inscribed_for_quad(const Polygon& poly, const EdgeQuad& quad, double tol);

/// Every accepted per-quadruple solution before deduplication. With
/// canonical_only = false all n^4 ordered quadruples are visited.
std::vector<InscribedSquare> inscribed_candidates(const Polygon& poly, double tol, bool canonical_only = true);

std::vector<InscribedSquare> enumerate_inscribed_squares(const Polygon& poly, double tol = kEpsOn);

/// Same as enumerate_inscribed_squares but never throws on singular
/// quadruples; those are skipped.
std::vector<InscribedSquare> enumerate_inscribed_squares_unchecked(const Polygon& poly, double tol = kEpsOn);

/// Collapses candidates describing the same geometric square and sorts the
/// result by center, then w.
std::vector<InscribedSquare> deduplicate(std::vector<InscribedSquare> candidates, double diameter);

struct ParityResult {
    std::size_t count = 0;
    bool odd = false;
};

ParityResult parity(const Polygon& poly);

GenericityReport check_generic(const Polygon& poly);

/// Jitters every vertex inside a disk of radius eps * diameter until the
/// result is simple and generic. eps == 0 returns the input unchanged.
Polygon perturb(const Polygon& poly, double eps, std::uint64_t seed);

}  // namespace squarepeg
