#pragma once

// Inscribed squares followed along a piecewise linear deformation {X_t}.
//
// Squares are re-enumerated at each sample and continued by edge-quadruple
// identity: a nonsingular quadruple carries at most one square, so a track
// is "the square of quadruple Q". A track ends when one of its vertices runs
// into a polygon vertex; the event is then classified by swapping the edge
// carrying that vertex for the other edge at the polygon vertex.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "squarepeg/enumerator.hpp"
#include "squarepeg/geom.hpp"

namespace squarepeg {

struct Keyframe {
    double time = 0;
    Polygon polygon;
};

class DeformationScenario {
public:
    /// Times strictly increasing in [0, 1], equal vertex counts, simple keyframes.
    explicit DeformationScenario(std::vector<Keyframe> keyframes);

    const std::vector<Keyframe>& keyframes() const noexcept { return keyframes_; }
    double start() const { return keyframes_.front().time; }
    double end() const { return keyframes_.back().time; }
    std::size_t size() const { return keyframes_.front().polygon.size(); }

    /// Per-vertex linear interpolation; clamps t to [start, end].
    Polygon at(double t) const;
    /// Largest vertex speed over all linear pieces.
    double max_vertex_speed() const;
    /// The scenario run backwards: keyframe times t -> 1 - t.
    DeformationScenario reversed() const;

private:
    std::vector<Keyframe> keyframes_;
};

enum class Termination { ScenarioEnd, VertexEvent, MatchingLost };
enum class EventKind { AnnihilationPair, CreationPair, PassThrough };

std::string to_string(Termination t);
std::string to_string(EventKind k);

struct SquareTrack {
    EdgeQuad quad{};  // canonical
    double birth = 0, death = 0;
    std::vector<std::pair<double, InscribedSquare>> samples;
    Termination termination = Termination::ScenarioEnd;
};

struct Event {
    double time = 0;
    EventKind kind = EventKind::PassThrough;
    std::size_t polygon_vertex = 0;  // x_j
    std::size_t square_vertex = 0;   // i, in the canonical labeling of the track's quadruple
    int delta_count = 0;
    /// The two quadruples involved: the terminating track and its replacement family.
    EdgeQuad quad{}, partner{};
};

struct NonGenericInstant {
    double time = 0;
    std::string reason;
};

struct SweepResult {
    std::vector<SquareTrack> tracks;
    std::vector<Event> events;
    std::vector<std::pair<double, std::size_t>> parity_timeline;  // (time, count)
    std::vector<NonGenericInstant> nongeneric;
};

SweepResult sweep(const DeformationScenario& sc, double step);

/// Kind of the event at `time` where a square's vertex i meets polygon vertex x_j.
/// Throws PreconditionFailed when no square terminates there.
EventKind classify_event(const DeformationScenario& sc, double time, std::size_t polygon_vertex,
                         std::size_t square_vertex);

/// The bundled staged deformation of a convex pentagon onto a thin polygon
/// with a single inscribed square.
DeformationScenario bundled_shrink_scenario();

/// Only the bundled pentagon is supported; anything else is Unsupported.
DeformationScenario shrink_scenario(const Polygon& poly);

}  // namespace squarepeg
