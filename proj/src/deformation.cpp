#include "squarepeg/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <optional>

namespace squarepeg {

namespace {

constexpr double kEventTimeTol = 1e-9;
constexpr double kMergeTimeTol = 1e-7;
constexpr double kRefineWidth = 1e-6;

struct QuadState {
    bool unique = false;
    Square square;
    std::array<double, 4> t{};  // edge parameters of the four vertices
    double margin = -std::numeric_limits<double>::infinity();  // signed distance inside the edges
};

QuadState solve_quad(const Polygon& poly, const EdgeQuad& q)
{
    QuadState st;
    const auto res = square_through_lines(poly.edge_line(q[0]), poly.edge_line(q[1]), poly.edge_line(q[2]),
                                          poly.edge_line(q[3]));
    if (!res.unique())
        return st;
    st.unique = true;
    st.square = res.square;
    st.margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
        const Point e = poly.edge_vector(q[k]);
        const double len = e.norm();
        st.t[k] = e.dot(res.square.vertex(k) - poly.vertex(q[k])) / (len * len);
        st.margin = std::min(st.margin, std::min(st.t[k], 1 - st.t[k]) * len);
    }
    return st;
}

EdgeQuad quad_of(const InscribedSquare& s) { return canonical_rotation(s.edges()); }

// Which vertex leaves its edge, and through which end.
struct Exit {
    std::size_t vertex = 0;  // square vertex index
    bool at_end = false;     // through the edge's end point (t = 1)
};

Exit exiting_vertex(const QuadState& outside, const QuadState& inside)
{
    Exit ex;
    if (outside.unique) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < 4; ++k) {
            const double m = std::min(outside.t[k], 1 - outside.t[k]);
            if (m < worst) {
                worst = m;
                ex = {k, outside.t[k] > 0.5};
            }
        }
        return ex;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 4; ++k) {
        const double m = std::min(inside.t[k], 1 - inside.t[k]);
        if (m < worst) {
            worst = m;
            ex = {k, inside.t[k] > 0.5};
        }
    }
    return ex;
}

struct Located {
    double time;
    Exit exit;
};

// Boundary time between `inside_t` (square inscribed) and `outside_t`.
std::optional<Located> locate(const DeformationScenario& sc, const EdgeQuad& q, double inside_t, double outside_t)
{
    QuadState in = solve_quad(sc.at(inside_t), q), out = solve_quad(sc.at(outside_t), q);
    if (out.unique && out.margin >= 0)
        return std::nullopt;
    while (std::abs(outside_t - inside_t) > kEventTimeTol) {
        const double mid = 0.5 * (inside_t + outside_t);
        const QuadState st = solve_quad(sc.at(mid), q);
        if (st.unique && st.margin >= 0) {
            inside_t = mid;
            in = st;
        } else {
            outside_t = mid;
            out = st;
        }
    }
    return Located{0.5 * (inside_t + outside_t), exiting_vertex(out, in)};
}

struct Classified {
    EventKind kind;
    std::size_t polygon_vertex;
    EdgeQuad partner;
};

// A square of quadruple q dies (dying = true) or is born at time s with
// vertex i leaving or entering its edge through `ex`.
Classified classify(const DeformationScenario& sc, double s, const EdgeQuad& q, const Exit& ex, bool dying,
                    double delta)
{
    const Polygon poly = sc.at(s);
    const std::size_t n = poly.size();
    const std::size_t e1 = q[ex.vertex];
    const std::size_t xj = ex.at_end ? (e1 + 1) % n : e1;
    const std::size_t e1p = ex.at_end ? (e1 + 1) % n : (e1 + n - 1) % n;
    EdgeQuad b = q;
    b[ex.vertex] = e1p;
    const double probe = dying ? s - delta : s + delta;
    const QuadState st = solve_quad(sc.at(probe), b);
    if (!st.unique)
        throw Error(ErrorKind::NonGeneric,
                    "replacement family is singular at t=" + std::to_string(probe) +
                        ": a continuum of squares on parallel edges");
    const double ti = st.t[ex.vertex];
    const bool interior = ti > 0 && ti < 1;
    Classified c;
    c.polygon_vertex = xj;
    c.partner = canonical_rotation(b);
    if (interior)
        c.kind = dying ? EventKind::AnnihilationPair : EventKind::CreationPair;
    else
        c.kind = EventKind::PassThrough;
    return c;
}

int delta_of(EventKind k)
{
    switch (k) {
    case EventKind::AnnihilationPair:
        return -2;
    case EventKind::CreationPair:
        return 2;
    case EventKind::PassThrough:
        return 0;
    }
    return 0;
}

std::pair<EdgeQuad, EdgeQuad> unordered(const EdgeQuad& a, const EdgeQuad& b)
{
    return a < b ? std::pair(a, b) : std::pair(b, a);
}

std::optional<InscribedSquare> square_at(const DeformationScenario& sc, double t, const EdgeQuad& q)
{
    const Polygon p = sc.at(t);
    return inscribed_for_quad(p, q, kEpsOn);
}

}  // namespace

DeformationScenario::DeformationScenario(std::vector<Keyframe> keyframes) : keyframes_(std::move(keyframes))
{
    if (keyframes_.size() < 2)
        throw Error(ErrorKind::InvalidInput, "scenario needs at least two keyframes");
    for (std::size_t k = 0; k < keyframes_.size(); ++k) {
        const auto& kf = keyframes_[k];
        if (!(kf.time >= 0 && kf.time <= 1))
            throw Error(ErrorKind::InvalidInput, "keyframe times must lie in [0, 1]");
        if (k > 0 && !(kf.time > keyframes_[k - 1].time))
            throw Error(ErrorKind::InvalidInput, "keyframe times must be strictly increasing");
        if (kf.polygon.size() != keyframes_.front().polygon.size())
            throw Error(ErrorKind::InvalidInput, "keyframes must have equal vertex counts");
        if (!is_simple(kf.polygon).simple)
            throw Error(ErrorKind::InvalidInput,
                        "ScenarioNonSimple: keyframe at t=" + std::to_string(kf.time) + " self-intersects");
    }
}

Polygon DeformationScenario::at(double t) const
{
    t = std::clamp(t, start(), end());
    auto hi = std::upper_bound(keyframes_.begin(), keyframes_.end(), t,
                               [](double x, const Keyframe& kf) { return x < kf.time; });
    if (hi == keyframes_.end())
        return keyframes_.back().polygon;
    const auto lo = hi - 1;
    const double a = (t - lo->time) / (hi->time - lo->time);
    std::vector<Point> v(size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = (1 - a) * lo->polygon.vertex(i) + a * hi->polygon.vertex(i);
    return Polygon(std::move(v));
}

double DeformationScenario::max_vertex_speed() const
{
    double v = 0;
    for (std::size_t k = 1; k < keyframes_.size(); ++k) {
        const double dt = keyframes_[k].time - keyframes_[k - 1].time;
        for (std::size_t i = 0; i < size(); ++i)
            v = std::max(v, (keyframes_[k].polygon.vertex(i) - keyframes_[k - 1].polygon.vertex(i)).norm() / dt);
    }
    return v;
}

DeformationScenario DeformationScenario::reversed() const
{
    std::vector<Keyframe> out;
    for (auto it = keyframes_.rbegin(); it != keyframes_.rend(); ++it)
        out.push_back({1 - it->time, it->polygon});
    return DeformationScenario(std::move(out));
}

std::string to_string(Termination t)
{
    switch (t) {
    case Termination::ScenarioEnd:
        return "scenario-end";
    case Termination::VertexEvent:
        return "vertex-event";
    case Termination::MatchingLost:
        return "matching-lost";
    }
    return "unknown";
}

std::string to_string(EventKind k)
{
    switch (k) {
    case EventKind::AnnihilationPair:
        return "annihilation-pair";
    case EventKind::CreationPair:
        return "creation-pair";
    case EventKind::PassThrough:
        return "pass-through";
    }
    return "unknown";
}

SweepResult sweep(const DeformationScenario& sc, double step)
{
    if (!(step > 0 && step <= 1e-2))
        throw Error(ErrorKind::PreconditionFailed, "sweep: step must be in (0, 1e-2]");
    for (const auto& kf : sc.keyframes()) {
        auto report = check_generic(kf.polygon);
        if (!report.generic())
            throw NonGenericInput("sweep: keyframe at t=" + std::to_string(kf.time) + " is not generic",
                                  std::move(report));
    }

    double D = 0;
    for (const auto& kf : sc.keyframes())
        D = std::max(D, kf.polygon.diameter());
    const double bound = 10 * step * sc.max_vertex_speed() + 1e-9 * D;
    const double delta = std::min(1e-6, step / 100);

    std::vector<double> times;
    const auto count = static_cast<std::size_t>(std::ceil((sc.end() - sc.start()) / step - 1e-9));
    for (std::size_t k = 0; k <= count; ++k)
        times.push_back(std::min(sc.end(), sc.start() + static_cast<double>(k) * step));

    SweepResult out;
    std::map<EdgeQuad, std::size_t> active;
    struct RawEvent {
        double time;
        Classified c;
        EdgeQuad quad;
        std::size_t square_vertex;
    };
    std::vector<RawEvent> raw;

    // Appends cur to the track, inserting refined samples wherever the jump
    // from the previous sample exceeds the continuity bound.
    auto extend = [&](SquareTrack& tr, double t1, const InscribedSquare& cur) {
        std::vector<std::pair<double, InscribedSquare>> stack{{t1, cur}};
        while (!stack.empty()) {
            const auto& [t0, prev] = tr.samples.back();
            const auto [tn, next] = stack.back();
            if (square_distance(prev.square, next.square) <= bound || tn - t0 < kEventTimeTol) {
                tr.samples.emplace_back(tn, next);
                stack.pop_back();
                continue;
            }
            const double mid = 0.5 * (t0 + tn);
            auto sq = square_at(sc, mid, tr.quad);
            if (!sq)
                return false;
            stack.emplace_back(mid, *sq);
        }
        return true;
    };

    // Terminations whose replacement family is singular; settled afterwards
    // by pairing the deaths and births that share the instant.
    struct Singular {
        double time;
        EdgeQuad quad;
        std::size_t square_vertex, polygon_vertex;
        bool dying;
    };
    std::vector<Singular> singular;
    auto record = [&](double time, const EdgeQuad& q, const Exit& ex, bool dying) {
        try {
            raw.push_back({time, classify(sc, time, q, ex, dying, delta), q, ex.vertex});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NonGeneric)
                throw;
            out.nongeneric.push_back({time, e.what()});
            const std::size_t n = sc.size(), e1 = q[ex.vertex];
            singular.push_back({time, q, ex.vertex, ex.at_end ? (e1 + 1) % n : e1, dying});
        }
    };

    // Every classified termination in (t0, t1] must find its partner among
    // the terminations of the same interval.
    auto consistent = [&](double t0, double t1, const std::map<EdgeQuad, InscribedSquare>& current) {
        std::set<EdgeQuad> died, born;
        std::vector<std::pair<bool, Classified>> found;
        for (const auto& [q, idx] : active)
            if (!current.count(q)) {
                died.insert(q);
                if (const auto loc = locate(sc, q, t0, t1))
                    try {
                        found.emplace_back(true, classify(sc, loc->time, q, loc->exit, true, delta));
                    } catch (const Error&) {
                    }
            }
        for (const auto& [q, s] : current)
            if (!active.count(q)) {
                born.insert(q);
                if (const auto loc = locate(sc, q, t1, t0))
                    try {
                        found.emplace_back(false, classify(sc, loc->time, q, loc->exit, false, delta));
                    } catch (const Error&) {
                    }
            }
        for (const auto& [dying, c] : found) {
            const bool same_side = c.kind != EventKind::PassThrough;
            const auto& pool = (dying == same_side) ? died : born;
            if (!pool.count(c.partner))
                return false;
        }
        return true;
    };

    double prev_t = times.front();
    for (std::size_t k = 0; k < times.size(); ++k) {
        double t = times[k];
        Polygon poly = sc.at(t);
        if (!is_simple(poly).simple)
            throw Error(ErrorKind::InvalidInput, "ScenarioNonSimple: polygon self-intersects at t=" + std::to_string(t));
        std::vector<InscribedSquare> squares;
        for (int attempt = 0;; ++attempt) {
            try {
                squares = enumerate_inscribed_squares(poly);
                break;
            } catch (const NonGenericInput& e) {
                if (out.nongeneric.empty() || out.nongeneric.back().time != t)
                    out.nongeneric.push_back({t, e.what()});
                if (attempt == 6)
                    throw;
                // Step past the instant, staying inside the sample interval.
                const double nudge = step * 1e-4 * static_cast<double>(1 << attempt);
                t = (k + 1 < times.size()) ? times[k] + nudge : times[k] - nudge;
                poly = sc.at(t);
            }
        }

        std::map<EdgeQuad, InscribedSquare> current;
        for (const auto& s : squares)
            current.emplace(quad_of(s), s);

        // A pair born and killed between two samples leaves partners that
        // never show up as tracks; sample the interval more densely.
        if (k > 0 && t - prev_t > kRefineWidth && !consistent(prev_t, t, current)) {
            times.insert(times.begin() + static_cast<std::ptrdiff_t>(k), 0.5 * (prev_t + times[k]));
            --k;
            continue;
        }

        if (k == 0) {
            for (const auto& [q, s] : current) {
                SquareTrack tr;
                tr.quad = q;
                tr.birth = t;
                tr.samples.emplace_back(t, s);
                active.emplace(q, out.tracks.size());
                out.tracks.push_back(std::move(tr));
            }
        } else {
            for (auto it = active.begin(); it != active.end();) {
                SquareTrack& tr = out.tracks[it->second];
                const auto found = current.find(it->first);
                if (found != current.end() && extend(tr, t, found->second)) {
                    ++it;
                    continue;
                }
                const auto loc = locate(sc, tr.quad, prev_t, t);
                if (found == current.end() && loc) {
                    record(loc->time, tr.quad, loc->exit, true);
                    tr.death = loc->time;
                    tr.termination = Termination::VertexEvent;
                } else {
                    tr.death = tr.samples.back().first;
                    tr.termination = Termination::MatchingLost;
                }
                it = active.erase(it);
            }
            for (const auto& [q, s] : current) {
                if (active.count(q))
                    continue;
                SquareTrack tr;
                tr.quad = q;
                if (const auto loc = locate(sc, q, t, prev_t)) {
                    record(loc->time, q, loc->exit, false);
                    tr.birth = loc->time;
                } else {
                    tr.birth = t;
                }
                tr.samples.emplace_back(t, s);
                active.emplace(q, out.tracks.size());
                out.tracks.push_back(std::move(tr));
            }
        }
        out.parity_timeline.emplace_back(t, squares.size());
        prev_t = t;
    }
    for (const auto& [q, idx] : active) {
        out.tracks[idx].death = prev_t;
        out.tracks[idx].termination = Termination::ScenarioEnd;
    }

    std::sort(singular.begin(), singular.end(), [](const Singular& a, const Singular& b) { return a.time < b.time; });
    for (std::size_t g = 0; g < singular.size();) {
        std::size_t h = g;
        std::vector<const Singular*> deaths, births;
        while (h < singular.size() && singular[h].time - singular[g].time <= kMergeTimeTol) {
            (singular[h].dying ? deaths : births).push_back(&singular[h]);
            ++h;
        }
        auto emit = [&](const Singular* a, const Singular* b, EventKind kind) {
            raw.push_back({a->time, {kind, a->polygon_vertex, b->quad}, a->quad, a->square_vertex});
        };
        while (!deaths.empty() && !births.empty()) {
            emit(deaths.back(), births.back(), EventKind::PassThrough);
            deaths.pop_back();
            births.pop_back();
        }
        for (auto* list : {&deaths, &births})
            for (std::size_t k = 0; k + 1 < list->size(); k += 2)
                emit((*list)[k], (*list)[k + 1], list == &deaths ? EventKind::AnnihilationPair : EventKind::CreationPair);
        g = h;
    }

    std::sort(raw.begin(), raw.end(), [](const RawEvent& a, const RawEvent& b) { return a.time < b.time; });
    for (const auto& r : raw) {
        const auto key = unordered(r.quad, r.c.partner);
        const bool merged = std::any_of(out.events.begin(), out.events.end(), [&](const Event& e) {
            return std::abs(e.time - r.time) <= kMergeTimeTol && e.polygon_vertex == r.c.polygon_vertex &&
                   unordered(e.quad, e.partner) == key;
        });
        if (merged)
            continue;
        Event e;
        e.time = r.time;
        e.kind = r.c.kind;
        e.polygon_vertex = r.c.polygon_vertex;
        e.square_vertex = r.square_vertex;
        e.delta_count = delta_of(r.c.kind);
        e.quad = r.quad;
        e.partner = r.c.partner;
        out.events.push_back(e);
    }
    return out;
}

EventKind classify_event(const DeformationScenario& sc, double time, std::size_t polygon_vertex,
                         std::size_t square_vertex)
{
    if (square_vertex > 3)
        throw Error(ErrorKind::InvalidInput, "classify_event: square vertex index must be 0..3");
    const double delta = 1e-6;
    const Polygon poly = sc.at(time);
    const std::size_t n = poly.size();
    const Point x = poly.vertex(polygon_vertex % n);
    const double radius = 1e-4 * poly.diameter();
    const double before = std::max(sc.start(), time - delta), after = std::min(sc.end(), time + delta);

    for (const bool dying : {true, false}) {
        const Polygon probe = sc.at(dying ? before : after);
        const Polygon other = sc.at(dying ? after : before);
        for (const auto& s : enumerate_inscribed_squares_unchecked(probe)) {
            const EdgeQuad q = quad_of(s);
            const EdgeQuad e = s.edges();
            // Canonical vertex j is the square's vertex j + shift.
            std::size_t shift = 0;
            while (shift < 3 && EdgeQuad{e[shift], e[(shift + 1) % 4], e[(shift + 2) % 4], e[(shift + 3) % 4]} != q)
                ++shift;
            const Point v = s.square.vertex(static_cast<int>((square_vertex + shift) % 4));
            if ((v - x).norm() > radius)
                continue;
            const QuadState st = solve_quad(other, q);
            if (st.unique && st.margin >= 0)
                continue;
            const std::size_t e1 = q[square_vertex];
            Exit ex{square_vertex, (e1 + 1) % n == polygon_vertex % n};
            if (!ex.at_end && e1 != polygon_vertex % n)
                continue;
            return classify(sc, time, q, ex, dying, delta).kind;
        }
    }
    throw Error(ErrorKind::PreconditionFailed, "classify_event: no square terminates at polygon vertex " +
                                                   std::to_string(polygon_vertex) + " at t=" + std::to_string(time));
}

DeformationScenario bundled_shrink_scenario()
{
    // Ear at x1 folds onto the diagonal x0 x2, then the ear at x3 onto x2 x4;
    // the last stage squeezes x1..x3 against x0 x4, leaving a thin Z.
    auto poly = [](std::initializer_list<Point> v) { return Polygon(std::vector<Point>(v)); };
    return DeformationScenario({
        {0.0, poly({{-1, 0.05}, {-0.35, 0.93}, {0.62, 0.78}, {1.02, -0.12}, {0.08, -0.97}})},
        {0.333333, poly({{-1, 0.05}, {-0.138892, 0.461514}, {0.62, 0.78}, {1.02, -0.12}, {0.08, -0.97}})},
        {0.666667, poly({{-1, 0.05}, {-0.138892, 0.461514}, {0.62, 0.78}, {0.425957, 0.063305}, {0.08, -0.97}})},
        {1.0, poly({{-1, 0.05}, {-0.51204, -0.192352}, {-0.395341, -0.295067}, {-0.263039, -0.42194}, {0.08, -0.97}})},
    });
}

DeformationScenario shrink_scenario(const Polygon& poly)
{
    const DeformationScenario sc = bundled_shrink_scenario();
    const Polygon& start = sc.keyframes().front().polygon;
    if (poly.size() != start.size())
        throw Error(ErrorKind::Unsupported, "shrink_scenario: only the bundled pentagon is supported");
    for (std::size_t i = 0; i < poly.size(); ++i)
        if ((poly.vertex(i) - start.vertex(i)).norm() > 1e-12 * start.diameter())
            throw Error(ErrorKind::Unsupported, "shrink_scenario: only the bundled pentagon is supported");
    return sc;
}

}  // namespace squarepeg
