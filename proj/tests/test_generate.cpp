#include "doctest.h"

#include "squarepeg/generate.hpp"

using namespace squarepeg;

TEST_CASE("generator: deterministic per seed")
{
    const Polygon a = gen_random_polygon(5, 42, GenMethod::Angular);
    const Polygon b = gen_random_polygon(5, 42, GenMethod::Angular);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(a.vertex(i) == b.vertex(i));
    CHECK(gen_random_polygon(5, 43, GenMethod::Angular).vertex(0) != a.vertex(0));
}

TEST_CASE("generator: angular output is simple and star-shaped")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Polygon p = gen_random_polygon(3 + seed % 14, seed, GenMethod::Angular);
        CHECK(is_simple(p).simple);
        for (const Point& v : p.vertices()) {
            CHECK(v.norm() >= 0.3 - 1e-12);
            CHECK(v.norm() <= 1 + 1e-12);
        }
    }
}

TEST_CASE("generator: uncross")
{
    const Polygon p = gen_random_polygon(8, 7, GenMethod::Uncross);
    CHECK(p.size() == 8);
    CHECK(is_simple(p).simple);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Polygon q = gen_random_polygon(5 + seed % 8, seed, GenMethod::Uncross);
        CHECK(is_simple(q).simple);
        for (const Point& v : q.vertices())
            CHECK((v.array() >= 0).all());
    }
}

TEST_CASE("generator: method names and preconditions")
{
    CHECK(parse_gen_method("angular") == GenMethod::Angular);
    CHECK(parse_gen_method("uncross") == GenMethod::Uncross);
    CHECK_THROWS_AS(parse_gen_method("spiral"), Error);
    CHECK_THROWS_AS(gen_random_polygon(2, 1, GenMethod::Angular), Error);
}
