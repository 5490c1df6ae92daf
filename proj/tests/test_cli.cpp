#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "squarepeg/cli.hpp"
#include "squarepeg/io.hpp"

using namespace squarepeg;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "squares");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(SQUAREPEG_DATA_DIR) + "/fixtures/" + name + ".json"; }
std::string scenario(const std::string& name) { return std::string(SQUAREPEG_DATA_DIR) + "/scenarios/" + name + ".json"; }

// Same keys in the same order, same array lengths, numbers within 1e-9.
void same_shape(const json& got, const json& want, const std::string& where)
{
    INFO(where);
    REQUIRE(got.type() == want.type());
    if (got.is_object()) {
        REQUIRE(got.size() == want.size());
        auto g = got.begin();
        for (auto w = want.begin(); w != want.end(); ++w, ++g) {
            REQUIRE(g.key() == w.key());
            same_shape(*g, *w, where + "." + w.key());
        }
    } else if (got.is_array()) {
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k)
            same_shape(got[k], want[k], where + "[" + std::to_string(k) + "]");
    } else if (got.is_number_float()) {
        const double a = got.get<double>(), b = want.get<double>();
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
    } else {
        CHECK(got == want);
    }
}

void golden(const std::vector<std::string>& args, const std::string& name, int code = 0)
{
    const Run r = run(args);
    CHECK(r.code == code);
    const json want = json::parse(read_file(std::string(SQUAREPEG_TEST_DIR) + "/golden/" + name + ".json"));
    same_shape(json::parse(r.out), want, name);
}

}  // namespace

TEST_CASE("cli: golden json documents")
{
    golden({"find", fixture("pentagon"), "--json"}, "find_pentagon");
    golden({"find", fixture("righttri"), "--force", "--json"}, "find_righttri_force");
    golden({"find", fixture("righttri"), "--json"}, "find_righttri", 2);
    golden({"parity", fixture("heptagon"), "--json"}, "parity_heptagon");
    golden({"trace", fixture("pentagon"), "--json"}, "trace_pentagon");
    golden({"deform", scenario("annihilation"), "--json"}, "deform_annihilation");
    golden({"oracle", fixture("righttri"), "--json"}, "oracle_righttri");
    golden({"check", fixture("sharp6"), "--json"}, "check_sharp6");
}

TEST_CASE("cli: right triangle")
{
    const Run strict = run({"find", fixture("righttri")});
    CHECK(strict.code == 2);
    CHECK(strict.err.find("orthogonal-edge-pair") != std::string::npos);
    const Run forced = run({"find", fixture("righttri"), "--force", "--json"});
    CHECK(forced.code == 0);
    CHECK(json::parse(forced.out)["count"] == 2);
    CHECK(json::parse(run({"oracle", fixture("righttri"), "--json"}).out)["clusters"].size() == 2);
}

TEST_CASE("cli: pentagon and scenarios")
{
    const Run found = run({"find", fixture("pentagon"), "--json"});
    CHECK(found.code == 0);
    CHECK(json::parse(found.out)["odd"] == true);

    const json trace = json::parse(run({"trace", fixture("pentagon"), "--json"}).out);
    bool diagonal = false;
    for (const auto& c : trace["components"])
        diagonal |= c["winding"] == json::array({1, 1});
    CHECK(diagonal);

    const json deform = json::parse(run({"deform", scenario("const"), "--json"}).out);
    CHECK(deform["events"].empty());
    CHECK(deform["parity_constant"] == true);
}

TEST_CASE("cli: exit codes")
{
    CHECK(run({}).code == 1);
    CHECK(run({"find"}).code == 1);
    CHECK(run({"find", "/nonexistent/poly.json"}).code == 1);
    CHECK(run({"deform", scenario("const"), "--steps", "10"}).code == 1);
    CHECK(run({"parity", fixture("righttri")}).code == 2);
    CHECK(run({"parity", fixture("righttri"), "--force"}).out == "2 (even)\n");
    CHECK(run({"gen", "5", "--method", "spiral"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: gen and files")
{
    const Run a = run({"gen", "6", "--seed", "3", "--perturb", "1e-3"});
    const Run b = run({"gen", "6", "--seed", "3", "--perturb", "1e-3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const Polygon p = parse_polygon(a.out);
    CHECK(p.size() == 6);

    const std::string path = "cli_gen_test.json", svg = "cli_find_test.svg", log = "cli_events_test.jsonl";
    CHECK(run({"gen", "8", "--seed", "7", "--method", "uncross", "-o", path}).code == 0);
    CHECK(load_polygon(path).size() == 8);
    CHECK(run({"find", fixture("pentagon"), "--svg", svg}).code == 0);
    CHECK(read_file(svg).find("<svg") != std::string::npos);
    CHECK(run({"deform", scenario("annihilation"), "--log", log}).code == 0);
    const std::string lines = read_file(log);
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 1);
    CHECK(json::parse(lines.substr(0, lines.find('\n')))["kind"] == "annihilation-pair");
    std::remove(path.c_str());
    std::remove(svg.c_str());
    std::remove(log.c_str());
}
