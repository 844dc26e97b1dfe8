#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/cyl_core.hpp"
#include "atomlab/error.hpp"
#include "atomlab/hirsch.hpp"
#include "atomlab/json_io.hpp"

#include "game_family.hpp"

#include <cstdio>
#include <fstream>

using namespace atomlab;

namespace
{
    auto same_ra(const RaAtomStructure & a, const RaAtomStructure & b) -> bool
    {
        return a.names() == b.names() && a.identities() == b.identities() && a.converse_map() == b.converse_map() &&
               a.triples() == b.triples();
    }

    auto same_ca(const CaAtomStructure & a, const CaAtomStructure & b) -> bool
    {
        const auto & x = a.data();
        const auto & y = b.data();
        return x.n == y.n && x.names == y.names && x.cls == y.cls && x.diag == y.diag &&
               x.transposition == y.transposition && x.replacement == y.replacement;
    }
}

TEST_CASE("RA documents round-trip")
{
    LinearOrderSpec g{OrderKind::reversed_naturals, 2}, r{OrderKind::naturals, 2};
    auto plain = RaAtomStructure::from_triples({"1'", "a"}, {0}, {0, 1}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    auto base = f_family_base(4);
    for (const auto & s : {monk_ra(cycle_graph(5), 3), rainbow_ra(g, r, 2), plain, base,
                           blur_structure(f_family_spec(2, 1, 4, 3), base)}) {
        auto j = ra_to_json(s);
        CHECK(document_type(j) == "ra-atom-structure");
        CHECK(j.at("atoms") == s.names());
        CHECK(same_ra(ra_from_json(j), s));
        CHECK(ra_to_json(ra_from_json(j)) == j);
    }
    CHECK(ra_to_json(plain).at("consistent").is_array());
    CHECK(ra_to_json(monk_ra(complete_graph(2), 3)).at("consistent").at("rule") == "monk");
}

TEST_CASE("blur over a rule-less base keeps its triples")
{
    auto base = RaAtomStructure::from_triples(f_family_base(3).names(), {0}, {0, 1, 2, 3}, f_family_base(3).triples());
    auto s = blur_structure(f_family_spec(2, 1, 3, 3), base);
    auto j = ra_to_json(s);
    CHECK(j.at("consistent").is_array());
    CHECK(same_ra(ra_from_json(j), s));
}

TEST_CASE("bad RA documents")
{
    auto j = ra_to_json(monk_ra(complete_graph(2), 3));
    auto wrong_type = j;
    wrong_type["type"] = "ca-atom-structure";
    CHECK_THROWS_AS(ra_from_json(wrong_type), StructuralError);
    auto lying = j;
    lying["atoms"][1] = "zz";
    CHECK_THROWS_AS(ra_from_json(lying), StructuralError);
    auto missing = j;
    missing.erase("converse");
    CHECK_THROWS_AS(ra_from_json(missing), StructuralError);
    auto bad_triple = ra_to_json(RaAtomStructure::from_triples({"1'"}, {0}, {0}, {{0, 0, 0}}));
    bad_triple["consistent"] = {{0, 0, 9}};
    CHECK_THROWS_AS(ra_from_json(bad_triple), StructuralError);
    CHECK(document_type(nlohmann::json::array()).empty());
}

TEST_CASE("CA documents round-trip")
{
    auto two = RaAtomStructure::from_triples({"1'", "a"}, {0}, {0, 1}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}});
    for (const auto & f : {family::set_frame(2), family::seeded_member(4).frame, hirsch_algebra({3, 3, 1}).structure(),
                           rainbow_ca_atoms(rainbow_palette(3, 2, 2)).structure,
                           matrix_structure(two, basic_matrices(two, 3))}) {
        auto j = ca_to_json(f);
        CHECK(document_type(j) == "ca-atom-structure");
        CHECK(same_ca(ca_from_json(j), f));
        CHECK(ca_to_json(ca_from_json(j)) == j);
    }
    auto j = ca_to_json(family::set_frame(2));
    j["diagonals"][0][1].push_back(99);
    CHECK_THROWS_AS(ca_from_json(j), StructuralError);
    j = ca_to_json(family::set_frame(2));
    j["diagonals"].erase(2);
    CHECK_THROWS_AS(ca_from_json(j), StructuralError);
}

TEST_CASE("files")
{
    const std::string path = "atomlab_json_io_test.json";
    auto j = ra_to_json(monk_ra(complete_graph(3), 3));
    write_json_file(path, j);
    CHECK(read_json_file(path) == j);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text == j.dump(2) + "\n");
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_json_file("no/such/file.json"), StructuralError);
    {
        std::ofstream bad(path);
        bad << "{ not json";
    }
    CHECK_THROWS_AS(read_json_file(path), StructuralError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_json_file("no/such/dir/out.json", j), UsageError);
}
