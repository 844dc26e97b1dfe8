#include "atomlab/json_io.hpp"

#include "atomlab/constructions.hpp"
#include "atomlab/error.hpp"

#include <fstream>
#include <sstream>

namespace atomlab
{
    using nlohmann::json;

    auto ra_to_json(const RaAtomStructure & s) -> json
    {
        json j = {{"schema_version", 1},
                  {"type", "ra-atom-structure"},
                  {"atoms", s.names()},
                  {"identities", s.identities()},
                  {"converse", s.converse_map()}};
        // a blur over a base without a rule cannot be rebuilt from its rule
        const auto & doc = s.rule_doc();
        const bool rebuildable = !doc.is_null() && !(doc.at("rule") == "blur" && doc.at("params").at("base").is_null());
        if (rebuildable) {
            j["consistent"] = s.rule_doc();
        }
        else {
            json ts = json::array();
            for (const auto & t : s.triples())
                ts.push_back({t.a, t.b, t.c});
            j["consistent"] = std::move(ts);
        }
        return j;
    }

    auto ra_from_json(const json & j) -> RaAtomStructure
    {
        try {
            if (document_type(j) != "ra-atom-structure")
                throw StructuralError("not an ra-atom-structure document");
            auto names = j.at("atoms").get<std::vector<std::string>>();
            auto ids = j.at("identities").get<std::vector<AtomId>>();
            auto conv = j.at("converse").get<std::vector<AtomId>>();
            const auto & cons = j.at("consistent");
            if (cons.is_object()) {
                auto s = structure_from_rule(cons);
                if (s.names() != names || s.identities() != ids || s.converse_map() != conv)
                    throw StructuralError("rule does not rebuild the listed atoms");
                return s;
            }
            std::vector<Triple> ts;
            for (const auto & t : cons)
                ts.push_back({t.at(0).get<AtomId>(), t.at(1).get<AtomId>(), t.at(2).get<AtomId>()});
            return RaAtomStructure::from_triples(std::move(names), std::move(ids), std::move(conv), ts);
        }
        catch (const json::exception & e) {
            throw StructuralError(std::string("bad structure document: ") + e.what());
        }
    }

    auto ca_to_json(const CaAtomStructure & f) -> json
    {
        const auto & d = f.data();
        const int n = d.n;
        json diag = json::array();
        for (int i = 0; i < n; ++i) {
            json row = json::array();
            for (int j = 0; j < n; ++j)
                row.push_back(d.diag[i][j].to_vector());
            diag.push_back(std::move(row));
        }
        json j = {{"schema_version", 1},
                  {"type", "ca-atom-structure"},
                  {"n", n},
                  {"atoms", d.names},
                  {"classes", d.cls},
                  {"diagonals", std::move(diag)}};
        if (!d.transposition.empty())
            j["transpositions"] = d.transposition;
        if (!d.replacement.empty())
            j["replacements"] = d.replacement;
        if (!d.doc.is_null())
            j["rule"] = d.doc;
        return j;
    }

    auto ca_from_json(const json & j) -> CaAtomStructure
    {
        try {
            if (document_type(j) != "ca-atom-structure")
                throw StructuralError("not a ca-atom-structure document");
            CaAtomStructure::Data d;
            d.n = j.at("n").get<int>();
            d.names = j.at("atoms").get<std::vector<std::string>>();
            d.cls = j.at("classes").get<std::vector<std::vector<int>>>();
            const std::size_t k = d.names.size();
            const auto & dg = j.at("diagonals");
            if (d.n < 1 || dg.size() != static_cast<std::size_t>(d.n))
                throw StructuralError("need an n by n diagonal table");
            d.diag.assign(d.n, std::vector<AtomSet>(d.n, AtomSet(k)));
            for (int i = 0; i < d.n; ++i) {
                if (dg.at(i).size() != static_cast<std::size_t>(d.n))
                    throw StructuralError("need an n by n diagonal table");
                for (int jj = 0; jj < d.n; ++jj)
                    for (const auto & a : dg.at(i).at(jj)) {
                        auto id = a.get<AtomId>();
                        if (id < 0 || static_cast<std::size_t>(id) >= k)
                            throw StructuralError("diagonal atom out of range");
                        d.diag[i][jj].insert(id);
                    }
            }
            if (j.contains("transpositions"))
                d.transposition = j.at("transpositions").get<std::vector<std::vector<std::vector<AtomId>>>>();
            if (j.contains("replacements"))
                d.replacement = j.at("replacements").get<std::vector<std::vector<std::vector<AtomId>>>>();
            if (j.contains("rule"))
                d.doc = j.at("rule");
            return CaAtomStructure::from_data(std::move(d));
        }
        catch (const json::exception & e) {
            throw StructuralError(std::string("bad structure document: ") + e.what());
        }
    }

    auto document_type(const json & j) -> std::string
    {
        if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
            return {};
        return j.at("type").get<std::string>();
    }

    auto read_json_file(const std::string & path) -> json
    {
        std::ifstream in(path);
        if (!in)
            throw StructuralError("cannot read " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            return json::parse(ss.str());
        }
        catch (const json::exception & e) {
            throw StructuralError(path + ": " + e.what());
        }
    }

    void write_json_file(const std::string & path, const json & j)
    {
        std::ofstream out(path);
        if (!out)
            throw UsageError("cannot write " + path);
        out << j.dump(2) << '\n';
    }
}
