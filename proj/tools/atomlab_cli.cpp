// atomlab: build, check and play on finite atom structures. Every command prints one JSON
// document on stdout; diagnostics go to stderr as JSON lines.
#include "atomlab/constructions.hpp"
#include "atomlab/cyl_core.hpp"
#include "atomlab/error.hpp"
#include "atomlab/exec.hpp"
#include "atomlab/games.hpp"
#include "atomlab/graphs.hpp"
#include "atomlab/hirsch.hpp"
#include "atomlab/json_io.hpp"
#include "atomlab/repsearch.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace atomlab;
using nlohmann::json;

namespace
{
    enum Exit
    {
        ok = 0,
        check_failed = 1,
        usage = 2,
        malformed = 3,
        budget = 4,
        internal = 5
    };

    void diag(const std::string & level, const std::string & code, const std::string & msg)
    {
        std::cerr << json{{"level", level}, {"code", code}, {"message", msg}}.dump() << '\n';
    }

    void emit(const json & j) { std::cout << j.dump(2) << '\n'; }

    struct Budgets
    {
        std::size_t atoms = 4'000'000;
        std::size_t states = 4'000'000;
        int nodes = 16;
        std::size_t rep_nodes = 20'000'000;
        std::size_t matrices = 4'000'000;
    };

    // ATOMLAB_BUDGET picks the defaults: small, default or large.
    auto budget_profile() -> Budgets
    {
        Budgets b;
        const char * env = std::getenv("ATOMLAB_BUDGET");
        std::string p = env ? env : "default";
        if (p == "small") {
            b.atoms = 200'000;
            b.states = 200'000;
            b.nodes = 8;
            b.rep_nodes = 1'000'000;
            b.matrices = 200'000;
        }
        else if (p == "large") {
            b.atoms = 40'000'000;
            b.states = 40'000'000;
            b.nodes = 32;
            b.rep_nodes = 400'000'000;
            b.matrices = 40'000'000;
        }
        else if (p != "default") {
            throw UsageError("ATOMLAB_BUDGET must be small, default or large");
        }
        return b;
    }

    auto split_ints(const std::string & s, char sep) -> std::vector<int>
    {
        std::vector<int> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, sep)) {
            if (tok.empty())
                continue;
            try {
                std::size_t used = 0;
                out.push_back(std::stoi(tok, &used));
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            }
            catch (const std::exception &) {
                throw UsageError("not an integer: '" + tok + "'");
            }
        }
        return out;
    }

    // k3, c5, p4, cliques:3,3, band:m,N, random:m,p,seed, or a graph document file
    auto parse_graph(const std::string & spec) -> SimpleGraph
    {
        auto colon = spec.find(':');
        std::string kind = spec.substr(0, colon);
        std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
        auto num = [&](std::size_t from) {
            auto v = split_ints(spec.substr(from), ',');
            if (v.size() != 1 || v[0] < 1)
                throw UsageError("bad graph size in '" + spec + "'");
            return v[0];
        };
        if (colon == std::string::npos && spec.size() > 1 && (spec[0] == 'k' || spec[0] == 'c' || spec[0] == 'p') &&
            std::isdigit(static_cast<unsigned char>(spec[1]))) {
            int k = num(1);
            if (spec[0] == 'k')
                return complete_graph(k);
            if (spec[0] == 'c') {
                if (k < 3)
                    throw UsageError("a cycle needs at least 3 vertices");
                return cycle_graph(k);
            }
            return path_graph(k);
        }
        if (kind == "cliques")
            return disjoint_cliques(split_ints(args, ','));
        if (kind == "band") {
            auto v = split_ints(args, ',');
            if (v.size() != 2)
                throw UsageError("band:m,N");
            return band_graph(v[0], v[1]);
        }
        if (kind == "random") {
            std::stringstream ss(args);
            std::string m, p, seed;
            if (!std::getline(ss, m, ',') || !std::getline(ss, p, ',') || !std::getline(ss, seed, ','))
                throw UsageError("random:m,p,seed needs an explicit seed");
            try {
                return seeded_random_graph(std::stoi(m), std::stod(p), std::stoull(seed));
            }
            catch (const std::logic_error &) {
                throw UsageError("bad random graph parameters '" + args + "'");
            }
        }
        auto doc = read_json_file(spec);
        if (document_type(doc) != "graph")
            throw StructuralError(spec + " is not a graph document");
        SimpleGraph g(doc.at("vertices").get<int>());
        for (const auto & e : doc.at("edges"))
            g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
        return g;
    }

    auto graph_json(const SimpleGraph & g) -> json
    {
        json es = json::array();
        for (auto [u, v] : g.edges())
            es.push_back({u, v});
        return {{"schema_version", 1}, {"type", "graph"}, {"vertices", g.vertices()}, {"edges", es}};
    }

    auto violation_json(const std::vector<Violation> & vs, const RaAtomStructure * s) -> json
    {
        json out = json::array();
        for (const auto & v : vs) {
            json w = json::array();
            for (AtomId a : v.witness)
                w.push_back(s ? json(s->name(a)) : json(a));
            out.push_back({{"law", v.law}, {"witness", w}});
        }
        return out;
    }

    auto ra_report(const RaAtomStructure & s, Exec exec) -> json
    {
        ValidateOptions o;
        o.exec = exec;
        auto r = validate_atom_structure(s, o);
        json j = {{"ok", r.ok()},
                  {"violations", violation_json(r.violations, &s)},
                  {"associativity_checked", r.associativity_checked}};
        if (r.associativity_checked) {
            j["associative"] = r.associative();
            j["associativity_failures"] = violation_json(r.associativity_failures, &s);
        }
        return j;
    }

    auto ca_report(const CaAtomStructure & f, Signature sig) -> json
    {
        auto r = ca_axiom_check(f, sig);
        auto list = [&](const std::vector<CaViolation> & vs) {
            json out = json::array();
            for (const auto & v : vs) {
                json names = json::array();
                for (AtomId a : v.atoms)
                    names.push_back(f.name(a));
                out.push_back({{"law", v.law}, {"dims", v.dims}, {"atoms", names}});
            }
            return out;
        };
        return {{"ok", r.ok()},
                {"signature", signature_name(sig)},
                {"violations", list(r.violations)},
                {"commutative", r.commutative()},
                {"commutativity_failures", list(r.commutativity_failures)}};
    }

    struct Loaded
    {
        bool is_ra = false;
        RaAtomStructure ra;
        CaAtomStructure ca;
    };

    auto load_structure(const std::string & path) -> Loaded
    {
        auto doc = read_json_file(path);
        auto type = document_type(doc);
        Loaded l;
        if (type == "ra-atom-structure") {
            l.is_ra = true;
            l.ra = ra_from_json(doc);
        }
        else if (type == "ca-atom-structure") {
            l.ca = ca_from_json(doc);
        }
        else {
            throw StructuralError(path + " is not a structure document");
        }
        return l;
    }

    // Games act on CA frames; an RA is played through its 3-dimensional basic matrices.
    auto frame_of(const Loaded & l, const Budgets & b, Exec exec) -> CaAtomStructure
    {
        if (!l.is_ra)
            return l.ca;
        return matrix_structure(l.ra, basic_matrices(l.ra, 3, b.matrices, exec));
    }

    auto matrices_json(const RaAtomStructure & s, const std::vector<BasicMatrix> & mats, int n) -> json
    {
        json ms = json::array();
        for (const auto & M : mats)
            ms.push_back(M.m);
        return {{"schema_version", 1}, {"type", "basic-matrices"}, {"n", n}, {"atoms", s.size()},
                {"count", mats.size()}, {"matrices", ms}};
    }

    void write_or_inline(json & report, const std::string & key, const std::string & out, const json & doc)
    {
        if (out.empty()) {
            report[key] = doc;
        }
        else {
            write_json_file(out, doc);
            report[key + "_file"] = out;
        }
    }
}

auto main(int argc, char ** argv) -> int
{
    CLI::App app{"atomlab: finite atom structures, games and representations"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "OpenMP threads (results do not depend on it)")->check(CLI::PositiveNumber);

    Budgets b;
    try {
        b = budget_profile();
    }
    catch (const UsageError & e) {
        diag("error", "usage", e.what());
        return usage;
    }

    // build
    auto * build = app.add_subcommand("build", "Build a construction and write its structure document");
    std::string name, out, graph = "k3", blurs, family, ra_file, palette_kind = "rainbow";
    int colours = 3, greens = 2, reds = 2, copies = 1, size = 3, t = 3, hm = 3, hn = 3, hr = 0, dim = 3, tints = 2;
    std::string greens_kind = "reversed-naturals", reds_kind = "naturals";
    std::size_t atom_budget = b.atoms;
    build->add_option("name", name, "monk, rainbow, blur, hirsch, matrices, rainbow-ca")->required();
    build->add_option("-o,--output", out, "structure document path");
    build->add_option("--graph", graph, "k<n>, c<n>, p<n>, cliques:a,b,..., band:m,N, random:m,p,seed or a file");
    build->add_option("--colours", colours);
    build->add_option("--greens", greens);
    build->add_option("--reds", reds);
    build->add_option("--copies", copies);
    build->add_option("--greens-kind", greens_kind);
    build->add_option("--reds-kind", reds_kind);
    build->add_option("--size", size, "|I| for blur");
    build->add_option("--blurs", blurs, "blur sets, e.g. \"1,2;2,3\"");
    build->add_option("--family", family, "F(l,mu) as l,mu");
    build->add_option("--t", t, "copies materialised (blur)");
    build->add_option("--m", hm);
    build->add_option("--n", hn);
    build->add_option("--r", hr);
    build->add_option("--ra", ra_file, "relation algebra document (matrices)");
    build->add_option("--dim", dim, "dimension (matrices, rainbow-ca)");
    build->add_option("--tints", tints);
    build->add_option("--palette", palette_kind, "rainbow or one-white (rainbow-ca)");
    build->add_option("--atoms", atom_budget, "largest structure to enumerate");

    // validate
    auto * validate = app.add_subcommand("validate", "Check the atom-structure laws");
    std::string in, signature = "PEA";
    validate->add_option("structure", in)->required();
    validate->add_option("--signature", signature, "Sc, CA, PA or PEA (CA structures)");

    // matrices
    auto * matrices = app.add_subcommand("matrices", "List the basic matrices of a relation algebra");
    int mn = 3;
    matrices->add_option("structure", in)->required();
    matrices->add_option("--n", mn);
    matrices->add_option("-o,--output", out);

    // basis-check
    auto * basis = app.add_subcommand("basis-check", "Check the cylindric basis property of the basic matrices");
    long long drop = -1;
    bool need_transp = false;
    basis->add_option("structure", in)->required();
    basis->add_option("--n", mn);
    basis->add_option("--delete", drop, "drop this matrix index first");
    basis->add_flag("--transpositions", need_transp, "also require closure under transpositions");

    // solve
    auto * solve = app.add_subcommand("solve", "Solve the atomic game G or F(m) exhaustively");
    std::string game = "G";
    int rounds = 3, pebbles = 0, nodes = b.nodes;
    std::size_t states = b.states;
    solve->add_option("structure", in, "structure document (not used by --game cone)");
    solve->add_option("--game", game, "G, F or cone");
    solve->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
    solve->add_option("--pebbles", pebbles);
    solve->add_option("--nodes", nodes);
    solve->add_option("--states", states);
    solve->add_option("--tints", tints, "cone game palette");
    solve->add_option("--reds", reds, "cone game palette");
    solve->add_option("-o,--output", out, "certificate path");

    // hypersolve
    auto * hyper = app.add_subcommand("hypersolve", "Solve the hypernetwork game H exhaustively");
    int lambda = 0, max_hyper = 0, hnodes = 8;
    bool no_transform = false, no_amalgam = false;
    hyper->add_option("structure", in)->required();
    hyper->add_option("--rounds", rounds)->check(CLI::PositiveNumber);
    hyper->add_option("--lambda", lambda);
    hyper->add_option("--max-hyperedge", max_hyper);
    hyper->add_option("--nodes", hnodes);
    hyper->add_option("--states", states);
    hyper->add_flag("--no-transformations", no_transform);
    hyper->add_flag("--no-amalgamations", no_amalgam);
    hyper->add_option("-o,--output", out);

    // rep
    auto * rep = app.add_subcommand("rep", "Search for a square representation");
    int max_base = 8;
    std::size_t rep_nodes = b.rep_nodes;
    rep->add_option("structure", in)->required();
    rep->add_option("--max-base", max_base)->check(CLI::Range(1, 16));
    rep->add_option("--budget", rep_nodes, "search nodes per base size");
    rep->add_option("-o,--output", out, "representation path");

    // verify / replay
    auto * verify = app.add_subcommand("verify", "Re-check a representation or certificate");
    std::string doc_file;
    verify->add_option("structure", in)->required();
    verify->add_option("document", doc_file)->required();
    auto * replay = app.add_subcommand("replay", "Replay a game certificate with the independent checker");
    replay->add_option("structure", in)->required();
    replay->add_option("certificate", doc_file)->required();

    // graph
    auto * gcmd = app.add_subcommand("graph", "Generate a graph and report chromatic number and girth");
    int chi_limit = 20;
    gcmd->add_option("spec", graph, "k<n>, c<n>, p<n>, cliques:..., band:m,N, random:m,p,seed")->required();
    gcmd->add_option("--chi-limit", chi_limit, "largest graph for exact colouring");
    gcmd->add_option("-o,--output", out);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        diag("error", "usage", e.what());
        return usage;
    }

    set_thread_count(threads);
    const Exec exec = threads > 1 ? Exec::parallel : Exec::serial;

    try {
        if (*build) {
            json report = {{"schema_version", 1}, {"type", "build-report"}, {"construction", name}};
            json doc;
            if (name == "monk" || name == "rainbow" || name == "blur") {
                RaAtomStructure s;
                if (name == "monk") {
                    auto g = parse_graph(graph);
                    s = monk_ra(g, colours);
                    report["params"] = {{"graph", graph_json(g)}, {"colours", colours}};
                }
                else if (name == "rainbow") {
                    auto order = [](const std::string & kind, int size) {
                        LinearOrderSpec o;
                        o.t = size;
                        if (kind == "naturals")
                            o.kind = OrderKind::naturals;
                        else if (kind == "reversed-naturals")
                            o.kind = OrderKind::reversed_naturals;
                        else if (kind == "finite-chain")
                            o.kind = OrderKind::finite_chain;
                        else
                            throw UsageError("order kind must be naturals, reversed-naturals or finite-chain");
                        return o;
                    };
                    s = rainbow_ra(order(greens_kind, greens), order(reds_kind, reds), copies);
                }
                else {
                    BlurSpec spec;
                    if (build->count("--family")) {
                        auto lm = split_ints(family, ',');
                        if (lm.size() != 2)
                            throw UsageError("--family needs l,mu");
                        spec = f_family_spec(lm[0], lm[1], size, t);
                    }
                    else if (build->count("--blurs")) {
                        for (int a = 1; a <= size; ++a)
                            spec.I.push_back(a);
                        std::stringstream ss(blurs);
                        std::string part;
                        while (std::getline(ss, part, ';'))
                            spec.J.push_back(split_ints(part, ','));
                        spec.t = t;
                    }
                    else {
                        throw UsageError("blur needs --family l,mu or --blurs");
                    }
                    auto base = f_family_base(size);
                    check_blur_spec(spec, base);
                    s = blur_structure(spec, base);
                }
                doc = ra_to_json(s);
                report["atoms"] = s.size();
                report["validation"] = ra_report(s, exec);
            }
            else {
                CaAtomStructure f;
                if (name == "hirsch") {
                    HirschOptions ho;
                    ho.budget = atom_budget;
                    ho.exec = exec;
                    auto alg = hirsch_algebra(HirschParams{hm, hn, hr}, ho);
                    f = alg.structure();
                    report["params"] = {{"m", hm}, {"n", hn}, {"r", hr}};
                    report["bin_size"] = alg.bin().size();
                }
                else if (name == "matrices") {
                    if (ra_file.empty())
                        throw UsageError("matrices needs --ra <structure>");
                    auto s = ra_from_json(read_json_file(ra_file));
                    f = matrix_structure(s, basic_matrices(s, dim, b.matrices, exec));
                }
                else if (name == "rainbow-ca") {
                    Palette p;
                    if (palette_kind == "one-white")
                        p = one_white_palette(dim);
                    else if (palette_kind == "rainbow")
                        p = rainbow_palette(dim, tints, reds);
                    else
                        throw UsageError("--palette must be rainbow or one-white");
                    f = rainbow_ca_atoms(p, atom_budget).structure;
                }
                else {
                    throw UsageError("unknown construction '" + name +
                                     "' (monk, rainbow, blur, hirsch, matrices, rainbow-ca)");
                }
                doc = ca_to_json(f);
                report["atoms"] = f.size();
                report["validation"] = ca_report(f, f.has_replacements() ? Signature::PEA : Signature::CA);
            }
            write_or_inline(report, "structure", out, doc);
            emit(report);
            return ok;
        }

        if (*validate) {
            auto l = load_structure(in);
            json report = {{"schema_version", 1}, {"type", "validation-report"}};
            bool good;
            if (l.is_ra) {
                report["atoms"] = l.ra.size();
                report["report"] = ra_report(l.ra, exec);
                good = report["report"]["ok"].get<bool>();
            }
            else {
                report["atoms"] = l.ca.size();
                report["report"] = ca_report(l.ca, parse_signature(signature));
                good = report["report"]["ok"].get<bool>();
            }
            emit(report);
            return good ? ok : check_failed;
        }

        if (*matrices || *basis) {
            auto l = load_structure(in);
            if (!l.is_ra)
                throw UsageError("basic matrices need a relation-algebra structure");
            auto mats = basic_matrices(l.ra, mn, b.matrices, exec);
            if (*matrices) {
                auto doc = matrices_json(l.ra, mats, mn);
                if (out.empty()) {
                    emit(doc);
                }
                else {
                    write_json_file(out, doc);
                    emit({{"schema_version", 1}, {"type", "matrices-report"}, {"count", mats.size()},
                          {"matrices_file", out}});
                }
                return ok;
            }
            json report = {{"schema_version", 1}, {"type", "basis-report"}, {"n", mn}, {"matrices", mats.size()}};
            if (drop >= 0) {
                if (static_cast<std::size_t>(drop) >= mats.size())
                    throw UsageError("--delete index out of range");
                report["deleted"] = mats[drop].m;
                mats.erase(mats.begin() + drop);
            }
            BasisOptions bo;
            bo.require_transpositions = need_transp;
            bo.exec = exec;
            auto r = is_cylindric_basis(mats, mn, bo);
            report["holds"] = r.holds;
            report["pairs_checked"] = r.pairs_checked;
            if (!r.holds)
                report["witness"] = {{"failure", r.failure}, {"i", r.i}, {"j", r.j},
                                     {"M", mats[r.m_index].m}, {"N", mats[r.n_index].m}};
            emit(report);
            return r.holds ? ok : check_failed;
        }

        if (*solve) {
            json report = {{"schema_version", 1}, {"type", "solve-report"}, {"game", game}, {"rounds", rounds}};
            if (game == "cone") {
                auto p = rainbow_palette(3, tints, reds);
                auto d = rainbow_cone_dynamics(p, rounds);
                auto tr = run_rainbow_script(p, rounds, rounds);
                report["palette"] = p.to_json();
                report["winner"] = d.forall_wins ? "forall" : "exists";
                report["result"] = d.forall_wins ? "FORALL wins" : "EXISTS wins";
                report["forall_wins_by_round"] = d.rounds;
                report["positions"] = d.positions;
                write_or_inline(report, "transcript", out, tr.to_json(p));
                emit(report);
                return ok;
            }
            if (in.empty())
                throw UsageError("solve needs a structure document");
            auto l = load_structure(in);
            GameSpec gs;
            gs.kind = parse_game_kind(game);
            if (gs.kind == GameKind::H)
                throw UsageError("use hypersolve for the H game");
            gs.rounds = rounds;
            gs.pebbles = pebbles;
            gs.node_budget = nodes;
            gs.state_budget = states;
            gs.exec = exec;
            auto f = frame_of(l, b, exec);
            if (gs.kind == GameKind::F && gs.pebbles < f.dim())
                throw UsageError("F(m) needs --pebbles of at least the dimension");
            auto r = solve_game(f, gs);
            report["atoms"] = f.size();
            report["winner"] = player_name(r.winner);
            report["result"] = r.winner == Player::exists ? "EXISTS wins" : "FORALL wins";
            report["positions"] = r.positions;
            write_or_inline(report, "certificate", out, r.certificate);
            emit(report);
            return ok;
        }

        if (*hyper) {
            auto l = load_structure(in);
            auto f = frame_of(l, b, exec);
            HyperSpec hs;
            hs.rounds = rounds;
            hs.lambda = lambda;
            hs.max_hyperedge = max_hyper;
            hs.node_budget = hnodes;
            hs.transformations = !no_transform;
            hs.amalgamations = !no_amalgam;
            hs.state_budget = states;
            auto r = solve_hypergame(f, hs);
            json report = {{"schema_version", 1}, {"type", "hypersolve-report"}, {"rounds", rounds},
                           {"atoms", f.size()}, {"winner", player_name(r.winner)},
                           {"result", r.winner == Player::exists ? "EXISTS wins" : "FORALL wins"},
                           {"positions", r.positions}};
            write_or_inline(report, "certificate", out, r.certificate);
            emit(report);
            return ok;
        }

        if (*rep) {
            auto l = load_structure(in);
            RepSearchOptions ro;
            ro.max_base = max_base;
            ro.node_budget = rep_nodes;
            ro.exec = exec;
            json report;
            json found;
            if (l.is_ra) {
                auto r = find_square_representation(l.ra, ro);
                report = r.to_json();
                if (r.rep)
                    found = r.rep->to_json();
            }
            else {
                auto r = find_ca_representation(l.ca, ro);
                report = r.to_json();
                if (r.rep)
                    found = r.rep->to_json();
            }
            if (!found.is_null() && !out.empty()) {
                report.erase("representation");
                write_json_file(out, found);
                report["representation_file"] = out;
            }
            if (!report.contains("refusal") && found.is_null())
                report["summary"] = "no representation with base <= " + std::to_string(report["exhausted_up_to"].get<int>());
            emit(report);
            return ok;
        }

        if (*verify || *replay) {
            auto l = load_structure(in);
            auto doc = read_json_file(doc_file);
            auto type = document_type(doc);
            json report = {{"schema_version", 1}, {"type", "verification"}, {"document", type}};
            bool good = false;
            if (type == "ra-representation" || type == "ca-representation") {
                if (*replay)
                    throw UsageError("replay takes a certificate; use verify for representations");
                RepCheck c;
                if (type == "ra-representation") {
                    if (!l.is_ra)
                        throw StructuralError("an ra-representation needs a relation-algebra structure");
                    c = verify_representation(l.ra, RaRepresentation::from_json(doc));
                }
                else {
                    if (l.is_ra)
                        throw StructuralError("a ca-representation needs a CA structure");
                    c = verify_representation(l.ca, CaRepresentation::from_json(doc));
                }
                good = c.ok;
                if (!c.ok) {
                    report["violation"] = c.violation;
                    report["witness"] = c.witness;
                }
            }
            else if (type == "game-certificate" || type == "hypergame-certificate") {
                auto f = frame_of(l, b, exec);
                auto r = type == "game-certificate" ? replay_certificate(f, doc) : replay_hyper_certificate(f, doc);
                good = r.ok;
                report["positions"] = r.positions;
                report["moves"] = r.moves;
                if (!r.ok)
                    report["violation"] = r.error;
            }
            else {
                throw StructuralError(doc_file + " is not a representation or certificate");
            }
            report["ok"] = good;
            emit(report);
            return good ? ok : check_failed;
        }

        if (*gcmd) {
            auto g = parse_graph(graph);
            json report = graph_json(g);
            report["type"] = "graph-report";
            auto chi = chromatic_number(g, chi_limit);
            if (chi.exceeded) {
                report["chromatic"] = nullptr;
            }
            else {
                report["chromatic"] = chi.chi;
                report["colouring"] = chi.colouring;
            }
            auto gi = girth(g);
            report["girth"] = gi ? json(*gi) : json(nullptr);
            if (!out.empty())
                write_json_file(out, graph_json(g));
            emit(report);
            return ok;
        }
    }
    catch (const UsageError & e) {
        diag("error", "usage", e.what());
        return usage;
    }
    catch (const BudgetExceeded & e) {
        diag("error", "budget", e.what());
        return budget;
    }
    catch (const StructuralError & e) {
        diag("error", "malformed", e.what());
        return malformed;
    }
    catch (const VerificationError & e) {
        diag("error", "internal", e.what());
        return internal;
    }
    catch (const std::exception & e) {
        diag("error", "internal", e.what());
        return internal;
    }
    return ok;
}
