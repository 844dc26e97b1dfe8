#pragma once

#include "ca_structure.hpp"
#include "cyl_core.hpp"
#include "exec.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace atomlab
{
    /// Atomic network: every n-tuple of nodes carries an atom.
    struct Network
    {
        int n = 3;
        std::vector<int> nodes;     // ascending
        std::vector<AtomId> label;  // nodes.size()^n entries, first coordinate most significant

        auto size() const -> int { return static_cast<int>(nodes.size()); }
        /// Position of a node id, or -1.
        auto pos(int node) const -> int;
        auto has(int node) const -> bool { return pos(node) >= 0; }
        /// Label of a tuple of node ids. The nodes must be present.
        auto at(const std::vector<int> & tuple) const -> AtomId;
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> Network;
        friend auto operator==(const Network &, const Network &) -> bool = default;
        friend auto operator<=>(const Network &, const Network &) = default;
    };

    enum class GameKind
    {
        G,
        F,
        H
    };

    enum class Player
    {
        exists,
        forall
    };

    auto player_name(Player p) -> std::string;
    auto game_kind_name(GameKind k) -> std::string;
    auto parse_game_kind(const std::string & s) -> GameKind;

    struct GameSpec
    {
        GameKind kind = GameKind::G;
        int rounds = 3;                        // the initial round counts
        int pebbles = 0;                       // m for F(m); at least n
        int node_budget = 16;                  // G: largest board allowed
        std::size_t state_budget = 4'000'000;  // solver positions
        Exec exec = Exec::parallel;
    };

    /// Initial move: forall picks `atom`. Cylindrifier move (face, l, k, b): exists must add node k
    /// and label the face with k inserted at position l by b.
    struct Move
    {
        bool initial = false;
        AtomId atom = -1;
        std::vector<int> face;
        int l = 0;
        int k = 0;
        AtomId b = -1;
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> Move;
        friend auto operator==(const Move &, const Move &) -> bool = default;
        friend auto operator<=>(const Move &, const Move &) = default;
    };

    /// First violated network condition, or nullopt. Checks the diagonal condition, c_i
    /// compatibility of every pair of tuples differing in one place, and transpositions when
    /// the structure has them.
    auto network_violation(const CaAtomStructure & f, const Network & N) -> std::optional<std::string>;

    /// forall's moves on a board (nullptr: the initial round). Cylindrifier moves are listed for
    /// every face, index and atom; k is the fresh node (G), or any pebble outside the face with
    /// unused pebbles collapsed to the least one (F).
    auto legal_moves(const CaAtomStructure & f, const GameSpec & spec, const Network * board) -> std::vector<Move>;

    /// All legal replies of exists, in lexicographic order of the new labels.
    auto responses(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv)
        -> std::vector<Network>;

    /// Networks on nodes(M) u nodes(N) extending both, in lexicographic order; at most `limit`
    /// when positive.
    auto network_amalgams(const CaAtomStructure & f, const Network & M, const Network & N, std::size_t limit = 0)
        -> std::vector<Network>;

    /// Least relabelled form over node permutations, and perm[position] = new node id.
    auto canonical_network(const Network & N) -> std::pair<Network, std::vector<int>>;

    struct SolveResult
    {
        Player winner = Player::exists;
        nlohmann::json certificate;
        std::size_t positions = 0;
    };

    /// Exhaustive k-round game. Throws BudgetExceeded when the state or node budget is exceeded.
    auto solve_game(const CaAtomStructure & f, const GameSpec & spec) -> SolveResult;

    struct ReplayReport
    {
        bool ok = false;
        std::string error;
        std::size_t positions = 0;
        std::size_t moves = 0;
    };

    /// Re-validates a certificate with the independent checker. Never throws on bad content.
    auto replay_certificate(const CaAtomStructure & f, const nlohmann::json & cert) -> ReplayReport;

    /// Plain recursive evaluation over the independent checker's move and reply lists, memoised on
    /// literal boards only.
    auto naive_winner(const CaAtomStructure & f, const GameSpec & spec) -> Player;

    namespace check
    {
        /// Literal check of the network conditions over all tuple pairs.
        auto network_ok(const CaAtomStructure & f, const Network & N) -> std::optional<std::string>;
        auto forall_moves(const CaAtomStructure & f, const GameSpec & spec, const Network * board)
            -> std::vector<Move>;
        auto replies(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv)
            -> std::vector<Network>;
        /// Why `reply` is not a legal answer to `mv`, or nullopt.
        auto reply_violation(const CaAtomStructure & f, const GameSpec & spec, const Network * board,
                             const Move & mv, const Network & reply) -> std::optional<std::string>;
    }

    // ---------------------------------------------------------------- scripted play

    /// nullopt: resign.
    using ExistsStrategy = std::function<std::optional<Network>(const Network * board, const Move & mv)>;
    /// nullopt: stop playing.
    using ForallScript = std::function<std::optional<Move>(const Network * board, int round)>;

    struct Transcript
    {
        std::vector<Move> moves;
        std::vector<Network> boards;
        Player winner = Player::exists;
        int rounds_played = 0;
        auto to_json() const -> nlohmann::json;
    };

    /// Plays up to spec.rounds rounds. Throws VerificationError naming the rule when forall's move
    /// or exists' reply is illegal.
    auto run_scripted(const CaAtomStructure & f, const GameSpec & spec, const ExistsStrategy & e,
                      const ForallScript & a) -> Transcript;

    /// Strategies read off a certificate of the matching winner.
    auto exists_from_certificate(const nlohmann::json & cert) -> ExistsStrategy;
    auto forall_from_certificate(const nlohmann::json & cert) -> ForallScript;

    // ---------------------------------------------------------------- hypergame

    /// Hyperlabels are kept for long hyperedges only; every short one carries lambda.
    struct HyperNetwork
    {
        Network a;
        std::map<std::vector<int>, int> h;                      // long hyperedges
        std::map<std::pair<int, int>, Player> owner;            // irreflexive edges (x < y)
        std::map<std::vector<int>, std::vector<int>> envelope;  // long hyperedges
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> HyperNetwork;
        friend auto operator==(const HyperNetwork &, const HyperNetwork &) -> bool = default;
    };

    /// x ~ y iff some tuple (x, y, z...) is labelled below d_01. Classes are taken under the
    /// transitive closure.
    auto hyper_similar(const CaAtomStructure & f, const Network & N, int x, int y) -> bool;

    /// Short iff the entries meet at most n classes of ~.
    auto hyperedge_short(const CaAtomStructure & f, const Network & N, const std::vector<int> & x) -> bool;

    struct HyperedgeInfo
    {
        std::vector<int> edge;
        bool is_short = false;
        int label = 0;
        std::vector<int> envelope;
    };

    /// Every hyperedge of length 1..max_len (0: n + 1), lexicographically. Short ones report `lambda`.
    auto hyperedge_classify(const CaAtomStructure & f, const HyperNetwork & N, int lambda = 0, int max_len = 0)
        -> std::vector<HyperedgeInfo>;

    /// First violated hypernetwork condition: the network conditions, equal labels on ~-equivalent
    /// hyperedges, lambda on short ones, labels stored exactly for the long ones.
    auto hypernetwork_violation(const CaAtomStructure & f, const HyperNetwork & N, int lambda, int max_len = 0)
        -> std::optional<std::string>;

    struct HyperSpec
    {
        int rounds = 3;
        int lambda = 0;
        int max_hyperedge = 0;     // 0: n + 1
        int node_budget = 8;
        bool transformations = true;
        bool amalgamations = true;
        std::size_t state_budget = 2'000'000;
    };

    enum class HyperMoveKind
    {
        initial,
        cylindrifier,
        transformation,
        amalgamation
    };

    struct HyperMove
    {
        HyperMoveKind kind = HyperMoveKind::initial;
        AtomId atom = -1;
        int net = 0;
        int net2 = 0;
        std::vector<int> face;
        int l = 0;
        int k = 0;
        AtomId b = -1;
        std::vector<std::pair<int, int>> theta;  // (x, theta(x)), ascending in x
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> HyperMove;
        friend auto operator==(const HyperMove &, const HyperMove &) -> bool = default;
    };

    /// Labels of a fresh reply: short hyperedges get lambda, inherited long ones keep their
    /// label, the rest get least unused labels (one per ~ class). nullopt when the result is
    /// not lambda-neat or breaks the ~ condition.
    auto hyper_relabel(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & history,
                       const Network & a, const std::vector<const HyperNetwork *> & inherit)
        -> std::optional<HyperNetwork>;

    auto hyper_moves(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & history)
        -> std::vector<HyperMove>;
    auto hyper_responses(const CaAtomStructure & f, const HyperSpec & spec,
                         const std::vector<HyperNetwork> & history, const HyperMove & mv)
        -> std::vector<HyperNetwork>;

    struct HyperSolveResult
    {
        Player winner = Player::exists;
        nlohmann::json certificate;
        std::size_t positions = 0;
    };

    /// Exhaustive H game from `start` (empty: from the initial round). Throws BudgetExceeded.
    auto solve_hypergame(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & start = {})
        -> HyperSolveResult;

    /// Checks every move and reply of a hypergame certificate.
    auto replay_hyper_certificate(const CaAtomStructure & f, const nlohmann::json & cert) -> ReplayReport;

    // ---------------------------------------------------------------- rainbow dynamics

    /// Order-preserving partial map from tints to red indices in [0, limit).
    class RhoMap
    {
    public:
        RhoMap(int limit, int m_total, std::vector<int> tint_order) :
            limit_(limit), m_total_(m_total), tints_(std::move(tint_order))
        {
        }

        auto map() const -> const std::map<int, int> & { return rho_; }
        auto has(int tint) const -> bool { return rho_.count(tint) != 0; }
        auto at(int tint) const -> int { return rho_.at(tint); }
        /// Gap demanded after round r: 3^(m_total - r), saturating.
        auto gap(int round) const -> long long;
        auto gaps_maintained() const -> bool { return gaps_kept_; }
        /// Adds `tint` in round `round`. False (map unchanged) when no order-preserving value fits.
        auto extend(int tint, int round) -> bool;
        /// Order preservation, and the round gap when `round` >= 0.
        auto invariant_ok(int round) const -> bool;

    private:
        int limit_;
        int m_total_;
        std::vector<int> tints_;  // palette tints, ascending
        std::map<int, int> rho_;
        bool gaps_kept_ = true;
    };

    /// forall's move in the coloured-graph game: a new node joined to `face`.
    struct ConeMove
    {
        std::vector<int> face;
        std::vector<Colour> to_face;  // colour of (face[i], new node)
        std::map<std::vector<int>, std::uint64_t> yellow;  // on new green-free tuples of the face graph
    };

    /// forall's opening: nodes 0..n-1, whites on the base, g_0^0 and g_j to the apex, y_all on the base.
    auto rainbow_opening(const Palette & p) -> ColouredGraph;

    /// Round r >= 2 of the cone script: face (0..n-2), tint -(r-1).
    auto cone_script_move(const Palette & p, int round) -> ConeMove;

    /// Board after forall's move, before exists colours the remaining edges.
    auto apply_cone_move(const ColouredGraph & g, const ConeMove & mv) -> ColouredGraph;

    class ExistsRainbowStrategy
    {
    public:
        ExistsRainbowStrategy(Palette p, int m_total);

        auto rho() const -> const RhoMap & { return rho_; }
        /// Records the opening board.
        void start(const ColouredGraph & g);
        /// Completes the board; nullopt when she resigns. `round` counts from 1 (the opening).
        auto respond(const ColouredGraph & board, const ConeMove & mv, int round) -> std::optional<ColouredGraph>;
        auto diagnostic() const -> const std::string & { return diag_; }

    private:
        Palette p_;
        int m_total_;
        RhoMap rho_;
        std::string diag_;
    };

    struct RainbowTranscript
    {
        std::vector<ColouredGraph> boards;
        int rounds_played = 0;
        Player winner = Player::exists;
        int losing_round = 0;  // round in which exists resigned, 0 if none
        std::string diagnostic;
        auto to_json(const Palette & p) const -> nlohmann::json;
    };

    /// Cone script against the rho strategy for up to `rounds` rounds. Every board is checked.
    auto run_rainbow_script(const Palette & p, int rounds, int m_total) -> RainbowTranscript;

    struct DynamicsResult
    {
        bool forall_wins = false;
        int rounds = 0;  // round in which every line of exists has failed
        std::size_t positions = 0;
    };

    /// Exhaustive over exists' completions against the cone script, up to `max_rounds` rounds.
    /// New yellow tuples get the full shade unless `all_yellows`.
    auto rainbow_cone_dynamics(const Palette & p, int max_rounds, bool all_yellows = false) -> DynamicsResult;
}
