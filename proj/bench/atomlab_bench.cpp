// Serial reference kernels against their OpenMP versions. Prints one line per kernel.

#include "atomlab/constructions.hpp"
#include "atomlab/cyl_core.hpp"
#include "atomlab/games.hpp"
#include "atomlab/graphs.hpp"
#include "atomlab/hirsch.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace atomlab;

namespace
{
    auto seconds(const std::function<void()> & f, int reps) -> double
    {
        auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r)
            f();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
    }

    void row(const std::string & name, const std::function<void(Exec)> & kernel, int reps)
    {
        double s = seconds([&] { kernel(Exec::serial); }, reps);
        double p = seconds([&] { kernel(Exec::parallel); }, reps);
        std::printf("%-28s serial %9.4f s  parallel %9.4f s  speedup %5.2f\n", name.c_str(), s, p, s / p);
        std::fflush(stdout);
    }
}

auto main(int argc, char ** argv) -> int
{
    if (argc > 1)
        set_thread_count(std::stoi(argv[1]));
    std::printf("threads %d\n", thread_count());
    std::fflush(stdout);

    auto blur = blur_structure(f_family_spec(2, 1, 6, 3), f_family_base(6));
    row("validate blur F(2,1)", [&](Exec e) {
        ValidateOptions o;
        o.exec = e;
        validate_atom_structure(blur, o);
    }, 3);

    auto monk = monk_ra(complete_graph(3), 3);
    row("basic_matrices monk K3", [&](Exec e) { basic_matrices(monk, 3, 4'000'000, e); }, 20);

    auto mats = basic_matrices(monk, 3);
    row("is_cylindric_basis monk K3", [&](Exec e) {
        BasisOptions o;
        o.exec = e;
        is_cylindric_basis(mats, 3, o);
    }, 3);

    row("hirsch_algebra C(3,4,1)", [&](Exec e) {
        HirschOptions o;
        o.exec = e;
        hirsch_algebra({3, 4, 1}, o);
    }, 2);

    TermAlgebraBlur T(f_family_spec(2, 1, 6, 24), f_family_base(6));
    row("term algebra cross-check", [&](Exec e) { T.cross_check_generators(e); }, 1);

    auto frame = rainbow_ca_atoms(one_white_palette()).structure;
    row("solve_game one-white k=3", [&](Exec e) {
        GameSpec g;
        g.rounds = 3;
        g.exec = e;
        solve_game(frame, g);
    }, 1);
    return 0;
}
