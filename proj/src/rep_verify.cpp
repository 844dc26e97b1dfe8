// Representation checks by plain enumeration. Shares nothing with the search.
#include "atomlab/error.hpp"
#include "atomlab/repsearch.hpp"

#include <string>

namespace atomlab
{
    namespace
    {
        auto fail(std::string what, std::vector<int> pts) -> RepCheck
        {
            RepCheck r;
            r.violation = std::move(what);
            r.witness = std::move(pts);
            return r;
        }

        auto power(int b, int n) -> std::size_t
        {
            std::size_t r = 1;
            for (int i = 0; i < n; ++i)
                r *= static_cast<std::size_t>(b);
            return r;
        }
    }

    auto verify_representation(const RaAtomStructure & s, const RaRepresentation & r) -> RepCheck
    {
        const int B = r.base;
        const int A = static_cast<int>(s.size());
        if (B < 1 || r.label.size() != static_cast<std::size_t>(B) * B)
            throw StructuralError("representation needs base^2 labels");
        for (AtomId a : r.label)
            if (a < 0 || a >= A)
                throw StructuralError("representation label out of range");

        for (int x = 0; x < B; ++x)
            for (int y = 0; y < B; ++y) {
                bool id = s.is_identity(r.at(x, y));
                if (x == y && !id)
                    return fail("identity: diagonal pair not labelled by an identity atom", {x, y});
                if (x != y && id)
                    return fail("identity: distinct points labelled by an identity atom", {x, y});
                if (r.at(y, x) != s.converse(r.at(x, y)))
                    return fail("converse: label(y,x) is not the converse of label(x,y)", {x, y});
            }

        for (int x = 0; x < B; ++x)
            for (int y = 0; y < B; ++y)
                for (int z = 0; z < B; ++z)
                    if (!s.consistent(r.at(x, y), r.at(y, z), r.at(x, z)))
                        return fail("triangle (" + s.name(r.at(x, y)) + "," + s.name(r.at(y, z)) + "," +
                                        s.name(r.at(x, z)) + ") is forbidden",
                                    {x, y, z});

        // c <= a;b must be realised on every c-edge
        for (int x = 0; x < B; ++x)
            for (int z = 0; z < B; ++z) {
                AtomId c = r.at(x, z);
                for (AtomId a = 0; a < A; ++a)
                    for (AtomId b = 0; b < A; ++b) {
                        if (!s.consistent(a, b, c))
                            continue;
                        bool found = false;
                        for (int y = 0; y < B && !found; ++y)
                            found = r.at(x, y) == a && r.at(y, z) == b;
                        if (!found)
                            return fail("composition: no witness for " + s.name(c) + " <= " + s.name(a) + ";" +
                                            s.name(b),
                                        {x, z});
                    }
            }

        std::vector<bool> used(A, false);
        for (AtomId a : r.label)
            used[a] = true;
        for (AtomId a = 0; a < A; ++a)
            if (!used[a])
                return fail("atom " + s.name(a) + " is not represented", {});
        RepCheck ok;
        ok.ok = true;
        return ok;
    }

    auto verify_representation(const CaAtomStructure & f, const CaRepresentation & r) -> RepCheck
    {
        const int n = f.dim();
        const int B = r.base;
        const int A = static_cast<int>(f.size());
        if (r.n != n)
            throw StructuralError("representation dimension differs from the structure");
        if (B < 1 || r.label.size() != power(B, n))
            throw StructuralError("representation needs base^n labels");
        for (AtomId a : r.label)
            if (a < 0 || a >= A)
                throw StructuralError("representation label out of range");

        auto index = [&](const std::vector<int> & t) {
            std::size_t k = 0;
            for (int v : t)
                k = k * B + v;
            return k;
        };
        auto lab = [&](const std::vector<int> & t) { return r.label[index(t)]; };
        std::vector<int> t(n, 0);
        const std::size_t T = r.label.size();
        for (std::size_t idx = 0; idx < T; ++idx) {
            std::size_t k = idx;
            for (int i = n - 1; i >= 0; --i) {
                t[i] = static_cast<int>(k % B);
                k /= B;
            }
            AtomId a = lab(t);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j)
                        continue;
                    bool eq = t[i] == t[j];
                    if (eq != f.diagonal(i, j).contains(a))
                        return fail("diagonal d_" + std::to_string(i) + std::to_string(j) + " at atom " + f.name(a),
                                    t);
                }
            for (int i = 0; i < n; ++i) {
                std::vector<bool> seen(A, false);
                auto u = t;
                for (int v = 0; v < B; ++v) {
                    u[i] = v;
                    AtomId b = lab(u);
                    if (!f.same(i, a, b))
                        return fail("c_" + std::to_string(i) + ": tuples agreeing off " + std::to_string(i) +
                                        " carry inequivalent atoms",
                                    u);
                    seen[b] = true;
                }
                for (AtomId b = 0; b < A; ++b)
                    if (f.same(i, a, b) && !seen[b])
                        return fail("c_" + std::to_string(i) + ": no witness for " + f.name(b), t);
            }
            if (f.has_transpositions())
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        auto u = t;
                        std::swap(u[i], u[j]);
                        if (lab(u) != f.transpose(i, j, a))
                            return fail("s_[" + std::to_string(i) + "," + std::to_string(j) + "]", t);
                    }
            if (f.has_replacements())
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j)
                            continue;
                        auto u = t;
                        u[i] = t[j];
                        if (lab(u) != f.replace(i, j, a))
                            return fail("s_" + std::to_string(i) + "^" + std::to_string(j), t);
                    }
        }
        std::vector<bool> used(A, false);
        for (AtomId a : r.label)
            used[a] = true;
        for (AtomId a = 0; a < A; ++a)
            if (!used[a])
                return fail("atom " + f.name(a) + " is not represented", {});
        RepCheck ok;
        ok.ok = true;
        return ok;
    }
}
