#pragma once

#include "refinery/lp.hpp"
#include "refinery/polytope.hpp"
#include "refinery/refinement.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testutil {

using namespace refinery;

inline Scalar R(long long num, long long den = 1) { return Scalar::ratio(num, den); }

inline Scalar random_rational(std::mt19937_64& rng, int span = 9) {
    std::uniform_int_distribution<int> num(-span, span);
    std::uniform_int_distribution<int> den(1, span);
    return Scalar(Rational(num(rng)) / Rational(den(rng)));
}

inline Scalar random_quad(std::mt19937_64& rng, unsigned d = 5) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    Rational a = Rational(num(rng)) / Rational(den(rng));
    Rational b = Rational(num(rng)) / Rational(den(rng));
    return b.is_zero() ? Scalar(a) : Scalar(a, b, d);
}

/// Independent vertex-enumeration oracle: solve every square subsystem of
/// tight constraints and keep the feasible unique solutions.
inline std::vector<Vector> brute_force_vertices(const HRep& h, std::size_t ambient) {
    std::vector<Vector> eqrows;
    Vector eqrhs;
    for (const auto& [a, b] : h.equalities) {
        eqrows.push_back(a);
        eqrhs.push_back(b);
    }
    std::size_t eqrank = eqrows.empty() ? 0 : rank(Matrix::from_rows(eqrows));
    std::size_t need = ambient - eqrank;
    const std::size_t m = h.inequalities.size();
    std::vector<Vector> found;
    std::vector<std::size_t> idx(need);

    auto try_subset = [&](const std::vector<std::size_t>& sel) {
        std::vector<Vector> rows = eqrows;
        Vector rhs = eqrhs;
        for (auto i : sel) {
            rows.push_back(h.inequalities[i].first);
            rhs.push_back(h.inequalities[i].second);
        }
        auto sol = solve_linear(Matrix::from_rows(rows), rhs);
        if (sol.kind != LinearSolution::Kind::Unique) return;
        const Vector& x = sol.particular;
        for (const auto& [a, b] : h.inequalities)
            if ((dot(a, x) - b).sign() > 0) return;
        for (const auto& f : found)
            if (vec_eq(f, x)) return;
        found.push_back(x);
    };

    // all subsets of size `need`
    std::vector<std::size_t> sel;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (sel.size() == need) {
            try_subset(sel);
            return;
        }
        for (std::size_t i = start; i + (need - sel.size()) <= m; ++i) {
            sel.push_back(i);
            self(self, i + 1);
            sel.pop_back();
        }
    };
    if (need == 0)
        try_subset({});
    else
        rec(rec, 0);
    std::sort(found.begin(), found.end(),
              [](const Vector& a, const Vector& b) { return vec_lex_cmp(a, b) < 0; });
    return found;
}

inline Vector vec(std::initializer_list<Scalar> xs) { return Vector(xs); }

// The decatope examples are expensive to build; share one instance per run.
inline const std::pair<StatisticalModel, Refinement>& midpoint_example() {
    static const auto value = example_pentagon_midpoint();
    return value;
}

inline const std::pair<StatisticalModel, Refinement>& edges_example() {
    static const auto value = example_pentagon_edges();
    return value;
}

inline std::vector<Vector> sorted_points(std::vector<Vector> v) {
    std::sort(v.begin(), v.end(), [](const Vector& a, const Vector& b) { return vec_lex_cmp(a, b) < 0; });
    return v;
}

inline bool same_point_set(std::vector<Vector> a, std::vector<Vector> b) {
    a = sorted_points(std::move(a));
    b = sorted_points(std::move(b));
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!vec_eq(a[i], b[i])) return false;
    return true;
}

} // namespace testutil
