#pragma once

// Shared deterministic random generators for fuzz suites. mt19937_64 with
// explicit modulo sampling so sequences are identical across platforms.

#include "kp/ratlp.hpp"
#include "kp/theory.hpp"

#include <random>
#include <string>
#include <vector>

namespace kptest {

using Rng = std::mt19937_64;

inline long rand_int(Rng& rng, long lo, long hi) {  // inclusive
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

inline kp::Rational rand_rational(Rng& rng, long lo, long hi, long max_den = 3) {
    long den = rand_int(rng, 1, max_den);
    long num = rand_int(rng, lo * den, hi * den);
    return kp::Rational(num, den);
}

// Random LP with <= 6 variables and <= 10 constraints, small integer
// coefficients, mixed relations, occasional bounds and objective. With
// all_bounded set, every variable gets a box, so bounded optima dominate.
inline kp::lp::LinearProgram random_lp(Rng& rng, bool force_objective = false,
                                       bool all_bounded = false) {
    kp::lp::LinearProgram lp;
    const int nvars = static_cast<int>(rand_int(rng, 1, 6));
    for (int v = 0; v < nvars; ++v) {
        std::optional<kp::Rational> lb, ub;
        long kind = all_bounded ? 3 : rand_int(rng, 0, 3);
        if (kind == 1) lb = kp::Rational(rand_int(rng, -3, 0));
        if (kind == 2) ub = kp::Rational(rand_int(rng, 0, 3));
        if (kind == 3) {
            lb = kp::Rational(rand_int(rng, -3, 0));
            ub = *lb + kp::Rational(rand_int(rng, 0, 5));
        }
        lp.add_variable("x" + std::to_string(v), lb, ub);
    }
    const int ncons = static_cast<int>(rand_int(rng, 1, all_bounded ? 4 : 10));
    for (int i = 0; i < ncons; ++i) {
        kp::lp::Row row;
        for (int v = 0; v < nvars; ++v) {
            long c = rand_int(rng, -4, 4);
            if (c != 0) row.push_back({v, kp::Rational(c)});
        }
        if (row.empty()) row.push_back({0, kp::Rational(1)});
        auto rel = static_cast<kp::lp::Rel>(rand_int(rng, 0, 2));
        lp.add_constraint(row, rel, kp::Rational(rand_int(rng, -6, 6)));
    }
    if (force_objective || rand_int(rng, 0, 1) == 0) {
        kp::lp::Row obj;
        for (int v = 0; v < nvars; ++v) {
            long c = rand_int(rng, -3, 3);
            if (c != 0) obj.push_back({v, kp::Rational(c)});
        }
        if (obj.empty()) obj.push_back({0, kp::Rational(1)});
        lp.set_objective(obj, rand_int(rng, 0, 1) == 0 ? kp::lp::Sense::Max : kp::lp::Sense::Min);
    }
    return lp;
}

// Random theory on 3-4 states with <= 6 generators, entries in [-3, 3].
inline kp::Theory random_theory(Rng& rng) {
    const int n = static_cast<int>(rand_int(rng, 3, 4));
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    kp::Theory t;
    t.states = kp::StateSpace(labels);
    const int ngens = static_cast<int>(rand_int(rng, 0, 6));
    for (int g = 0; g < ngens; ++g) {
        kp::SignedMeasure dm, q;
        kp::Rational acc = 0;
        for (int i = 0; i + 1 < n; ++i) {
            kp::Rational v(rand_int(rng, -3, 3));
            dm.set(labels[static_cast<size_t>(i)], v);
            acc += v;
        }
        dm.set(labels.back(), -acc);
        for (int i = 0; i < n; ++i) q.set(labels[static_cast<size_t>(i)], kp::Rational(rand_int(rng, -3, 3)));
        t.generators.push_back({{dm, q}, rand_int(rng, 0, 3) > 0});
    }
    return t;
}

}  // namespace kptest
