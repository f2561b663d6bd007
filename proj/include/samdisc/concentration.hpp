#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "samdisc/errors.hpp"
#include "samdisc/jsonio.hpp"
#include "samdisc/parallel.hpp"
#include "samdisc/rng.hpp"
#include "samdisc/sandwich.hpp"

namespace samdisc {

// One family of bounded functions entering the union bound: its size is
// kept in log form because ladder families are astronomically large.
struct FamilySpec {
    double log_cardinality = 0.0;  // natural log of |F_j|
    double sup_bound = 1.0;        // M_j
    double tolerance = 0.125;      // eta_j

    FamilySpec() = default;
    FamilySpec(double log_card, double m_bound, double eta)
        : log_cardinality(log_card), sup_bound(m_bound), tolerance(eta) {
        if (log_cardinality < 0.0) throw std::domain_error("FamilySpec: cardinality must be >= 1");
        if (sup_bound <= 0.0) throw std::domain_error("FamilySpec: sup bound must be positive");
        if (!(tolerance > 0.0 && tolerance < 1.0)) throw std::domain_error("FamilySpec: eta must lie in (0,1)");
    }

    static FamilySpec from_cardinality(long long card, double m_bound, double eta) {
        if (card < 1) throw std::domain_error("FamilySpec: cardinality must be >= 1");
        return {std::log(static_cast<double>(card)), m_bound, eta};
    }

    [[nodiscard]] json to_json() const {
        json j;
        j["log_cardinality"] = log_cardinality;
        if (log_cardinality < 34.0)  // exp fits comfortably in an integer
            j["cardinality"] = static_cast<long long>(std::llround(std::exp(log_cardinality)));
        j["sup_bound"] = sup_bound;
        j["eta"] = tolerance;
        return j;
    }
};

// Tail bound 2 exp(-m eta^2 / (8M)) for |sum g_nu| >= m eta over centered
// independent g_nu with ||g||_1 <= 2 and ||g||_inf <= M, clamped at the
// trivial value 2.
[[nodiscard]] inline double bernstein_tail(long long m, double eta, double sup_bound) {
    if (m < 1) throw std::domain_error("bernstein_tail: m must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("bernstein_tail: eta must lie in (0,1)");
    if (sup_bound <= 0.0) throw std::domain_error("bernstein_tail: M must be positive");
    return std::min(2.0, 2.0 * std::exp(-static_cast<double>(m) * eta * eta / (8.0 * sup_bound)));
}

// Built-in centered families for the Monte Carlo check. Both mirror the
// shape the bound is applied to (bounded, mean zero, ||g||_1 <= 2):
// symmetric two-point +-M has ||g||_1 = M, centered uniform on [-M, M] has
// ||g||_1 = M/2.
enum class TailFamily { two_point, uniform };

[[nodiscard]] inline const char* tail_family_name(TailFamily f) {
    return f == TailFamily::two_point ? "two_point" : "uniform";
}

// Empirical P{|sum_{nu<=m} g_nu| >= m eta} over the given number of
// trials. Deterministic for a given seed: trials are split into fixed
// chunks with per-chunk derived streams, so the result does not depend on
// threading.
[[nodiscard]] inline double mc_tail(TailFamily family, double sup_bound, long long m, double eta,
                                    long long trials, std::uint64_t seed, int threads = 1) {
    if (m < 1 || trials < 1) throw std::domain_error("mc_tail: m and trials must be >= 1");
    if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("mc_tail: eta must lie in (0,1)");
    if (family == TailFamily::two_point && sup_bound > 2.0)
        throw constraint_violation("mc_tail: two-point family with M > 2 breaks ||g||_1 <= 2");
    if (family == TailFamily::uniform && sup_bound > 4.0)
        throw constraint_violation("mc_tail: uniform family with M > 4 breaks ||g||_1 <= 2");
    if (sup_bound <= 0.0) throw std::domain_error("mc_tail: M must be positive");

    const int chunk_count = 64;
    std::vector<long long> hits(chunk_count, 0);
    const double threshold = static_cast<double>(m) * eta;
    parallel_chunks(static_cast<std::size_t>(trials), chunk_count, threads,
                    [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
                        Rng rng(Rng::mix(seed, chunk));
                        long long h = 0;
                        if (family == TailFamily::two_point) {
                            // Sum of m symmetric +-M steps from sign bits:
                            // sum = M (2 popcount - m).
                            const long long words = (m + 63) / 64;
                            const int rem = static_cast<int>(m % 64);
                            const std::uint64_t mask = rem ? ((~0ull) >> (64 - rem)) : ~0ull;
                            for (std::size_t t = lo; t < hi; ++t) {
                                long long pop = 0;
                                for (long long w = 0; w < words; ++w) {
                                    std::uint64_t bits = rng.bits();
                                    if (w == words - 1) bits &= mask;
                                    pop += std::popcount(bits);
                                }
                                double s = sup_bound * static_cast<double>(2 * pop - m);
                                if (std::abs(s) >= threshold * (1.0 - 1e-12)) ++h;
                            }
                        } else {
                            for (std::size_t t = lo; t < hi; ++t) {
                                double s = 0.0;
                                for (long long v = 0; v < m; ++v) s += sup_bound * (2.0 * rng.uniform01() - 1.0);
                                if (std::abs(s) >= threshold * (1.0 - 1e-12)) ++h;
                            }
                        }
                        hits[chunk] = h;
                    });
    long long total = 0;
    for (long long h : hits) total += h;
    return static_cast<double>(total) / static_cast<double>(trials);
}

namespace detail {

// ln of 2 sum_j |F_j| exp(-m eta_j^2/(8 M_j)), evaluated stably.
inline double union_bound_log_sum(const std::vector<FamilySpec>& families, double m) {
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(families.size());
    for (const auto& f : families) {
        double t = f.log_cardinality - m * f.tolerance * f.tolerance / (8.0 * f.sup_bound);
        terms.push_back(t);
        mx = std::max(mx, t);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - mx);
    return std::log(2.0) + mx + std::log(acc);
}

} // namespace detail

// Smallest m with 2 sum_j |F_j| exp(-m eta_j^2/(8 M_j)) strictly below 1.
// The sum decreases strictly in m, so doubling followed by bisection finds
// the edge exactly.
[[nodiscard]] inline long long union_bound_m(const std::vector<FamilySpec>& families) {
    if (families.empty()) throw std::domain_error("union_bound_m: empty family list");
    long long hi = 1;
    while (detail::union_bound_log_sum(families, static_cast<double>(hi)) >= 0.0) {
        if (hi > (1ll << 60)) throw constraint_violation("union_bound_m: no finite m found");
        hi *= 2;
    }
    long long lo = hi / 2;  // sum(lo) >= 1 (or lo = 0)
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        if (detail::union_bound_log_sum(families, static_cast<double>(mid)) < 0.0) hi = mid;
        else lo = mid;
    }
    return hi;
}

// Constant tolerance schedule eta_j = 1/(8 |G|): the eta sum over the
// ladder is exactly 1/8.
struct EtaRational {
    long long num = 1;
    long long den = 8;
};

[[nodiscard]] inline EtaRational eta_value(int j0, int top) {
    if (top <= j0) throw std::domain_error("eta_value: requires J > j0");
    return {1, 8ll * (top - j0)};
}

[[nodiscard]] inline std::vector<double> eta_schedule(int j0, int top) {
    EtaRational r = eta_value(j0, top);
    return std::vector<double>(static_cast<std::size_t>(top - j0),
                               static_cast<double>(r.num) / static_cast<double>(r.den));
}

// Analytic point-count budget C N^alpha B^q (log2(2BN))^2.
[[nodiscard]] inline double analytic_budget(int n_dim, double ball_b, double q, double mult, double alpha = 1.0) {
    if (n_dim < 1) throw std::domain_error("analytic_budget: N must be >= 1");
    if (ball_b < 1.0) throw std::domain_error("analytic_budget: B must be >= 1");
    if (q < 1.0 || alpha < 1.0) throw std::domain_error("analytic_budget: q and alpha must be >= 1");
    if (mult <= 0.0) throw std::domain_error("analytic_budget: C must be positive");
    double lg = std::log2(2.0 * ball_b * n_dim);
    return mult * std::pow(static_cast<double>(n_dim), alpha) * std::pow(ball_b, q) * lg * lg;
}

// Union-bound budget assembled from a built ladder's measured net sizes:
// level j contributes log|F_j| <= sum_{k>=j} log(net size k), sup bound
// (1+a)^{qj}, and the constant eta schedule.
struct LadderBudget {
    std::vector<FamilySpec> families;
    long long m_star = 0;

    [[nodiscard]] json to_json() const {
        json j;
        json fams = json::array();
        for (const auto& f : families) fams.push_back(f.to_json());
        j["families"] = fams;
        j["m_star"] = m_star;
        return j;
    }
};

[[nodiscard]] inline LadderBudget ladder_budget(const NetLadder& ladder) {
    LadderBudget out;
    const double q = ladder.ball->q;
    std::vector<double> etas = eta_schedule(ladder.j0, ladder.J);
    for (int j = ladder.j0 + 1; j <= ladder.J; ++j)
        out.families.emplace_back(ladder.log_family_cardinality(j), std::pow(1.0 + ladder.a, q * j),
                                  etas[static_cast<std::size_t>(ladder.index(j))]);
    out.m_star = union_bound_m(out.families);
    return out;
}

} // namespace samdisc
