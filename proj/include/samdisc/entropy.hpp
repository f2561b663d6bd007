#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "samdisc/ball.hpp"
#include "samdisc/errors.hpp"
#include "samdisc/freq_set.hpp"
#include "samdisc/jsonio.hpp"

namespace samdisc {

// Relative strictness margin for float-engine cover/packing decisions; any
// comparison the result depends on is taken with this slack so float
// round-off cannot flip it the unsound way.
inline constexpr double float_guard = 1e-5;

// A covering of the surrogate at the stated radius, centers drawn from the
// surrogate itself (so they lie inside the ball). The same centers cover
// the full ball at radius + resolution.
struct Net {
    double radius = 0.0;
    std::vector<int> centers;        // surrogate member indices
    double resolution = 0.0;
    bool resolution_limited = false; // radius below twice the resolution
};

struct EntropyBracket {
    int k = 0;
    double lower = 0.0;            // valid for the true ball
    double upper = 0.0;            // ball level: surrogate radius + resolution
    double upper_surrogate = 0.0;  // covering radius over the surrogate alone
    double resolution = 0.0;
    bool resolution_limited = false;
    int net_size = 0;

    [[nodiscard]] json to_json() const {
        json j;
        j["k"] = k;
        j["lower"] = lower;
        j["upper"] = upper;
        j["upper_surrogate"] = upper_surrogate;
        j["resolution"] = resolution;
        j["resolution_limited"] = resolution_limited;
        j["net_size"] = net_size;
        return j;
    }
};

// Covering/packing engine over one surrogate; the farthest-point ordering
// is computed once and every net is a prefix of it, so nets at nested radii
// are themselves nested.
class NetBuilder {
  public:
    explicit NetBuilder(const BallSurrogate& ball, int threads = 1)
        : ball_(ball), ordering_(build_cover_ordering(ball, -1, threads)) {}

    [[nodiscard]] const BallSurrogate& ball() const { return ball_; }
    [[nodiscard]] const CoverOrdering& ordering() const { return ordering_; }

    // Shortest ordering prefix that covers the surrogate at eps. In strict
    // mode an eps below twice the surrogate resolution is refused, because
    // at that scale the surrogate no longer speaks for the ball.
    [[nodiscard]] Net net(double eps, bool allow_coarse = false) const {
        if (eps <= 0.0) throw std::domain_error("NetBuilder::net: eps must be positive");
        Net out;
        out.radius = eps;
        out.resolution = ball_.resolution;
        out.resolution_limited = eps < 2.0 * ball_.resolution;
        if (out.resolution_limited && !allow_coarse)
            throw surrogate_too_coarse("NetBuilder::net: eps " + std::to_string(eps) +
                                       " is below twice the surrogate resolution " +
                                       std::to_string(ball_.resolution));
        int size = ordering_.covering_prefix(eps * (1.0 - float_guard));
        if (size < 0) size = static_cast<int>(ordering_.order.size());  // all members
        out.centers.assign(ordering_.order.begin(), ordering_.order.begin() + size);
        return out;
    }

    // Size of a maximal strictly-(2 eps)-separated subset, grown greedily in
    // member-index order. Every point of such a packing pins one covering
    // ball, so the count lower-bounds the covering number of the true ball.
    // The scan stops at `cap` selections when only "exceeds cap" is needed.
    [[nodiscard]] int packing_count(double eps, long long cap = -1) const {
        if (eps <= 0.0) throw std::domain_error("NetBuilder::packing_count: eps must be positive");
        const auto sep = static_cast<float>(2.0 * eps * (1.0 + float_guard));
        std::vector<int> chosen;
        for (int i = 0; i < ball_.count(); ++i) {
            bool far = true;
            for (int j : chosen) {
                if (ball_.dist(i, j, std::nextafter(sep, std::numeric_limits<float>::infinity())) <= sep) {
                    far = false;
                    break;
                }
            }
            if (far) {
                chosen.push_back(i);
                if (cap > 0 && static_cast<long long>(chosen.size()) > cap) break;
            }
        }
        return static_cast<int>(chosen.size());
    }

    // Covering radius of the prefix of the given size (1-based size).
    [[nodiscard]] double prefix_radius(int size) const {
        size = std::min(size, static_cast<int>(ordering_.prefix_radius.size()));
        return static_cast<double>(ordering_.prefix_radius[static_cast<std::size_t>(size) - 1]);
    }

    // Half the max distance from member 0: a cheap diameter/2 upper scale.
    [[nodiscard]] double radius_scale() const {
        return static_cast<double>(ordering_.prefix_radius.front());
    }

    // Brackets the smallest eps at which 2^k centers suffice. Upper: the
    // covering radius of the 2^k-prefix, pushed up by the resolution to
    // hold at ball level. Lower: a bisected radius at which the packing
    // still exceeds 2^k (sound for the true ball as-is).
    [[nodiscard]] EntropyBracket bracket(int k) const {
        if (k < 1) throw std::domain_error("NetBuilder::bracket: k must be >= 1");
        EntropyBracket b;
        b.k = k;
        b.resolution = ball_.resolution;
        long long want = k < 31 ? (1ll << k) : -1;
        int size = (want < 0 || want >= ball_.count()) ? ball_.count() : static_cast<int>(want);
        b.net_size = std::min(size, static_cast<int>(ordering_.prefix_radius.size()));
        b.upper_surrogate = prefix_radius(b.net_size);
        b.upper = b.upper_surrogate + ball_.resolution;
        b.resolution_limited = b.upper_surrogate < 2.0 * ball_.resolution;

        if (want > 0) {
            double lo = 0.0;
            double hi = radius_scale();  // packing at any eps > diameter/2 is 1
            for (int it = 0; it < 40 && hi - lo > 1e-12 + 1e-9 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                if (packing_count(mid, want) > want) lo = mid;
                else hi = mid;
            }
            b.lower = lo;
        }
        return b;
    }

    [[nodiscard]] double max_member_sup() const {
        double best = 0.0;
        for (int i = 0; i < ball_.count(); ++i) {
            const std::complex<float>* v = ball_.values.col(i).data();
            for (Eigen::Index t = 0; t < ball_.values.rows(); ++t)
                best = std::max(best, static_cast<double>(std::abs(v[t])));
        }
        return best;
    }

  private:
    const BallSurrogate& ball_;
    CoverOrdering ordering_;
};

// Piecewise covering-entropy bound for the unit-q-ball of an N-dimensional
// span measured in the uniform norm: H_eps <= 1 + N (B/eps)^q for eps >= B
// (the seam at eps = B takes this branch), 1 + N log2(6B/eps) below.
[[nodiscard]] inline double entropy_formula(double eps, int n_dim, double ball_b, double q) {
    if (eps <= 0.0) throw std::domain_error("entropy_formula: eps must be positive");
    if (ball_b <= 0.0) throw std::domain_error("entropy_formula: B must be positive");
    if (eps >= ball_b) return 1.0 + n_dim * std::pow(ball_b / eps, q);
    return 1.0 + n_dim * std::log2(6.0 * ball_b / eps);
}

// Companion tail bound, proved for k > N: eps_k <= 6B 2^{-k/N}. Pure
// formula evaluator, so any k >= 1 is accepted.
[[nodiscard]] inline double entropy_tail(long long k, int n_dim, double ball_b) {
    if (k < 1) throw std::domain_error("entropy_tail: k must be >= 1");
    return 6.0 * ball_b * std::pow(2.0, -static_cast<double>(k) / n_dim);
}

// Constant C(q) with H_eps <= C(q) N (B/eps)^q uniformly on
// 0 < eps <= 3 B N^{1/q}: below B the log branch is absorbed via
// ln t <= t^q/(e q), above B the additive 1 costs at most 3^q extra.
[[nodiscard]] inline double entropy_power_constant(double q) {
    if (q < 1.0) throw std::domain_error("entropy_power_constant: q must be >= 1");
    double log_branch = 1.0 + std::pow(6.0, q) / (std::exp(1.0) * q * std::log(2.0));
    double power_branch = std::pow(3.0, q) + 1.0;
    return std::max(log_branch, power_branch);
}

// Entropy-number envelopes for the hyperbolic-cross ball (unit q-ball of
// T(Q_n), uniform-norm entropy), evaluated with an explicit multiplier in
// place of the unspecified absolute constant. Both branches agree at the
// splice k = 2|Q_n|.
[[nodiscard]] inline double cross_entropy_envelope(int n, int d, double q, long long k, double mult = 1.0) {
    if (q < 1.0 || q > 2.0) throw std::domain_error("cross_entropy_envelope: valid for 1 <= q <= 2");
    if (k < 1) throw std::domain_error("cross_entropy_envelope: k must be >= 1");
    auto qn = static_cast<double>(hyperbolic_cross_cardinality(d, n));
    double shape = k <= 2 * static_cast<long long>(qn) ? qn / static_cast<double>(k)
                                                       : std::pow(2.0, -static_cast<double>(k) / (2.0 * qn));
    return mult * std::pow(static_cast<double>(n), 1.0 / q) * shape;
}

// Two-dimensional q = 1 variants: the sharp form carries an extra
// log2(4|Q_n|/k) factor against n^{1/2}; the relaxed form trades the log
// for n^{3/2}.
[[nodiscard]] inline double cross_entropy_envelope_2d_sharp(int n, long long k, double mult = 1.0) {
    if (k < 1) throw std::domain_error("cross_entropy_envelope_2d_sharp: k must be >= 1");
    auto qn = static_cast<double>(hyperbolic_cross_cardinality(2, n));
    double shape = k <= 2 * static_cast<long long>(qn)
                       ? (qn / static_cast<double>(k)) * std::log2(4.0 * qn / static_cast<double>(k))
                       : std::pow(2.0, -static_cast<double>(k) / (2.0 * qn));
    return mult * std::sqrt(static_cast<double>(n)) * shape;
}

[[nodiscard]] inline double cross_entropy_envelope_2d_relaxed(int n, long long k, double mult = 1.0) {
    if (k < 1) throw std::domain_error("cross_entropy_envelope_2d_relaxed: k must be >= 1");
    auto qn = static_cast<double>(hyperbolic_cross_cardinality(2, n));
    double shape = k <= 2 * static_cast<long long>(qn) ? qn / static_cast<double>(k)
                                                       : std::pow(2.0, -static_cast<double>(k) / (2.0 * qn));
    return mult * std::pow(static_cast<double>(n), 1.5) * shape;
}

// Smallest B with upper(k) <= B (N/k)^{1/q} across the measured brackets.
[[nodiscard]] inline double fit_envelope_constant(const std::vector<EntropyBracket>& brackets,
                                                  int n_dim, double q) {
    double best = 0.0;
    for (const auto& b : brackets)
        best = std::max(best, b.upper * std::pow(static_cast<double>(b.k) / n_dim, 1.0 / q));
    return best;
}

// Net dump: radius line, then one center per line as re/im coefficient
// pairs in basis order.
inline void dump_net(const BallSurrogate& ball, const Net& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("dump_net: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", net.radius);
    out << buf << '\n';
    for (int c : net.centers) {
        for (Eigen::Index i = 0; i < ball.coeff.rows(); ++i) {
            std::complex<double> z = ball.coeff(i, c);
            std::snprintf(buf, sizeof buf, "%.17g %.17g", z.real(), z.imag());
            out << (i ? " " : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw io_error("dump_net: write failed for " + path);
}

} // namespace samdisc
