#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "samdisc/ball.hpp"
#include "samdisc/entropy.hpp"
#include "samdisc/errors.hpp"
#include "samdisc/jsonio.hpp"
#include "samdisc/point_set.hpp"

namespace samdisc {

struct SandwichConstants {
    double c1 = 0.0;
    double c2 = 0.0;
};

// C1(a) = (1 - a(1+a))/(1+a), C2(a) = 1 + a(1+a); both tend to 1 as a -> 0,
// and C1 < 1 < C2 throughout the admissible range.
[[nodiscard]] inline SandwichConstants sandwich_constants(double a) {
    if (!(a > 0.0 && a <= 0.5)) throw std::domain_error("sandwich_constants: a must lie in (0, 1/2]");
    return {(1.0 - a * (1.0 + a)) / (1.0 + a), 1.0 + a * (1.0 + a)};
}

// Unique J with (1+a)^{J-1} <= 4 B N^{1/q} < (1+a)^J.
[[nodiscard]] inline int ladder_top_level(double a, double b, int n_dim, double q) {
    if (!(a > 0.0 && a <= 0.5)) throw std::domain_error("ladder_top_level: a must lie in (0, 1/2]");
    double t = 4.0 * b * std::pow(static_cast<double>(n_dim), 1.0 / q);
    int J = static_cast<int>(std::floor(std::log(t) / std::log1p(a))) + 1;
    while (std::pow(1.0 + a, J - 1) > t) --J;
    while (std::pow(1.0 + a, J) <= t) ++J;
    return J;
}

// Geometric ladder of nets over the unit-q-ball surrogate: level j in
// (j0, J] is a net at radius a(1+a)^j, realized as a prefix of one shared
// farthest-point ordering (so the levels are nested by construction).
struct NetLadder {
    std::shared_ptr<const BallSurrogate> ball;
    std::shared_ptr<const NetBuilder> builder;
    double a = 0.5;
    double b = 1.0;  // envelope constant entering the top level only
    int j0 = 0;
    int J = 0;

    std::vector<double> radius;    // per level, index j - j0 - 1
    std::vector<int> net_size;
    std::vector<char> limited;     // radius below twice the surrogate resolution

    [[nodiscard]] int levels() const { return J - j0; }
    [[nodiscard]] int index(int j) const {
        if (j <= j0 || j > J) throw std::domain_error("NetLadder: level outside (j0, J]");
        return j - j0 - 1;
    }
    [[nodiscard]] double level_radius(int j) const { return radius[static_cast<std::size_t>(index(j))]; }
    [[nodiscard]] int level_size(int j) const { return net_size[static_cast<std::size_t>(index(j))]; }

    // ln of the piecewise-constant family cardinality at level j: the
    // decomposition at level j is determined by the chosen centers at
    // levels j..J, so ln|F_j| <= sum_{k=j}^J ln(net size at k).
    [[nodiscard]] double log_family_cardinality(int j) const {
        double s = 0.0;
        for (int k = j; k <= J; ++k) s += std::log(static_cast<double>(level_size(k)));
        return s;
    }

    [[nodiscard]] json to_json() const {
        json meta;
        meta["a"] = a;
        meta["j0"] = j0;
        meta["J"] = J;
        meta["b"] = b;
        meta["q"] = ball->q;
        meta["n_dim"] = ball->basis->size();
        meta["surrogate_size"] = ball->count();
        meta["resolution"] = ball->resolution;
        meta["resolution_proven"] = ball->resolution_proven;
        json lv = json::array();
        for (int j = j0 + 1; j <= J; ++j) {
            json e;
            e["j"] = j;
            e["radius"] = level_radius(j);
            e["net_size"] = level_size(j);
            e["resolution_limited"] = static_cast<bool>(limited[static_cast<std::size_t>(index(j))]);
            lv.push_back(e);
        }
        meta["levels"] = lv;
        return meta;
    }
};

// Builds the ladder. In strict mode the smallest radius must stay above
// twice the surrogate resolution; in saturate mode smaller radii are
// allowed (their nets degenerate towards the whole surrogate and are
// flagged), which keeps deep-j0 parameter regimes buildable.
inline NetLadder build_ladder(std::shared_ptr<const BallSurrogate> ball,
                              std::shared_ptr<const NetBuilder> builder,
                              double a, int j0, double b, bool saturate = false) {
    if (!(a > 0.0 && a <= 0.5)) throw std::domain_error("build_ladder: a must lie in (0, 1/2]");
    if (b < 1.0) throw std::domain_error("build_ladder: B must be >= 1");
    NetLadder ld;
    ld.ball = std::move(ball);
    ld.builder = std::move(builder);
    ld.a = a;
    ld.b = b;
    ld.j0 = j0;
    ld.J = ladder_top_level(a, b, ld.ball->basis->size(), ld.ball->q);
    if (j0 >= ld.J) throw std::domain_error("build_ladder: j0 must be below the top level J");
    if (!saturate) {
        double smallest = a * std::pow(1.0 + a, j0 + 1);
        if (smallest < 2.0 * ld.ball->resolution)
            throw surrogate_too_coarse("build_ladder: smallest radius " + std::to_string(smallest) +
                                       " is below twice the surrogate resolution " +
                                       std::to_string(ld.ball->resolution));
    }
    for (int j = j0 + 1; j <= ld.J; ++j) {
        double eps = a * std::pow(1.0 + a, j);
        Net net = ld.builder->net(eps, /*allow_coarse=*/true);
        ld.radius.push_back(eps);
        ld.net_size.push_back(static_cast<int>(net.centers.size()));
        ld.limited.push_back(net.resolution_limited ? 1 : 0);
    }
    return ld;
}

struct NearestCenter {
    int member = -1;   // surrogate member index
    double dist = 0.0; // float-engine sup distance
};

// Closest center of level j's net to the given value column; ties go to
// the earlier center in the net's ordering.
[[nodiscard]] inline NearestCenter nearest_net_map(const Eigen::VectorXcf& fvals, const NetLadder& ladder, int j) {
    const auto& order = ladder.builder->ordering().order;
    int size = ladder.level_size(j);
    NearestCenter best;
    float bound = std::numeric_limits<float>::infinity();
    for (int t = 0; t < size; ++t) {
        int c = order[static_cast<std::size_t>(t)];
        float d = ladder.ball->dist_to_column(fvals.data(), c, bound);
        if (d < bound) {
            bound = d;
            best.member = c;
            best.dist = d;
        }
    }
    return best;
}

[[nodiscard]] inline TrigPoly nearest_net_poly(const TrigPoly& f, const NetLadder& ladder, int j) {
    NearestCenter nc = nearest_net_map(ladder.ball->values_of(f), ladder, j);
    return ladder.ball->member(nc.member);
}

// Level-set decomposition of one function over the grid nodes: each node
// gets the largest level j with |A_j(f)| >= (1+a)^{j-1} (label j0 when no
// level claims it), and h = (1+a)^label there, 0 on the j0 cell.
struct SandwichDecomposition {
    double a = 0.5;
    int j0 = 0;
    int J = 0;
    double norm_q_q = 0.0;               // grid q-norm^q of f
    std::vector<int> label;              // per grid node, in [j0, J]
    std::vector<double> h;               // per grid node
    std::vector<int> chosen;             // per level index: member of A_j nearest to f
    std::vector<double> approx_dist;     // measured ||f - A_j(f)||_sup (double)
    std::vector<long long> level_count;  // |D_j| in nodes, per level index
    long long j0_count = 0;              // |D_{j0}| in nodes

    [[nodiscard]] int index(int j) const { return j - j0 - 1; }
};

namespace detail {

// Double-precision values of the selected centers, one column per level,
// deduplicated across levels that picked the same member.
class CenterValueCache {
  public:
    CenterValueCache(const BallSurrogate& ball, const Eigen::MatrixXcd& basis_at) : ball_(ball), basis_at_(basis_at) {}

    const Eigen::VectorXcd& values(int member) {
        auto it = cache_.find(member);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(member, basis_at_ * ball_.coeff.col(member)).first->second;
    }

  private:
    const BallSurrogate& ball_;
    const Eigen::MatrixXcd& basis_at_;
    std::map<int, Eigen::VectorXcd> cache_;
};

// Shared labeling: given |A_j| values per level, assign each row its
// highest claiming level, scanning from J down. Threshold comparisons use
// squared moduli so the inner loop is arithmetic only.
inline void assign_labels(const std::vector<const Eigen::VectorXcd*>& centers, double a, int j0, int J,
                          std::vector<int>& label, std::vector<double>& h) {
    const auto rows = static_cast<std::size_t>(centers.empty() ? 0 : centers[0]->size());
    const auto levels = static_cast<std::size_t>(J - j0);
    std::vector<double> cut2(levels), hval(levels);
    for (int j = j0 + 1; j <= J; ++j) {
        double cut = std::pow(1.0 + a, j - 1);
        cut2[static_cast<std::size_t>(j - j0 - 1)] = cut * cut;
        hval[static_cast<std::size_t>(j - j0 - 1)] = std::pow(1.0 + a, j);
    }
    label.assign(rows, j0);
    h.assign(rows, 0.0);
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t i = levels; i-- > 0;) {
            if (std::norm((*centers[i])[static_cast<Eigen::Index>(t)]) >= cut2[i]) {
                label[t] = j0 + 1 + static_cast<int>(i);
                h[t] = hval[i];
                break;
            }
        }
    }
}

} // namespace detail

// Decomposes f (standing normalization f with ||f||_q^q = 1/2) over the
// ladder's grid.
inline SandwichDecomposition decompose(const TrigPoly& f, const NetLadder& ladder, double norm_tolerance = 1e-6) {
    const BallSurrogate& ball = *ladder.ball;
    Eigen::VectorXcd fvals = ball.basis_values * f.coeff();
    double nqq = std::pow(norm_lq_from_values(fvals, ball.q), ball.q);
    if (std::abs(nqq - 0.5) > norm_tolerance)
        throw normalization_error("decompose: ||f||_q^q = " + std::to_string(nqq) +
                                  " deviates from 1/2 beyond tolerance");

    SandwichDecomposition dec;
    dec.a = ladder.a;
    dec.j0 = ladder.j0;
    dec.J = ladder.J;
    dec.norm_q_q = nqq;

    Eigen::VectorXcf ffloat = fvals.cast<std::complex<float>>();
    detail::CenterValueCache cache(ball, ball.basis_values);

    // The nets are prefixes of one ordering, so a single running scan over
    // the longest prefix yields every level's nearest center at once (the
    // running strict-< argmin at prefix length K equals a fresh scan of the
    // first K entries).
    const auto& order = ladder.builder->ordering().order;
    const int levels = ladder.levels();
    std::vector<int> cuts(ladder.net_size);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::map<int, NearestCenter> at_prefix;
    NearestCenter run;
    float bound = std::numeric_limits<float>::infinity();
    std::size_t next_cut = 0;
    const int max_size = cuts.empty() ? 0 : cuts.back();
    for (int t = 0; t < max_size; ++t) {
        int c = order[static_cast<std::size_t>(t)];
        float d = ball.dist_to_column(ffloat.data(), c, bound);
        if (d < bound) {
            bound = d;
            run.member = c;
            run.dist = d;
        }
        while (next_cut < cuts.size() && cuts[next_cut] == t + 1) at_prefix[cuts[next_cut++]] = run;
    }

    std::vector<const Eigen::VectorXcd*> centers;
    for (int i = 0; i < levels; ++i) {
        NearestCenter nc = at_prefix.at(ladder.net_size[static_cast<std::size_t>(i)]);
        dec.chosen.push_back(nc.member);
        const Eigen::VectorXcd& cv = cache.values(nc.member);
        double d = 0.0;
        for (Eigen::Index t = 0; t < cv.size(); ++t) d = std::max(d, std::abs(cv[t] - fvals[t]));
        dec.approx_dist.push_back(d);
        centers.push_back(&cv);
    }
    detail::assign_labels(centers, ladder.a, ladder.j0, ladder.J, dec.label, dec.h);

    dec.level_count.assign(static_cast<std::size_t>(ladder.levels()), 0);
    for (int lb : dec.label) {
        if (lb == ladder.j0) ++dec.j0_count;
        else ++dec.level_count[static_cast<std::size_t>(dec.index(lb))];
    }
    return dec;
}

// Pointwise verification of the two sandwich inequalities. Margins are
// signed (negative = violated by that much); violations are counted
// against a small absolute tolerance rather than thrown.
struct SandwichCheck {
    double tol = 1e-9;
    long long checked_nodes = 0;
    long long violations_lower = 0;   // C1 h <= |f| outside the j0 cell
    long long violations_upper = 0;   // |f| <= C2 h outside the j0 cell
    long long violations_floor = 0;   // |f| <= C2 (1+a)^{j0} on the j0 cell
    double margin_lower = std::numeric_limits<double>::infinity();
    double margin_upper = std::numeric_limits<double>::infinity();
    double margin_floor = std::numeric_limits<double>::infinity();

    [[nodiscard]] bool clean() const {
        return violations_lower == 0 && violations_upper == 0 && violations_floor == 0;
    }

    [[nodiscard]] json to_json() const {
        json j;
        j["checked_nodes"] = checked_nodes;
        j["violations_lower"] = violations_lower;
        j["violations_upper"] = violations_upper;
        j["violations_floor"] = violations_floor;
        j["margin_lower"] = margin_lower;
        j["margin_upper"] = margin_upper;
        j["margin_floor"] = std::isfinite(margin_floor) ? json(margin_floor) : json("inf");
        j["clean"] = clean();
        return j;
    }
};

inline SandwichCheck check_sandwich(const TrigPoly& f, const SandwichDecomposition& dec, const NetLadder& ladder) {
    SandwichConstants c = sandwich_constants(ladder.a);
    Eigen::VectorXcd fvals = ladder.ball->basis_values * f.coeff();
    SandwichCheck chk;
    chk.checked_nodes = fvals.size();
    double floor_cut = c.c2 * std::pow(1.0 + ladder.a, ladder.j0);
    for (Eigen::Index t = 0; t < fvals.size(); ++t) {
        double av = std::abs(fvals[t]);
        if (dec.label[static_cast<std::size_t>(t)] == ladder.j0) {
            double margin = floor_cut - av;
            chk.margin_floor = std::min(chk.margin_floor, margin);
            if (margin < -chk.tol) ++chk.violations_floor;
        } else {
            double hv = dec.h[static_cast<std::size_t>(t)];
            double ml = av - c.c1 * hv;
            double mu = c.c2 * hv - av;
            chk.margin_lower = std::min(chk.margin_lower, ml);
            chk.margin_upper = std::min(chk.margin_upper, mu);
            if (ml < -chk.tol) ++chk.violations_lower;
            if (mu < -chk.tol) ++chk.violations_upper;
        }
    }
    return chk;
}

// Conclusion interval of the two-sided norm transfer, evaluated
// verbatim:
//   lower = C1^q (C2^{-q} (||f||_q^q - C2^q (1+a)^{q j0}) - delta)
//   upper = C2^q (1+a)^{q j0} + C2^q (C1^{-q} ||f||_q^q + delta)
[[nodiscard]] inline std::pair<double, double> bl1_bounds(double norm_q_q, double delta, double a, int j0, double q) {
    SandwichConstants c = sandwich_constants(a);
    double c1q = std::pow(c.c1, q);
    double c2q = std::pow(c.c2, q);
    double tail = std::pow(1.0 + a, q * j0);
    double lower = c1q * ((norm_q_q - c2q * tail) / c2q - delta);
    double upper = c2q * tail + c2q * (norm_q_q / c1q + delta);
    return {lower, upper};
}

struct ChosenParameters {
    double a = 0.5;
    int j0 = 0;
    double delta = 0.125;
};

// Picks the largest a from {2^-1, 2^-2, ...} and then the largest j0 such
// that, at the standing normalization ||f||_q^q = 1/2 and delta = 1/8, the
// conclusion interval sits inside [1/4, 3/4] and C1(a)^{-q} <= 2.
// Feasibility of a is decided from the j0 -> -infinity limits of the
// bounds, so the downward j0 scan always terminates.
[[nodiscard]] inline ChosenParameters choose_parameters(double q) {
    if (q < 1.0 || !std::isfinite(q)) throw std::domain_error("choose_parameters: q must be finite and >= 1");
    const double norm = 0.5, delta = 0.125;
    for (int e = 1; e <= 40; ++e) {
        double a = std::ldexp(1.0, -e);
        SandwichConstants c = sandwich_constants(a);
        double c1q = std::pow(c.c1, q);
        double c2q = std::pow(c.c2, q);
        if (1.0 / c1q > 2.0) continue;
        double lower_limit = c1q * (norm / c2q - delta);
        double upper_limit = c2q * (norm / c1q + delta);
        if (lower_limit < 0.25 || upper_limit > 0.75) continue;
        for (int j0 = 0; j0 >= -100000; --j0) {
            auto [lo, hi] = bl1_bounds(norm, delta, a, j0, q);
            if (lo >= 0.25 && hi <= 0.75) return {a, j0, delta};
        }
    }
    throw constraint_violation("choose_parameters: no feasible (a, j0) found in schedule");
}

// Values of h(f, .) at arbitrary points: labels are reproduced from the
// same chosen centers as on the grid (each distinct center is evaluated at
// the points once).
inline std::vector<double> h_at_points(const SandwichDecomposition& dec, const NetLadder& ladder,
                                       const PointSet& xi, std::vector<int>* labels_out = nullptr) {
    Eigen::MatrixXcd epts = basis_at_points(*ladder.ball->basis, xi);
    detail::CenterValueCache cache(*ladder.ball, epts);
    std::vector<const Eigen::VectorXcd*> centers;
    for (int i = 0; i < ladder.levels(); ++i)
        centers.push_back(&cache.values(dec.chosen[static_cast<std::size_t>(i)]));
    std::vector<int> labels;
    std::vector<double> h;
    detail::assign_labels(centers, ladder.a, ladder.j0, ladder.J, labels, h);
    if (labels_out) *labels_out = std::move(labels);
    return h;
}

// End-to-end run of the two-sided norm transfer for one f and one sample set:
// check the piecewise-constant premise at the given delta, then place the
// sampled q-norm of f against the conclusion interval. Both sides of the
// disjoint-support identity are computed by independent routes (grouped by
// level vs direct power sums) and their agreement is reported.
struct Bl1Report {
    double q = 2.0;
    double a = 0.5;
    int j0 = 0;
    int J = 0;
    double delta = 0.125;
    int m = 0;
    double norm_q_q = 0.0;          // grid norm^q of f
    double h_norm_q_q = 0.0;        // ||h||_q^q, grouped-by-level route
    double h_sampled_q_q = 0.0;     // ||S(h, xi)||_q^q, grouped route
    double identity_gap_true = 0.0; // grouped vs direct disagreement, true norm
    double identity_gap_sampled = 0.0;
    double premise_gap = 0.0;       // | ||S(h)||^q - ||h||^q |
    bool premise_holds = false;
    double f_sampled_q_q = 0.0;     // ||S(f, xi)||_q^q
    double bound_lower = 0.0;
    double bound_upper = 0.0;
    bool conclusion_holds = false;  // asserted only when the premise holds
    bool h_norm_within_budget = false;  // ||h||_q^q <= C1^{-q} ||f||_q^q

    [[nodiscard]] json to_json() const {
        json j;
        j["q"] = q;
        j["a"] = a;
        j["j0"] = j0;
        j["J"] = J;
        j["delta"] = delta;
        j["m"] = m;
        j["norm_q_q"] = norm_q_q;
        j["h_norm_q_q"] = h_norm_q_q;
        j["h_sampled_q_q"] = h_sampled_q_q;
        j["identity_gap_true"] = identity_gap_true;
        j["identity_gap_sampled"] = identity_gap_sampled;
        j["premise_gap"] = premise_gap;
        j["premise_holds"] = premise_holds;
        j["f_sampled_q_q"] = f_sampled_q_q;
        j["bound_lower"] = bound_lower;
        j["bound_upper"] = bound_upper;
        j["conclusion_holds"] = conclusion_holds;
        j["h_norm_within_budget"] = h_norm_within_budget;
        return j;
    }
};

inline Bl1Report bl1_end_to_end(const TrigPoly& f, const SandwichDecomposition& dec, const NetLadder& ladder,
                                const PointSet& xi, double delta = 0.125) {
    const BallSurrogate& ball = *ladder.ball;
    const double q = ball.q;
    Bl1Report rep;
    rep.q = q;
    rep.a = ladder.a;
    rep.j0 = ladder.j0;
    rep.J = ladder.J;
    rep.delta = delta;
    rep.m = xi.size();
    rep.norm_q_q = dec.norm_q_q;

    // True-measure side: grouped by level vs direct node sum.
    const double node_w = ball.grid.weight();
    double grouped = 0.0;
    for (int j = ladder.j0 + 1; j <= ladder.J; ++j)
        grouped += std::pow(1.0 + ladder.a, q * j) *
                   (static_cast<double>(dec.level_count[static_cast<std::size_t>(dec.index(j))]) * node_w);
    double direct = 0.0;
    for (double hv : dec.h)
        if (hv > 0.0) direct += std::pow(hv, q);
    direct *= node_w;
    rep.h_norm_q_q = grouped;
    rep.identity_gap_true = std::abs(grouped - direct);

    // Sampled side, same two routes.
    std::vector<int> labels;
    std::vector<double> hpts = h_at_points(dec, ladder, xi, &labels);
    std::vector<long long> counts(static_cast<std::size_t>(ladder.levels()), 0);
    for (int lb : labels)
        if (lb != ladder.j0) ++counts[static_cast<std::size_t>(dec.index(lb))];
    double grouped_s = 0.0;
    for (int j = ladder.j0 + 1; j <= ladder.J; ++j)
        grouped_s += std::pow(1.0 + ladder.a, q * j) *
                     (static_cast<double>(counts[static_cast<std::size_t>(dec.index(j))]) / xi.size());
    double direct_s = 0.0;
    for (double hv : hpts)
        if (hv > 0.0) direct_s += std::pow(hv, q);
    direct_s /= xi.size();
    rep.h_sampled_q_q = grouped_s;
    rep.identity_gap_sampled = std::abs(grouped_s - direct_s);

    rep.premise_gap = std::abs(rep.h_sampled_q_q - rep.h_norm_q_q);
    rep.premise_holds = rep.premise_gap <= delta;

    rep.f_sampled_q_q = std::pow(sampled_norm(f, q, xi), q);
    auto [lo, hi] = bl1_bounds(rep.norm_q_q, delta, ladder.a, ladder.j0, q);
    rep.bound_lower = lo;
    rep.bound_upper = hi;
    rep.conclusion_holds = rep.premise_holds && rep.f_sampled_q_q >= lo && rep.f_sampled_q_q <= hi;

    SandwichConstants c = sandwich_constants(ladder.a);
    rep.h_norm_within_budget = rep.h_norm_q_q <= rep.norm_q_q / std::pow(c.c1, q) + 1e-12;
    return rep;
}

// CSV dump: node index, coordinates, label ("j0" on the floor cell), h, |f|.
inline void dump_decomposition_csv(const TrigPoly& f, const SandwichDecomposition& dec, const NetLadder& ladder,
                                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("dump_decomposition_csv: cannot open " + path);
    const Grid& grid = ladder.ball->grid;
    Eigen::VectorXcd fvals = ladder.ball->basis_values * f.coeff();
    out << "node";
    for (int l = 0; l < grid.dim(); ++l) out << ",x" << l;
    out << ",label,h,abs_f\n";
    char buf[64];
    for (std::uint64_t t = 0; t < grid.total_nodes(); ++t) {
        out << t;
        for (double x : grid.node(t)) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << ',' << buf;
        }
        int lb = dec.label[static_cast<std::size_t>(t)];
        if (lb == ladder.j0) out << ",j0";
        else out << ',' << lb;
        std::snprintf(buf, sizeof buf, "%.17g", dec.h[static_cast<std::size_t>(t)]);
        out << ',' << buf;
        std::snprintf(buf, sizeof buf, "%.17g", std::abs(fvals[static_cast<Eigen::Index>(t)]));
        out << ',' << buf << '\n';
    }
    if (!out) throw io_error("dump_decomposition_csv: write failed for " + path);
}

} // namespace samdisc
