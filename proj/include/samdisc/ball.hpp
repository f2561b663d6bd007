#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "samdisc/errors.hpp"
#include "samdisc/grid.hpp"
#include "samdisc/parallel.hpp"
#include "samdisc/point_set.hpp"
#include "samdisc/random_poly.hpp"
#include "samdisc/rng.hpp"
#include "samdisc/trig_poly.hpp"

namespace samdisc {

// Finite stand-in for the ball {||f||_q <= radius} of a trigonometric span.
// Distances between members are measured in the grid sup metric
// max_nodes |f - g| (see sup_norm for the translation slack to the true
// uniform norm). Member values live in float; any decision that needs more
// precision is recomputed from coefficients in double.
struct BallSurrogate {
    FreqSetPtr basis;
    double q = 2.0;
    double radius = 1.0;
    bool real_coefficients = false;
    Grid grid{1, 1};
    Eigen::MatrixXcd basis_values;   // nodes x N, shared evaluation table
    Eigen::MatrixXcd coeff;          // N x count
    Eigen::MatrixXcf values;         // nodes x count
    int extras_begin = 0;            // columns >= extras_begin were appended
    double resolution = 0.0;         // covering slack: every ball point is
                                     // within this of some member
    bool resolution_proven = false;  // mesh: proven; cloud: probe estimate
    std::string mode;

    [[nodiscard]] int count() const { return static_cast<int>(coeff.cols()); }

    // Grid sup distance between members, float engine, early exit: once the
    // running max reaches abort_above the caller only needs ">=".
    [[nodiscard]] float dist(int i, int j, float abort_above = std::numeric_limits<float>::infinity()) const {
        return dist_to_column(values.col(i).data(), j, abort_above);
    }

    [[nodiscard]] float dist_to_column(const std::complex<float>* a, int j,
                                       float abort_above = std::numeric_limits<float>::infinity()) const {
        const std::complex<float>* b = values.col(j).data();
        const auto n = static_cast<Eigen::Index>(values.rows());
        float best2 = 0.0f;
        float abort2 = abort_above < std::numeric_limits<float>::infinity() ? abort_above * abort_above
                                                                            : std::numeric_limits<float>::infinity();
        for (Eigen::Index t = 0; t < n; ++t) {
            float dr = a[t].real() - b[t].real();
            float di = a[t].imag() - b[t].imag();
            float d2 = dr * dr + di * di;
            if (d2 > best2) {
                best2 = d2;
                if (best2 >= abort2) break;
            }
        }
        return std::sqrt(best2);
    }

    // Same distance recomputed in double from coefficients (for spot checks
    // of float-engine decisions).
    [[nodiscard]] double dist_exact(int i, int j) const {
        Eigen::VectorXcd d = basis_values * (coeff.col(i) - coeff.col(j));
        double best = 0.0;
        for (Eigen::Index t = 0; t < d.size(); ++t) best = std::max(best, std::abs(d[t]));
        return best;
    }

    [[nodiscard]] Eigen::VectorXcf values_of(const TrigPoly& f) const {
        if (f.basis() != *basis) throw std::invalid_argument("BallSurrogate: basis mismatch");
        return (basis_values * f.coeff()).cast<std::complex<float>>();
    }

    [[nodiscard]] TrigPoly member(int i) const { return TrigPoly(basis, coeff.col(i)); }

    // Appends explicit polynomials as members, so that later covering
    // statements hold for them exactly (not just up to the resolution).
    void append_extras(const std::vector<TrigPoly>& polys) {
        if (polys.empty()) return;
        int old = count();
        coeff.conservativeResize(Eigen::NoChange, old + static_cast<int>(polys.size()));
        values.conservativeResize(Eigen::NoChange, old + static_cast<int>(polys.size()));
        for (int i = 0; i < static_cast<int>(polys.size()); ++i) {
            coeff.col(old + i) = polys[static_cast<std::size_t>(i)].coeff();
            values.col(old + i) = values_of(polys[static_cast<std::size_t>(i)]);
        }
        // extras_begin was fixed at construction time and already marks the
        // boundary between drawn members and appended ones.
    }
};

namespace detail {

inline int real_dimension(int n_basis, bool real_coefficients) {
    return real_coefficients ? n_basis : 2 * n_basis;
}

// coords -> complex coefficient vector (real mode: coords are the real
// parts; complex mode: interleaved re, im).
inline Eigen::VectorXcd coords_to_coeff(const std::vector<double>& t, int n_basis, bool real_coefficients) {
    Eigen::VectorXcd c(n_basis);
    if (real_coefficients)
        for (int i = 0; i < n_basis; ++i) c[i] = t[static_cast<std::size_t>(i)];
    else
        for (int i = 0; i < n_basis; ++i)
            c[i] = std::complex<double>(t[static_cast<std::size_t>(2 * i)], t[static_cast<std::size_t>(2 * i + 1)]);
    return c;
}

} // namespace detail

// Deterministic mesh surrogate for small coefficient dimension (<= 4 real
// coordinates). The coefficient cube [-radius, radius]^D is meshed with
// points_per_axis nodes per axis; mesh points inside the ball are kept and
// near-boundary points are projected radially onto the sphere. Every ball
// point has a member within `resolution` in the grid sup metric:
// the nearest mesh node is at coefficient distance <= h/2 per axis (sup
// distance <= D h/2 since every basis function has modulus 1), and a radial
// projection moves a point by at most its norm excess times the cube's sup
// bound, giving resolution = (D h / 2) (1 + S / radius) with
// S = D * radius >= sup_cube ||f||_inf.
inline BallSurrogate make_mesh_surrogate(FreqSetPtr basis, double q, double radius, const Grid& grid,
                                         int points_per_axis, bool real_coefficients) {
    const int n = basis->size();
    const int D = detail::real_dimension(n, real_coefficients);
    if (D > 4) throw std::domain_error("make_mesh_surrogate: more than 4 real coordinates");
    if (points_per_axis < 3) throw std::domain_error("make_mesh_surrogate: need >= 3 points per axis");
    double total = std::pow(static_cast<double>(points_per_axis), D);
    if (total > 2.2e7) throw std::domain_error("make_mesh_surrogate: mesh too large");

    BallSurrogate s;
    s.basis = basis;
    s.q = q;
    s.radius = radius;
    s.real_coefficients = real_coefficients;
    s.grid = grid;
    s.mode = "mesh";
    s.basis_values = basis_matrix(*basis, grid);

    const double h = 2.0 * radius / (points_per_axis - 1);
    const double coeff_slack = 0.5 * D * h;  // sup distance to nearest node
    s.resolution = coeff_slack * (1.0 + D);
    s.resolution_proven = true;

    std::vector<Eigen::VectorXcd> kept_coeff;
    std::vector<Eigen::VectorXcf> kept_values;
    std::vector<double> t(static_cast<std::size_t>(D));
    std::vector<int> digit(static_cast<std::size_t>(D), 0);
    auto total_i = static_cast<std::uint64_t>(total + 0.5);
    for (std::uint64_t idx = 0; idx < total_i; ++idx) {
        for (int a = 0; a < D; ++a)
            t[static_cast<std::size_t>(a)] = -radius + h * digit[static_cast<std::size_t>(a)];
        Eigen::VectorXcd c = detail::coords_to_coeff(t, n, real_coefficients);
        Eigen::VectorXcd v = s.basis_values * c;
        double rho = norm_lq_from_values(v, q);
        bool keep = rho <= radius;
        if (!keep && rho <= radius + coeff_slack && rho > 0.0) {
            double scale = radius / rho;  // radial projection onto the sphere
            c *= scale;
            v *= scale;
            keep = true;
        }
        if (keep) {
            kept_coeff.push_back(std::move(c));
            kept_values.push_back(v.cast<std::complex<float>>());
        }
        for (int a = 0; a < D; ++a) {
            if (++digit[static_cast<std::size_t>(a)] < points_per_axis) break;
            digit[static_cast<std::size_t>(a)] = 0;
        }
    }
    if (kept_coeff.empty()) throw surrogate_too_coarse("make_mesh_surrogate: no mesh point inside the ball");

    s.coeff.resize(n, static_cast<int>(kept_coeff.size()));
    s.values.resize(static_cast<Eigen::Index>(grid.total_nodes()), static_cast<int>(kept_coeff.size()));
    for (int i = 0; i < static_cast<int>(kept_coeff.size()); ++i) {
        s.coeff.col(i) = kept_coeff[static_cast<std::size_t>(i)];
        s.values.col(i) = kept_values[static_cast<std::size_t>(i)];
    }
    s.extras_begin = s.count();
    return s;
}

// Random cloud surrogate: Gaussian directions normalized to the grid q-norm
// sphere, scaled by radius * u^{1/D} so the radial law matches a uniform
// draw from a D-real-dimensional body. The covering resolution is estimated
// with held-out probe draws (it is an estimate, not a certificate; callers
// that need exact coverage for specific functions append them as extras).
inline BallSurrogate make_cloud_surrogate(FreqSetPtr basis, double q, double radius, const Grid& grid,
                                          int count, std::uint64_t seed, bool real_coefficients = false,
                                          int probes = 64) {
    if (count < 1) throw std::domain_error("make_cloud_surrogate: count must be >= 1");
    const int n = basis->size();
    const int D = detail::real_dimension(n, real_coefficients);

    BallSurrogate s;
    s.basis = basis;
    s.q = q;
    s.radius = radius;
    s.real_coefficients = real_coefficients;
    s.grid = grid;
    s.mode = "cloud";
    s.basis_values = basis_matrix(*basis, grid);

    auto draw_member = [&](Rng& rng) -> Eigen::VectorXcd {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::VectorXcd c(n);
            if (real_coefficients)
                for (int i = 0; i < n; ++i) c[i] = rng.gaussian();
            else
                for (int i = 0; i < n; ++i) c[i] = rng.cgaussian();
            double u = rng.uniform01();
            Eigen::VectorXcd v = s.basis_values * c;
            double rho = norm_lq_from_values(v, q);
            if (rho <= 1e-12) continue;
            double scale = radius * std::pow(u, 1.0 / D) / rho;
            return c * scale;
        }
        throw degenerate_draw("make_cloud_surrogate: repeated near-zero draws");
    };

    s.coeff.resize(n, count);
    s.values.resize(static_cast<Eigen::Index>(grid.total_nodes()), count);
    {
        Rng rng(Rng::mix(seed, 0));
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXcd c = draw_member(rng);
            s.coeff.col(i) = c;
            s.values.col(i) = (s.basis_values * c).cast<std::complex<float>>();
        }
    }
    s.extras_begin = count;

    // Probe-based resolution estimate: worst distance from a fresh draw to
    // the cloud.
    {
        Rng rng(Rng::mix(seed, 1));
        double worst = 0.0;
        for (int p = 0; p < probes; ++p) {
            Eigen::VectorXcf pv = (s.basis_values * draw_member(rng)).cast<std::complex<float>>();
            float best = std::numeric_limits<float>::infinity();
            for (int j = 0; j < count; ++j) best = std::min(best, s.dist_to_column(pv.data(), j, best));
            worst = std::max(worst, static_cast<double>(best));
        }
        s.resolution = worst;
        s.resolution_proven = false;
    }
    return s;
}

// Farthest-point ordering of the surrogate members. order[0] = 0; each next
// center is the member farthest from the chosen prefix (ties -> lowest
// index). prefix_radius[t] is the covering radius of the first t+1 ordered
// members over the whole surrogate, so it is nonincreasing in t and any
// prefix is a valid net at its recorded radius.
struct CoverOrdering {
    std::vector<int> order;
    std::vector<int> pos_in_order;     // inverse permutation
    std::vector<float> prefix_radius;  // prefix_radius[t]: radius of first t+1
    std::vector<float> dist_to_full;   // final distance field (diagnostics)

    // Smallest prefix size whose radius is <= eps, or -1 if even the full
    // ordering cannot cover at eps.
    [[nodiscard]] int covering_prefix(double eps) const {
        auto it = std::upper_bound(prefix_radius.begin(), prefix_radius.end(), static_cast<float>(eps),
                                   [](float a, float b) { return a > b; });
        if (it == prefix_radius.end()) return -1;
        return static_cast<int>(it - prefix_radius.begin()) + 1;
    }
};

inline CoverOrdering build_cover_ordering(const BallSurrogate& s, int max_centers = -1, int threads = 1) {
    const int n = s.count();
    if (max_centers < 0 || max_centers > n) max_centers = n;
    CoverOrdering co;
    co.order.reserve(static_cast<std::size_t>(max_centers));
    co.prefix_radius.reserve(static_cast<std::size_t>(max_centers));
    co.pos_in_order.assign(static_cast<std::size_t>(n), -1);
    std::vector<float> d(static_cast<std::size_t>(n), std::numeric_limits<float>::infinity());

    int next = 0;
    for (int t = 0; t < max_centers; ++t) {
        co.order.push_back(next);
        co.pos_in_order[static_cast<std::size_t>(next)] = t;
        const std::complex<float>* center = s.values.col(next).data();
        // Tighten each member's distance-to-prefix; the scan for member i
        // aborts as soon as it proves dist(i, center) >= d[i].
        int chunks = std::max(1, threads * 4);
        parallel_chunks(static_cast<std::size_t>(n), static_cast<std::size_t>(chunks), threads,
                        [&](std::size_t, std::size_t lo, std::size_t hi) {
                            for (std::size_t i = lo; i < hi; ++i) {
                                if (d[i] == 0.0f) continue;
                                float di = s.dist_to_column(center, static_cast<int>(i), d[i]);
                                if (di < d[i]) d[i] = di;
                            }
                        });
        float worst = -1.0f;
        int arg = -1;
        for (int i = 0; i < n; ++i)
            if (d[static_cast<std::size_t>(i)] > worst) {
                worst = d[static_cast<std::size_t>(i)];
                arg = i;
            }
        co.prefix_radius.push_back(worst);
        if (worst == 0.0f) break;  // every member is already a center or duplicate
        next = arg;
    }
    co.dist_to_full = std::move(d);
    return co;
}

} // namespace samdisc
