#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "samdisc/errors.hpp"
#include "samdisc/trig_poly.hpp"

namespace samdisc {

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Upper bounds on ||f||_inf obtained from a grid max carry this documented
// slack factor (the true sup of a trig polynomial between nodes of a
// reference-resolution grid exceeds the node max by less than 1%).
inline constexpr double sup_slack = 1.01;

// Equispaced tensor grid {2*pi*j/M : 0 <= j < M}^d with uniform node weight
// M^-d. Node t has little-endian digits: coordinate l uses j_l = (t / M^l) % M.
class Grid {
  public:
    Grid(int dim, int points_per_dim) : dim_(dim), m_(points_per_dim) {
        if (dim_ < 1) throw std::domain_error("Grid: dim must be >= 1");
        if (m_ < 1) throw std::domain_error("Grid: points_per_dim must be >= 1");
        total_ = 1;
        for (int l = 0; l < dim_; ++l) {
            if (total_ > (1ull << 40) / static_cast<std::uint64_t>(m_))
                throw std::domain_error("Grid: node count overflow");
            total_ *= static_cast<std::uint64_t>(m_);
        }
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int points_per_dim() const { return m_; }
    [[nodiscard]] std::uint64_t total_nodes() const { return total_; }
    [[nodiscard]] double weight() const { return 1.0 / static_cast<double>(total_); }

    [[nodiscard]] std::vector<double> node(std::uint64_t t) const {
        std::vector<double> x(static_cast<std::size_t>(dim_));
        for (int l = 0; l < dim_; ++l) {
            x[static_cast<std::size_t>(l)] = two_pi * static_cast<double>(t % static_cast<std::uint64_t>(m_)) / m_;
            t /= static_cast<std::uint64_t>(m_);
        }
        return x;
    }

    // Quadrature over the M-per-axis grid integrates exp(i<k,x>) exactly when
    // no nonzero alias k == 0 mod M occurs; for |f|^q with polynomial degree
    // K this gives the thresholds below.
    static int required_points(int kmax, double q) {
        int exact2 = 2 * kmax + 1;
        if (q == 2.0) return exact2;
        return std::max(exact2, 8 * (kmax + 1));
    }

    static Grid reference_for(const FrequencySet& basis, double q) {
        return Grid(basis.dim(), required_points(basis.kmax(), q));
    }

  private:
    int dim_;
    int m_;
    std::uint64_t total_ = 1;
};

// nodes x frequencies matrix E with E(t, i) = exp(i <k_i, x_t>).
// Columns are built as iterated Kronecker expansions of per-axis phase rows.
inline Eigen::MatrixXcd basis_matrix(const FrequencySet& basis, const Grid& grid) {
    if (basis.dim() != grid.dim()) throw std::invalid_argument("basis_matrix: dim mismatch");
    const int M = grid.points_per_dim();
    const int kmax = basis.kmax();
    const int d = basis.dim();
    // phase[l] rows for k = -kmax..kmax
    std::vector<Eigen::MatrixXcd> phase(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) {
        Eigen::MatrixXcd p(2 * kmax + 1, M);
        for (int k = -kmax; k <= kmax; ++k)
            for (int j = 0; j < M; ++j) {
                double a = two_pi * k * j / M;
                p(k + kmax, j) = std::complex<double>(std::cos(a), std::sin(a));
            }
        phase[static_cast<std::size_t>(l)] = std::move(p);
    }
    Eigen::MatrixXcd E(static_cast<Eigen::Index>(grid.total_nodes()), basis.size());
    Eigen::VectorXcd col;
    for (int i = 0; i < basis.size(); ++i) {
        const auto& k = basis.at(i);
        col = phase[0].row(k[0] + kmax).transpose();
        for (int l = 1; l < d; ++l) {
            Eigen::VectorXcd next(col.size() * M);
            const auto row = phase[static_cast<std::size_t>(l)].row(static_cast<std::size_t>(k[static_cast<std::size_t>(l)]) + kmax);
            for (int j = 0; j < M; ++j) next.segment(j * col.size(), col.size()) = row(j) * col;
            col = std::move(next);
        }
        E.col(i) = col;
    }
    return E;
}

inline Eigen::VectorXcd evaluate_on_grid(const TrigPoly& f, const Grid& grid) {
    return basis_matrix(f.basis(), grid) * f.coeff();
}

[[nodiscard]] inline double norm_lq_from_values(const Eigen::VectorXcd& values, double q) {
    if (q < 1.0 || !std::isfinite(q)) throw std::domain_error("norm_lq: q must be finite and >= 1");
    const double w = 1.0 / static_cast<double>(values.size());
    if (q == 2.0) return std::sqrt(values.squaredNorm() * w);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) acc += std::pow(std::abs(values[i]), q);
    return std::pow(acc * w, 1.0 / q);
}

// Grid quadrature L_q norm. Exact for q = 2 once M >= 2K+1; for other q it is
// the reference approximation at the documented oversampling (see
// Grid::required_points), and refuses to silently under-resolve.
[[nodiscard]] inline double norm_lq(const TrigPoly& f, double q, const Grid& grid) {
    int need = Grid::required_points(f.basis().kmax(), q);
    if (grid.points_per_dim() < need)
        throw under_resolved_grid("norm_lq: grid has " + std::to_string(grid.points_per_dim()) +
                                  " points per axis, needs >= " + std::to_string(need));
    return norm_lq_from_values(evaluate_on_grid(f, grid), q);
}

// Max |f| over grid nodes: a lower estimate of ||f||_inf. Multiply by
// sup_slack when an upper bound is required (valid at reference resolution).
[[nodiscard]] inline double sup_norm(const TrigPoly& f, const Grid& grid) {
    Eigen::VectorXcd v = evaluate_on_grid(f, grid);
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v[i]));
    return best;
}

struct RefinedNorm {
    double value = 0.0;
    int points_per_dim = 0;
    int doublings = 0;
};

// Doubles the per-axis resolution until the norm stabilizes to 1e-8 relative.
inline RefinedNorm norm_lq_refined(const TrigPoly& f, double q, int start_m = 0, int max_doublings = 12) {
    int m = start_m > 0 ? start_m : Grid::required_points(f.basis().kmax(), q);
    m = std::max(m, Grid::required_points(f.basis().kmax(), q));
    double prev = norm_lq(f, q, Grid(f.dim(), m));
    for (int it = 0; it < max_doublings; ++it) {
        int m2 = 2 * m;
        double cur = norm_lq(f, q, Grid(f.dim(), m2));
        double rel = std::abs(cur - prev) / std::max(1e-300, std::abs(cur));
        m = m2;
        prev = cur;
        if (rel < 1e-8) return {cur, m, it + 1};
    }
    return {prev, m, max_doublings};
}

} // namespace samdisc
