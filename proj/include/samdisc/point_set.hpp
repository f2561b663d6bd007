#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "samdisc/errors.hpp"
#include "samdisc/grid.hpp"
#include "samdisc/rng.hpp"
#include "samdisc/trig_poly.hpp"

namespace samdisc {

// A list of sample nodes on the torus [0, 2*pi)^d.
class PointSet {
  public:
    PointSet(int dim, std::vector<std::vector<double>> pts, std::string provenance = "")
        : dim_(dim), pts_(std::move(pts)), provenance_(std::move(provenance)) {
        if (dim_ < 1) throw std::domain_error("PointSet: dim must be >= 1");
        for (const auto& p : pts_)
            if (static_cast<int>(p.size()) != dim_)
                throw std::invalid_argument("PointSet: point dimension mismatch");
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int size() const { return static_cast<int>(pts_.size()); }
    [[nodiscard]] const std::vector<double>& at(int i) const { return pts_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const std::vector<std::vector<double>>& points() const { return pts_; }
    [[nodiscard]] const std::string& provenance() const { return provenance_; }

    static PointSet sample_uniform(int dim, int m, Rng& rng) {
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(dim)));
        for (auto& p : pts)
            for (double& x : p) x = rng.uniform(0.0, two_pi);
        return PointSet(dim, std::move(pts), "uniform");
    }

    // m equispaced nodes 2*pi*j/m on the circle.
    static PointSet equispaced(int m) {
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m), std::vector<double>(1));
        for (int j = 0; j < m; ++j) pts[static_cast<std::size_t>(j)][0] = two_pi * j / m;
        return PointSet(1, std::move(pts), "equispaced");
    }

    // Text format: header "dim m", then one point per line, %.17g coordinates.
    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw io_error("PointSet::save: cannot open " + path);
        out << dim_ << ' ' << size() << '\n';
        char buf[32];
        for (const auto& p : pts_) {
            for (int l = 0; l < dim_; ++l) {
                std::snprintf(buf, sizeof buf, "%.17g", p[static_cast<std::size_t>(l)]);
                out << (l ? " " : "") << buf;
            }
            out << '\n';
        }
        if (!out) throw io_error("PointSet::save: write failed for " + path);
    }

    static PointSet load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("PointSet::load: cannot open " + path);
        int dim = 0, m = 0;
        if (!(in >> dim >> m) || dim < 1 || m < 0)
            throw io_error("PointSet::load: bad header in " + path);
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(dim)));
        for (auto& p : pts)
            for (double& x : p)
                if (!(in >> x)) throw io_error("PointSet::load: truncated data in " + path);
        return PointSet(dim, std::move(pts), "file:" + path);
    }

    [[nodiscard]] Eigen::MatrixXd matrix() const {
        Eigen::MatrixXd X(size(), dim_);
        for (int i = 0; i < size(); ++i)
            for (int l = 0; l < dim_; ++l) X(i, l) = pts_[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
        return X;
    }

  private:
    int dim_;
    std::vector<std::vector<double>> pts_;
    std::string provenance_;
};

// All grid nodes as a point set (the sampled norm over it reproduces the
// grid quadrature norm exactly).
inline PointSet grid_points(const Grid& grid) {
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(grid.total_nodes()));
    for (std::uint64_t t = 0; t < grid.total_nodes(); ++t) pts.push_back(grid.node(t));
    return PointSet(grid.dim(), std::move(pts), "grid");
}

// (1/m sum_nu |f(xi_nu)|^q)^{1/q}.
[[nodiscard]] inline double sampled_norm(const TrigPoly& f, double q, const PointSet& xi) {
    if (q < 1.0 || !std::isfinite(q)) throw std::domain_error("sampled_norm: q must be finite and >= 1");
    if (xi.size() == 0) throw std::invalid_argument("sampled_norm: empty point set");
    double acc = 0.0;
    for (int i = 0; i < xi.size(); ++i) {
        double a = std::abs(f.evaluate(xi.at(i)));
        acc += q == 2.0 ? a * a : std::pow(a, q);
    }
    return std::pow(acc / xi.size(), 1.0 / q);
}

// exp(i <k, xi_nu>) matrix, size m x N: row per node, column per frequency.
inline Eigen::MatrixXcd basis_at_points(const FrequencySet& basis, const PointSet& xi) {
    if (basis.dim() != xi.dim()) throw std::invalid_argument("basis_at_points: dim mismatch");
    Eigen::MatrixXcd E(xi.size(), basis.size());
    for (int i = 0; i < xi.size(); ++i) {
        const auto& x = xi.at(i);
        for (int c = 0; c < basis.size(); ++c) {
            const auto& k = basis.at(c);
            double a = 0.0;
            for (int l = 0; l < basis.dim(); ++l) a += k[static_cast<std::size_t>(l)] * x[static_cast<std::size_t>(l)];
            E(i, c) = std::complex<double>(std::cos(a), std::sin(a));
        }
    }
    return E;
}

} // namespace samdisc
