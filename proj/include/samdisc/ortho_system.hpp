#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "samdisc/grid.hpp"
#include "samdisc/freq_set.hpp"

namespace samdisc {

// Real orthonormal basis of the span of {exp(i<k,x>) : k in Q} for a
// symmetric Q: the constant 1 for k = 0 and the pair
// sqrt(2)cos<k,x>, sqrt(2)sin<k,x> for each canonical representative k
// (first nonzero coordinate positive). Orthonormal in L_2 of the torus
// with normalized measure.
class RealOrthonormalSystem {
  public:
    explicit RealOrthonormalSystem(FreqSetPtr basis) : basis_(std::move(basis)) {
        if (!basis_->symmetric())
            throw std::invalid_argument("RealOrthonormalSystem: frequency set must be symmetric");
        for (int i = 0; i < basis_->size(); ++i) {
            const auto& k = basis_->at(i);
            int sign = 0;
            for (int v : k)
                if (v != 0) { sign = v > 0 ? 1 : -1; break; }
            if (sign == 0) has_constant_ = true;
            else if (sign > 0) reps_.push_back(k);
        }
    }

    [[nodiscard]] int size() const {
        return (has_constant_ ? 1 : 0) + 2 * static_cast<int>(reps_.size());
    }
    [[nodiscard]] int dim() const { return basis_->dim(); }
    [[nodiscard]] const FrequencySet& span_basis() const { return *basis_; }

    // Order: [1], then for each representative k: sqrt(2)cos, sqrt(2)sin.
    [[nodiscard]] std::vector<double> values_at(const std::vector<double>& x) const {
        std::vector<double> u;
        u.reserve(static_cast<std::size_t>(size()));
        if (has_constant_) u.push_back(1.0);
        const double r2 = std::sqrt(2.0);
        for (const auto& k : reps_) {
            double a = 0.0;
            for (int l = 0; l < dim(); ++l) a += k[static_cast<std::size_t>(l)] * x[static_cast<std::size_t>(l)];
            u.push_back(r2 * std::cos(a));
            u.push_back(r2 * std::sin(a));
        }
        return u;
    }

    [[nodiscard]] Eigen::MatrixXd values_on_grid(const Grid& grid) const {
        Eigen::MatrixXd U(static_cast<Eigen::Index>(grid.total_nodes()), size());
        for (std::uint64_t t = 0; t < grid.total_nodes(); ++t) {
            auto u = values_at(grid.node(t));
            for (int i = 0; i < size(); ++i) U(static_cast<Eigen::Index>(t), i) = u[static_cast<std::size_t>(i)];
        }
        return U;
    }

    // sup_x sqrt(sum_i u_i(x)^2 / N), estimated over grid nodes. Each
    // cos/sin pair contributes 2cos^2 + 2sin^2 = 2 pointwise and the
    // constant contributes 1, so for the full system the value is exactly 1
    // at every point; the grid scan keeps the function honest for subsets.
    [[nodiscard]] double uniform_bound_constant(const Grid& grid) const {
        const double n = size();
        double best = 0.0;
        for (std::uint64_t t = 0; t < grid.total_nodes(); ++t) {
            double w = 0.0;
            for (double ui : values_at(grid.node(t))) w += ui * ui;
            best = std::max(best, std::sqrt(w / n));
        }
        return best;
    }

  private:
    FreqSetPtr basis_;
    bool has_constant_ = false;
    std::vector<std::vector<int>> reps_;
};

} // namespace samdisc
