#pragma once

#include <cmath>
#include <complex>

#include "samdisc/grid.hpp"
#include "samdisc/rng.hpp"
#include "samdisc/trig_poly.hpp"

namespace samdisc {

// Draws a polynomial with i.i.d. complex Gaussian coefficients scaled so
// that ||f||_q^q = target (exact Parseval for q = 2, reference-grid
// quadrature otherwise). Retries degenerate draws a few times before
// giving up.
inline TrigPoly random_unit(FreqSetPtr basis, double q, Rng& rng, const Grid* grid = nullptr,
                            double target = 1.0) {
    if (target <= 0.0) throw std::domain_error("random_unit: target must be positive");
    const int max_retries = 8;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        Eigen::VectorXcd c(basis->size());
        for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.cgaussian();
        TrigPoly f(basis, std::move(c));
        double nrm;
        if (q == 2.0 && grid == nullptr) {
            nrm = f.norm_l2_exact();
        } else {
            Grid ref = grid ? *grid : Grid::reference_for(*basis, q);
            nrm = norm_lq(f, q, ref);
        }
        if (nrm > 1e-12 && std::isfinite(nrm))
            return TrigPoly(basis, f.coeff() * (std::pow(target, 1.0 / q) / nrm));
    }
    throw degenerate_draw("random_unit: repeated near-zero draws");
}

// All-ones coefficient vector: the natural candidate maximizing
// ||.||_inf / ||.||_q over the span (its peak at 0 equals N).
inline TrigPoly dirichlet_candidate(FreqSetPtr basis) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Ones(basis->size());
    return TrigPoly(basis, std::move(c));
}

struct NikolskiiEstimate {
    double observed = 0.0;  // max ||f||_inf / ||f||_q seen
    double bound = 0.0;     // 4 B N^{1/q} with B = 1
};

// Analytic uniform-norm bound for the unit L_q ball of an N-dimensional
// trigonometric span: ||f||_inf <= 4 N^{1/q} ||f||_q.
[[nodiscard]] inline double nikolskii_bound(int n_dim, double q, double ball_radius = 1.0) {
    return 4.0 * ball_radius * std::pow(static_cast<double>(n_dim), 1.0 / q);
}

// Empirically probes the inf/q norm ratio with random unit vectors plus the
// all-ones candidate, and reports it next to the proven bound.
inline NikolskiiEstimate nikolskii_ratio(FreqSetPtr basis, double q, int draws, Rng& rng) {
    Grid ref = Grid::reference_for(*basis, q);
    NikolskiiEstimate est;
    est.bound = nikolskii_bound(basis->size(), q);
    auto probe = [&](const TrigPoly& f) {
        double nq = norm_lq(f, q, ref);
        if (nq <= 1e-300) return;
        est.observed = std::max(est.observed, sup_norm(f, ref) / nq);
    };
    probe(dirichlet_candidate(basis));
    for (int i = 0; i < draws; ++i) probe(random_unit(basis, q, rng, &ref));
    return est;
}

} // namespace samdisc
