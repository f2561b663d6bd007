#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

#include "samdisc/grid.hpp"
#include "samdisc/ortho_system.hpp"
#include "samdisc/rng.hpp"
#include "samdisc/trig_poly.hpp"

using namespace samdisc;
using Catch::Approx;

namespace {

// sqrt(2) cos x as an exponential pair: coefficients 1/sqrt(2) on k = +-1.
TrigPoly sqrt2_cos() {
    auto basis = share(FrequencySet(1, {{-1}, {1}}));
    Eigen::VectorXcd c(2);
    c << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return TrigPoly(basis, c);
}

} // namespace

TEST_CASE("grid layout and node order") {
    Grid g(2, 4);
    CHECK(g.total_nodes() == 16);
    CHECK(g.weight() == Approx(1.0 / 16).epsilon(0));
    // node index is little-endian in the coordinates
    CHECK(g.node(0) == std::vector<double>{0.0, 0.0});
    CHECK(g.node(1)[0] == Approx(two_pi / 4));
    CHECK(g.node(1)[1] == 0.0);
    CHECK(g.node(4)[0] == 0.0);
    CHECK(g.node(4)[1] == Approx(two_pi / 4));
    CHECK_THROWS_AS(Grid(1, 0), std::domain_error);
}

TEST_CASE("grid sizes for exact and refined quadrature") {
    CHECK(Grid::required_points(3, 2.0) == 7);    // 2K+1 exact for q=2
    CHECK(Grid::required_points(3, 1.0) == 32);   // max(2K+1, 8(K+1))
    CHECK(Grid::required_points(0, 1.0) == 8);
    Grid ref = Grid::reference_for(frequency_box(1, 3), 2.0);
    CHECK(ref.points_per_dim() == 7);
}

TEST_CASE("polynomial evaluation and basis matrix agree") {
    auto basis = share(hyperbolic_cross(2, 1));
    Grid g(2, 5);
    Eigen::MatrixXcd E = basis_matrix(*basis, g);
    REQUIRE(E.rows() == 25);
    REQUIRE(E.cols() == basis->size());
    for (std::uint64_t t = 0; t < g.total_nodes(); ++t) {
        auto x = g.node(t);
        for (int c = 0; c < basis->size(); ++c) {
            double phase = 0.0;
            for (int l = 0; l < 2; ++l) phase += basis->at(c)[static_cast<std::size_t>(l)] * x[static_cast<std::size_t>(l)];
            std::complex<double> want(std::cos(phase), std::sin(phase));
            CHECK(std::abs(E(static_cast<Eigen::Index>(t), c) - want) < 1e-12);
        }
    }

    TrigPoly f(basis, Eigen::VectorXcd::Random(basis->size()));
    Eigen::VectorXcd v = evaluate_on_grid(f, g);
    for (std::uint64_t t = 0; t < g.total_nodes(); ++t)
        CHECK(std::abs(v[static_cast<Eigen::Index>(t)] - f.evaluate(g.node(t))) < 1e-12);

    // single exponential at a quarter turn
    TrigPoly e1(share(FrequencySet(1, {{1}})), Eigen::VectorXcd::Ones(1));
    auto z = e1.evaluate({two_pi / 4});
    CHECK(z.real() == Approx(0.0).margin(1e-15));
    CHECK(z.imag() == Approx(1.0));
}

TEST_CASE("q=2 grid norm is Parseval-exact at 2K+1 points") {
    auto basis = share(frequency_box(1, 3));
    Rng rng(11);
    Eigen::VectorXcd c(basis->size());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.cgaussian();
    TrigPoly f(basis, c);
    Grid g = Grid::reference_for(*basis, 2.0);
    CHECK(norm_lq(f, 2.0, g) == Approx(f.norm_l2_exact()).epsilon(1e-13));

    Grid tight(1, 6);  // below 2K+1
    CHECK_THROWS_AS(norm_lq(f, 2.0, tight), under_resolved_grid);
}

TEST_CASE("refined odd-q norms of sqrt(2) cos") {
    TrigPoly f = sqrt2_cos();
    // mean |cos| = 2/pi, so ||sqrt2 cos||_1 = 2 sqrt2 / pi
    RefinedNorm n1 = norm_lq_refined(f, 1.0);
    CHECK(n1.value == Approx(0.9003163161571061).epsilon(1e-7));
    // mean cos^4 = 3/8, so ||sqrt2 cos||_4 = (4 * 3/8)^{1/4}
    RefinedNorm n4 = norm_lq_refined(f, 4.0);
    CHECK(n4.value == Approx(std::pow(1.5, 0.25)).epsilon(1e-8));
    // q=2 refinement agrees with Parseval
    RefinedNorm n2 = norm_lq_refined(f, 2.0);
    CHECK(n2.value == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sup norm scans grid maxima") {
    TrigPoly f = sqrt2_cos();
    Grid g(1, 64);
    CHECK(sup_norm(f, g) == Approx(std::sqrt(2.0)).epsilon(1e-12));  // node at x = 0
}

TEST_CASE("norm from raw values") {
    Eigen::VectorXcd v(2);
    v << std::complex<double>(3, 0), std::complex<double>(0, 4);
    // ((27 + 64)/2)^{1/3}
    CHECK(norm_lq_from_values(v, 3.0) == Approx(std::cbrt(45.5)).epsilon(1e-14));
    CHECK(norm_lq_from_values(v, 2.0) == Approx(std::sqrt(12.5)).epsilon(1e-14));
}

TEST_CASE("real orthonormal system") {
    auto basis = share(frequency_box(1, 2));
    RealOrthonormalSystem sys(basis);
    CHECK(sys.size() == 5);
    auto u = sys.values_at({0.0});
    REQUIRE(u.size() == 5);
    CHECK(u[0] == 1.0);                               // constant
    CHECK(u[1] == Approx(std::sqrt(2.0)));            // sqrt2 cos(kx) at 0
    CHECK(u[2] == Approx(0.0).margin(1e-15));         // sqrt2 sin(kx) at 0

    // cos^2 + sin^2 collapses pointwise: t = 1 exactly for the full system
    Grid g(1, 32);
    CHECK(sys.uniform_bound_constant(g) == Approx(1.0).epsilon(1e-12));

    auto cross = share(hyperbolic_cross(2, 2));
    RealOrthonormalSystem sys2(cross);
    CHECK(sys2.size() == cross->size());
    Grid g2(2, 8);
    CHECK(sys2.uniform_bound_constant(g2) == Approx(1.0).epsilon(1e-12));

    // orthonormality on an exact grid: U^T U / nodes = I
    Eigen::MatrixXd U = sys.values_on_grid(Grid::reference_for(*basis, 2.0));
    Eigen::MatrixXd G = U.transpose() * U / static_cast<double>(U.rows());
    CHECK((G - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(RealOrthonormalSystem(share(FrequencySet(1, {{0}, {1}}))), std::invalid_argument);
}

TEST_CASE("polynomial save/load remaps to canonical order") {
    // write frequencies out of order; load must reattach coefficients
    std::string path = "poly_roundtrip.txt";
    {
        std::ofstream os(path);
        os << "2 0.5 -0.25\n";
        os << "-1 1.5 0\n";
        os << "0 0 2\n";
    }
    TrigPoly f = TrigPoly::load(path);
    std::remove(path.c_str());
    REQUIRE(f.basis().size() == 3);
    CHECK(f.basis().freqs() == std::vector<std::vector<int>>{{-1}, {0}, {2}});
    CHECK(f.coeff()[0] == std::complex<double>(1.5, 0));
    CHECK(f.coeff()[1] == std::complex<double>(0, 2));
    CHECK(f.coeff()[2] == std::complex<double>(0.5, -0.25));

    f.save(path);
    TrigPoly back = TrigPoly::load(path);
    std::remove(path.c_str());
    CHECK(back.basis() == f.basis());
    CHECK((back.coeff() - f.coeff()).cwiseAbs().maxCoeff() == 0.0);
}
