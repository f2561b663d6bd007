#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>
#include <sstream>

#include "samdisc/freq_set.hpp"

using namespace samdisc;

TEST_CASE("dyadic coordinate ranges") {
    CHECK(dyadic_coordinate_range(0) == std::vector<int>{0});
    CHECK(dyadic_coordinate_range(1) == std::vector<int>{-1, 1});
    CHECK(dyadic_coordinate_range(2) == std::vector<int>{-3, -2, 2, 3});
    CHECK(dyadic_coordinate_range(3) == std::vector<int>{-7, -6, -5, -4, 4, 5, 6, 7});
    CHECK_THROWS_AS(dyadic_coordinate_range(-1), std::domain_error);
}

TEST_CASE("dyadic blocks") {
    FrequencySet b = rho_block({2});
    REQUIRE(b.size() == 4);
    CHECK(b.freqs() == std::vector<std::vector<int>>{{-3}, {-2}, {2}, {3}});

    FrequencySet b2 = rho_block({0, 1});
    CHECK(b2.freqs() == std::vector<std::vector<int>>{{0, -1}, {0, 1}});

    // block sizes multiply across coordinates
    CHECK(rho_block({1, 2}).size() == 8);
    CHECK_THROWS_AS(rho_block({}), std::domain_error);
}

TEST_CASE("hyperbolic cross small cases") {
    CHECK(hyperbolic_cross(1, 0).freqs() == std::vector<std::vector<int>>{{0}});
    CHECK(hyperbolic_cross(1, 2).size() == 7);
    CHECK(hyperbolic_cross(1, 2).freqs() ==
          std::vector<std::vector<int>>{{-3}, {-2}, {-1}, {0}, {1}, {2}, {3}});
    CHECK(hyperbolic_cross(2, 2).size() == 17);
    // d=3, n=2: 1 + 3*2 + 3*4 + 3*2*2 = 31; d=4, n=2: 1 + 4*2 + 4*4 + 6*4 = 49
    CHECK(hyperbolic_cross(3, 2).size() == 31);
    CHECK(hyperbolic_cross(4, 2).size() == 49);
    CHECK_THROWS_AS(hyperbolic_cross(0, 1), std::domain_error);
    CHECK_THROWS_AS(hyperbolic_cross(1, -1), std::domain_error);
}

TEST_CASE("cross cardinality matches enumeration") {
    for (int d = 1; d <= 3; ++d)
        for (int n = 0; n <= 6; ++n)
            CHECK(hyperbolic_cross_cardinality(d, n) ==
                  static_cast<std::uint64_t>(hyperbolic_cross(d, n).size()));
}

TEST_CASE("cross cardinality closed forms") {
    // d=1: |Q_n| = 2^{n+1} - 1; d=2: |Q_n| = n 2^{n+1} + 1 for n >= 1
    for (int n = 0; n <= 12; ++n)
        CHECK(hyperbolic_cross_cardinality(1, n) == (1ull << (n + 1)) - 1);
    for (int n = 1; n <= 12; ++n)
        CHECK(hyperbolic_cross_cardinality(2, n) ==
              static_cast<std::uint64_t>(n) * (1ull << (n + 1)) + 1);
}

TEST_CASE("canonical ordering and membership") {
    FrequencySet s(1, {{3}, {-1}, {3}, {0}});
    CHECK(s.size() == 3);  // duplicate dropped
    CHECK(s.freqs() == std::vector<std::vector<int>>{{-1}, {0}, {3}});
    CHECK(s.contains({3}));
    CHECK_FALSE(s.contains({2}));
    CHECK(s.kmax() == 3);
    CHECK_FALSE(s.symmetric());

    CHECK(frequency_box(2, 1).size() == 9);
    CHECK(frequency_box(1, 4).symmetric());
    CHECK(hyperbolic_cross(2, 3).symmetric());

    CHECK_THROWS_AS(FrequencySet(2, {{1}}), std::invalid_argument);
}

TEST_CASE("frequency set save/load round trip") {
    FrequencySet s = hyperbolic_cross(2, 2);
    std::string path = "freq_roundtrip.txt";
    s.save(path);
    FrequencySet back = FrequencySet::load(path);
    CHECK(back == s);
    std::remove(path.c_str());

    std::istringstream bad("1 2\nx y\n");
    CHECK_THROWS_AS(FrequencySet::load(bad), io_error);
}
