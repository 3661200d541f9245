#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <spacefill.hpp>

using namespace spacefill;
using Catch::Approx;

TEST_CASE("distance matches closed forms per norm") {
    const Point a{0, 0}, b{3, 4};
    CHECK(distance(a, b, Norm::L2) == Approx(5.0));
    CHECK(distance(a, b, Norm::L1) == Approx(7.0));
    CHECK(distance(a, b, Norm::Linf) == Approx(4.0));
    CHECK(distance(a, a, Norm::L2) == 0.0);
    CHECK_THROWS_AS(distance(a, Point{1}, Norm::L2), std::invalid_argument);
}

TEST_CASE("distance satisfies the triangle inequality") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (const Norm norm : {Norm::L1, Norm::L2, Norm::Linf}) {
        for (int t = 0; t < 200; ++t) {
            const int d = 1 + static_cast<int>(rng() % 5);
            Point x(d), y(d), z(d);
            for (int i = 0; i < d; ++i) {
                x[i] = u(rng);
                y[i] = u(rng);
                z[i] = u(rng);
            }
            CHECK(distance(x, z, norm) <= distance(x, y, norm) + distance(y, z, norm) + 1e-12);
            CHECK(distance(x, y, norm) == distance(y, x, norm));
        }
    }
}

TEST_CASE("norm names round-trip") {
    for (const Norm n : {Norm::L1, Norm::L2, Norm::Linf}) CHECK(norm_from_string(to_string(n)) == n);
    CHECK_THROWS_AS(norm_from_string("l3"), std::invalid_argument);
}

TEST_CASE("lex_less orders coordinatewise") {
    CHECK(lex_less({0, 1}, {1, 0}));
    CHECK(lex_less({1, 0}, {1, 1}));
    CHECK_FALSE(lex_less({1, 1}, {1, 1}));
}

TEST_CASE("domain validation rejects degenerate inputs") {
    CHECK_NOTHROW(validate_domain(Hypercube{{0, 0}, {1, 2}}));
    CHECK_THROWS_AS(validate_domain(Hypercube{{0, 3}, {1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_domain(Hypercube{{0}, {0}}), std::invalid_argument);
    CHECK_NOTHROW(validate_domain(Ball{{0, 0, 0}, 2}));
    CHECK_THROWS_AS(validate_domain(Ball{{0}, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_domain(FiniteSet{{}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_domain(FiniteSet{{{0, 0}, {0, 0}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_domain(FiniteSet{{{0, 0}, {1}}}), std::invalid_argument);
    CHECK_NOTHROW(validate_domain(FiniteSet{{{0, 0}, {0, 1}}}));
}

TEST_CASE("contains is inclusive on boundaries") {
    const Domain cube = Hypercube{{0, 0}, {1, 1}};
    CHECK(contains(cube, {0, 0}));
    CHECK(contains(cube, {1, 1}));
    CHECK_FALSE(contains(cube, {1.0000001, 0.5}));
    const Domain ball = Ball{{0, 0}, 1};
    CHECK(contains(ball, {1, 0}));
    CHECK_FALSE(contains(ball, {1.0000001, 0}));
    const Domain finite = FiniteSet{{{0.25, 0.5}}};
    CHECK(contains(finite, {0.25, 0.5}));
    CHECK_FALSE(contains(finite, {0.25, 0.5000001}));
}

TEST_CASE("default start point per domain kind") {
    CHECK(default_start_point(Hypercube{{0, 0}, {1, 3}}) == Point{0.5, 1.5});
    CHECK(default_start_point(Ball{{2, -1}, 3}) == Point{2, -1});
    CHECK(default_start_point(FiniteSet{{{0.9}, {0.2}, {0.6}}}) == Point{0.2});
}

TEST_CASE("unit ball volumes match closed forms and ordering") {
    CHECK(unit_ball_volume(1, Norm::L1) == Approx(2.0));
    CHECK(unit_ball_volume(1, Norm::L2) == Approx(2.0));
    CHECK(unit_ball_volume(1, Norm::Linf) == Approx(2.0));
    CHECK(unit_ball_volume(2, Norm::L2) == Approx(3.14159265358979324));
    CHECK(unit_ball_volume(2, Norm::L1) == Approx(2.0));
    CHECK(unit_ball_volume(2, Norm::Linf) == Approx(4.0));
    CHECK(unit_ball_volume(3, Norm::L2) == Approx(4.0 * 3.14159265358979324 / 3.0));
    CHECK(unit_ball_volume(3, Norm::L1) == Approx(8.0 / 6.0));
    CHECK(unit_ball_volume(4, Norm::L2) == Approx(9.86960440108935862 / 2.0));
    for (int d = 2; d <= 10; ++d) {
        CHECK(unit_ball_volume(d, Norm::L1) < unit_ball_volume(d, Norm::L2));
        CHECK(unit_ball_volume(d, Norm::L2) < unit_ball_volume(d, Norm::Linf));
    }
    CHECK_THROWS_AS(unit_ball_volume(0, Norm::L2), std::invalid_argument);
}

TEST_CASE("domain volume") {
    CHECK(volume(Hypercube{{0, 0}, {2, 3}}) == Approx(6.0));
    CHECK(volume(Ball{{0, 0}, 2}) == Approx(4 * 3.14159265358979324));
    CHECK_THROWS_AS(volume(FiniteSet{{{0.0}}}), std::invalid_argument);
}

TEST_CASE("boundary distance") {
    const Domain cube = Hypercube{{0, 0}, {1, 1}};
    CHECK(boundary_distance(cube, {0.5, 0.5}) == Approx(0.5));
    CHECK(boundary_distance(cube, {0.25, 0.5}) == Approx(0.25));
    CHECK(boundary_distance(cube, {0, 0.5}) == 0.0);
    const Domain ball = Ball{{0, 0}, 2};
    CHECK(boundary_distance(ball, {0, 0}) == Approx(2.0));
    CHECK(boundary_distance(ball, {1, 0}) == Approx(1.0));
    CHECK_THROWS_AS(boundary_distance(FiniteSet{{{0.0}}}, {0.0}), std::invalid_argument);
}

TEST_CASE("inflated volume: product form for Linf") {
    const Hypercube box{{0, 0}, {1, 2}};
    const auto iv = inflated_volume(box, 0.25, Norm::Linf);
    CHECK(iv.value == Approx(1.5 * 2.5));
    CHECK(iv.std_error == 0.0);
}

TEST_CASE("inflated volume: Steiner formula for L2") {
    const Hypercube sq{{0, 0}, {1, 1}};
    const auto iv = inflated_volume(sq, 0.5, Norm::L2);
    // area + perimeter*r + pi r^2 = 1 + 2 + pi/4
    CHECK(iv.value == Approx(3.0 + 3.14159265358979324 / 4).margin(1e-12));
    CHECK(iv.std_error == 0.0);
    const auto zero = inflated_volume(sq, 0.0, Norm::L2);
    CHECK(zero.value == Approx(1.0));
    CHECK_THROWS_AS(inflated_volume(sq, -0.1, Norm::L2), std::invalid_argument);
}

TEST_CASE("inflated volume: monte carlo for L1 brackets the exact value") {
    const Hypercube sq{{0, 0}, {1, 1}};
    const double r = 0.5;
    // exact: area + 2r*(w1+w2) + 2r^2 (four quarter L1-balls)
    const double exact = 1.0 + 2 * r * 2 + 2 * r * r;
    const auto iv = inflated_volume(sq, r, Norm::L1);
    CHECK(iv.std_error > 0.0);
    CHECK(iv.std_error < 0.01);
    CHECK(std::abs(iv.value - exact) <= 4 * iv.std_error);
    const auto again = inflated_volume(sq, r, Norm::L1);
    CHECK(iv.value == again.value);  // seeded: deterministic
    CHECK(iv.samples == again.samples);
}

TEST_CASE("dyadic grid layout") {
    const Hypercube line{{0}, {1}};
    const FiniteSet g1 = dyadic_grid(line, 1);
    REQUIRE(g1.points.size() == 3);
    CHECK(g1.points[0] == Point{0});
    CHECK(g1.points[1] == Point{0.5});
    CHECK(g1.points[2] == Point{1});

    const Hypercube sq{{0, 0}, {1, 1}};
    const FiniteSet g0 = dyadic_grid(sq, 0);
    REQUIRE(g0.points.size() == 4);
    CHECK(std::is_sorted(g0.points.begin(), g0.points.end(), lex_less));

    const FiniteSet g3 = dyadic_grid(sq, 3);
    CHECK(g3.points.size() == 81);
    CHECK(std::is_sorted(g3.points.begin(), g3.points.end(), lex_less));

    const Hypercube wide{{-1}, {3}};
    const FiniteSet gw = dyadic_grid(wide, 1);
    REQUIRE(gw.points.size() == 3);
    CHECK(gw.points[1] == Point{1});

    CHECK_THROWS_AS(dyadic_grid(sq, -1), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_grid(sq, 20), std::invalid_argument);  // over the point cap
}

TEST_CASE("dyadic grid cover radius bounds distance to the grid") {
    const Hypercube sq{{0, 0}, {1, 1}};
    CHECK(dyadic_grid_cover_radius(sq, 3, Norm::L2) == Approx(std::sqrt(2.0) / 16).margin(1e-15));
    CHECK(dyadic_grid_cover_radius(sq, 3, Norm::Linf) == Approx(1.0 / 16).margin(1e-15));
    CHECK(dyadic_grid_cover_radius(sq, 3, Norm::L1) == Approx(2.0 / 16).margin(1e-15));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    const FiniteSet grid = dyadic_grid(sq, 2);
    for (const Norm norm : {Norm::L1, Norm::L2, Norm::Linf}) {
        const double cover = dyadic_grid_cover_radius(sq, 2, norm);
        for (int t = 0; t < 300; ++t) {
            const Point p{u(rng), u(rng)};
            double best = std::numeric_limits<double>::infinity();
            for (const auto& g : grid.points) best = std::min(best, distance(p, g, norm));
            CHECK(best <= cover + 1e-12);
        }
    }
}
