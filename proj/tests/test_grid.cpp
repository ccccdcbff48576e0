#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "carplan/grid.hpp"

using namespace carplan;

namespace {
GridSpec paper_grid() { return GridSpec(-1, 1, -1, 1, 200, 200, 200); }
}  // namespace

TEST_CASE("node_config maps corner, midpoint and the goal node") {
    const GridSpec g = paper_grid();
    const Config corner = g.node_config(0, 0, 0);
    CHECK(corner.x == -1.0);
    CHECK(corner.y == -1.0);
    CHECK(corner.theta == 0.0);

    const Config mid = g.node_config(100, 100, 0);
    CHECK(mid.x == Catch::Approx(0.0).margin(1e-15));
    CHECK(mid.y == Catch::Approx(0.0).margin(1e-15));

    const Config goal = g.node_config(150, 150, 0);
    CHECK(goal.x == Catch::Approx(0.5).margin(1e-14));
    CHECK(goal.y == Catch::Approx(0.5).margin(1e-14));
    CHECK(goal.theta == 0.0);
}

TEST_CASE("node_config rejects out-of-range indices") {
    const GridSpec g = paper_grid();
    CHECK_THROWS_AS(g.node_config(-1, 0, 0), std::out_of_range);
    CHECK_THROWS_AS(g.node_config(0, 201, 0), std::out_of_range);
    CHECK_THROWS_AS(g.node_config(0, 0, 200), std::out_of_range);  // k == ntheta wraps to 0 conceptually, not a node
}

TEST_CASE("nearest_node snaps exact nodes, periodic wrap, and rounding") {
    const GridSpec g = paper_grid();
    CHECK(g.nearest_node(Config(0.5, 0.5, 0)) == NodeIndex{150, 150, 0});
    CHECK(g.nearest_node(Config(0.5, 0.5, kTwoPi - g.dtheta / 4)) == NodeIndex{150, 150, 0});
    CHECK(g.nearest_node(Config(0.5 + 0.4 * g.dx, 0.5, 0)) == NodeIndex{150, 150, 0});
    CHECK_THROWS_AS(g.nearest_node(Config(1.5, 0, 0)), std::domain_error);
}

TEST_CASE("nearest_node breaks exact midpoints toward the lower index") {
    const GridSpec g(-1, 1, -1, 1, 4, 4, 4);  // dx = 0.5, nodes at -1,-0.5,0,...
    CHECK(g.nearest_node(Config(-0.75, -1, 0)).i == 0);
    CHECK(g.nearest_node(Config(-0.25, -1, 0)).i == 1);
    CHECK(g.nearest_node(Config(-1, -0.25, 0)).j == 1);
}

TEST_CASE("nearest_node inverts node_config on every node") {
    const GridSpec g(-2, 3, 0.5, 1.5, 9, 7, 6);
    for (int i = 0; i <= g.nx; ++i)
        for (int j = 0; j <= g.ny; ++j)
            for (int k = 0; k < g.ntheta; ++k)
                REQUIRE(g.nearest_node(g.node_config(i, j, k)) == NodeIndex{i, j, k});
}

TEST_CASE("trilinear sample reproduces constants and linear fields") {
    const GridSpec g(-1, 1, -1, 1, 20, 20, 16);
    Field3 constant(g, 3.0);
    CHECK(constant.sample(Config(0.123, -0.456, 2.0)) == Catch::Approx(3.0).margin(1e-13));

    Field3 linear(g, 0.0);
    for (int i = 0; i <= g.nx; ++i)
        for (int j = 0; j <= g.ny; ++j)
            for (int k = 0; k < g.ntheta; ++k) linear.at(i, j, k) = g.node_config(i, j, k).x;
    CHECK(linear.sample(Config(0.3, 0, 1)) == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("trilinear sample is exact on random affine fields") {
    const GridSpec g(-1, 1, -1, 1, 16, 12, 8);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2, 2), pos(-0.9, 0.9), ang(0, kTwoPi);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = coef(rng), beta = coef(rng), gamma = coef(rng);
        Field3 f(g, 0.0);
        for (int i = 0; i <= g.nx; ++i)
            for (int j = 0; j <= g.ny; ++j)
                for (int k = 0; k < g.ntheta; ++k) {
                    const Config q = g.node_config(i, j, k);
                    f.at(i, j, k) = alpha * q.x + beta * q.y + gamma;
                }
        const Config q(pos(rng), pos(rng), ang(rng));
        REQUIRE(f.sample(q) == Catch::Approx(alpha * q.x + beta * q.y + gamma).margin(1e-12));
    }
}

TEST_CASE("one INF corner poisons the sample") {
    const GridSpec g(-1, 1, -1, 1, 4, 4, 4);
    Field3 f(g, 1.0);
    f.at(2, 2, 1) = kInf;
    // query inside the cell whose corner (2,2,1) is INF
    CHECK(f.sample(Config(0.1, 0.1, 0.3 * g.dtheta + g.dtheta)) == kInf);
    // a cell that does not touch the INF node is unaffected
    CHECK(f.sample(Config(-0.7, -0.7, 0.1)) == Catch::Approx(1.0));
}

TEST_CASE("sampling is periodic in theta") {
    const GridSpec g(-1, 1, -1, 1, 8, 8, 8);
    Field3 f(g, 0.0);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> val(0, 5), pos(-1, 1), ang(0, kTwoPi);
    for (int i = 0; i <= g.nx; ++i)
        for (int j = 0; j <= g.ny; ++j)
            for (int k = 0; k < g.ntheta; ++k) f.at(i, j, k) = val(rng);
    for (int trial = 0; trial < 25; ++trial) {
        const double x = pos(rng), y = pos(rng), th = ang(rng);
        REQUIRE(f.sample(Config(x, y, th)) == f.sample(Config(x, y, th + kTwoPi)));
        REQUIRE(f.sample(Config(x, y, th)) == f.sample(Config(x, y, th - kTwoPi)));
    }
}

TEST_CASE("sample outside the spatial domain throws") {
    const GridSpec g(-1, 1, -1, 1, 4, 4, 4);
    Field3 f(g, 1.0);
    CHECK_THROWS_AS(f.sample(Config(1.0001, 0, 0)), std::domain_error);
    CHECK_THROWS_AS(f.sample(Config(0, -1.0001, 0)), std::domain_error);
}

TEST_CASE("central gradient of x-linear and theta-linear fields") {
    const GridSpec g(-1, 1, -1, 1, 20, 20, 20);
    Field3 fx(g, 0.0), ftheta(g, 0.0);
    for (int i = 0; i <= g.nx; ++i)
        for (int j = 0; j <= g.ny; ++j)
            for (int k = 0; k < g.ntheta; ++k) {
                fx.at(i, j, k) = g.node_config(i, j, k).x;
                ftheta.at(i, j, k) = k * g.dtheta;  // unwrapped theta values
            }

    const auto gx = fx.gradient(Config(0.15, -0.2, 2.5));
    REQUIRE(gx.has_value());
    CHECK(gx->ux == Catch::Approx(1.0).margin(1e-9));
    CHECK(gx->uy == Catch::Approx(0.0).margin(1e-9));
    CHECK(gx->utheta == Catch::Approx(0.0).margin(1e-9));

    // interior theta patch, away from the wrap discontinuity at 0/2pi
    const auto gt = ftheta.gradient(Config(0.15, -0.2, kTwoPi / 2));
    REQUIRE(gt.has_value());
    CHECK(gt->ux == Catch::Approx(0.0).margin(1e-9));
    CHECK(gt->uy == Catch::Approx(0.0).margin(1e-9));
    CHECK(gt->utheta == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("gradient reports undefined when the stencil touches INF") {
    const GridSpec g(-1, 1, -1, 1, 8, 8, 8);
    Field3 f(g, 1.0);
    f.at(5, 4, 0) = kInf;
    const Config q = g.node_config(4, 4, 0);
    CHECK_FALSE(f.gradient(q).has_value());
    CHECK(f.gradient(g.node_config(2, 2, 4)).has_value());
}
