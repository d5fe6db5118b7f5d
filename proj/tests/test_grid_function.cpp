#include <catch2/catch_amalgamated.hpp>

#include "autocorr/grid_function.hpp"
#include "oracles.hpp"

#include <cmath>

using autocorr::GridFunction;

TEST_CASE("l1_norm is the exact cell sum times h") {
    CHECK(autocorr::l1_norm(GridFunction(0.0, 0.5, {1, 2, 1})) == 2.0);
    CHECK(autocorr::l1_norm(GridFunction(0.0, 0.25, {1, 1, 1, 1})) == 1.0);
    CHECK(autocorr::l1_norm(GridFunction(-3.0, 1.0, {0, 0})) == 0.0);
}

TEST_CASE("pointwise evaluation: interior, boundary mean, outside") {
    GridFunction f(0.0, 1.0, {1});
    CHECK(autocorr::eval_lebesgue(f, 0.5) == 1.0);
    CHECK(autocorr::eval_lebesgue(f, 0.0) == 0.5);
    CHECK(autocorr::eval_lebesgue(f, 1.0) == 0.5);
    CHECK(autocorr::eval_lebesgue(f, -1.0) == 0.0);

    GridFunction g(0.0, 0.5, {1, 3});
    CHECK(autocorr::eval_lebesgue(g, 0.5) == 2.0);   // interior cell edge
    CHECK(autocorr::eval_lebesgue(g, 0.75) == 3.0);
}

TEST_CASE("pointwise evaluation agrees with the oracle at random points") {
    oracle::Rng rng(11);
    std::vector<double> v(17);
    for (auto& x : v) x = rng.uniform();
    GridFunction f(-1.25, 0.25, v);
    oracle::Step s{-1.25, 0.25, v};
    for (int i = 0; i < 10000; ++i) {
        const double x = -3.0 + 8.0 * rng.uniform();
        CHECK(autocorr::eval_lebesgue(f, x) == oracle::eval_step(s, x));
    }
}

TEST_CASE("support hull and nonzero cells") {
    auto h = autocorr::support_hull(GridFunction(0.0, 1.0, {0, 1, 0, 2, 0}));
    CHECK(h.a == 1.0);
    CHECK(h.b == 4.0);
    CHECK(h.nonzero_cells == std::vector<std::size_t>{1, 3});

    auto h2 = autocorr::support_hull(GridFunction(-1.0, 0.5, {3}));
    CHECK(h2.a == -1.0);
    CHECK(h2.b == -0.5);
    CHECK(h2.nonzero_cells == std::vector<std::size_t>{0});

    CHECK_THROWS_AS(autocorr::support_hull(GridFunction(0.0, 1.0, {0, 0})),
                    autocorr::ZeroFunction);
}

TEST_CASE("shape classification by second differences") {
    using autocorr::ShapeClass;
    CHECK(autocorr::shape_class(GridFunction(0, 1, {2, 1, 2}), 0.0) == ShapeClass::convex);
    CHECK(autocorr::shape_class(GridFunction(0, 1, {1, 2, 1}), 0.0) == ShapeClass::concave);
    CHECK(autocorr::shape_class(GridFunction(0, 1, {1, 2, 1, 2}), 0.0) == ShapeClass::neither);
    // fewer than 3 nonzero cells, or a gap, is degenerate
    CHECK(autocorr::shape_class(GridFunction(0, 1, {1, 1}), 0.0) == ShapeClass::degenerate);
    CHECK(autocorr::shape_class(GridFunction(0, 1, {1, 0, 1, 1}), 0.0) == ShapeClass::degenerate);
    // affine-on-support ties break toward convex
    CHECK(autocorr::shape_class(GridFunction(0, 1, {1, 2, 3}), 0.0) == ShapeClass::convex);
    // convex sequence k^2
    std::vector<double> sq;
    for (int k = 1; k <= 9; ++k) sq.push_back(static_cast<double>(k * k));
    CHECK(autocorr::shape_class(GridFunction(0, 0.5, sq), 0.0) == ShapeClass::convex);
    CHECK_THROWS_AS(autocorr::shape_class(GridFunction(0, 1, {0.0}), 0.0),
                    autocorr::ZeroFunction);
}

TEST_CASE("add_bump raises one cell and extends the grid when needed") {
    GridFunction f(0.0, 1.0, {1});
    auto g = autocorr::add_bump(f, 0.5, 0.1);
    CHECK(g.values() == std::vector<double>{1.1});
    CHECK(autocorr::l1_norm(g) == 1.1);

    auto e = autocorr::add_bump(f, 1.5, 1.0);
    CHECK(e.x0() == 0.0);
    CHECK(e.values() == std::vector<double>{1, 1});

    auto w = autocorr::add_bump(f, -2.5, 2.0);
    CHECK(w.x0() == -3.0);
    CHECK(w.values() == std::vector<double>{2, 0, 0, 1});

    CHECK_THROWS_AS(autocorr::add_bump(f, 0.5, 0.0), autocorr::NonpositiveHeight);
    CHECK_THROWS_AS(autocorr::add_bump(f, 0.5, -1.0), autocorr::NonpositiveHeight);
}

TEST_CASE("move_mass preserves the norm and validates its preconditions") {
    GridFunction f(0.0, 1.0, {1, 1});
    auto g = autocorr::move_mass(f, 1.5, 0.5, 0.2);
    CHECK(g.values() == std::vector<double>{1.2, 0.8});
    CHECK(autocorr::l1_norm(g) == autocorr::l1_norm(f));

    CHECK_THROWS_AS(autocorr::move_mass(f, 1.5, 0.5, 1.5), autocorr::InsufficientMass);
    CHECK_THROWS_AS(autocorr::move_mass(f, 0.2, 0.7, 0.1), autocorr::SameCell);
}

TEST_CASE("norm bookkeeping under perturbation moves") {
    oracle::Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(16);
        for (auto& x : v) x = rng.uniform();
        GridFunction f(0.0, 0.25, v);
        const double n0 = autocorr::l1_norm(f);

        const double height = 0.5 * rng.uniform() + 1e-6;
        const double x1 = 4.0 * rng.uniform();
        auto b = autocorr::add_bump(f, x1, height);
        CHECK(autocorr::l1_norm(b) == Catch::Approx(n0 + height * 0.25).epsilon(1e-12));

        const std::size_t from = static_cast<std::size_t>(rng.uniform() * 16) % 16;
        const std::size_t to = (from + 5) % 16;
        const double amount = 0.5 * v[from] * 0.25;
        if (amount > 0) {
            auto moved = autocorr::move_mass(f, 0.25 * (from + 0.5), 0.25 * (to + 0.5), amount);
            CHECK(autocorr::l1_norm(moved) == Catch::Approx(n0).epsilon(1e-12));
        }
    }
}

TEST_CASE("translation leaves norms and shape untouched") {
    std::vector<double> v{0.5, 2.0, 1.0, 0.25};
    GridFunction f(0.0, 0.5, v);
    GridFunction g(17.75, 0.5, v);
    CHECK(autocorr::l1_norm(f) == autocorr::l1_norm(g));
    CHECK(autocorr::shape_class(f, 0.0) == autocorr::shape_class(g, 0.0));
}

TEST_CASE("constructor rejects malformed input") {
    CHECK_THROWS(GridFunction(0.0, 0.0, {1.0}));
    CHECK_THROWS(GridFunction(0.0, -1.0, {1.0}));
    CHECK_THROWS(GridFunction(0.0, 1.0, {1.0, -0.5}));
    CHECK_THROWS(GridFunction(0.0, 1.0, {std::nan("")}));
    CHECK_THROWS(GridFunction(0.0, 1.0, {}));
}

TEST_CASE("refine_half is an exact resampling") {
    GridFunction f(-0.5, 0.5, {1, 2, 0.25});
    auto g = autocorr::refine_half(f);
    CHECK(g.h() == 0.25);
    CHECK(g.x0() == -0.5);
    CHECK(g.values() == std::vector<double>{1, 1, 2, 2, 0.25, 0.25});
    CHECK(autocorr::l1_norm(g) == autocorr::l1_norm(f));
    oracle::Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double x = -1.0 + 3.0 * rng.uniform();
        CHECK(autocorr::eval_lebesgue(f, x) == autocorr::eval_lebesgue(g, x));
    }
}
