#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qfem/generators.hpp"
#include "qfem/interp.hpp"
#include "qfem/mesh.hpp"

using namespace qfem;

namespace {

PolygonElement square_element(std::initializer_list<Vec2> extra_midside = {}) {
    // unit-square cell with optional hanging nodes (must be edge midpoints)
    PolygonElement e;
    e.cell_bounds = {{0, 0}, {1, 1}};
    std::vector<Vec2> base = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    int id = 0;
    for (int i = 0; i < 4; ++i) {
        e.coords.push_back(base[i]);
        e.node_ids.push_back(id++);
        e.hanging.push_back(false);
        for (const Vec2& m : extra_midside) {
            const Vec2 a = base[i], b = base[(i + 1) % 4];
            if (m.x == 0.5 * (a.x + b.x) && m.y == 0.5 * (a.y + b.y)) {
                e.coords.push_back(m);
                e.node_ids.push_back(id++);
                e.hanging.push_back(true);
            }
        }
    }
    return e;
}

}  // namespace

TEST_CASE("gupta shape: bilinear at center without mid-side nodes") {
    const GuptaShape s = gupta_shape(0.0, 0.0, {false, false, false, false});
    for (int i = 0; i < 4; ++i) CHECK(s.values[i] == doctest::Approx(0.25).epsilon(1e-15));
    for (int i = 4; i < 8; ++i) CHECK(s.values[i] == 0.0);
}

TEST_CASE("gupta shape: Kronecker delta at active mid-side node") {
    const GuptaShape s = gupta_shape(0.0, -1.0, {true, false, false, false});
    CHECK(s.values[4] == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i < 8; ++i)
        if (i != 4) CHECK(std::abs(s.values[i]) < 1e-15);
}

TEST_CASE("gupta shape: Kronecker delta at every node, all masks") {
    const double cx[8] = {-1, 1, 1, -1, 0, 1, 0, -1};
    const double cy[8] = {-1, -1, 1, 1, -1, 0, 1, 0};
    for (int mask_bits = 0; mask_bits < 16; ++mask_bits) {
        const std::array<bool, 4> mask{(mask_bits & 1) != 0, (mask_bits & 2) != 0,
                                       (mask_bits & 4) != 0, (mask_bits & 8) != 0};
        for (int node = 0; node < 8; ++node) {
            if (node >= 4 && !mask[node - 4]) continue;
            const GuptaShape s = gupta_shape(cx[node], cy[node], mask);
            for (int i = 0; i < 8; ++i) {
                if (i >= 4 && !mask[i - 4]) {
                    CHECK(s.values[i] == 0.0);
                    continue;
                }
                CHECK(s.values[i] == doctest::Approx(i == node ? 1.0 : 0.0).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("gupta shape: partition of unity at random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int mask_bits = 0; mask_bits < 16; ++mask_bits) {
        const std::array<bool, 4> mask{(mask_bits & 1) != 0, (mask_bits & 2) != 0,
                                       (mask_bits & 4) != 0, (mask_bits & 8) != 0};
        for (int t = 0; t < 100; ++t) {
            const GuptaShape s = gupta_shape(u(rng), u(rng), mask);
            double sum = 0.0;
            for (double v : s.values) sum += v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("gupta gradients match finite differences away from kink lines") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const std::array<bool, 4> mask{true, true, false, true};
    for (int t = 0; t < 50; ++t) {
        // keep both coordinates off the axes
        const double xi = u(rng) * (t % 2 ? 1.0 : -1.0);
        const double eta = u(rng) * (t % 3 ? 1.0 : -1.0);
        const double h = 1e-7;
        const GuptaShape s = gupta_shape(xi, eta, mask);
        CHECK_FALSE(s.on_gradient_kink);
        const GuptaShape sx1 = gupta_shape(xi + h, eta, mask);
        const GuptaShape sx0 = gupta_shape(xi - h, eta, mask);
        const GuptaShape sy1 = gupta_shape(xi, eta + h, mask);
        const GuptaShape sy0 = gupta_shape(xi, eta - h, mask);
        for (int i = 0; i < 8; ++i) {
            CHECK(s.gradients[i].x ==
                  doctest::Approx((sx1.values[i] - sx0.values[i]) / (2 * h)).epsilon(1e-6));
            CHECK(s.gradients[i].y ==
                  doctest::Approx((sy1.values[i] - sy0.values[i]) / (2 * h)).epsilon(1e-6));
        }
    }
}

TEST_CASE("gupta gradient evaluation on a kink line is flagged") {
    CHECK(gupta_shape(0.0, 0.3, {true, false, false, false}).on_gradient_kink);
    CHECK(gupta_shape(0.0, 0.3, {false, true, false, false}).on_gradient_kink == false);
    CHECK(gupta_shape(0.3, 0.0, {false, true, false, false}).on_gradient_kink);
}

TEST_CASE("laplace shape: symmetry values at centroids") {
    const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const LaplaceShape s = laplace_shape(square, {0.5, 0.5});
    for (int i = 0; i < 4; ++i) CHECK(s.values(i) == doctest::Approx(0.25).epsilon(1e-14));

    std::vector<Vec2> hex;
    for (int i = 0; i < 6; ++i)
        hex.push_back({std::cos(M_PI / 3.0 * i), std::sin(M_PI / 3.0 * i)});
    const LaplaceShape sh = laplace_shape(hex, {0.0, 0.0});
    for (int i = 0; i < 6; ++i) CHECK(sh.values(i) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("laplace shape equals bilinear on rectangles") {
    const Rect r{{0.25, -0.5}, {1.75, 0.5}};
    const std::vector<Vec2> rect = {r.lo, {r.hi.x, r.lo.y}, r.hi, {r.lo.x, r.hi.y}};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(r.lo.x + 0.01, r.hi.x - 0.01);
    std::uniform_real_distribution<double> uy(r.lo.y + 0.01, r.hi.y - 0.01);
    for (int t = 0; t < 50; ++t) {
        const Vec2 p{ux(rng), uy(rng)};
        const LaplaceShape s = laplace_shape(rect, p);
        const Eigen::Vector4d bv = test::bilinear_values(r, p);
        const auto bg = test::bilinear_gradients(r, p);
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(s.values(i) - bv(i)) < 1e-10);
            CHECK((s.gradients.col(i) - bg.col(i)).norm() < 1e-10);
        }
    }
}

TEST_CASE("laplace shape: partition of unity, linear completeness, gradients") {
    std::mt19937 rng(17);
    for (int pc = 0; pc < 20; ++pc) {
        const std::vector<Vec2> poly = test::random_convex_polygon(rng);
        const Vec2 c = polygon_centroid(poly);
        const double diam = polygon_diameter(poly);
        std::uniform_real_distribution<double> blend(0.05, 0.9);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(poly.size()) - 1);
        for (int t = 0; t < 50; ++t) {
            // random interior point: blend centroid toward a vertex
            const Vec2 p = c + blend(rng) * (poly[pick(rng)] - c);
            const LaplaceShape s = laplace_shape(poly, p);
            CHECK(std::abs(s.values.sum() - 1.0) < 1e-12);
            Vec2 xr{0, 0};
            Eigen::Vector2d gsum = Eigen::Vector2d::Zero();
            Eigen::Vector2d gx = Eigen::Vector2d::Zero();
            for (std::size_t i = 0; i < poly.size(); ++i) {
                CHECK(s.values(i) >= -1e-14);
                xr = xr + s.values(i) * poly[i];
                gsum += s.gradients.col(i);
                gx += s.gradients.col(i) * poly[i].x;
            }
            CHECK(distance(xr, p) < 1e-10 * diam);
            CHECK(gsum.norm() < 1e-10 / diam);        // gradient of the constant 1
            CHECK(std::abs(gx(0) - 1.0) < 1e-9);      // gradient of x reproduces e_x
            CHECK(std::abs(gx(1)) < 1e-9);
        }
    }
}

TEST_CASE("laplace analytic gradients agree with the FD fallback") {
    std::mt19937 rng(23);
    LaplaceOptions fd;
    fd.finite_difference_gradients = true;
    for (int pc = 0; pc < 10; ++pc) {
        const std::vector<Vec2> poly = test::random_convex_polygon(rng);
        const Vec2 c = polygon_centroid(poly);
        std::uniform_real_distribution<double> blend(0.1, 0.8);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(poly.size()) - 1);
        for (int t = 0; t < 20; ++t) {
            const Vec2 p = c + blend(rng) * (poly[pick(rng)] - c);
            const LaplaceShape a = laplace_shape(poly, p);
            const LaplaceShape b = laplace_shape(poly, p, fd);
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const double scale = std::max(1.0, a.gradients.col(i).norm());
                CHECK((a.gradients.col(i) - b.gradients.col(i)).norm() / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("laplace shape: Kronecker delta approached along the inward diagonal") {
    const std::vector<Vec2> poly = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Vec2 c = polygon_centroid(poly);
    const double diam = polygon_diameter(poly);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i] + (1e-8 * diam / distance(c, poly[i])) * (c - poly[i]);
        const LaplaceShape s = laplace_shape(poly, p);
        CHECK(s.values(i) >= 1.0 - 1e-4);
    }
}

TEST_CASE("laplace shape rejects boundary and vertex evaluation") {
    const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK_THROWS_AS((void)laplace_shape(square, {0.5, 0.0}), NearSingularEvaluationError);
    CHECK_THROWS_AS((void)laplace_shape(square, {1.0, 1.0}), NearSingularEvaluationError);
    CHECK_THROWS_AS((void)laplace_shape(square, {1.5, 0.5}), NearSingularEvaluationError);
}

TEST_CASE("fem element stiffness: classical bilinear Laplace matrix") {
    const ElementStiffness k = fem_element_stiffness(square_element(), Material::scalar(1.0));
    REQUIRE(k.K.rows() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(k.K(i, i) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
        CHECK(k.K(i, (i + 2) % 4) == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
        CHECK(k.K(i, (i + 1) % 4) == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
    }
}

TEST_CASE("fem element stiffness: symmetry and zero row sums for all masks") {
    const std::vector<std::initializer_list<Vec2>> cases = {
        {},
        {Vec2{0.5, 0.0}},
        {Vec2{1.0, 0.5}, Vec2{0.5, 1.0}},
        {Vec2{0.5, 0.0}, Vec2{1.0, 0.5}, Vec2{0.5, 1.0}, Vec2{0.0, 0.5}},
    };
    for (const auto& ms : cases) {
        const PolygonElement e = square_element(ms);
        const ElementStiffness k = fem_element_stiffness(e, Material::scalar(1.0));
        CHECK(k.asymmetry < 1e-13);
        for (int i = 0; i < k.K.rows(); ++i) CHECK(std::abs(k.K.row(i).sum()) < 1e-12);
        // plane strain: kernel contains the three rigid-body modes
        const ElementStiffness kp = fem_element_stiffness(e, Material::plane_strain(1.0, 0.3));
        const int n = e.size();
        Eigen::MatrixXd R(2 * n, 3);
        for (int i = 0; i < n; ++i) {
            R(2 * i, 0) = 1; R(2 * i + 1, 0) = 0;
            R(2 * i, 1) = 0; R(2 * i + 1, 1) = 1;
            R(2 * i, 2) = -e.coords[i].y; R(2 * i + 1, 2) = e.coords[i].x;
        }
        CHECK((kp.K * R).norm() < 1e-12 * kp.K.norm());
    }
}

TEST_CASE("fem element stiffness rejects two hanging nodes on one edge") {
    PolygonElement e;
    e.cell_bounds = {{0, 0}, {1, 1}};
    const std::vector<Vec2> verts = {{0, 0}, {0.25, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    int id = 0;
    for (const Vec2& v : verts) {
        e.coords.push_back(v);
        e.node_ids.push_back(id++);
        e.hanging.push_back(v.y == 0.0 && v.x != 0.0 && v.x != 1.0);
    }
    CHECK_THROWS_AS((void)fem_element_stiffness(e, Material::scalar(1.0)),
                    TreatmentNotApplicableError);
}

TEST_CASE("pfem element stiffness matches fem on a plain square") {
    const PolygonElement e = square_element();
    const ElementStiffness kf = fem_element_stiffness(e, Material::scalar(1.0));
    const ElementStiffness kp = pfem_element_stiffness(e, Material::scalar(1.0));
    CHECK((kf.K - kp.K).norm() / kf.K.norm() < 1e-8);
}

TEST_CASE("pfem element stiffness: zero row sums and symmetry with hanging nodes") {
    const PolygonElement e = square_element({Vec2{0.5, 0.0}, Vec2{1.0, 0.5}});
    const ElementStiffness k = pfem_element_stiffness(e, Material::scalar(1.0));
    CHECK(k.asymmetry < 1e-13);
    for (int i = 0; i < k.K.rows(); ++i) CHECK(std::abs(k.K.row(i).sum()) < 1e-10);

    // patch consistency: energy of the linear field u = x against itself is
    // the exact Dirichlet energy (area, for unit conductivity); limited by
    // the graded quadrature near the hanging-vertex preimages
    Eigen::VectorXd u(e.size());
    for (int i = 0; i < e.size(); ++i) u(i) = e.coords[i].x;
    CHECK(u.dot(k.K * u) == doctest::Approx(e.area()).epsilon(1e-7));
}
