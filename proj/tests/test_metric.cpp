#include "doctest.h"

#include "test_support.hpp"
#include "zermelo/errors.hpp"
#include "zermelo/finite_difference.hpp"

#include <cmath>
#include <numbers>

using namespace zermelo;
using namespace zermelo::testing;

namespace {

auto vec(std::initializer_list<double> v) -> Vector
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) out[i++] = c;
    return out;
}

/// Positive root of r^2 (1 - |v|^2) + 2 r <xi, v> - |xi|^2 = 0: the Euclidean Zermelo problem in closed form.
auto randers_closed_form(Vector const& xi, Vector const& v) -> double
{
    auto const a = 1.0 - v.squaredNorm();
    auto const b = xi.dot(v);
    return (-b + std::sqrt(b * b + a * xi.squaredNorm())) / a;
}

/// Direct xi-derivatives of the deformed metric through its own Jet evaluator.
auto direct_gradient(MetricDescriptor const& deformed, PointedVector const& pv) -> Vector
{
    return fiber_gradient(deformed, pv);
}

}  // namespace

TEST_CASE("finsler_eval")
{
    auto const flat = euclidean_metric(2);
    CHECK(finsler_eval(flat, {vec({0, 0}), vec({3, 4})}) == doctest::Approx(5.0));
    auto const sphere = sphere_stereographic_metric(2);
    CHECK(finsler_eval(sphere, {vec({0, 0}), vec({1, 0})}) == doctest::Approx(2.0));

    Sampler s(1);
    for (auto const& fx : fixtures()) {
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        for (int k = 0; k < 20; ++k) {
            auto pv = s.pointed(fx.base, fx.sample_radius);
            auto const f1 = finsler_eval(deformed, pv);
            pv.xi *= 2.0;
            CHECK(finsler_eval(deformed, pv) == doctest::Approx(2.0 * f1).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(finsler_eval(flat, {vec({0, 0}), vec({0, 0})}), DomainError);
    auto const perturbed = perturbed_sphere_metric(2, 0.1);
    CHECK_THROWS_AS(finsler_eval(perturbed, {vec({-20, 0}), vec({1, 0})}), DomainError);
}

TEST_CASE("fundamental_tensor")
{
    Sampler s(2);
    auto const flat = euclidean_metric(2);
    auto const sphere = sphere_stereographic_metric(2);
    for (int k = 0; k < 20; ++k) {
        auto const pv = s.pointed(flat, 2.0);
        CHECK(max_abs(fundamental_tensor(flat, pv).g - Matrix::Identity(2, 2)) < 1e-14);
        auto const x = pv.x;
        auto const factor = 2.0 / (1.0 + x.squaredNorm());
        auto const g1 = fundamental_tensor(sphere, pv).g;
        auto const g2 = fundamental_tensor(sphere, {x, s.direction(2)}).g;
        CHECK(relative_error(g1, factor * factor * Matrix::Identity(2, 2)) < 1e-13);
        CHECK(relative_error(g1, g2) < 1e-13);
    }

    // Euler identity g(xi, xi) = F^2 on the deformed metrics, plus positive definiteness.
    for (auto const& fx : fixtures()) {
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        for (int k = 0; k < 100; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            auto const g = fundamental_tensor(deformed, pv);
            auto const f = finsler_eval(deformed, pv);
            CHECK(std::abs(g.norm_squared(pv.xi) - f * f) <= 1e-10 * f * f);
            CHECK(g.min_eigenvalue() > 0.0);
        }
    }
}

TEST_CASE("zermelo_eval against the Randers closed form")
{
    auto const flat = euclidean_metric(2);
    auto const wind = constant_wind(vec({0.5, 0.0}));
    CHECK(std::abs(zermelo_eval(flat, wind, {vec({0, 0}), vec({1, 0})}) - 2.0 / 3.0) < 1e-13);
    CHECK(std::abs(zermelo_eval(flat, wind, {vec({0, 0}), vec({-1, 0})}) - 2.0) < 1e-13);

    Sampler s(3);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        Vector const v = s.direction(2) * s.uniform(0.0, 0.95);
        Vector const xi = s.direction(2) * s.uniform(0.1, 5.0);
        auto const got = zermelo_eval(flat, constant_wind(v), {s.in_ball(2, 3.0), xi});
        worst = std::max(worst, std::abs(got - randers_closed_form(xi, v)));
    }
    CHECK(worst < 1e-12);

    SUBCASE("zero wind is the identity")
    {
        auto const calm = constant_wind(vec({0, 0}));
        auto const sphere = sphere_stereographic_metric(2);
        for (int k = 0; k < 20; ++k) {
            auto const pv = s.pointed(sphere, 2.0, s.uniform(0.1, 3.0));
            CHECK(zermelo_eval(sphere, calm, pv) == finsler_eval(sphere, pv));
        }
    }
    SUBCASE("near-critical wind still converges")
    {
        auto const strong = constant_wind(vec({0.999, 0.0}));
        auto const r = zermelo_eval(flat, strong, {vec({0, 0}), vec({-1, 0})});
        CHECK(std::abs(r - randers_closed_form(vec({-1, 0}), vec({0.999, 0}))) < 1e-9);
    }
    SUBCASE("wind dimension must match")
    {
        CHECK_THROWS_AS(zermelo_eval(flat, constant_wind(vec({0.1, 0, 0})), {vec({0, 0}), vec({1, 0})}),
                        std::invalid_argument);
    }
    SUBCASE("inadmissible wind")
    {
        CHECK_THROWS_AS(zermelo_eval(flat, constant_wind(vec({1.5, 0})), {vec({0, 0}), vec({1, 0})}),
                        AdmissibilityError);
    }
}

TEST_CASE("defining identity and unit-sphere translation")
{
    Sampler s(4);
    for (auto const& fx : fixtures()) {
        CAPTURE(fx.name);
        for (int k = 0; k < 100; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            Vector const v = fx.wind(pv.x);
            auto const r = zermelo_eval(fx.base, fx.wind, pv);
            CHECK(std::abs(fx.base.value(pv.x, pv.xi - r * v) - r) <= 1e-12 * r);

            auto const unit = s.pointed(fx.base, fx.sample_radius);
            Vector const shifted = unit.xi + fx.wind(unit.x);
            CHECK(std::abs(zermelo_eval(fx.base, fx.wind, {unit.x, shifted}) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("evaluation-point accessors are inverse to each other")
{
    Sampler s(5);
    for (auto const& fx : fixtures()) {
        for (int k = 0; k < 20; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            Vector const deformed = deformed_argument(fx.base, fx.wind, pv);
            Vector const back = base_argument(fx.base, fx.wind, {pv.x, deformed});
            CHECK((back - pv.xi).norm() <= 1e-12 * pv.xi.norm());
            CHECK(zermelo_eval(fx.base, fx.wind, {pv.x, deformed}) ==
                  doctest::Approx(finsler_eval(fx.base, pv)).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradient transfer")
{
    Sampler s(6);
    auto const calm = constant_wind(vec({0, 0}));
    auto const sphere = sphere_stereographic_metric(2);
    for (int k = 0; k < 10; ++k) {
        auto const pv = s.pointed(sphere, 2.0);
        CHECK((zermelo_gradient(sphere, calm, pv) - fiber_gradient(sphere, pv)).norm() < 1e-14);
    }
    for (auto const& fx : fixtures()) {
        CAPTURE(fx.name);
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        for (int k = 0; k < 100; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            Vector const transferred = zermelo_gradient(fx.base, fx.wind, pv);
            PointedVector const at{pv.x, deformed_argument(fx.base, fx.wind, pv)};
            Vector const direct = direct_gradient(deformed, at);
            CHECK((transferred - direct).norm() <= 1e-9 * direct.norm());

            PointedVector const doubled{pv.x, 2.0 * pv.xi};
            CHECK((zermelo_gradient(fx.base, fx.wind, doubled) - transferred).norm() <= 1e-12 * direct.norm());
        }
    }
}

TEST_CASE("Hessian transfer")
{
    Sampler s(7);
    auto const calm = constant_wind(vec({0, 0}));
    auto const sphere = sphere_stereographic_metric(2);
    for (int k = 0; k < 10; ++k) {
        auto const pv = s.pointed(sphere, 2.0);
        CHECK(relative_error(zermelo_hessian(sphere, calm, pv), fiber_hessian(sphere, pv)) < 1e-14);
    }
    for (auto const& fx : fixtures()) {
        CAPTURE(fx.name);
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        double worst = 0.0;
        double worst_euler = 0.0;
        for (int k = 0; k < 100; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            PointedVector const at{pv.x, deformed_argument(fx.base, fx.wind, pv)};
            Matrix const h = zermelo_hessian(fx.base, fx.wind, pv);
            worst = std::max(worst, relative_error(h, fiber_hessian(deformed, at)));
            worst_euler = std::max(worst_euler, (h * at.xi).norm() / (max_abs(h) * at.xi.norm()));
        }
        CHECK(worst < 1e-8);
        CHECK(worst_euler < 1e-12);
    }
}

TEST_CASE("reduced Hessian and fundamental-tensor forms agree only on dF-null vectors")
{
    Sampler s(8);
    auto const fx = fixtures()[2];
    double off_null = 0.0;
    for (int k = 0; k < 50; ++k) {
        auto const pv = s.pointed(fx.base, fx.sample_radius);
        Vector const df = fiber_gradient(fx.base, pv);
        Vector const j = Vector{{-df[1], df[0]}};
        Matrix const full = zermelo_hessian(fx.base, fx.wind, pv);
        Matrix const reduced = zermelo_hessian_reduced(fx.base, fx.wind, pv);
        CHECK(std::abs(j.dot((full - reduced) * j)) <= 1e-13 * std::abs(j.dot(full * j)));
        off_null = std::max(off_null, relative_error(reduced, full));

        auto const g_full = zermelo_fundamental(fx.base, fx.wind, pv);
        auto const g_reduced = zermelo_fundamental_reduced(fx.base, fx.wind, pv);
        CHECK(g_reduced.norm_squared(j) == doctest::Approx(g_full.norm_squared(j)).epsilon(1e-12));
    }
    CHECK(off_null > 1e-3);
}

TEST_CASE("fundamental tensor transfer")
{
    Sampler s(9);
    auto const calm = constant_wind(vec({0, 0, 0}));
    auto const sphere = sphere_stereographic_metric(3);
    for (int k = 0; k < 10; ++k) {
        auto const pv = s.pointed(sphere, 2.0, 1.7);
        CHECK(relative_error(zermelo_fundamental(sphere, calm, pv).g, fundamental_tensor(sphere, pv).g) < 1e-14);
    }
    for (auto const& fx : fixtures()) {
        CAPTURE(fx.name);
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            PointedVector const at{pv.x, deformed_argument(fx.base, fx.wind, pv)};
            auto const transferred = zermelo_fundamental(fx.base, fx.wind, pv);
            worst = std::max(worst, relative_error(transferred.g, fundamental_tensor(deformed, at).g));
            CHECK(transferred.min_eigenvalue() > 0.0);
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("transfer formulas against finite differences of the scalar solver")
{
    // Independent of every Jet path: central differences of zermelo_eval itself.
    Sampler s(10);
    for (auto const& fx : fixtures()) {
        CAPTURE(fx.name);
        for (int k = 0; k < 10; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius);
            Vector const at = deformed_argument(fx.base, fx.wind, pv);
            ScalarFunction f = [&](std::span<double const> xi) {
                return zermelo_eval(fx.base, fx.wind, {pv.x, Eigen::Map<Vector const>(xi.data(), xi.size())});
            };
            std::vector<double> point(at.data(), at.data() + at.size());
            Vector const grad = zermelo_gradient(fx.base, fx.wind, pv);
            Matrix const hess = zermelo_hessian(fx.base, fx.wind, pv);
            for (int i = 0; i < fx.base.dim(); ++i) {
                MultiIndex a{};
                a[i] = 1;
                CHECK(fd_oracle(f, point, a, {1e-4}) == doctest::Approx(grad[i]).epsilon(1e-4));
                for (int j = 0; j < fx.base.dim(); ++j) {
                    MultiIndex b{};
                    ++b[i];
                    ++b[j];
                    CHECK(std::abs(fd_oracle(f, point, b, {1e-3, true}) - hess(i, j)) <= 1e-4 * (1 + max_abs(hess)));
                }
            }
        }
    }
}

TEST_CASE("orthogonality_residual")
{
    auto const flat = euclidean_metric(2);
    auto const zero = orthogonality_residual(flat, {vec({0, 0}), vec({1, 0})}, vec({0, 1}));
    CHECK(zero.tensor_form == 0.0);
    CHECK(zero.covector_form == 0.0);

    Sampler s(11);
    for (auto const& fx : fixtures()) {
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        for (int k = 0; k < 100; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius, s.uniform(0.2, 3.0));
            Vector const u = s.direction(fx.base.dim()) * s.uniform(0.1, 2.0);
            auto const p = orthogonality_residual(deformed, pv, u);
            CHECK(p.discrepancy() <= 1e-11 * std::max(std::abs(p.tensor_form), 1.0));
            auto const self = orthogonality_residual(deformed, pv, pv.xi);
            auto const f = finsler_eval(deformed, pv);
            CHECK(self.tensor_form == doctest::Approx(f * f).epsilon(1e-11));
        }
    }
}

TEST_CASE("tangency transport: dF-null vectors at xi stay dF~-null at xi + v")
{
    Sampler s(12);
    for (auto const& fx : fixtures()) {
        if (fx.base.dim() != 2) continue;
        auto const deformed = make_zermelo_metric(fx.base, fx.wind);
        for (int k = 0; k < 50; ++k) {
            auto const pv = s.pointed(fx.base, fx.sample_radius);
            Vector const df = fiber_gradient(fx.base, pv);
            Vector const j = Vector{{-df[1], df[0]}}.normalized();
            Vector const dft = fiber_gradient(deformed, {pv.x, pv.xi + fx.wind(pv.x)});
            CHECK(std::abs(dft.dot(j)) < 1e-10);
        }
    }
}

TEST_CASE("check_admissible")
{
    auto const flat = euclidean_metric(2);
    std::vector<Vector> grid;
    for (int i = -30; i <= 30; ++i)
        for (int j = -30; j <= 30; ++j) grid.push_back(vec({i * 0.1, j * 0.1}));

    auto const mild = check_admissible(flat, constant_wind(vec({0.5, 0})), grid);
    CHECK(mild.max_strength == doctest::Approx(0.5));
    CHECK(mild.pass);
    auto const strong = check_admissible(flat, constant_wind(vec({1.5, 0})), grid);
    CHECK(strong.max_strength == doctest::Approx(1.5));
    CHECK_FALSE(strong.pass);

    // 2 omega |x| / (1 + |x|^2) peaks at omega on the equator |x| = 1.
    auto const katok = check_admissible(sphere_stereographic_metric(2), stereographic_rotation_wind(2, 0.9), grid);
    CHECK(katok.max_strength == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(katok.pass);
    CHECK(katok.worst_point.norm() == doctest::Approx(1.0));
}
