#include "zermelo/transport.hpp"

#include "zermelo/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace zermelo {

auto track_along(GeodesicTrajectory const& geodesic, bool with_curvature) -> CurvatureTrack
{
    CurvatureTrack track{geodesic, {}, {}, {}};
    auto const& metric = geodesic.metric;
    auto const count = geodesic.size();
    track.connection.reserve(count);
    track.tensor.reserve(count);
    if (with_curvature) track.curvature.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto const pv = geodesic.pointed(k);
        if (with_curvature) {
            auto const s = spray(metric, pv);
            track.connection.push_back(s.dG_dxi);
            track.curvature.push_back(riemann_operator(s, pv.xi).R);
        } else {
            track.connection.push_back(connection_coefficients(metric, pv));
        }
        track.tensor.push_back(fundamental_tensor(metric, pv));
    }
    return track;
}

auto time_derivative(std::span<Vector const> field, double spacing) -> std::vector<Vector>
{
    auto const m = field.size();
    if (m < 5) throw std::invalid_argument("time_derivative: needs at least 5 samples");
    std::vector<Vector> d(m);
    auto const c = 1.0 / (12.0 * spacing);
    auto const& f = field;
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t k = 2; k + 2 < m; ++k) d[k] = c * (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]);
    d[m - 2] = c * (3.0 * f[m - 1] + 10.0 * f[m - 2] - 18.0 * f[m - 3] + 6.0 * f[m - 4] - f[m - 5]);
    d[m - 1] = c * (25.0 * f[m - 1] - 48.0 * f[m - 2] + 36.0 * f[m - 3] - 16.0 * f[m - 4] + 3.0 * f[m - 5]);
    return d;
}

auto covariant_derivative_along(CurvatureTrack const& track, std::span<Vector const> field, int stride)
    -> std::vector<Vector>
{
    auto const s = static_cast<std::size_t>(stride);
    if (field.empty() || (field.size() - 1) * s >= track.geodesic.size())
        throw std::invalid_argument("covariant_derivative_along: field is not sampled on the geodesic grid");
    auto d = time_derivative(field, track.geodesic.step * stride);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += track.connection[k * s] * field[k];
    return d;
}

auto covariant_derivative_along(GeodesicTrajectory const& geodesic, std::span<Vector const> field)
    -> std::vector<Vector>
{
    return covariant_derivative_along(track_along(geodesic, false), field, 1);
}

auto JacobiTrajectory::fields() const -> std::vector<Vector>
{
    std::vector<Vector> out;
    out.reserve(samples.size());
    for (auto const& s : samples) out.push_back(s.J);
    return out;
}

auto JacobiTrajectory::derivatives() const -> std::vector<Vector>
{
    std::vector<Vector> out;
    out.reserve(samples.size());
    for (auto const& s : samples) out.push_back(s.DJ);
    return out;
}

auto integrate_jacobi(CurvatureTrack const& track, Vector const& J0, Vector const& DJ0) -> JacobiTrajectory
{
    if (!track.has_curvature()) throw std::invalid_argument("integrate_jacobi: track lacks curvature");
    auto const& g = track.geodesic;
    double const h = 2.0 * g.step;
    JacobiTrajectory out{2, h, {}};
    Vector J = J0;
    Vector P = DJ0;
    out.samples.push_back({g.samples[0].t, J, P});
    auto rhs = [&](std::size_t k, Vector const& j, Vector const& p) {
        auto const& N = track.connection[k];
        return std::pair<Vector, Vector>{p - N * j, -track.curvature[k] * j - N * p};
    };
    for (std::size_t k = 0; k + 2 < g.size(); k += 2) {
        auto const [a1, b1] = rhs(k, J, P);
        auto const [a2, b2] = rhs(k + 1, J + 0.5 * h * a1, P + 0.5 * h * b1);
        auto const [a3, b3] = rhs(k + 1, J + 0.5 * h * a2, P + 0.5 * h * b2);
        auto const [a4, b4] = rhs(k + 2, J + h * a3, P + h * b3);
        J += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        P += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        out.samples.push_back({g.samples[k + 2].t, J, P});
    }
    return out;
}

auto integrate_jacobi(GeodesicTrajectory const& geodesic, Vector const& J0, Vector const& DJ0) -> JacobiTrajectory
{
    return integrate_jacobi(track_along(geodesic, true), J0, DJ0);
}

auto jacobi_equation_residual(CurvatureTrack const& track, std::span<Vector const> field, int stride) -> double
{
    auto const s = static_cast<std::size_t>(stride);
    auto const d1 = covariant_derivative_along(track, field, stride);
    auto const d2 = covariant_derivative_along(track, d1, stride);
    double worst = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k)
        worst = std::max(worst, (d2[k] + track.curvature[k * s] * field[k]).norm());
    return worst;
}

auto jacobi_equation_residual(CurvatureTrack const& track, JacobiTrajectory const& jacobi) -> double
{
    auto const s = static_cast<std::size_t>(jacobi.stride);
    auto const p = jacobi.derivatives();
    auto const dp = covariant_derivative_along(track, p, jacobi.stride);
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        worst = std::max(worst, (dp[k] + track.curvature[k * s] * jacobi.samples[k].J).norm());
    return worst;
}

auto skoro_identity_residual(CurvatureTrack const& track, JacobiTrajectory const& jacobi) -> SecondVariationReport
{
    auto const s = static_cast<std::size_t>(jacobi.stride);
    auto const m = jacobi.samples.size();
    if (m < 5) throw std::invalid_argument("skoro_identity_residual: needs at least 5 samples");
    std::vector<double> length_sq(m);
    for (std::size_t k = 0; k < m; ++k) length_sq[k] = track.tensor[k * s].norm_squared(jacobi.samples[k].J);

    SecondVariationReport report;
    auto const h = jacobi.step;
    for (std::size_t k = 2; k + 2 < m; ++k) {
        auto const second = (-length_sq[k - 2] + 16.0 * length_sq[k - 1] - 30.0 * length_sq[k] +
                             16.0 * length_sq[k + 1] - length_sq[k + 2]) /
                            (12.0 * h * h);
        auto const left = 0.5 * second;

        auto const& g = track.tensor[k * s];
        auto const& velocity = track.geodesic.samples[k * s].xi;
        auto const& J = jacobi.samples[k].J;
        auto const& DJ = jacobi.samples[k].DJ;
        double curvature_term = 0.0;
        try {
            auto const K = flag_curvature(g, CurvatureOperator{track.curvature[k * s]}, velocity, J);
            auto const area = g.norm_squared(velocity) * g.norm_squared(J) - std::pow(g.inner(velocity, J), 2);
            curvature_term = -K * area;
        } catch (DegenerateFlagError const&) {
            // J parallel to the velocity: the flag area vanishes
        }
        auto const right = curvature_term + g.norm_squared(DJ);
        report.max_discrepancy = std::max(report.max_discrepancy, std::abs(left - right));
        report.right_scale = std::max(report.right_scale, std::abs(right));
    }
    return report;
}

auto orthonormal_frame(FundamentalTensor const& g, Vector const& xi) -> std::vector<Vector>
{
    auto const n = xi.size();
    std::vector<Vector> frame;
    frame.push_back(xi / std::sqrt(g.norm_squared(xi)));
    for (Eigen::Index e = 0; e < n && static_cast<Eigen::Index>(frame.size()) < n; ++e) {
        Vector u = Vector::Unit(n, e);
        for (auto const& f : frame) u -= g.inner(f, u) * f;
        auto const len = std::sqrt(g.norm_squared(u));
        if (len > 1e-6) frame.push_back(u / len);
    }
    return frame;
}

namespace {

void gram_schmidt(FundamentalTensor const& g, std::vector<Vector>& vectors)
{
    for (std::size_t a = 0; a < vectors.size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) vectors[a] -= g.inner(vectors[b], vectors[a]) * vectors[b];
        vectors[a] /= std::sqrt(g.norm_squared(vectors[a]));
    }
}

}  // namespace

auto parallel_frame(CurvatureTrack const& track, std::vector<Vector> const& initial, int reorthonormalize_every)
    -> std::vector<std::vector<Vector>>
{
    auto const& geo = track.geodesic;
    double const h = 2.0 * geo.step;
    std::vector<std::vector<Vector>> fields(initial.size());
    std::vector<Vector> current = initial;
    for (std::size_t a = 0; a < current.size(); ++a) fields[a].push_back(current[a]);
    int step = 0;
    for (std::size_t k = 0; k + 2 < geo.size(); k += 2) {
        for (auto& e : current) {
            Vector const a1 = -track.connection[k] * e;
            Vector const a2 = -track.connection[k + 1] * (e + 0.5 * h * a1);
            Vector const a3 = -track.connection[k + 1] * (e + 0.5 * h * a2);
            Vector const a4 = -track.connection[k + 2] * (e + h * a3);
            e += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        }
        if (++step % reorthonormalize_every == 0) gram_schmidt(track.tensor[k + 2], current);
        for (std::size_t a = 0; a < current.size(); ++a) fields[a].push_back(current[a]);
    }
    return fields;
}

auto curvature_derivative_residual(CurvatureTrack const& track, int reorthonormalize_every) -> double
{
    if (!track.has_curvature()) throw std::invalid_argument("curvature_derivative_residual: track lacks curvature");
    auto const frame0 = orthonormal_frame(track.tensor[0], track.geodesic.samples[0].xi);
    auto const frame = parallel_frame(track, frame0, reorthonormalize_every);
    double worst = 0.0;
    for (auto const& e : frame) {
        std::vector<Vector> image(e.size());
        for (std::size_t k = 0; k < e.size(); ++k) image[k] = track.curvature[2 * k] * e[k];
        auto const d_image = covariant_derivative_along(track, image, 2);
        auto const d_e = covariant_derivative_along(track, e, 2);
        for (std::size_t k = 0; k < e.size(); ++k) {
            Vector const r = d_image[k] - track.curvature[2 * k] * d_e[k];
            worst = std::max(worst, std::sqrt(std::max(0.0, track.tensor[2 * k].norm_squared(r))));
        }
    }
    return worst;
}

auto jacobi_derivative_defect(CurvatureTrack const& track, JacobiTrajectory const& jacobi) -> double
{
    auto const s = static_cast<std::size_t>(jacobi.stride);
    std::vector<Vector> second(jacobi.samples.size());
    for (std::size_t k = 0; k < second.size(); ++k) second[k] = -(track.curvature[k * s] * jacobi.samples[k].J);
    auto const third = covariant_derivative_along(track, second, jacobi.stride);
    double worst = 0.0;
    for (std::size_t k = 0; k < second.size(); ++k)
        worst = std::max(worst, (third[k] + track.curvature[k * s] * jacobi.samples[k].DJ).norm());
    return worst;
}

auto local_symmetry_residual(MetricDescriptor const& metric, PointedVector const& start, double duration,
                             LocalSymmetryOptions const& options) -> LocalSymmetryReport
{
    auto steps = static_cast<int>(std::lround(duration * options.steps_per_unit_time));
    steps += steps % 2;
    auto const geodesic = integrate_geodesic(metric, start, duration, steps, options.geodesic);
    LocalSymmetryReport report;
    report.complete = geodesic.complete;
    report.diagnostic = geodesic.diagnostic;
    if (geodesic.size() < 11) throw std::runtime_error("local_symmetry_residual: geodesic too short");
    auto const track = track_along(geodesic, true);
    report.residual = curvature_derivative_residual(track);

    // Alternate route: D J of Jacobi fields started from the parallel frame must again be Jacobi.
    auto const frame = orthonormal_frame(track.tensor[0], start.xi);
    for (std::size_t a = 1; a < frame.size(); ++a) {
        auto const from_value = integrate_jacobi(track, frame[a], Vector::Zero(metric.dim()));
        auto const from_slope = integrate_jacobi(track, Vector::Zero(metric.dim()), frame[a]);
        report.jacobi_defect = std::max(
            {report.jacobi_defect, jacobi_derivative_defect(track, from_value), jacobi_derivative_defect(track, from_slope)});
    }
    return report;
}

}  // namespace zermelo
