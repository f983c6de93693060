#include "zermelo/models.hpp"
#include "zermelo/verify.hpp"
#include "zermelo/zermelo.hpp"

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace zermelo::verify {
namespace {

auto join(std::vector<std::string> const& lines) -> std::string
{
    std::string out = "invalid scenario:";
    for (auto const& line : lines) out += "\n  " + line;
    return out;
}

/// Reads typed values out of a TOML table, recording type errors and unknown keys instead of throwing.
class Reader
{
  public:
    Reader(toml::table const* table, std::string path, std::vector<std::string>& violations)
        : table_(table), path_(std::move(path)), violations_(violations)
    {
    }

    auto sub(std::string const& key, std::set<std::string> const& known) -> Reader
    {
        toml::table const* child = nullptr;
        if (table_) {
            if (auto const* node = table_->get(key)) {
                child = node->as_table();
                if (!child) violations_.push_back(qualified(key) + ": expected a table");
            }
        }
        Reader out(child, qualified(key), violations_);
        out.check_keys(known);
        return out;
    }

    auto has(std::string const& key) const -> bool { return table_ && table_->contains(key); }

    void number(std::string const& key, double& target)
    {
        auto const* node = lookup(key);
        if (!node) return;
        if (auto v = node->value<double>()) target = *v;
        else violations_.push_back(qualified(key) + ": expected a number");
    }

    void integer(std::string const& key, int& target)
    {
        auto const* node = lookup(key);
        if (!node) return;
        if (auto v = node->as_integer()) target = static_cast<int>(v->get());
        else violations_.push_back(qualified(key) + ": expected an integer");
    }

    void seed(std::string const& key, std::uint64_t& target)
    {
        auto const* node = lookup(key);
        if (!node) return;
        auto const* v = node->as_integer();
        if (!v || v->get() < 0) violations_.push_back(qualified(key) + ": expected a non-negative integer");
        else target = static_cast<std::uint64_t>(v->get());
    }

    void string(std::string const& key, std::string& target)
    {
        auto const* node = lookup(key);
        if (!node) return;
        if (auto v = node->value<std::string>()) target = *v;
        else violations_.push_back(qualified(key) + ": expected a string");
    }

    void boolean(std::string const& key, bool& target)
    {
        auto const* node = lookup(key);
        if (!node) return;
        if (auto v = node->value<bool>()) target = *v;
        else violations_.push_back(qualified(key) + ": expected a boolean");
    }

    template <typename T>
    void array(std::string const& key, std::vector<T>& target)
    {
        auto const* node = lookup(key);
        if (!node) return;
        auto const* arr = node->as_array();
        if (!arr) {
            violations_.push_back(qualified(key) + ": expected an array");
            return;
        }
        target.clear();
        for (auto const& item : *arr) {
            if (auto v = item.value<T>()) target.push_back(*v);
            else {
                violations_.push_back(qualified(key) + ": unexpected element type");
                return;
            }
        }
    }

  private:
    auto qualified(std::string const& key) const -> std::string { return path_.empty() ? key : path_ + "." + key; }

    auto lookup(std::string const& key) const -> toml::node const* { return table_ ? table_->get(key) : nullptr; }

    void check_keys(std::set<std::string> const& known)
    {
        if (!table_) return;
        for (auto const& [key, node] : *table_)
            if (!known.contains(std::string(key.str()))) violations_.push_back(qualified(std::string(key.str())) + ": unknown key");
    }

    toml::table const* table_;
    std::string path_;
    std::vector<std::string>& violations_;
};

void positive(std::vector<std::string>& out, std::string const& what, double value)
{
    if (!(value > 0.0) || !std::isfinite(value)) out.push_back(what + " must be positive");
}

void at_least(std::vector<std::string>& out, std::string const& what, int value, int minimum)
{
    if (value < minimum) out.push_back(what + " must be at least " + std::to_string(minimum));
}

auto format_point(Vector const& x) -> std::string
{
    std::ostringstream s;
    s << "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) s << (i ? ", " : "") << x[i];
    s << ")";
    return s.str();
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations))
{
}

auto known_checks() -> std::vector<std::string>
{
    return {std::string(kGeodesicCheck), std::string(kJacobiCheck), std::string(kFlagCheck),
            std::string(kSymmetryCheck)};
}

auto parse_scenario(std::string_view text, std::string const& source) -> ScenarioConfig
{
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (toml::parse_error const& e) {
        std::ostringstream msg;
        msg << source << ": " << e.description() << " at line " << e.source().begin.line;
        throw ScenarioError({msg.str()});
    }

    std::vector<std::string> violations;
    ScenarioConfig c;
    Reader top(&root, "", violations);
    {
        std::set<std::string> const known{"name",   "description", "seed",   "base",  "wind",
                                          "domain", "integrator",  "gate", "checks"};
        for (auto const& [key, node] : root)
            if (!known.contains(std::string(key.str()))) violations.push_back(std::string(key.str()) + ": unknown key");
    }
    top.string("name", c.name);
    top.string("description", c.description);
    top.seed("seed", c.seed);

    auto base = top.sub("base", {"metric", "dim", "scale", "curvature", "tilt"});
    base.string("metric", c.base.metric);
    base.integer("dim", c.base.dim);
    if (c.base.metric == "sphere_stereographic") {
        c.base.scale = 2.0;
        c.base.curvature = 1.0;
    }
    if (c.base.metric == "conformal") {
        base.number("scale", c.base.scale);
        base.number("curvature", c.base.curvature);
        base.number("tilt", c.base.tilt);
    } else {
        for (auto key : {"scale", "curvature", "tilt"})
            if (base.has(key)) violations.push_back(std::string("base.") + key + ": only allowed with metric = \"conformal\"");
    }

    auto wind = top.sub("wind", {"kind", "components", "omega"});
    wind.string("kind", c.wind.kind);
    wind.array("components", c.wind.components);
    wind.number("omega", c.wind.omega);

    auto domain = top.sub("domain", {"radius", "admissibility_samples"});
    domain.number("radius", c.domain_radius);
    domain.integer("admissibility_samples", c.admissibility_samples);

    auto integrator = top.sub("integrator", {"step", "chart_radius"});
    integrator.number("step", c.step);
    integrator.number("chart_radius", c.chart_radius);

    auto gate = top.sub("gate", {"killing_tolerance", "killing_samples"});
    gate.number("killing_tolerance", c.killing_tolerance);
    gate.integer("killing_samples", c.killing_samples);

    std::set<std::string> check_keys{"enabled"};
    for (auto const& name : known_checks()) check_keys.insert(name);
    auto checks = top.sub("checks", check_keys);
    checks.array("enabled", c.checks);

    auto g = checks.sub(std::string(kGeodesicCheck), {"starts", "duration", "start_radius", "tolerance", "speed_tolerance"});
    g.integer("starts", c.geodesic.starts);
    g.number("duration", c.geodesic.duration);
    g.number("start_radius", c.geodesic.start_radius);
    g.number("tolerance", c.geodesic.tolerance);
    g.number("speed_tolerance", c.geodesic.speed_tolerance);

    auto j = checks.sub(std::string(kJacobiCheck),
                        {"geodesics", "fields_per_geodesic", "duration", "start_radius", "residual_tolerance",
                         "orthogonality_tolerance", "ratio_tolerance"});
    j.integer("geodesics", c.jacobi.geodesics);
    j.integer("fields_per_geodesic", c.jacobi.fields_per_geodesic);
    j.number("duration", c.jacobi.duration);
    j.number("start_radius", c.jacobi.start_radius);
    j.number("residual_tolerance", c.jacobi.residual_tolerance);
    j.number("orthogonality_tolerance", c.jacobi.orthogonality_tolerance);
    j.number("ratio_tolerance", c.jacobi.ratio_tolerance);

    auto f = checks.sub(std::string(kFlagCheck), {"flags", "sample_radius", "tolerance", "reference_tolerance"});
    f.integer("flags", c.flag.flags);
    f.number("sample_radius", c.flag.sample_radius);
    f.number("tolerance", c.flag.tolerance);
    f.number("reference_tolerance", c.flag.reference_tolerance);

    auto s = checks.sub(std::string(kSymmetryCheck),
                        {"starts", "duration", "start_radius", "tolerance", "base_tolerance", "contrast",
                         "contrast_epsilon", "contrast_threshold"});
    s.integer("starts", c.symmetry.starts);
    s.number("duration", c.symmetry.duration);
    s.number("start_radius", c.symmetry.start_radius);
    s.number("tolerance", c.symmetry.tolerance);
    s.number("base_tolerance", c.symmetry.base_tolerance);
    s.boolean("contrast", c.symmetry.contrast);
    s.number("contrast_epsilon", c.symmetry.contrast_epsilon);
    s.number("contrast_threshold", c.symmetry.contrast_threshold);

    if (!violations.empty()) throw ScenarioError(violations);
    auto problems = validate(c);
    if (!problems.empty()) throw ScenarioError(problems);
    return c;
}

auto load_scenario(std::filesystem::path const& path) -> ScenarioConfig
{
    std::ifstream in(path);
    if (!in) throw ScenarioError({"cannot open " + path.string()});
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

auto validate(ScenarioConfig const& c) -> std::vector<std::string>
{
    std::vector<std::string> out;
    if (c.name.empty()) out.push_back("name must be set");

    static std::set<std::string> const metrics{"euclidean", "sphere_stereographic", "conformal"};
    bool base_ok = metrics.contains(c.base.metric);
    if (!base_ok) out.push_back("base.metric: unknown metric \"" + c.base.metric + "\"");
    if (c.base.dim < 2 || c.base.dim > 3) {
        out.push_back("base.dim must be 2 or 3");
        base_ok = false;
    }
    if (c.base.metric == "conformal") {
        if (!(c.base.scale > 0.0)) {
            out.push_back("base.scale must be positive");
            base_ok = false;
        }
        if (!std::isfinite(c.base.curvature) || !std::isfinite(c.base.tilt)) {
            out.push_back("base.curvature and base.tilt must be finite");
            base_ok = false;
        }
    }

    static std::set<std::string> const winds{"constant", "planar_rotation", "stereographic_rotation"};
    bool wind_ok = winds.contains(c.wind.kind);
    if (!wind_ok) out.push_back("wind.kind: unknown wind \"" + c.wind.kind + "\"");
    if (c.wind.kind == "constant" && static_cast<int>(c.wind.components.size()) != c.base.dim) {
        out.push_back("wind.components must have base.dim = " + std::to_string(c.base.dim) + " entries");
        wind_ok = false;
    }
    if (c.wind.kind != "constant" && !std::isfinite(c.wind.omega)) {
        out.push_back("wind.omega must be finite");
        wind_ok = false;
    }
    if (c.wind.kind == "stereographic_rotation" && std::abs(c.wind.omega) >= 1.0) {
        std::ostringstream msg;
        msg << "admissibility violated: stereographic rotation with |omega| = " << std::abs(c.wind.omega)
            << " reaches F(x, -v) = |omega| >= 1 on the equator";
        out.push_back(msg.str());
    }

    positive(out, "domain.radius", c.domain_radius);
    at_least(out, "domain.admissibility_samples", c.admissibility_samples, 1);
    positive(out, "integrator.step", c.step);
    positive(out, "integrator.chart_radius", c.chart_radius);
    positive(out, "gate.killing_tolerance", c.killing_tolerance);
    at_least(out, "gate.killing_samples", c.killing_samples, 1);

    auto const known = known_checks();
    std::set<std::string> enabled;
    for (auto const& name : c.checks) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            out.push_back("checks.enabled: unknown check \"" + name + "\"");
        else if (!enabled.insert(name).second)
            out.push_back("checks.enabled: \"" + name + "\" listed twice");
    }

    std::string const g = "checks.geodesic_correspondence.";
    at_least(out, g + "starts", c.geodesic.starts, 1);
    positive(out, g + "duration", c.geodesic.duration);
    positive(out, g + "start_radius", c.geodesic.start_radius);
    positive(out, g + "tolerance", c.geodesic.tolerance);
    positive(out, g + "speed_tolerance", c.geodesic.speed_tolerance);

    std::string const j = "checks.jacobi_correspondence.";
    at_least(out, j + "geodesics", c.jacobi.geodesics, 1);
    at_least(out, j + "fields_per_geodesic", c.jacobi.fields_per_geodesic, 1);
    positive(out, j + "duration", c.jacobi.duration);
    positive(out, j + "start_radius", c.jacobi.start_radius);
    positive(out, j + "residual_tolerance", c.jacobi.residual_tolerance);
    positive(out, j + "orthogonality_tolerance", c.jacobi.orthogonality_tolerance);
    positive(out, j + "ratio_tolerance", c.jacobi.ratio_tolerance);
    if (c.step > 0.0 && c.jacobi.duration > 0.0 && c.jacobi.duration < 20.0 * c.step)
        out.push_back(j + "duration must span at least 20 integrator steps");

    std::string const f = "checks.flag_equality.";
    at_least(out, f + "flags", c.flag.flags, 1);
    positive(out, f + "sample_radius", c.flag.sample_radius);
    positive(out, f + "tolerance", c.flag.tolerance);
    positive(out, f + "reference_tolerance", c.flag.reference_tolerance);

    std::string const s = "checks.local_symmetry.";
    at_least(out, s + "starts", c.symmetry.starts, 1);
    positive(out, s + "duration", c.symmetry.duration);
    positive(out, s + "start_radius", c.symmetry.start_radius);
    positive(out, s + "tolerance", c.symmetry.tolerance);
    positive(out, s + "base_tolerance", c.symmetry.base_tolerance);
    positive(out, s + "contrast_threshold", c.symmetry.contrast_threshold);
    if (c.step > 0.0 && c.symmetry.duration > 0.0 && c.symmetry.duration < 20.0 * c.step)
        out.push_back(s + "duration must span at least 20 integrator steps");

    for (auto [what, radius] : {std::pair{"geodesic_correspondence", c.geodesic.start_radius},
                                std::pair{"jacobi_correspondence", c.jacobi.start_radius},
                                std::pair{"flag_equality", c.flag.sample_radius},
                                std::pair{"local_symmetry", c.symmetry.start_radius}}) {
        if (radius > c.domain_radius)
            out.push_back(std::string("checks.") + what + ": sampling radius exceeds domain.radius");
    }

    if (base_ok && wind_ok && c.domain_radius > 0.0 && c.admissibility_samples > 0) {
        auto const base = build_base(c.base);
        auto const wind = build_wind(c.wind, c.base.dim);
        auto const samples = domain_samples(c);
        for (auto const& x : samples) {
            if (!base.admissible(x)) {
                out.push_back("domain leaves the region where the base metric is defined, e.g. at " + format_point(x));
                return out;
            }
        }
        auto const report = check_admissible(base, wind, samples);
        if (!report.pass) {
            std::ostringstream msg;
            msg << "admissibility violated: max F(x, -v(x)) = " << report.max_strength << " at "
                << format_point(report.worst_point);
            out.push_back(msg.str());
        }
    }
    return out;
}

auto build_base(BaseSpec const& spec) -> MetricDescriptor
{
    if (spec.metric == "euclidean") return euclidean_metric(spec.dim);
    if (spec.metric == "sphere_stereographic") return sphere_stereographic_metric(spec.dim);
    if (spec.metric == "conformal") {
        auto const [scale, curvature, tilt] = std::tuple{spec.scale, spec.curvature, spec.tilt};
        return conformal_metric(
            "conformal", spec.dim,
            [=](std::span<Jet const> x) {
                Jet r2 = x[0] * x[0];
                for (std::size_t i = 1; i < x.size(); ++i) r2 += x[i] * x[i];
                return scale * (1.0 + tilt * x[0]) / (1.0 + curvature * r2);
            },
            [=](Vector const& x) { return 1.0 + tilt * x[0] > 0.0 && 1.0 + curvature * x.squaredNorm() > 0.0; });
    }
    throw std::invalid_argument("unknown base metric " + spec.metric);
}

auto build_wind(WindSpec const& spec, int dim) -> WindField
{
    if (spec.kind == "constant") return constant_wind(Eigen::Map<Vector const>(spec.components.data(), dim));
    if (spec.kind == "planar_rotation") return planar_rotation_wind(dim, spec.omega);
    if (spec.kind == "stereographic_rotation") return stereographic_rotation_wind(dim, spec.omega);
    throw std::invalid_argument("unknown wind " + spec.kind);
}

auto build_scenario(ScenarioConfig const& config) -> Scenario
{
    auto base = build_base(config.base);
    auto wind = build_wind(config.wind, config.base.dim);
    auto deformed = make_zermelo_metric(base, wind);
    return {config, std::move(base), std::move(wind), std::move(deformed)};
}

auto reference_curvature(BaseSpec const& spec) -> std::optional<double>
{
    if (spec.tilt != 0.0) return std::nullopt;
    return 4.0 * spec.curvature / (spec.scale * spec.scale);
}

auto domain_samples(ScenarioConfig const& config) -> std::vector<Vector>
{
    auto const n = config.base.dim;
    auto const r = config.domain_radius;
    std::vector<Vector> out;
    int const ring = 64;
    for (int k = 0; k < ring; ++k) {
        auto const angle = 2.0 * std::numbers::pi * k / ring;
        for (int plane = 0; plane + 1 < n; ++plane) {
            Vector x = Vector::Zero(n);
            x[plane] = r * std::cos(angle);
            x[plane + 1] = r * std::sin(angle);
            out.push_back(x);
        }
    }
    Rng rng(config.seed);
    std::uniform_real_distribution<double> u(-r, r);
    while (static_cast<int>(out.size()) < config.admissibility_samples + ring * (n - 1)) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = u(rng);
        if (x.norm() <= r) out.push_back(x);
    }
    return out;
}

}  // namespace zermelo::verify
