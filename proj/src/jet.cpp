#include "zermelo/jet.hpp"

#include "zermelo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace zermelo {
namespace detail {

struct ProductTerm
{
    std::uint16_t rhs;
    std::uint16_t target;
};

struct JetLayout
{
    int num_vars = 0;
    int order = 0;
    std::vector<MultiIndex> indices;    // graded enumeration, size C(n+order, order)
    std::vector<std::uint8_t> degrees;  // |a| per position
    std::vector<std::uint32_t> row_begin;
    std::vector<ProductTerm> products;  // grouped by lhs position
    std::vector<int> shift;             // shift[p*n + v] = position of a_p + e_v (or -1)
};

namespace {

auto encode(MultiIndex const& alpha) -> int
{
    int code = 0;
    for (int v = kMaxJetVars - 1; v >= 0; --v) code = code * (kMaxJetOrder + 1) + alpha[v];
    return code;
}

constexpr int kCodeSpace = 15625;  // (kMaxJetOrder + 1)^kMaxJetVars

void enumerate_degree(int num_vars, int degree, int var, MultiIndex& current, std::vector<MultiIndex>& out)
{
    if (var == num_vars - 1) {
        current[var] = static_cast<std::uint8_t>(degree);
        out.push_back(current);
        current[var] = 0;
        return;
    }
    for (int d = degree; d >= 0; --d) {
        current[var] = static_cast<std::uint8_t>(d);
        enumerate_degree(num_vars, degree - d, var + 1, current, out);
    }
    current[var] = 0;
}

auto build_layout(int num_vars, int order) -> JetLayout
{
    JetLayout layout;
    layout.num_vars = num_vars;
    layout.order = order;
    for (int d = 0; d <= order; ++d) {
        MultiIndex current{};
        enumerate_degree(num_vars, d, 0, current, layout.indices);
    }
    auto const size = layout.indices.size();
    std::vector<int> lookup(kCodeSpace, -1);
    for (std::size_t p = 0; p < size; ++p) {
        lookup[encode(layout.indices[p])] = static_cast<int>(p);
        layout.degrees.push_back(static_cast<std::uint8_t>(multi_index_degree(layout.indices[p])));
    }

    layout.row_begin.reserve(size + 1);
    for (std::size_t i = 0; i < size; ++i) {
        layout.row_begin.push_back(static_cast<std::uint32_t>(layout.products.size()));
        for (std::size_t j = 0; j < size; ++j) {
            if (layout.degrees[i] + layout.degrees[j] > order) continue;
            MultiIndex sum{};
            for (int v = 0; v < num_vars; ++v) sum[v] = layout.indices[i][v] + layout.indices[j][v];
            layout.products.push_back(
                {static_cast<std::uint16_t>(j), static_cast<std::uint16_t>(lookup[encode(sum)])});
        }
    }
    layout.row_begin.push_back(static_cast<std::uint32_t>(layout.products.size()));

    layout.shift.assign(size * num_vars, -1);
    for (std::size_t p = 0; p < size; ++p) {
        if (layout.degrees[p] == order) continue;
        for (int v = 0; v < num_vars; ++v) {
            MultiIndex up = layout.indices[p];
            ++up[v];
            layout.shift[p * num_vars + v] = lookup[encode(up)];
        }
    }
    return layout;
}

}  // namespace

auto jet_layout(int num_vars, int order) -> JetLayout const&
{
    static auto const table = [] {
        auto all = std::make_unique<std::array<std::array<JetLayout, kMaxJetOrder + 1>, kMaxJetVars>>();
        for (int n = 1; n <= kMaxJetVars; ++n)
            for (int k = 0; k <= kMaxJetOrder; ++k) (*all)[n - 1][k] = build_layout(n, k);
        return all;
    }();
    if (num_vars < 1 || num_vars > kMaxJetVars)
        throw std::invalid_argument("jet: unsupported number of variables " + std::to_string(num_vars));
    if (order < 0 || order > kMaxJetOrder)
        throw std::invalid_argument("jet: unsupported order " + std::to_string(order));
    return (*table)[num_vars - 1][order];
}

}  // namespace detail

auto multi_index_degree(MultiIndex const& alpha) noexcept -> int
{
    int d = 0;
    for (auto a : alpha) d += a;
    return d;
}

auto multi_index_factorial(MultiIndex const& alpha) noexcept -> double
{
    double f = 1.0;
    for (auto a : alpha)
        for (int k = 2; k <= a; ++k) f *= k;
    return f;
}

Jet::Jet(detail::JetLayout const* layout, std::vector<double> coeffs) : layout_{layout}, coeffs_{std::move(coeffs)}
{}

Jet::Jet(int num_vars, int order, double value)
    : layout_{&detail::jet_layout(num_vars, order)}, coeffs_(layout_->indices.size(), 0.0)
{
    coeffs_[0] = value;
}

auto Jet::variable(int num_vars, int order, int index, double value) -> Jet
{
    if (index < 0 || index >= num_vars) throw std::out_of_range("jet: variable index out of range");
    Jet j(num_vars, order, value);
    if (order >= 1) j.coeffs_[1 + index] = 1.0;
    return j;
}

auto Jet::num_vars() const noexcept -> int { return layout_->num_vars; }
auto Jet::order() const noexcept -> int { return layout_->order; }

auto Jet::multi_index(std::size_t position) const -> MultiIndex const& { return layout_->indices.at(position); }

auto Jet::coeff(MultiIndex const& alpha) const -> double
{
    if (multi_index_degree(alpha) > order()) return 0.0;
    for (int v = num_vars(); v < kMaxJetVars; ++v)
        if (alpha[v] != 0) throw std::out_of_range("jet: multi-index refers to a missing variable");
    auto const& idx = layout_->indices;
    auto it = std::find(idx.begin(), idx.end(), alpha);
    return coeffs_[static_cast<std::size_t>(it - idx.begin())];
}

auto Jet::derivative(MultiIndex const& alpha) const -> double { return coeff(alpha) * multi_index_factorial(alpha); }

auto Jet::gradient_entry(int var) const -> double
{
    if (order() < 1) throw std::logic_error("jet: gradient needs order >= 1");
    return coeffs_[1 + var];
}

auto Jet::hessian_entry(int var_a, int var_b) const -> double
{
    MultiIndex alpha{};
    ++alpha[var_a];
    ++alpha[var_b];
    return derivative(alpha);
}

auto Jet::partial(int var) const -> Jet
{
    if (order() < 1) throw std::logic_error("jet: cannot differentiate an order-0 jet");
    auto const& lower = detail::jet_layout(num_vars(), order() - 1);
    std::vector<double> out(lower.indices.size());
    auto const n = static_cast<std::size_t>(num_vars());
    for (std::size_t p = 0; p < out.size(); ++p) {
        auto const up = layout_->shift[p * n + var];
        out[p] = (lower.indices[p][var] + 1) * coeffs_[up];
    }
    return Jet(&lower, std::move(out));
}

auto Jet::truncated(int order) const -> Jet
{
    if (order >= this->order()) return *this;
    auto const& lower = detail::jet_layout(num_vars(), order);
    return Jet(&lower, std::vector<double>(coeffs_.begin(), coeffs_.begin() + lower.indices.size()));
}

auto Jet::operator-() const -> Jet
{
    Jet r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

namespace {

void check_compatible(Jet const& a, Jet const& b)
{
    if (a.num_vars() != b.num_vars()) throw std::invalid_argument("jet: mismatched number of variables");
}

}  // namespace

auto Jet::operator+=(Jet const& rhs) -> Jet&
{
    check_compatible(*this, rhs);
    if (rhs.order() < order()) *this = truncated(rhs.order());
    for (std::size_t p = 0; p < coeffs_.size(); ++p) coeffs_[p] += rhs.coeffs_[p];
    return *this;
}

auto Jet::operator-=(Jet const& rhs) -> Jet&
{
    check_compatible(*this, rhs);
    if (rhs.order() < order()) *this = truncated(rhs.order());
    for (std::size_t p = 0; p < coeffs_.size(); ++p) coeffs_[p] -= rhs.coeffs_[p];
    return *this;
}

auto operator*(Jet const& lhs, Jet const& rhs) -> Jet
{
    check_compatible(lhs, rhs);
    auto const* layout = lhs.order() <= rhs.order() ? lhs.layout_ : rhs.layout_;
    std::vector<double> out(layout->indices.size(), 0.0);
    auto const size = out.size();
    auto const* a = lhs.coeffs_.data();
    auto const* b = rhs.coeffs_.data();
    for (std::size_t i = 0; i < size; ++i) {
        if (a[i] == 0.0) continue;
        auto const ai = a[i];
        auto const end = layout->row_begin[i + 1];
        for (auto t = layout->row_begin[i]; t < end; ++t) {
            auto const& term = layout->products[t];
            out[term.target] += ai * b[term.rhs];
        }
    }
    return Jet(layout, std::move(out));
}

auto Jet::operator*=(Jet const& rhs) -> Jet& { return *this = *this * rhs; }
auto Jet::operator/=(Jet const& rhs) -> Jet& { return *this = *this * reciprocal(rhs); }

auto Jet::operator+=(double rhs) -> Jet&
{
    coeffs_[0] += rhs;
    return *this;
}

auto Jet::operator-=(double rhs) -> Jet&
{
    coeffs_[0] -= rhs;
    return *this;
}

auto Jet::operator*=(double rhs) -> Jet&
{
    for (auto& c : coeffs_) c *= rhs;
    return *this;
}

auto Jet::operator/=(double rhs) -> Jet&
{
    for (auto& c : coeffs_) c /= rhs;
    return *this;
}

auto Jet::compose(std::span<double const> taylor) const -> Jet
{
    // g(c0 + h) = sum_k taylor[k] h^k with h the non-constant part; Horner in h.
    auto const k_max = std::min<int>(order(), static_cast<int>(taylor.size()) - 1);
    Jet h = *this;
    h.coeffs_[0] = 0.0;
    Jet result(num_vars(), order(), taylor[k_max]);
    for (int k = k_max - 1; k >= 0; --k) {
        result = result * h;
        result.coeffs_[0] += taylor[k];
    }
    return result;
}

auto operator+(Jet lhs, Jet const& rhs) -> Jet { return lhs += rhs; }
auto operator-(Jet lhs, Jet const& rhs) -> Jet { return lhs -= rhs; }
auto operator/(Jet const& lhs, Jet const& rhs) -> Jet { return lhs * reciprocal(rhs); }
auto operator+(Jet lhs, double rhs) -> Jet { return lhs += rhs; }
auto operator+(double lhs, Jet rhs) -> Jet { return rhs += lhs; }
auto operator-(Jet lhs, double rhs) -> Jet { return lhs -= rhs; }
auto operator-(double lhs, Jet const& rhs) -> Jet { return -rhs + lhs; }
auto operator*(Jet lhs, double rhs) -> Jet { return lhs *= rhs; }
auto operator*(double lhs, Jet rhs) -> Jet { return rhs *= lhs; }
auto operator/(Jet lhs, double rhs) -> Jet { return lhs /= rhs; }
auto operator/(double lhs, Jet const& rhs) -> Jet { return reciprocal(rhs) * lhs; }

namespace {

/// Taylor coefficients of (c0 + h)^p = c0^p sum_k binom(p, k) (h / c0)^k.
auto power_series(double c0, double p, int order) -> std::array<double, kMaxJetOrder + 1>
{
    std::array<double, kMaxJetOrder + 1> t{};
    double binom = 1.0;
    double scale = std::pow(c0, p);
    for (int k = 0; k <= order; ++k) {
        t[k] = binom * scale;
        binom *= (p - k) / (k + 1);
        scale /= c0;
    }
    return t;
}

}  // namespace

auto reciprocal(Jet const& x) -> Jet
{
    if (x.value() == 0.0) throw DomainError("jet: division by a jet with zero constant term");
    auto const t = power_series(x.value(), -1.0, x.order());
    return x.compose(std::span(t).first(x.order() + 1));
}

auto sqrt(Jet const& x) -> Jet
{
    if (!(x.value() > 0.0)) throw DomainError("jet: sqrt needs a positive constant term");
    auto const t = power_series(x.value(), 0.5, x.order());
    return x.compose(std::span(t).first(x.order() + 1));
}

auto pow(Jet const& x, double exponent) -> Jet
{
    bool const integral = exponent == std::floor(exponent);
    if (x.value() == 0.0 || (x.value() < 0.0 && !integral))
        throw DomainError("jet: pow outside its smooth domain");
    auto const t = power_series(x.value(), exponent, x.order());
    return x.compose(std::span(t).first(x.order() + 1));
}

auto exp(Jet const& x) -> Jet
{
    std::array<double, kMaxJetOrder + 1> t{};
    double term = std::exp(x.value());
    for (int k = 0; k <= x.order(); ++k) {
        t[k] = term;
        term /= (k + 1);
    }
    return x.compose(std::span(t).first(x.order() + 1));
}

auto log(Jet const& x) -> Jet
{
    if (!(x.value() > 0.0)) throw DomainError("jet: log needs a positive constant term");
    std::array<double, kMaxJetOrder + 1> t{};
    t[0] = std::log(x.value());
    double inv = 1.0;
    for (int k = 1; k <= x.order(); ++k) {
        inv /= x.value();
        t[k] = ((k % 2 == 1) ? inv : -inv) / k;
    }
    return x.compose(std::span(t).first(x.order() + 1));
}

namespace {

auto trig_series(double c0, int order, bool cosine) -> std::array<double, kMaxJetOrder + 1>
{
    // derivatives of sin cycle through sin, cos, -sin, -cos
    double const s = std::sin(c0);
    double const c = std::cos(c0);
    std::array<double, 4> const cycle = cosine ? std::array{c, -s, -c, s} : std::array{s, c, -s, -c};
    std::array<double, kMaxJetOrder + 1> t{};
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 1) fact *= k;
        t[k] = cycle[k % 4] / fact;
    }
    return t;
}

}  // namespace

auto sin(Jet const& x) -> Jet
{
    auto const t = trig_series(x.value(), x.order(), false);
    return x.compose(std::span(t).first(x.order() + 1));
}

auto cos(Jet const& x) -> Jet
{
    auto const t = trig_series(x.value(), x.order(), true);
    return x.compose(std::span(t).first(x.order() + 1));
}

auto eval_jet(JetFunction const& f, std::span<double const> point, int order) -> Jet
{
    auto const n = static_cast<int>(point.size());
    std::vector<Jet> vars;
    vars.reserve(point.size());
    for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(n, order, i, point[i]));
    return f(vars).truncated(order);
}

auto eval_scalar(JetFunction const& f, std::span<double const> point) -> double
{
    return eval_jet(f, point, 0).value();
}

}  // namespace zermelo
