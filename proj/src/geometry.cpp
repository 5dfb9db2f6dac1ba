#include "cmbp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmbp/errors.hpp"

namespace cmbp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_finite(Point2 p, const char* what)
{
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        fail(ErrorCode::InvalidArgument, std::string(what) + ": non-finite coordinates");
}

double wrap_param(double s)
{
    s = std::fmod(s, kTwoPi);
    return s < 0.0 ? s + kTwoPi : s;
}

Point2 unit_or_fail(Point2 n, const char* what)
{
    const double m = norm(n);
    if (!std::isfinite(m) || m == 0.0)
        fail(ErrorCode::InvalidArgument, std::string(what) + ": zero or non-finite direction");
    return (1.0 / m) * n;
}

/// Chord of a disc or axis-aligned ellipse cut by the line {n.x = a}; n unit.
double chord_closed_form(DomainKind kind, Point2 center, double rx, double ry, Point2 n, double a)
{
    const double t = a - dot(n, center);
    if (kind == DomainKind::Disc) {
        const double r = rx;
        const double q = r * r - t * t;
        return q > 0.0 ? 2.0 * std::sqrt(q) : 0.0;
    }
    const double m2 = rx * n.x * (rx * n.x) + ry * n.y * (ry * n.y);
    const double q = m2 - t * t;
    return q > 0.0 ? 2.0 * rx * ry * std::sqrt(q) / m2 : 0.0;
}

}  // namespace

DirOffset nhat_ahat(Point2 x1, Point2 x0, double eps_sep)
{
    require_finite(x1, "nhat_ahat x1");
    require_finite(x0, "nhat_ahat x0");
    const Point2 diff = x1 - x0;
    const double d = norm(diff);
    if (!(d > eps_sep))
        fail(ErrorCode::DegeneratePair, "nhat_ahat: points coincide within the separation threshold");
    return DirOffset{(1.0 / d) * diff, 0.5 * (norm2(x1) - norm2(x0)) / d};
}

ConvexDomain ConvexDomain::disc(Point2 center, double radius, int nodes)
{
    require_finite(center, "disc center");
    if (!std::isfinite(radius) || radius <= 0.0)
        fail(ErrorCode::InvalidArgument, "disc radius must be positive");
    ConvexDomain d;
    d.kind_ = DomainKind::Disc;
    d.center_ = center;
    d.radius_ = radius;
    d.semi_x_ = d.semi_y_ = radius;
    d.gamma_ = [center, radius](double s) {
        return Point2{center.x + radius * std::cos(s), center.y + radius * std::sin(s)};
    };
    d.dgamma_ = [radius](double s) {
        return Point2{-radius * std::sin(s), radius * std::cos(s)};
    };
    d.build_nodes(nodes);
    d.diameter_ = 2.0 * radius;
    d.area_ = M_PI * radius * radius;
    d.validate();
    return d;
}

ConvexDomain ConvexDomain::ellipse(Point2 center, double semi_x, double semi_y, int nodes)
{
    require_finite(center, "ellipse center");
    if (!std::isfinite(semi_x) || !std::isfinite(semi_y) || semi_x <= 0.0 || semi_y <= 0.0)
        fail(ErrorCode::InvalidArgument, "ellipse semi-axes must be positive");
    ConvexDomain d;
    d.kind_ = DomainKind::Ellipse;
    d.center_ = center;
    d.semi_x_ = semi_x;
    d.semi_y_ = semi_y;
    d.gamma_ = [center, semi_x, semi_y](double s) {
        return Point2{center.x + semi_x * std::cos(s), center.y + semi_y * std::sin(s)};
    };
    d.dgamma_ = [semi_x, semi_y](double s) {
        return Point2{-semi_x * std::sin(s), semi_y * std::cos(s)};
    };
    d.build_nodes(nodes);
    d.diameter_ = 2.0 * std::max(semi_x, semi_y);
    d.area_ = M_PI * semi_x * semi_y;
    d.validate();
    return d;
}

ConvexDomain ConvexDomain::superellipse(Point2 center, double semi_x, double semi_y, double power,
                                        int nodes)
{
    require_finite(center, "superellipse center");
    if (!std::isfinite(semi_x) || !std::isfinite(semi_y) || semi_x <= 0.0 || semi_y <= 0.0)
        fail(ErrorCode::InvalidArgument, "superellipse semi-axes must be positive");
    if (!std::isfinite(power) || power < 2.0)
        fail(ErrorCode::InvalidArgument, "superellipse power must be >= 2");

    // radial parameterization r(s)*(cos s, sin s); smooth for p >= 2
    auto level = [semi_x, semi_y, power](double s) {
        const double c = std::cos(s), sn = std::sin(s);
        return std::pow(std::fabs(c) / semi_x, power) + std::pow(std::fabs(sn) / semi_y, power);
    };
    auto gamma = [center, level, power](double s) {
        const double rho = std::pow(level(s), -1.0 / power);
        return Point2{center.x + rho * std::cos(s), center.y + rho * std::sin(s)};
    };
    auto dgamma = [level, power, semi_x, semi_y](double s) {
        const double c = std::cos(s), sn = std::sin(s);
        const double g = level(s);
        const double dg =
            power * (-std::pow(std::fabs(c) / semi_x, power - 1.0) * (c < 0 ? -1.0 : 1.0) * sn / semi_x +
                     std::pow(std::fabs(sn) / semi_y, power - 1.0) * (sn < 0 ? -1.0 : 1.0) * c / semi_y);
        const double rho = std::pow(g, -1.0 / power);
        const double drho = -(1.0 / power) * std::pow(g, -1.0 / power - 1.0) * dg;
        return Point2{drho * c - rho * sn, drho * sn + rho * c};
    };
    return parametric(gamma, dgamma, nodes);
}

ConvexDomain ConvexDomain::parametric(CurveFn gamma, CurveFn dgamma, int nodes)
{
    if (!gamma)
        fail(ErrorCode::InvalidArgument, "parametric domain needs a boundary curve");
    ConvexDomain d;
    d.kind_ = DomainKind::ParametricConvex;
    d.gamma_ = std::move(gamma);
    if (dgamma) {
        d.dgamma_ = std::move(dgamma);
    } else {
        const CurveFn g = d.gamma_;
        const double h = 1e-6;
        d.dgamma_ = [g, h](double s) {
            const Point2 a = g(wrap_param(s + h));
            const Point2 b = g(wrap_param(s - h));
            return (1.0 / (2.0 * h)) * (a - b);
        };
    }
    d.build_nodes(nodes);

    // centroid of the boundary nodes and exact node-pair diameter
    Point2 c{0.0, 0.0};
    for (const auto& bn : d.nodes_)
        c = c + bn.point;
    d.center_ = (1.0 / static_cast<double>(d.nodes_.size())) * c;
    double dia = 0.0;
    for (std::size_t i = 0; i < d.nodes_.size(); ++i)
        for (std::size_t j = i + 1; j < d.nodes_.size(); ++j)
            dia = std::max(dia, norm(d.nodes_[i].point - d.nodes_[j].point));
    d.diameter_ = dia;
    d.validate();
    return d;
}

void ConvexDomain::build_nodes(int nodes)
{
    if (nodes < 8)
        fail(ErrorCode::InvalidArgument, "boundary node count must be at least 8");
    const double ds = kTwoPi / nodes;

    // orientation from the signed area of the node polygon
    double twice_area = 0.0;
    std::vector<Point2> pts(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        pts[k] = gamma_(wrap_param(k * ds));
        require_finite(pts[k], "boundary point");
    }
    for (int k = 0; k < nodes; ++k) {
        const Point2& p = pts[k];
        const Point2& q = pts[(k + 1) % nodes];
        twice_area += p.x * q.y - q.x * p.y;
    }
    orient_ = twice_area >= 0.0 ? 1.0 : -1.0;

    nodes_.resize(static_cast<std::size_t>(nodes));
    double area2 = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double s = k * ds;
        const Point2 t = dgamma_(wrap_param(s));
        const double speed = norm(t);
        if (!(speed > 0.0) || !std::isfinite(speed))
            fail(ErrorCode::InvalidArgument, "boundary curve has vanishing derivative");
        BoundaryNode& bn = nodes_[static_cast<std::size_t>(k)];
        bn.param = s;
        bn.point = pts[k];
        bn.normal = (orient_ / speed) * Point2{t.y, -t.x};
        bn.arc_weight = speed * ds;
        area2 += (pts[k].x * t.y - pts[k].y * t.x) * ds;
    }
    if (kind_ == DomainKind::ParametricConvex)
        area_ = 0.5 * std::fabs(area2);
}

void ConvexDomain::validate()
{
    for (const auto& bn : nodes_) {
        if (std::fabs(norm(bn.normal) - 1.0) > 1e-12)
            fail(ErrorCode::InvalidArgument, "boundary normal is not unit length");
    }
    if (kind_ != DomainKind::ParametricConvex)
        return;

    // convexity: the curvature numerator x'y'' - y'x'' keeps one sign
    const double h = 1e-5;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double amax = 0.0;
    for (const auto& bn : nodes_) {
        const Point2 t = dgamma_(wrap_param(bn.param));
        const Point2 tp = dgamma_(wrap_param(bn.param + h));
        const Point2 tm = dgamma_(wrap_param(bn.param - h));
        const Point2 dd = (1.0 / (2.0 * h)) * (tp - tm);
        const double cross = t.x * dd.y - t.y * dd.x;
        lo = std::min(lo, cross);
        hi = std::max(hi, cross);
        amax = std::max(amax, std::fabs(cross));
    }
    const double tol = 1e-6 * amax;
    if (lo < -tol && hi > tol)
        fail(ErrorCode::InvalidArgument, "boundary curvature changes sign: curve is not convex");
}

Point2 ConvexDomain::curve(double s) const { return gamma_(wrap_param(s)); }

Point2 ConvexDomain::curve_deriv(double s) const { return dgamma_(wrap_param(s)); }

double ConvexDomain::support(Point2 n) const
{
    const Point2 u = unit_or_fail(n, "support");
    switch (kind_) {
        case DomainKind::Disc:
            return dot(u, center_) + radius_;
        case DomainKind::Ellipse:
            return dot(u, center_) +
                   std::sqrt(semi_x_ * u.x * (semi_x_ * u.x) + semi_y_ * u.y * (semi_y_ * u.y));
        case DomainKind::ParametricConvex:
            return DirectionSection(*this, u).a_max();
    }
    return 0.0;
}

std::pair<double, double> ConvexDomain::support_interval(Point2 n) const
{
    const Point2 u = unit_or_fail(n, "support_interval");
    if (kind_ == DomainKind::ParametricConvex) {
        DirectionSection sec(*this, u);
        return {sec.a_min(), sec.a_max()};
    }
    return {-support(Point2{-u.x, -u.y}), support(u)};
}

double ConvexDomain::chord_length(const DirOffset& line) const
{
    require_finite(line.n, "chord_length direction");
    if (!std::isfinite(line.a))
        fail(ErrorCode::InvalidArgument, "chord_length: non-finite offset");
    if (std::fabs(norm(line.n) - 1.0) > 1e-12)
        fail(ErrorCode::InvalidArgument, "chord_length: direction must be unit length");
    if (kind_ != DomainKind::ParametricConvex)
        return chord_closed_form(kind_, center_, semi_x_, semi_y_, line.n, line.a);

    // sign changes of n.gamma - a over the node grid; a convex boundary
    // crosses any line at most twice
    int changes = 0;
    const std::size_t n = nodes_.size();
    auto sgn = [&](std::size_t k) {
        return dot(line.n, nodes_[k].point) - line.a >= 0.0;
    };
    bool prev = sgn(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const bool cur = sgn(k);
        if (cur != prev)
            ++changes;
        prev = cur;
    }
    if (changes > 2)
        fail(ErrorCode::RootFindFailure,
             "chord_length: line crosses the boundary more than twice (malformed boundary)");

    return DirectionSection(*this, line.n).chord(line.a);
}

double ConvexDomain::signed_distance(Point2 x) const
{
    require_finite(x, "signed_distance");
    if (kind_ == DomainKind::Disc)
        return norm(x - center_) - radius_;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& bn : nodes_)
        best = std::max(best, dot(bn.normal, x - bn.point));
    return best;
}

bool ConvexDomain::contains(Point2 x, double margin) const
{
    return signed_distance(x) < -margin;
}

double ConvexDomain::perimeter() const
{
    double p = 0.0;
    for (const auto& bn : nodes_)
        p += bn.arc_weight;
    return p;
}

double ConvexDomain::area() const { return area_; }

std::pair<Point2, Point2> ConvexDomain::bounding_box() const
{
    switch (kind_) {
        case DomainKind::Disc:
            return {Point2{center_.x - radius_, center_.y - radius_},
                    Point2{center_.x + radius_, center_.y + radius_}};
        case DomainKind::Ellipse:
            return {Point2{center_.x - semi_x_, center_.y - semi_y_},
                    Point2{center_.x + semi_x_, center_.y + semi_y_}};
        default:
            break;
    }
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi{-lo.x, -lo.y};
    for (const auto& bn : nodes_) {
        lo.x = std::min(lo.x, bn.point.x);
        lo.y = std::min(lo.y, bn.point.y);
        hi.x = std::max(hi.x, bn.point.x);
        hi.y = std::max(hi.y, bn.point.y);
    }
    return {lo, hi};
}

ConvexDomain ConvexDomain::as_parametric(int nodes) const
{
    if (nodes == 0)
        nodes = static_cast<int>(nodes_.size());
    if (kind_ == DomainKind::ParametricConvex && nodes == static_cast<int>(nodes_.size()))
        return *this;
    return parametric(gamma_, dgamma_, nodes);
}

double ConvexDomain::disc_radius() const
{
    if (kind_ != DomainKind::Disc)
        fail(ErrorCode::InvalidArgument, "disc_radius: domain is not a disc");
    return radius_;
}

std::pair<double, double> ConvexDomain::ellipse_semi_axes() const
{
    if (kind_ != DomainKind::Ellipse)
        fail(ErrorCode::InvalidArgument, "ellipse_semi_axes: domain is not an ellipse");
    return {semi_x_, semi_y_};
}

DirectionSection::DirectionSection(const ConvexDomain& dom, Point2 n) : dom_(&dom)
{
    n_ = unit_or_fail(n, "DirectionSection");
    if (dom.kind() != DomainKind::ParametricConvex) {
        auto [lo, hi] = dom.support_interval(n_);
        a_min_ = lo;
        a_max_ = hi;
        return;
    }

    const auto& nodes = dom.boundary();
    const std::size_t count = nodes.size();
    std::size_t k_max = 0, k_min = 0;
    double q_max = -std::numeric_limits<double>::infinity();
    double q_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < count; ++k) {
        const double q = dot(n_, nodes[k].point);
        if (q > q_max) {
            q_max = q;
            k_max = k;
        }
        if (q < q_min) {
            q_min = q;
            k_min = k;
        }
    }

    const double ds = kTwoPi / static_cast<double>(count);
    auto qd = [&](double s) { return dot(n_, dom_->curve_deriv(s)); };

    // bisection for the zero of n.gamma' around a bracketing node
    auto refine = [&](std::size_t k, bool want_max) {
        double lo = nodes[k].param - ds;
        double hi = nodes[k].param + ds;
        double flo = qd(lo), fhi = qd(hi);
        const double want_lo = want_max ? 1.0 : -1.0;
        if (flo * want_lo <= 0.0 || fhi * want_lo >= 0.0)
            return nodes[k].param;  // flat spot; the node value is already accurate
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (qd(mid) * want_lo > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    s_max_ = refine(k_max, true);
    s_min_ = refine(k_min, false);
    a_max_ = dot(n_, dom_->curve(s_max_));
    a_min_ = dot(n_, dom_->curve(s_min_));
}

double DirectionSection::chord(double a) const
{
    if (!(a > a_min_ && a < a_max_))
        return 0.0;
    if (dom_->kind() != DomainKind::ParametricConvex)
        return dom_->chord_length(DirOffset{n_, a});

    auto g = [&](double s) { return dot(n_, dom_->curve(s)) - a; };

    // one root on each monotone arc between the support tangency parameters
    auto bisect = [&](double lo, double hi) {
        double flo = g(lo);
        double fhi = g(hi);
        if (flo == 0.0)
            return lo;
        if (fhi == 0.0)
            return hi;
        if (flo * fhi > 0.0)
            fail(ErrorCode::RootFindFailure, "chord: lost the bracketing interval");
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = g(mid);
            if (fm == 0.0)
                return mid;
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        if (hi - lo > 1e-10)
            fail(ErrorCode::RootFindFailure, "chord: bisection did not converge");
        return 0.5 * (lo + hi);
    };

    double rise_lo = s_min_;
    double rise_hi = s_max_;
    if (rise_hi < rise_lo)
        rise_hi += kTwoPi;
    double fall_lo = s_max_;
    double fall_hi = s_min_;
    if (fall_hi < fall_lo)
        fall_hi += kTwoPi;

    const double sa = bisect(rise_lo, rise_hi);
    const double sb = bisect(fall_lo, fall_hi);
    return norm(dom_->curve(sa) - dom_->curve(sb));
}

}  // namespace cmbp
