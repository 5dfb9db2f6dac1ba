#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace cmbp {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Point2 a) { return a.x * a.x + a.y * a.y; }

/// A line {x : n.x = a} given by its unit normal and signed offset from the origin.
struct DirOffset {
    Point2 n;
    double a = 0.0;
};

enum class DomainKind { Disc, Ellipse, ParametricConvex };

struct BoundaryNode {
    double param = 0.0;
    Point2 point;
    Point2 normal;       // outward, unit length
    double arc_weight = 0.0;
};

using CurveFn = std::function<Point2(double)>;

/// Smooth convex bounded region. Discs and axis-aligned ellipses carry
/// closed forms for support, chords and membership; everything else goes
/// through the parametric boundary curve. Immutable after construction and
/// safe to share across threads.
class ConvexDomain {
public:
    static ConvexDomain disc(Point2 center, double radius, int nodes = 256);
    static ConvexDomain ellipse(Point2 center, double semi_x, double semi_y, int nodes = 256);
    /// |x/a|^p + |y/b|^p < 1 around the center, p >= 2. Built as a parametric curve.
    static ConvexDomain superellipse(Point2 center, double semi_x, double semi_y, double power,
                                     int nodes = 256);
    /// General closed convex curve on [0, 2*pi). dgamma may be empty; the
    /// derivative is then taken by central differences with step 1e-6.
    static ConvexDomain parametric(CurveFn gamma, CurveFn dgamma, int nodes = 256);

    DomainKind kind() const { return kind_; }
    const std::vector<BoundaryNode>& boundary() const { return nodes_; }
    Point2 center() const { return center_; }

    Point2 curve(double s) const;
    Point2 curve_deriv(double s) const;

    /// Support function h(n) = max of n.x over the closure; n need not be unit
    /// (it is normalized internally).
    double support(Point2 n) const;
    /// Offsets of the two tangent lines with normal n: (-h(-n), h(n)).
    /// The chord profile along n is positive exactly between them.
    std::pair<double, double> support_interval(Point2 n) const;
    /// Length of the chord cut by the line; zero outside the support interval.
    double chord_length(const DirOffset& line) const;

    /// Approximate signed Euclidean distance to the boundary, negative inside.
    double signed_distance(Point2 x) const;
    bool contains(Point2 x, double margin = 0.0) const;

    double diameter() const { return diameter_; }
    double perimeter() const;
    double area() const;
    std::pair<Point2, Point2> bounding_box() const;

    /// The same boundary re-wrapped as a general parametric domain, which
    /// forces closed-form discs/ellipses through the numeric chord and
    /// kernel pipeline. nodes = 0 keeps the current node count.
    ConvexDomain as_parametric(int nodes = 0) const;

    double disc_radius() const;
    std::pair<double, double> ellipse_semi_axes() const;

private:
    ConvexDomain() = default;
    void build_nodes(int nodes);
    void validate();

    DomainKind kind_ = DomainKind::Disc;
    Point2 center_;
    double radius_ = 0.0;          // disc
    double semi_x_ = 0.0, semi_y_ = 0.0;  // ellipse
    CurveFn gamma_, dgamma_;
    double orient_ = 1.0;          // +1 for counterclockwise curves
    std::vector<BoundaryNode> nodes_;
    double diameter_ = 0.0;
    double area_ = 0.0;

    friend class DirectionSection;
};

/// Per-direction view of a parametric boundary: the two support tangency
/// parameters and fast chord evaluation by bisection on the monotone arcs
/// between them. Used to build chord profiles over a whole offset grid.
class DirectionSection {
public:
    DirectionSection(const ConvexDomain& dom, Point2 n);

    double a_min() const { return a_min_; }
    double a_max() const { return a_max_; }
    double chord(double a) const;

private:
    const ConvexDomain* dom_;
    Point2 n_;
    double s_max_ = 0.0, s_min_ = 0.0;  // argmax / argmin of n.gamma(s)
    double a_min_ = 0.0, a_max_ = 0.0;
};

/// Unit normal and signed offset of the line of points equidistant from x1
/// and x0. Throws DegeneratePair when |x1-x0| <= eps_sep.
DirOffset nhat_ahat(Point2 x1, Point2 x0, double eps_sep = 1e-12);

}  // namespace cmbp
