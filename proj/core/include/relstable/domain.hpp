#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relstable {

using Point = std::vector<double>;

enum class DomainKind {
    FullSpace,
    Ball,
    Annulus,
    HalfSpace,      // { x : x_d > level }
    HalfSpaceLike,  // { x : x_d > bump(|x~|) }, sandwiched between two half spaces
    IntervalUnion,  // d = 1 only
    BallComplement,
};

// Geometric open sets with exact distance-to-complement and interior ball
// metadata. Immutable after construction; all queries are re-entrant.
class Domain {
public:
    static Domain full_space(int d);
    static Domain ball(Point center, double radius);
    static Domain annulus(Point center, double r_in, double r_out);
    static Domain half_space(int d, double level);
    // { x : x_d > h (1 - (|x~|/R)^2)^2 for |x~| < R, else x_d > 0 }:
    // contains H_h and is contained in H_0.
    static Domain half_space_like(int d, double bump_height, double bump_radius);
    static Domain interval_union(std::vector<std::pair<double, double>> intervals);
    static Domain ball_complement(Point center, double radius);

    int dim() const { return dim_; }
    DomainKind kind() const { return kind_; }
    bool bounded() const;

    bool contains(const Point& x) const;
    double dist_to_complement(const Point& x) const;

    // For x in D with dist_to_complement(x) < r0: the tangent interior ball
    // B(center, r0) contained in D and touching the boundary at the nearest
    // boundary point to x, with x on the segment between them.
    std::pair<Point, double> interior_ball_witness(const Point& x) const;

    // Uniform interior/exterior ball radius metadata r0.
    double ball_radius() const { return r0_; }

    // A canonical deep interior point (used as default start for estimators).
    Point deep_point() const;

    // Finite axis-aligned box meeting D, for rejection sampling of points.
    std::pair<Point, Point> sampling_box() const;

    // Bounded kinds: the diameter. Unbounded kinds: the sampling box diagonal.
    double diameter_hint() const;

    std::string describe() const;

    // Half-space-like sandwich H_a subset D subset H_b, a > b.
    double envelope_upper() const { return bump_height_; }  // a
    double envelope_lower() const { return 0.0; }           // b

    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    double inner_radius() const { return r_in_; }
    double level() const { return level_; }
    const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

private:
    Domain() = default;
    // Nearest boundary point of x (x in D), used by the witness construction.
    Point nearest_boundary_point(const Point& x) const;
    double bump(double rho) const;
    double bump_deriv(double rho) const;
    // Squared distance to the bump graph restricted to the radial plane.
    std::pair<double, double> bump_projection(double rho, double height) const;

    DomainKind kind_ = DomainKind::FullSpace;
    int dim_ = 1;
    Point center_;
    double radius_ = 0.0;               // ball / ball-complement
    double r_in_ = 0.0, r_out_ = 0.0;   // annulus
    double level_ = 0.0;                // half-space
    double bump_height_ = 0.0, bump_radius_ = 0.0;
    std::vector<std::pair<double, double>> intervals_;
    double r0_ = 0.0;
};

double dist(const Point& a, const Point& b);
double norm(const Point& a);

}  // namespace relstable
