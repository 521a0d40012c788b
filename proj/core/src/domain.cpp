#include "relstable/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace relstable {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dim(const Domain& dom, const Point& x) {
    if (static_cast<int>(x.size()) != dom.dim())
        throw std::invalid_argument("Domain: point dimension mismatch");
}
}  // namespace

double dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double norm(const Point& a) {
    double s = 0.0;
    for (double c : a) s += c * c;
    return std::sqrt(s);
}

Domain Domain::full_space(int d) {
    if (d < 1) throw std::invalid_argument("Domain: d must be >= 1");
    Domain dom;
    dom.kind_ = DomainKind::FullSpace;
    dom.dim_ = d;
    dom.r0_ = kInf;
    return dom;
}

Domain Domain::ball(Point center, double radius) {
    if (center.empty()) throw std::invalid_argument("Domain: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("Domain: ball radius must be > 0");
    Domain dom;
    dom.kind_ = DomainKind::Ball;
    dom.dim_ = static_cast<int>(center.size());
    dom.center_ = std::move(center);
    dom.radius_ = radius;
    dom.r0_ = radius;
    return dom;
}

Domain Domain::annulus(Point center, double r_in, double r_out) {
    if (center.empty()) throw std::invalid_argument("Domain: empty center");
    if (!(0.0 < r_in && r_in < r_out))
        throw std::invalid_argument("Domain: annulus requires 0 < r_in < r_out");
    Domain dom;
    dom.kind_ = DomainKind::Annulus;
    dom.dim_ = static_cast<int>(center.size());
    dom.center_ = std::move(center);
    dom.r_in_ = r_in;
    dom.r_out_ = r_out;
    dom.r0_ = 0.5 * (r_out - r_in);
    return dom;
}

Domain Domain::half_space(int d, double level) {
    if (d < 1) throw std::invalid_argument("Domain: d must be >= 1");
    Domain dom;
    dom.kind_ = DomainKind::HalfSpace;
    dom.dim_ = d;
    dom.level_ = level;
    dom.r0_ = kInf;
    return dom;
}

Domain Domain::half_space_like(int d, double bump_height, double bump_radius) {
    if (d < 2) throw std::invalid_argument("Domain: half-space-like bump requires d >= 2");
    if (!(bump_height > 0.0 && bump_radius > 0.0))
        throw std::invalid_argument("Domain: bump height and radius must be > 0");
    Domain dom;
    dom.kind_ = DomainKind::HalfSpaceLike;
    dom.dim_ = d;
    dom.bump_height_ = bump_height;
    dom.bump_radius_ = bump_radius;
    // Conservative curvature bound: |b''| <= 8 h / R^2.
    dom.r0_ = bump_radius * bump_radius / (16.0 * bump_height);
    return dom;
}

Domain Domain::interval_union(std::vector<std::pair<double, double>> intervals) {
    if (intervals.empty()) throw std::invalid_argument("Domain: empty interval union");
    std::sort(intervals.begin(), intervals.end());
    double min_len = kInf, min_gap = kInf;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].first < intervals[i].second))
            throw std::invalid_argument("Domain: interval endpoints out of order");
        min_len = std::min(min_len, intervals[i].second - intervals[i].first);
        if (i > 0) {
            const double gap = intervals[i].first - intervals[i - 1].second;
            if (!(gap > 0.0))
                throw std::invalid_argument("Domain: intervals must be disjoint with positive gaps");
            min_gap = std::min(min_gap, gap);
        }
    }
    Domain dom;
    dom.kind_ = DomainKind::IntervalUnion;
    dom.dim_ = 1;
    dom.intervals_ = std::move(intervals);
    dom.r0_ = 0.5 * min_len;
    return dom;
}

Domain Domain::ball_complement(Point center, double radius) {
    if (center.empty()) throw std::invalid_argument("Domain: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("Domain: radius must be > 0");
    Domain dom;
    dom.kind_ = DomainKind::BallComplement;
    dom.dim_ = static_cast<int>(center.size());
    dom.center_ = std::move(center);
    dom.radius_ = radius;
    dom.r0_ = radius;
    return dom;
}

bool Domain::bounded() const {
    switch (kind_) {
        case DomainKind::Ball:
        case DomainKind::Annulus:
            return true;
        case DomainKind::IntervalUnion:
            return true;  // construction requires finite endpoints
        default:
            return false;
    }
}

double Domain::bump(double rho) const {
    if (rho >= bump_radius_) return 0.0;
    const double u = 1.0 - (rho / bump_radius_) * (rho / bump_radius_);
    return bump_height_ * u * u;
}

double Domain::bump_deriv(double rho) const {
    if (rho >= bump_radius_) return 0.0;
    const double s = rho / bump_radius_;
    return -4.0 * bump_height_ * s * (1.0 - s * s) / bump_radius_;
}

bool Domain::contains(const Point& x) const {
    check_dim(*this, x);
    for (double c : x)
        if (!std::isfinite(c)) return false;
    switch (kind_) {
        case DomainKind::FullSpace:
            return true;
        case DomainKind::Ball:
            return dist(x, center_) < radius_;
        case DomainKind::Annulus: {
            const double r = dist(x, center_);
            return r_in_ < r && r < r_out_;
        }
        case DomainKind::HalfSpace:
            return x.back() > level_;
        case DomainKind::HalfSpaceLike: {
            double rho2 = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) rho2 += x[i] * x[i];
            return x.back() > bump(std::sqrt(rho2));
        }
        case DomainKind::IntervalUnion: {
            for (const auto& [a, b] : intervals_)
                if (a < x[0] && x[0] < b) return true;
            return false;
        }
        case DomainKind::BallComplement:
            return dist(x, center_) > radius_;
    }
    return false;
}

// Projection onto the bump graph restricted to the radial (rho, z) plane:
// returns {distance, argmin rho'}. Derivative-sign bisection on bracketing
// grid cells, refined to ~1e-12.
std::pair<double, double> Domain::bump_projection(double rho, double height) const {
    const auto dist2 = [&](double s) {
        const double dz = height - bump(s);
        return (rho - s) * (rho - s) + dz * dz;
    };
    // d/ds dist2 = -2 (rho - s) - 2 (height - bump(s)) bump'(s)
    const auto deriv = [&](double s) {
        return -(rho - s) - (height - bump(s)) * bump_deriv(s);
    };
    const double s_hi = bump_radius_;
    const int n_scan = 128;
    double best_d2 = kInf, best_s = 0.0;
    double prev_s = 0.0, prev_g = deriv(0.0);
    for (int i = 1; i <= n_scan; ++i) {
        const double s = s_hi * i / n_scan;
        const double g = deriv(s);
        if (prev_g <= 0.0 && g >= 0.0) {
            double lo = prev_s, hi = s;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (deriv(mid) <= 0.0 ? lo : hi) = mid;
            }
            const double s_star = 0.5 * (lo + hi);
            if (dist2(s_star) < best_d2) {
                best_d2 = dist2(s_star);
                best_s = s_star;
            }
        }
        prev_s = s;
        prev_g = g;
    }
    // Endpoints of the bump arc.
    for (double s : {0.0, s_hi}) {
        if (dist2(s) < best_d2) {
            best_d2 = dist2(s);
            best_s = s;
        }
    }
    // Flat part of the boundary {s > R, z = 0}.
    const double flat_d2 = rho >= s_hi ? height * height
                                       : (s_hi - rho) * (s_hi - rho) + height * height;
    if (flat_d2 < best_d2) {
        best_d2 = flat_d2;
        best_s = std::max(rho, s_hi);
    }
    return {std::sqrt(best_d2), best_s};
}

double Domain::dist_to_complement(const Point& x) const {
    check_dim(*this, x);
    if (!contains(x)) return 0.0;
    switch (kind_) {
        case DomainKind::FullSpace:
            return kInf;
        case DomainKind::Ball:
            return radius_ - dist(x, center_);
        case DomainKind::Annulus: {
            const double r = dist(x, center_);
            return std::min(r - r_in_, r_out_ - r);
        }
        case DomainKind::HalfSpace:
            return x.back() - level_;
        case DomainKind::HalfSpaceLike: {
            double rho2 = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) rho2 += x[i] * x[i];
            const double rho = std::sqrt(rho2);
            if (rho >= bump_radius_ + x.back()) return x.back();  // flat region dominates
            return bump_projection(rho, x.back()).first;
        }
        case DomainKind::IntervalUnion: {
            for (const auto& [a, b] : intervals_)
                if (a < x[0] && x[0] < b) return std::min(x[0] - a, b - x[0]);
            return 0.0;
        }
        case DomainKind::BallComplement:
            return dist(x, center_) - radius_;
    }
    return 0.0;
}

Point Domain::nearest_boundary_point(const Point& x) const {
    switch (kind_) {
        case DomainKind::Ball:
        case DomainKind::Annulus:
        case DomainKind::BallComplement: {
            const double r = dist(x, center_);
            double target = radius_;
            if (kind_ == DomainKind::Annulus)
                target = (r - r_in_ < r_out_ - r) ? r_in_ : r_out_;
            Point z(center_);
            if (r == 0.0) {
                z[0] += target;  // any direction works from the center
                return z;
            }
            for (std::size_t i = 0; i < z.size(); ++i)
                z[i] += (x[i] - center_[i]) * target / r;
            return z;
        }
        case DomainKind::HalfSpace: {
            Point z(x);
            z.back() = level_;
            return z;
        }
        case DomainKind::HalfSpaceLike: {
            double rho2 = 0.0;
            for (std::size_t i = 0; i + 1 < x.size(); ++i) rho2 += x[i] * x[i];
            const double rho = std::sqrt(rho2);
            const double s = bump_projection(rho, x.back()).second;
            Point z(x.size(), 0.0);
            if (rho > 0.0)
                for (std::size_t i = 0; i + 1 < x.size(); ++i) z[i] = x[i] * s / rho;
            z.back() = bump(s);
            return z;
        }
        case DomainKind::IntervalUnion: {
            for (const auto& [a, b] : intervals_)
                if (a < x[0] && x[0] < b) return {x[0] - a < b - x[0] ? a : b};
            throw std::domain_error("Domain: point not inside");
        }
        default:
            throw std::domain_error("Domain: no boundary for the full space");
    }
}

std::pair<Point, double> Domain::interior_ball_witness(const Point& x) const {
    check_dim(*this, x);
    if (!contains(x)) throw std::domain_error("interior_ball_witness: x not in the domain");
    const double delta = dist_to_complement(x);
    if (!(delta < r0_))
        throw std::domain_error("interior_ball_witness: dist_to_complement(x) >= r0, no witness needed");
    const Point z = nearest_boundary_point(x);
    const double nz = dist(x, z);
    Point c(z);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += (x[i] - z[i]) * r0_ / nz;
    return {c, r0_};
}

Point Domain::deep_point() const {
    switch (kind_) {
        case DomainKind::FullSpace:
            return Point(dim_, 0.0);
        case DomainKind::Ball:
            return center_;
        case DomainKind::Annulus: {
            Point x(center_);
            x[0] += 0.5 * (r_in_ + r_out_);
            return x;
        }
        case DomainKind::HalfSpace: {
            Point x(dim_, 0.0);
            x.back() = level_ + 1.0;
            return x;
        }
        case DomainKind::HalfSpaceLike: {
            Point x(dim_, 0.0);
            x.back() = bump_height_ + 1.0;
            return x;
        }
        case DomainKind::IntervalUnion: {
            double best_len = -1.0, mid = 0.0;
            for (const auto& [a, b] : intervals_)
                if (b - a > best_len) {
                    best_len = b - a;
                    mid = 0.5 * (a + b);
                }
            return {mid};
        }
        case DomainKind::BallComplement: {
            Point x(center_);
            x[0] += 2.0 * radius_;
            return x;
        }
    }
    return Point(dim_, 0.0);
}

std::pair<Point, Point> Domain::sampling_box() const {
    Point lo(dim_, 0.0), hi(dim_, 0.0);
    switch (kind_) {
        case DomainKind::FullSpace:
            for (int i = 0; i < dim_; ++i) {
                lo[i] = -3.0;
                hi[i] = 3.0;
            }
            break;
        case DomainKind::Ball:
        case DomainKind::Annulus: {
            const double r = kind_ == DomainKind::Ball ? radius_ : r_out_;
            for (int i = 0; i < dim_; ++i) {
                lo[i] = center_[i] - r;
                hi[i] = center_[i] + r;
            }
            break;
        }
        case DomainKind::HalfSpace:
            for (int i = 0; i + 1 < dim_; ++i) {
                lo[i] = -3.0;
                hi[i] = 3.0;
            }
            lo.back() = level_;
            hi.back() = level_ + 6.0;
            break;
        case DomainKind::HalfSpaceLike:
            for (int i = 0; i + 1 < dim_; ++i) {
                lo[i] = -(bump_radius_ + 2.0);
                hi[i] = bump_radius_ + 2.0;
            }
            lo.back() = 0.0;
            hi.back() = bump_height_ + 6.0;
            break;
        case DomainKind::IntervalUnion:
            lo[0] = intervals_.front().first;
            hi[0] = intervals_.back().second;
            break;
        case DomainKind::BallComplement:
            for (int i = 0; i < dim_; ++i) {
                lo[i] = center_[i] - radius_ - 4.0;
                hi[i] = center_[i] + radius_ + 4.0;
            }
            break;
    }
    return {lo, hi};
}

double Domain::diameter_hint() const {
    switch (kind_) {
        case DomainKind::Ball:
            return 2.0 * radius_;
        case DomainKind::Annulus:
            return 2.0 * r_out_;
        case DomainKind::IntervalUnion:
            return intervals_.back().second - intervals_.front().first;
        default: {
            const auto [lo, hi] = sampling_box();
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
            return std::sqrt(s);
        }
    }
}

std::string Domain::describe() const {
    std::ostringstream os;
    const auto pt = [&](const Point& p) {
        os << "(";
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
        os << ")";
    };
    switch (kind_) {
        case DomainKind::FullSpace:
            os << "full-space[d=" << dim_ << "]";
            break;
        case DomainKind::Ball:
            os << "ball[center=";
            pt(center_);
            os << ",radius=" << radius_ << "]";
            break;
        case DomainKind::Annulus:
            os << "annulus[center=";
            pt(center_);
            os << ",r_in=" << r_in_ << ",r_out=" << r_out_ << "]";
            break;
        case DomainKind::HalfSpace:
            os << "half-space[d=" << dim_ << ",level=" << level_ << "]";
            break;
        case DomainKind::HalfSpaceLike:
            os << "half-space-like[d=" << dim_ << ",height=" << bump_height_
               << ",bump_radius=" << bump_radius_ << "]";
            break;
        case DomainKind::IntervalUnion: {
            os << "intervals[";
            for (std::size_t i = 0; i < intervals_.size(); ++i)
                os << (i ? ";" : "") << intervals_[i].first << "," << intervals_[i].second;
            os << "]";
            break;
        }
        case DomainKind::BallComplement:
            os << "ball-complement[center=";
            pt(center_);
            os << ",radius=" << radius_ << "]";
            break;
    }
    return os.str();
}

}  // namespace relstable
