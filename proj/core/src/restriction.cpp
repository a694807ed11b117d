#include "polyres/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polyres/error.hpp"

namespace polyres {

namespace {

// One half-plane a0 u0 + a1 u1 <= b.
struct HalfPlane {
    double a0, a1, b;
};

std::vector<Point2> clip(const std::vector<Point2>& poly, const HalfPlane& h) {
    std::vector<Point2> out;
    if (poly.empty()) return out;
    auto value = [&](const Point2& p) { return h.a0 * p[0] + h.a1 * p[1] - h.b; };
    const double scale = std::max({std::abs(h.a0), std::abs(h.a1), std::abs(h.b), 1e-300});
    const double eps = 1e-12 * scale;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& cur = poly[i];
        const Point2& nxt = poly[(i + 1) % poly.size()];
        const double fc = value(cur);
        const double fn = value(nxt);
        const bool in_c = fc <= eps;
        const bool in_n = fn <= eps;
        if (in_c) out.push_back(cur);
        if (in_c != in_n) {
            const double t = fc / (fc - fn);
            out.push_back({cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])});
        }
    }
    return out;
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Column of the stacked split vector touched by one unit of |u| on `axis`
// when u has sign `sign`.
Eigen::VectorXd slice_direction(int n, const LoadCoordinate& axis, int sign) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(4 * n);
    const int j = axis.bus - 1;
    const int pc = j, qc = n + j, pg = 2 * n + j, qg = 3 * n + j;
    if (axis.component == LoadComponent::Active) {
        d[sign > 0 ? pc : pg] = 1.0;
        const double q = axis.reactive_per_active * sign;  // net q per unit |u|
        if (q > 0) d[qc] = q;
        if (q < 0) d[qg] = -q;
    } else {
        d[sign > 0 ? qc : qg] = 1.0;
    }
    return d;
}

}  // namespace

RestrictionMatrices build_matrices(const BusMatrices& matrices) {
    const Eigen::Index n = matrices.size();
    const Eigen::MatrixXd& R = matrices.R;
    const Eigen::MatrixXd& X = matrices.X;
    const Eigen::MatrixXd rpx = R + X;
    const Eigen::MatrixXd rmx = R - X;
    const Eigen::MatrixXd mrpx = -R + X;
    const Eigen::MatrixXd mrmx = -R - X;

    RestrictionMatrices out;
    out.A.resize(4 * n, 4 * n);
    // Columns: pc | qc | pg | qg. The pg and qg block-columns are the
    // negated pc and qc block-columns.
    out.A.block(0 * n, 0, n, n) = -rpx;
    out.A.block(0 * n, n, n, n) = -mrpx;
    out.A.block(0 * n, 2 * n, n, n) = rpx;
    out.A.block(0 * n, 3 * n, n, n) = mrpx;

    out.A.block(1 * n, 0, n, n) = -mrpx;
    out.A.block(1 * n, n, n, n) = -mrmx;
    out.A.block(1 * n, 2 * n, n, n) = mrpx;
    out.A.block(1 * n, 3 * n, n, n) = mrmx;

    out.A.block(2 * n, 0, n, n) = -rmx;
    out.A.block(2 * n, n, n, n) = -rpx;
    out.A.block(2 * n, 2 * n, n, n) = rmx;
    out.A.block(2 * n, 3 * n, n, n) = rpx;

    out.A.block(3 * n, 0, n, n) = -mrmx;
    out.A.block(3 * n, n, n, n) = -rmx;
    out.A.block(3 * n, 2 * n, n, n) = mrmx;
    out.A.block(3 * n, 3 * n, n, n) = rmx;

    const Eigen::MatrixXd absZ = matrices.Z.cwiseAbs();
    out.B.resize(4 * n, 4 * n);
    out.C.resize(4 * n, 4 * n);
    for (int bi = 0; bi < 4; ++bi) {
        for (int bj = 0; bj < 4; ++bj) {
            out.B.block(bi * n, bj * n, n, n) = rpx;
            out.C.block(bi * n, bj * n, n, n) = absZ;
        }
    }
    return out;
}

PolyhedralRestriction build_restriction(const BusMatrices& matrices, const OperatingPoint& center, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DeltaOutOfRange(delta);
    const int n = matrices.size();
    if (center.v_hat.size() != n || center.s_hat.size() != n) {
        throw std::invalid_argument("center dimension does not match the network");
    }
    double residual = 0.0;
    try {
        residual = pf_residual(matrices, center.v_hat, center.s_hat);
    } catch (const ZeroVoltage&) {
        throw InfeasibleCenter(std::numeric_limits<double>::infinity());
    }
    if (!(residual <= kCenterResidualTol)) throw InfeasibleCenter(residual);

    double vmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) vmin = std::min(vmin, std::abs(center.v_hat.v[j]));
    if (n == 0) vmin = std::abs(center.v_hat.v0);

    const RestrictionMatrices m = build_matrices(matrices);
    const Eigen::VectorXd s_hat = center.s_hat.stacked();

    PolyhedralRestriction p;
    p.delta = delta;
    p.center = center;
    p.lhs = m.A + delta * m.B;
    const double margin = delta * (1.0 - delta) * (1.0 - delta) * vmin * vmin * vmin;
    p.rhs = Eigen::VectorXd::Constant(4 * n, margin) + (m.A - delta * (m.B + (1.0 - delta) * m.C)) * s_hat;
    return p;
}

PolyhedralRestriction build_restriction_nominal(const BusMatrices& matrices, Complex v0, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DeltaOutOfRange(delta);
    const int n = matrices.size();
    const RestrictionMatrices m = build_matrices(matrices);
    const double mag = std::abs(v0);

    PolyhedralRestriction p;
    p.delta = delta;
    p.center = OperatingPoint::nominal(n, v0);
    p.lhs = m.A + delta * m.B;
    p.rhs = Eigen::VectorXd::Constant(4 * n, delta * (1.0 - delta) * (1.0 - delta) * mag * mag * mag);
    return p;
}

bool contains(const PolyhedralRestriction& p, const Eigen::VectorXd& stacked, double tol) {
    if (stacked.size() != p.dimension()) throw std::invalid_argument("dimension mismatch in contains");
    if ((stacked.array() < 0.0).any()) return false;
    const Eigen::VectorXd slack = p.lhs * stacked - p.rhs;
    return (slack.array() <= tol).all();
}

bool contains(const PolyhedralRestriction& p, const SplitLoadVector& s, double tol) {
    return contains(p, s.stacked(), tol);
}

SplitLoadVector normalize_split(const SplitLoadVector& s) {
    Eigen::VectorXd pc = s.pc(), qc = s.qc(), pg = s.pg(), qg = s.qg();
    auto cancel = [](double& c, double& g) {
        if (c * g == 0.0) return;
        if (c >= g) {
            c -= g;
            g = 0.0;
        } else {
            g -= c;
            c = 0.0;
        }
    };
    for (Eigen::Index j = 0; j < pc.size(); ++j) {
        cancel(pc[j], pg[j]);
        cancel(qc[j], qg[j]);
    }
    return {pc, qc, pg, qg};
}

std::vector<Point2> slice_polygon(const PolyhedralRestriction& p, const SplitLoadVector& base,
                                  const std::array<LoadCoordinate, 2>& axes, const SliceWindow& window) {
    const int n = base.size();
    if (4 * n != p.dimension()) throw std::invalid_argument("base load does not match the restriction");
    if (!(window.lo0 <= window.hi0 && window.lo1 <= window.hi1)) throw std::invalid_argument("empty slice window");

    auto touches = [](const LoadCoordinate& c, LoadComponent comp) {
        return c.component == comp || (comp == LoadComponent::Reactive && c.component == LoadComponent::Active &&
                                       c.reactive_per_active != 0.0);
    };
    const bool both_active = touches(axes[0], LoadComponent::Active) && touches(axes[1], LoadComponent::Active);
    const bool both_reactive = touches(axes[0], LoadComponent::Reactive) && touches(axes[1], LoadComponent::Reactive);
    if (axes[0].bus == axes[1].bus && (both_active || both_reactive)) {
        throw std::invalid_argument("slice axes address the same load component");
    }

    // Base with the slice coordinates zeroed, in complementary form.
    const std::array<double, 2> zero{0.0, 0.0};
    const Eigen::VectorXd s0 = with_net_coordinates(base, axes, zero).stacked();
    const Eigen::VectorXd base_slack = p.rhs - p.lhs * s0;

    std::vector<Point2> vertices;
    for (int sign0 : {1, -1}) {
        for (int sign1 : {1, -1}) {
            std::vector<Point2> poly{{window.lo0, window.lo1},
                                     {window.hi0, window.lo1},
                                     {window.hi0, window.hi1},
                                     {window.lo0, window.hi1}};
            // Quadrant: sign_i * u_i >= 0.
            poly = clip(poly, {-static_cast<double>(sign0), 0.0, 0.0});
            poly = clip(poly, {0.0, -static_cast<double>(sign1), 0.0});
            // |u_i| = sign_i u_i inside the quadrant.
            const Eigen::VectorXd c0 = p.lhs * slice_direction(n, axes[0], sign0) * sign0;
            const Eigen::VectorXd c1 = p.lhs * slice_direction(n, axes[1], sign1) * sign1;
            for (Eigen::Index r = 0; r < c0.size() && !poly.empty(); ++r) {
                poly = clip(poly, {c0[r], c1[r], base_slack[r]});
            }
            vertices.insert(vertices.end(), poly.begin(), poly.end());
        }
    }
    // The section is convex (a linear image of a convex set), so the union of
    // the quadrant pieces is its hull.
    return convex_hull(std::move(vertices));
}

}  // namespace polyres
