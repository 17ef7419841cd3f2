// Copyright 2026 The tailhd authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
#include "tailhd/depth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace tailhd {

namespace {

void check_query(MatrixRef cloud, VectorRef x) {
    if (x.size() != cloud.cols()) throw DataError("query dimension does not match cloud");
    if (!x.allFinite()) throw DataError("query point has non-finite coordinates");
}

}  // namespace

ProjectedSample project(MatrixRef cloud, VectorRef direction) {
    if (direction.size() != cloud.cols()) throw DataError("direction dimension does not match cloud");
    if (direction.norm() == 0.0) throw DataError("direction must be non-zero");
    ProjectedSample s;
    s.values.resize(static_cast<std::size_t>(cloud.rows()));
    Eigen::Map<Eigen::VectorXd>(s.values.data(), cloud.rows()) = cloud * direction;
    std::sort(s.values.begin(), s.values.end());
    return s;
}

DepthValue univariate_depth(const ProjectedSample& proj, double x) {
    const auto& v = proj.values;
    if (v.empty()) throw DataError("empty projection");
    const auto le = std::upper_bound(v.begin(), v.end(), x) - v.begin();
    const auto ge = v.end() - std::lower_bound(v.begin(), v.end(), x);
    return DepthValue{std::min<std::int64_t>(le, ge), static_cast<std::int64_t>(v.size())};
}

DepthValue depth_approx(MatrixRef cloud, VectorRef x, MatrixRef directions) {
    check_query(cloud, x);
    if (directions.rows() == 0) throw ConfigError("depth_approx requires at least one direction");
    if (directions.cols() != cloud.cols()) throw ConfigError("direction set dimension mismatch");
    const Eigen::Index n = cloud.rows();
    std::int64_t best = n;
    Eigen::VectorXd proj(n);
    for (Eigen::Index k = 0; k < directions.rows(); ++k) {
        const auto h = directions.row(k);
        if (h.norm() == 0.0) throw ConfigError("zero direction in direction set");
        proj.noalias() = cloud * h.transpose();
        const double s = h.dot(x);
        std::int64_t le = 0, ge = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            le += proj[i] <= s;
            ge += proj[i] >= s;
        }
        best = std::min(best, std::min(le, ge));
        if (best == 0) break;
    }
    return DepthValue{best, n};
}

// ---------------------------------------------------------------------------
// Exact depth in the plane.
//
// With v_i = X_i - x, the depth numerator is
//   #{v_i = 0} + min over unit u of #{<v_i, u> >= 0, v_i != 0}.
// The count for normal u at angle p equals the number of point angles in the
// closed arc [p - pi/2, p + pi/2]; minima occur just past arc endpoints, so
// it suffices to evaluate, for every distinct point angle a:
//   A = #{angles in (a, a + pi]}   and   B = #{angles in [a - pi, a)}.
// All arc tests reduce to signs of cross/dot products, which keeps ties exact
// and consistent with depth_exact_brute.
// ---------------------------------------------------------------------------

namespace {

struct Vec2 {
    double x, y;
};

inline double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dot2(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
// Half 0 covers angles [0, pi), half 1 covers [pi, 2pi).
inline int half_of(const Vec2& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

inline bool angle_less(const Vec2& a, const Vec2& b) {
    const int ha = half_of(a), hb = half_of(b);
    if (ha != hb) return ha < hb;
    return cross2(a, b) > 0;
}

}  // namespace

DepthValue depth_exact_2d(MatrixRef cloud, VectorRef x) {
    check_query(cloud, x);
    if (cloud.cols() != 2) throw DataError("depth_exact_2d requires d = 2");
    const Eigen::Index n = cloud.rows();

    std::vector<Vec2> vecs;
    vecs.reserve(static_cast<std::size_t>(n));
    std::int64_t n0 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 v{cloud(i, 0) - x[0], cloud(i, 1) - x[1]};
        if (v.x == 0.0 && v.y == 0.0)
            ++n0;
        else
            vecs.push_back(v);
    }
    if (vecs.empty()) return DepthValue{n0, n};

    std::sort(vecs.begin(), vecs.end(), angle_less);

    // Collapse equal-angle runs, keeping multiplicities.
    std::vector<Vec2> rep;
    std::vector<std::int64_t> cnt;
    for (const Vec2& v : vecs) {
        if (!rep.empty() && half_of(rep.back()) == half_of(v) && cross2(rep.back(), v) == 0.0) {
            ++cnt.back();
        } else {
            rep.push_back(v);
            cnt.push_back(1);
        }
    }
    const std::size_t m = rep.size();
    const std::int64_t total = static_cast<std::int64_t>(vecs.size());

    if (m == 1) return DepthValue{n0, n};  // single ray: a halfplane avoids all of it

    std::vector<std::int64_t> csum(2 * m + 1, 0);
    for (std::size_t k = 0; k < 2 * m; ++k) csum[k + 1] = csum[k] + cnt[k % m];

    std::int64_t best = total;
    std::size_t p = 1;
    for (std::size_t j = 0; j < m; ++j) {
        if (p < j + 1) p = j + 1;
        // Advance past every group strictly inside the open half-turn after j.
        while (p < j + m && cross2(rep[j], rep[p % m]) > 0) ++p;
        const std::int64_t s = csum[p] - csum[j + 1];
        std::int64_t ant = 0;
        if (p < j + m) {
            const Vec2& w = rep[p % m];
            if (cross2(rep[j], w) == 0.0 && dot2(rep[j], w) < 0) ant = cnt[p % m];
        }
        best = std::min(best, std::min(s + ant, total - cnt[j] - s));
        if (best == 0) break;
    }
    return DepthValue{n0 + best, n};
}

// ---------------------------------------------------------------------------
// Brute-force oracle for d <= 4.
//
// min over generic directions u of #{<v_i, u> > 0} is evaluated by visiting
// every candidate hyperplane spanned by a (d-1)-subset and resolving points
// on the boundary by the same minimisation one dimension down (vectors are
// re-expressed through dot products with a spanning subset, which preserves
// sign structure). Rank-deficient configurations fall through to the lower
// dimensional rule directly.
// ---------------------------------------------------------------------------

namespace {

using Vec4 = std::array<double, 4>;

inline double dotd(const Vec4& a, const Vec4& b, int d) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

std::int64_t min_open_count(const std::vector<Vec4>& v, int d);

std::int64_t min_open_count_1d(const std::vector<Vec4>& v) {
    std::int64_t pos = 0, neg = 0;
    for (const auto& a : v) {
        pos += a[0] > 0;
        neg += a[0] < 0;
    }
    return std::min(pos, neg);
}

std::int64_t min_open_count_2d(const std::vector<Vec4>& v) {
    const std::size_t n = v.size();
    if (n == 0) return 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t j = 0; j < n; ++j) {
        std::int64_t pos = 0, neg = 0;
        std::vector<Vec4> line;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = v[j][0] * v[i][1] - v[j][1] * v[i][0];
            if (c > 0)
                ++pos;
            else if (c < 0)
                ++neg;
            else
                line.push_back(Vec4{dotd(v[i], v[j], 2), 0, 0, 0});
        }
        const std::int64_t sub = min_open_count_1d(line);
        best = std::min({best, pos + sub, neg + sub});
        if (best == 0) break;
    }
    return best;
}

std::int64_t min_open_count_3d(const std::vector<Vec4>& v) {
    const std::size_t n = v.size();
    if (n == 0) return 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    bool any_pair = false;
    for (std::size_t a = 0; a < n && best > 0; ++a) {
        for (std::size_t b = a + 1; b < n && best > 0; ++b) {
            const Vec4 u{v[a][1] * v[b][2] - v[a][2] * v[b][1],
                         v[a][2] * v[b][0] - v[a][0] * v[b][2],
                         v[a][0] * v[b][1] - v[a][1] * v[b][0], 0};
            if (u[0] == 0 && u[1] == 0 && u[2] == 0) continue;
            any_pair = true;
            std::int64_t pos = 0, neg = 0;
            std::vector<Vec4> plane;
            for (std::size_t i = 0; i < n; ++i) {
                // The defining pair lies on the plane by construction; the
                // rounded dot product must not push it to either side.
                const double s = (i == a || i == b) ? 0.0 : dotd(v[i], u, 3);
                if (s > 0)
                    ++pos;
                else if (s < 0)
                    ++neg;
                else
                    plane.push_back(Vec4{dotd(v[i], v[a], 3), dotd(v[i], v[b], 3), 0, 0});
            }
            const std::int64_t sub = min_open_count_2d(plane);
            best = std::min({best, pos + sub, neg + sub});
        }
    }
    if (!any_pair) return min_open_count_1d([&] {
        std::vector<Vec4> line;
        line.reserve(n);
        for (const auto& w : v) line.push_back(Vec4{dotd(w, v[0], 3), 0, 0, 0});
        return line;
    }());
    return best;
}

std::int64_t min_open_count_4d(const std::vector<Vec4>& v) {
    const std::size_t n = v.size();
    if (n == 0) return 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    bool any_triple = false;
    for (std::size_t a = 0; a < n && best > 0; ++a) {
        for (std::size_t b = a + 1; b < n && best > 0; ++b) {
            for (std::size_t c = b + 1; c < n && best > 0; ++c) {
                // Generalised cross product: u_k = +/- det of the 3x3 minor
                // obtained by deleting column k from rows (v_a, v_b, v_c).
                Vec4 u{};
                for (int k = 0; k < 4; ++k) {
                    double m[3][3];
                    for (int r = 0; r < 3; ++r) {
                        const Vec4& w = r == 0 ? v[a] : (r == 1 ? v[b] : v[c]);
                        int cc = 0;
                        for (int col = 0; col < 4; ++col)
                            if (col != k) m[r][cc++] = w[col];
                    }
                    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
                    u[k] = (k % 2 == 0) ? det : -det;
                }
                if (u[0] == 0 && u[1] == 0 && u[2] == 0 && u[3] == 0) continue;
                any_triple = true;
                std::int64_t pos = 0, neg = 0;
                std::vector<Vec4> hyper;
                for (std::size_t i = 0; i < n; ++i) {
                    // Defining triple is on the hyperplane by construction.
                    const double s = (i == a || i == b || i == c) ? 0.0 : dotd(v[i], u, 4);
                    if (s > 0)
                        ++pos;
                    else if (s < 0)
                        ++neg;
                    else
                        hyper.push_back(Vec4{dotd(v[i], v[a], 4), dotd(v[i], v[b], 4), dotd(v[i], v[c], 4), 0});
                }
                const std::int64_t sub = min_open_count_3d(hyper);
                best = std::min({best, pos + sub, neg + sub});
            }
        }
    }
    if (!any_triple) {
        // Rank <= 2: re-express through the first independent pair, or ray.
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                bool indep = false;
                for (int i = 0; i < 4 && !indep; ++i)
                    for (int j = i + 1; j < 4 && !indep; ++j)
                        if (v[a][i] * v[b][j] - v[a][j] * v[b][i] != 0) indep = true;
                if (!indep) continue;
                std::vector<Vec4> plane;
                plane.reserve(n);
                for (const auto& w : v) plane.push_back(Vec4{dotd(w, v[a], 4), dotd(w, v[b], 4), 0, 0});
                return min_open_count_2d(plane);
            }
        }
        std::vector<Vec4> line;
        line.reserve(n);
        for (const auto& w : v) line.push_back(Vec4{dotd(w, v[0], 4), 0, 0, 0});
        return min_open_count_1d(line);
    }
    return best;
}

std::int64_t min_open_count(const std::vector<Vec4>& v, int d) {
    switch (d) {
        case 1: return min_open_count_1d(v);
        case 2: return min_open_count_2d(v);
        case 3: return min_open_count_3d(v);
        case 4: return min_open_count_4d(v);
        default: throw ResourceLimitError("brute-force depth supports d <= 4");
    }
}

}  // namespace

DepthValue depth_exact_brute(MatrixRef cloud, VectorRef x) {
    check_query(cloud, x);
    if (cloud.cols() > BRUTE_MAX_D)
        throw ResourceLimitError("depth_exact_brute caps at d <= 4");
    if (cloud.rows() > BRUTE_MAX_N)
        throw ResourceLimitError("depth_exact_brute caps at n <= 200");
    const int d = static_cast<int>(cloud.cols());
    const Eigen::Index n = cloud.rows();

    std::vector<Vec4> vecs;
    vecs.reserve(static_cast<std::size_t>(n));
    std::int64_t n0 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Vec4 v{};
        bool zero = true;
        for (int j = 0; j < d; ++j) {
            v[j] = cloud(i, j) - x[j];
            zero = zero && v[j] == 0.0;
        }
        if (zero)
            ++n0;
        else
            vecs.push_back(v);
    }
    if (vecs.empty()) return DepthValue{n0, n};
    return DepthValue{n0 + min_open_count(vecs, d), n};
}

DepthValue depth_dispatch(MatrixRef cloud, VectorRef x, MatrixRef directions) {
    if (cloud.cols() == 1) {
        ProjectedSample s;
        s.values.assign(cloud.data(), cloud.data() + cloud.rows());
        std::sort(s.values.begin(), s.values.end());
        return univariate_depth(s, x[0]);
    }
    if (cloud.cols() == 2) return depth_exact_2d(cloud, x);
    return depth_approx(cloud, x, directions);
}

// ---------------------------------------------------------------------------
// Contours.
// ---------------------------------------------------------------------------

namespace {

using Poly = std::vector<Eigen::Vector2d>;

// Clip a convex polygon by the closed halfplane <u, z> <= c.
Poly clip(const Poly& poly, const Eigen::Vector2d& u, double c) {
    Poly out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % n];
        const double da = u.dot(a) - c;
        const double db = u.dot(b) - c;
        if (da <= 0) out.push_back(a);
        if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

}  // namespace

ContourPolygon depth_contour_2d(MatrixRef cloud, double tau, int resolution) {
    if (cloud.cols() != 2) throw DataError("depth_contour_2d requires d = 2");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("contour level must be in (0, 1]");
    if (resolution < 4) throw ConfigError("contour resolution must be at least 4");
    const Eigen::Index n = cloud.rows();

    ContourPolygon result;
    result.tau = tau;
    const auto m = static_cast<std::int64_t>(std::ceil(tau * static_cast<double>(n) - 1e-9));
    if (m > n) return result;

    // Generous starting box around the data.
    const double lox = cloud.col(0).minCoeff(), hix = cloud.col(0).maxCoeff();
    const double loy = cloud.col(1).minCoeff(), hiy = cloud.col(1).maxCoeff();
    const double pad = 1.0 + 0.5 * std::max(hix - lox, hiy - loy);
    Poly poly{{lox - pad, loy - pad}, {hix + pad, loy - pad}, {hix + pad, hiy + pad}, {lox - pad, hiy + pad}};

    std::vector<double> proj(static_cast<std::size_t>(n));
    for (int j = 0; j < resolution && !poly.empty(); ++j) {
        const double phi = 2.0 * std::numbers::pi * j / resolution;
        const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
        Eigen::Map<Eigen::VectorXd>(proj.data(), n) = cloud * u;
        // m-th largest projection: any x with <u,x> above it is cut off by a
        // halfplane containing fewer than m sample points.
        std::nth_element(proj.begin(), proj.begin() + (m - 1), proj.end(), std::greater<double>());
        poly = clip(poly, u, proj[static_cast<std::size_t>(m - 1)]);
    }

    if (poly.size() >= 3) {
        double area = 0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& a = poly[i];
            const auto& b = poly[(i + 1) % poly.size()];
            area += a.x() * b.y() - b.x() * a.y();
        }
        if (std::abs(area) > 1e-12) result.vertices = std::move(poly);
    }
    return result;
}

bool polygon_contains(const ContourPolygon& poly, const Eigen::Vector2d& p, double tol) {
    if (poly.empty()) return false;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& a = poly.vertices[i];
        const Eigen::Vector2d& b = poly.vertices[(i + 1) % n];
        const Eigen::Vector2d e = b - a;
        if (e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x()) < -tol * std::max(1.0, e.norm())) return false;
    }
    return true;
}

double polygon_area(const ContourPolygon& poly) {
    if (poly.empty()) return 0.0;
    double area = 0;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly.vertices[i];
        const auto& b = poly.vertices[(i + 1) % n];
        area += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * std::abs(area);
}

}  // namespace tailhd
