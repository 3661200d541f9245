#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace spacefill {

/// A point with runtime dimension. Coordinates are plain doubles; designs on
/// dyadic grids stay exact because every coordinate is a dyadic rational.
using Point = std::vector<double>;

enum class Norm { L1, L2, Linf };

inline std::string to_string(Norm n) {
    switch (n) {
        case Norm::L1: return "l1";
        case Norm::L2: return "l2";
        case Norm::Linf: return "linf";
    }
    throw std::logic_error("unreachable norm");
}

inline Norm norm_from_string(const std::string& s) {
    if (s == "l1") return Norm::L1;
    if (s == "l2") return Norm::L2;
    if (s == "linf") return Norm::Linf;
    throw std::invalid_argument("unknown norm: " + s);
}

inline double distance(const Point& a, const Point& b, Norm norm) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    switch (norm) {
        case Norm::L1: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
            return s;
        }
        case Norm::L2: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case Norm::Linf: {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
            return s;
        }
    }
    throw std::logic_error("unreachable norm");
}

inline bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Hypercube {
    Point lower;
    Point upper;
};

/// Euclidean ball; the design norm may still be L1/Linf, volume stays Lebesgue.
struct Ball {
    Point center;
    double radius = 0;
};

struct FiniteSet {
    std::vector<Point> points;
};

using Domain = std::variant<Hypercube, Ball, FiniteSet>;

inline int dimension_of(const Domain& dom) {
    return std::visit(
        [](const auto& d) -> int {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Hypercube>) return static_cast<int>(d.lower.size());
            else if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(d.center.size());
            else {
                if (d.points.empty()) throw std::invalid_argument("empty finite set has no dimension");
                return static_cast<int>(d.points.front().size());
            }
        },
        dom);
}

inline void validate_domain(const Domain& dom) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Hypercube>) {
                if (d.lower.empty() || d.lower.size() != d.upper.size())
                    throw std::invalid_argument("hypercube: bad bounds");
                for (std::size_t i = 0; i < d.lower.size(); ++i)
                    if (!(d.lower[i] < d.upper[i]))
                        throw std::invalid_argument("hypercube: lower must be strictly below upper");
            } else if constexpr (std::is_same_v<T, Ball>) {
                if (d.center.empty()) throw std::invalid_argument("ball: empty center");
                if (!(d.radius > 0)) throw std::invalid_argument("ball: radius must be positive");
            } else {
                if (d.points.empty()) throw std::invalid_argument("finite set: empty");
                const std::size_t dim = d.points.front().size();
                for (const auto& p : d.points)
                    if (p.size() != dim) throw std::invalid_argument("finite set: mixed dimensions");
                auto sorted = d.points;
                std::sort(sorted.begin(), sorted.end(), lex_less);
                for (std::size_t i = 1; i < sorted.size(); ++i)
                    if (sorted[i] == sorted[i - 1])
                        throw std::invalid_argument("finite set: duplicate point");
            }
        },
        dom);
}

inline bool contains(const Domain& dom, const Point& p) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Hypercube>) {
                if (p.size() != d.lower.size()) return false;
                for (std::size_t i = 0; i < p.size(); ++i)
                    if (p[i] < d.lower[i] || p[i] > d.upper[i]) return false;
                return true;
            } else if constexpr (std::is_same_v<T, Ball>) {
                return p.size() == d.center.size() && distance(p, d.center, Norm::L2) <= d.radius;
            } else {
                return std::find(d.points.begin(), d.points.end(), p) != d.points.end();
            }
        },
        dom);
}

/// Default first design point: the center for hypercubes and balls, the
/// lexicographically smallest point for finite sets.
inline Point default_start_point(const Domain& dom) {
    return std::visit(
        [](const auto& d) -> Point {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Hypercube>) {
                Point c(d.lower.size());
                for (std::size_t i = 0; i < c.size(); ++i) c[i] = d.lower[i] + (d.upper[i] - d.lower[i]) / 2;
                return c;
            } else if constexpr (std::is_same_v<T, Ball>) {
                return d.center;
            } else {
                return *std::min_element(d.points.begin(), d.points.end(), lex_less);
            }
        },
        dom);
}

/// Volume of the unit ball of the given norm in dimension d.
/// L2 is pi^(d/2)/Gamma(d/2+1), evaluated with integer factorials so small
/// dimensions come out exact (V_1 = 2, V_2 = pi); L1 is 2^d/d!; Linf is 2^d.
inline double unit_ball_volume(int d, Norm norm) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    switch (norm) {
        case Norm::L2: {
            if (d % 2 == 0) {
                // V_{2k} = pi^k / k!
                const int k = d / 2;
                double v = std::pow(M_PI, k);
                for (int i = 2; i <= k; ++i) v /= i;
                return v;
            }
            // V_{2k+1} = 2 * k! * (4 pi)^k / (2k+1)!
            const int k = (d - 1) / 2;
            double v = 2 * std::pow(4 * M_PI, k);
            for (int i = k + 1; i <= 2 * k + 1; ++i) v /= i;
            return v;
        }
        case Norm::L1: {
            double v = std::ldexp(1.0, d);
            for (int k = 2; k <= d; ++k) v /= k;
            return v;
        }
        case Norm::Linf:
            return std::ldexp(1.0, d);
    }
    throw std::logic_error("unreachable norm");
}

/// Lebesgue volume of the domain (norm-independent). Finite sets have none.
inline double volume(const Domain& dom) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Hypercube>) {
                double v = 1;
                for (std::size_t i = 0; i < d.lower.size(); ++i) v *= d.upper[i] - d.lower[i];
                return v;
            } else if constexpr (std::is_same_v<T, Ball>) {
                return unit_ball_volume(static_cast<int>(d.center.size()), Norm::L2) *
                       std::pow(d.radius, static_cast<double>(d.center.size()));
            } else {
                throw std::invalid_argument("volume: undefined for finite sets");
            }
        },
        dom);
}

/// Distance from a point to the domain boundary. Zero exactly on the boundary.
/// Finite sets have no boundary in this sense and are rejected.
inline double boundary_distance(const Domain& dom, const Point& p) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Hypercube>) {
                if (p.size() != d.lower.size())
                    throw std::invalid_argument("boundary_distance: dimension mismatch");
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < p.size(); ++i)
                    m = std::min({m, p[i] - d.lower[i], d.upper[i] - p[i]});
                return m;
            } else if constexpr (std::is_same_v<T, Ball>) {
                return d.radius - distance(p, d.center, Norm::L2);
            } else {
                throw std::invalid_argument("boundary_distance: undefined for finite sets");
            }
        },
        dom);
}

/// Volume estimate carrying Monte Carlo metadata; std_error == 0 means exact.
struct InflatedVolume {
    double value = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Elementary symmetric polynomials e_0..e_d of the box side lengths.
inline std::vector<double> elementary_symmetric(const std::vector<double>& w) {
    std::vector<double> e(w.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t k = std::min(i + 1, w.size()); k >= 1; --k) e[k] += e[k - 1] * w[i];
    return e;
}

inline double l1_distance_to_box(const Hypercube& box, const Point& p) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < box.lower[i]) s += box.lower[i] - p[i];
        else if (p[i] > box.upper[i]) s += p[i] - box.upper[i];
    }
    return s;
}

}  // namespace detail

/// V_k of the Euclidean unit ball with the V_0 = 1 convention the Steiner
/// formula needs.
inline double unit_ball_volume_or_one(int k) {
    return k == 0 ? 1.0 : unit_ball_volume(k, Norm::L2);
}

/// Volume of the Minkowski sum box + r*B(norm). Closed form for Linf (side
/// products) and L2 (Steiner decomposition: faces get slabs, edges get
/// cylinder sectors, corners assemble unit balls). L1 has no tidy closed form
/// here, so it is estimated by seeded Monte Carlo with a reported standard
/// error.
inline InflatedVolume inflated_volume(const Hypercube& box, double r, Norm norm,
                                      std::uint64_t mc_samples = 2000000,
                                      std::uint64_t mc_seed = 0x5eedf111u) {
    if (r < 0) throw std::invalid_argument("inflated_volume: radius must be >= 0");
    const int d = static_cast<int>(box.lower.size());
    std::vector<double> w(box.lower.size());
    for (int i = 0; i < d; ++i) w[i] = box.upper[i] - box.lower[i];

    InflatedVolume out;
    switch (norm) {
        case Norm::Linf: {
            double v = 1;
            for (double wi : w) v *= wi + 2 * r;
            out.value = v;
            return out;
        }
        case Norm::L2: {
            const auto e = detail::elementary_symmetric(w);
            double v = 0;
            for (int k = 0; k <= d; ++k)
                v += unit_ball_volume_or_one(k) * std::pow(r, k) * e[d - k];
            out.value = v;
            return out;
        }
        case Norm::L1: {
            std::mt19937_64 rng(mc_seed);
            Hypercube bbox{box.lower, box.upper};
            for (int i = 0; i < d; ++i) {
                bbox.lower[i] -= r;
                bbox.upper[i] += r;
            }
            double bbox_vol = 1;
            for (int i = 0; i < d; ++i) bbox_vol *= bbox.upper[i] - bbox.lower[i];
            std::uint64_t hits = 0;
            Point p(static_cast<std::size_t>(d));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (std::uint64_t s = 0; s < mc_samples; ++s) {
                for (int i = 0; i < d; ++i)
                    p[i] = bbox.lower[i] + (bbox.upper[i] - bbox.lower[i]) * unit(rng);
                if (detail::l1_distance_to_box(box, p) <= r) ++hits;
            }
            const double frac = static_cast<double>(hits) / static_cast<double>(mc_samples);
            out.value = bbox_vol * frac;
            out.std_error = bbox_vol * std::sqrt(frac * (1 - frac) / static_cast<double>(mc_samples));
            out.samples = mc_samples;
            out.seed = mc_seed;
            return out;
        }
    }
    throw std::logic_error("unreachable norm");
}

/// The (2^K+1)^d lattice over the box, in lexicographic order. Coordinates on
/// [0,1] boxes are exact dyadic rationals. Refuses to materialize more than
/// max_points.
inline FiniteSet dyadic_grid(const Hypercube& box, int k, std::uint64_t max_points = 10000000) {
    if (k < 0) throw std::invalid_argument("dyadic_grid: k must be >= 0");
    if (k > 40) throw std::invalid_argument("dyadic_grid: k too large");
    const int d = static_cast<int>(box.lower.size());
    const std::uint64_t side = (std::uint64_t{1} << k) + 1;
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) {
        if (count > max_points / side + 1) throw std::invalid_argument("dyadic_grid: point cap exceeded");
        count *= side;
    }
    if (count > max_points) throw std::invalid_argument("dyadic_grid: point cap exceeded");

    FiniteSet grid;
    grid.points.reserve(count);
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(d), 0);
    Point p(static_cast<std::size_t>(d));
    while (true) {
        for (int i = 0; i < d; ++i) {
            const double t = std::ldexp(static_cast<double>(idx[i]), -k);
            p[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * t;
        }
        grid.points.push_back(p);
        int axis = d - 1;
        while (axis >= 0 && idx[axis] == side - 1) idx[axis--] = 0;
        if (axis < 0) break;
        ++idx[axis];
    }
    return grid;
}

/// Covering radius of the level-k dyadic grid inside its box: the farthest
/// domain point sits at a cell center, half a step away per axis.
inline double dyadic_grid_cover_radius(const Hypercube& box, int k, Norm norm) {
    const int d = static_cast<int>(box.lower.size());
    std::vector<double> half(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) half[i] = std::ldexp(box.upper[i] - box.lower[i], -k - 1);
    switch (norm) {
        case Norm::Linf: return *std::max_element(half.begin(), half.end());
        case Norm::L1: {
            double s = 0;
            for (double h : half) s += h;
            return s;
        }
        case Norm::L2: {
            double s = 0;
            for (double h : half) s += h * h;
            return std::sqrt(s);
        }
    }
    throw std::logic_error("unreachable norm");
}

}  // namespace spacefill
