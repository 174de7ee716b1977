#pragma once

// Discrete harmonic measure on the square Q = (0, 2) x (-1, 1) and the
// x-derivative of its boundary density at the boundary point 0.

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ridgelab {

enum class Side { bottom, right, top, left };

inline const char* side_name(Side s)
{
    switch (s) {
    case Side::bottom: return "bottom";
    case Side::right: return "right";
    case Side::top: return "top";
    case Side::left: return "left";
    }
    return "?";
}

/// A segment of one side of Q. Top and bottom sides are parametrized by x in
/// [0, 2]; left and right sides by y in [-1, 1].
struct Arc {
    Side side = Side::bottom;
    double from = 0.0;
    double to = 0.0;

    static Arc whole(Side s)
    {
        return (s == Side::top || s == Side::bottom) ? Arc{s, 0.0, 2.0} : Arc{s, -1.0, 1.0};
    }

    [[nodiscard]] double length() const noexcept { return to - from; }

    [[nodiscard]] std::pair<double, double> midpoint() const noexcept
    {
        const double t = 0.5 * (from + to);
        switch (side) {
        case Side::bottom: return {t, -1.0};
        case Side::top: return {t, 1.0};
        case Side::right: return {2.0, t};
        case Side::left: return {0.0, t};
        }
        return {0.0, 0.0};
    }

    /// Mirror image under y -> -y.
    [[nodiscard]] Arc mirrored() const noexcept
    {
        switch (side) {
        case Side::bottom: return {Side::top, from, to};
        case Side::top: return {Side::bottom, from, to};
        default: return {side, -to, -from};
        }
    }
};

/// Uniform mesh of the closed square with width h; 1/h must be an integer so
/// that the corners and the boundary point 0 are nodes.
class SquareGrid {
public:
    explicit SquareGrid(double h)
    {
        const double inv = 1.0 / h;
        if (!(h > 0.0) || std::abs(inv - std::round(inv)) > 1e-9)
            throw std::invalid_argument("mesh width h must be 1/m for an integer m");
        if (h > 1.0 / 16.0 + 1e-15)
            throw std::invalid_argument("mesh width h must be at most 1/16");
        per_unit_ = static_cast<int>(std::round(inv));
        h_ = 1.0 / per_unit_;
        n_ = 2 * per_unit_;
    }

    [[nodiscard]] double h() const noexcept { return h_; }
    /// Intervals per side; nodes are (i, j) with 0 <= i, j <= n.
    [[nodiscard]] int n() const noexcept { return n_; }
    [[nodiscard]] std::size_t index(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_ + 1) + static_cast<std::size_t>(i);
    }
    [[nodiscard]] double x(int i) const noexcept { return i * h_; }
    [[nodiscard]] double y(int j) const noexcept { return -1.0 + j * h_; }
    /// Node index closest to (x, y).
    [[nodiscard]] std::pair<int, int> node_at(double x, double y) const noexcept
    {
        return {static_cast<int>(std::lround(x / h_)), static_cast<int>(std::lround((y + 1.0) / h_))};
    }

    /// Boundary values for the indicator of a union of arcs. Each boundary node
    /// carries the fraction of its dual cell [t - h/2, t + h/2] (clipped to its
    /// side) covered by the arcs. Corners belong to the left/right sides.
    [[nodiscard]] std::vector<double> boundary_data(std::span<const Arc> arcs) const
    {
        std::vector<double> data(static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1), 0.0);
        auto cover = [&](Side side, double t, double lo, double hi) {
            const double c0 = std::max(t - 0.5 * h_, lo);
            const double c1 = std::min(t + 0.5 * h_, hi);
            double covered = 0.0;
            for (const Arc& arc : arcs) {
                if (arc.side == side)
                    covered += std::max(0.0, std::min(c1, arc.to) - std::max(c0, arc.from));
            }
            return std::min(1.0, covered / (c1 - c0));
        };
        for (int k = 0; k <= n_; ++k) {
            data[index(0, k)] = cover(Side::left, y(k), -1.0, 1.0);
            data[index(n_, k)] = cover(Side::right, y(k), -1.0, 1.0);
        }
        for (int k = 1; k < n_; ++k) {
            data[index(k, 0)] = cover(Side::bottom, x(k), 0.0, 2.0);
            data[index(k, n_)] = cover(Side::top, x(k), 0.0, 2.0);
        }
        return data;
    }

private:
    double h_ = 1.0 / 16.0;
    int per_unit_ = 16;
    int n_ = 32;
};

/// Discrete harmonic function on the mesh, boundary values included.
struct GridFunction {
    SquareGrid grid;
    std::vector<double> values;
    int iterations = 0;
    double residual = 0.0;

    [[nodiscard]] double at(int i, int j) const { return values[grid.index(i, j)]; }
    [[nodiscard]] double at(double x, double y) const
    {
        const auto [i, j] = grid.node_at(x, y);
        return at(i, j);
    }
};

inline constexpr double kLaplaceResidualTolerance = 1e-10;

/// 5-point discrete Dirichlet problem with the arcs' indicator as boundary data,
/// solved by red-black SOR until max |4u - sum of neighbours| < tol.
[[nodiscard]] inline GridFunction harmonic_measure(std::span<const Arc> arcs, double h,
                                                   double tol = kLaplaceResidualTolerance)
{
    GridFunction out{SquareGrid(h), {}, 0, 0.0};
    const SquareGrid& g = out.grid;
    out.values = g.boundary_data(arcs);
    auto& u = out.values;
    const int n = g.n();
    const std::size_t stride = static_cast<std::size_t>(n + 1);
    const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / n));
    const int max_iter = 200 * n + 1000;

    auto max_residual = [&] {
        double r = 0.0;
        for (int j = 1; j < n; ++j) {
            for (int i = 1; i < n; ++i) {
                const std::size_t c = g.index(i, j);
                r = std::max(r, std::abs(4.0 * u[c] - u[c - 1] - u[c + 1] - u[c - stride] - u[c + stride]));
            }
        }
        return r;
    };

    for (int iter = 1; iter <= max_iter; ++iter) {
        for (int color = 0; color < 2; ++color) {
            for (int j = 1; j < n; ++j) {
                int i = 1 + ((j + 1 + color) & 1);
                for (; i < n; i += 2) {
                    const std::size_t c = g.index(i, j);
                    const double avg = 0.25 * (u[c - 1] + u[c + 1] + u[c - stride] + u[c + stride]);
                    u[c] += omega * (avg - u[c]);
                }
            }
        }
        if (iter % 10 == 0) {
            out.residual = max_residual();
            out.iterations = iter;
            if (out.residual < tol)
                return out;
        }
    }
    throw SolverNotConverged("SOR did not reach the residual target");
}

[[nodiscard]] inline GridFunction harmonic_measure(const Arc& arc, double h, double tol = kLaplaceResidualTolerance)
{
    return harmonic_measure(std::span<const Arc>(&arc, 1), h, tol);
}

[[nodiscard]] inline bool touches_open_left_edge(const Arc& arc) noexcept
{
    return arc.side == Side::left && arc.to > -1.0 && arc.from < 1.0;
}

/// One-sided estimate of d/dx of the harmonic-measure density at the boundary
/// point 0: omega((h, 0), arc) / (h |arc|). omega vanishes at 0 itself.
[[nodiscard]] inline double kernel_x_derivative_at_origin(const Arc& arc, double h,
                                                          double tol = kLaplaceResidualTolerance)
{
    if (touches_open_left_edge(arc))
        throw ArcExcluded("arcs on the open left edge (-i, i) are excluded");
    if (!(arc.length() > 0.0))
        throw std::invalid_argument("arc must have positive length");
    const auto w = harmonic_measure(arc, h, tol);
    const int mid = w.grid.n() / 2;
    return w.at(1, mid) / (w.grid.h() * arc.length());
}

struct ArcKernel {
    int arc_id = 0;
    Arc arc;
    double value = 0.0;
};

struct KernelEstimate {
    std::vector<ArcKernel> arcs;
    double c2_hat = 0.0;
    int argmin = 0;
    double h = 0.0;
    int arcs_per_side = 0;
};

/// Bottom, right and top sides split into `arcs_per_side` equal arcs each,
/// in that order (bottom and top left to right, right side bottom to top).
[[nodiscard]] inline std::vector<Arc> kernel_arcs(int arcs_per_side)
{
    std::vector<Arc> arcs;
    for (Side s : {Side::bottom, Side::right, Side::top}) {
        const Arc whole = Arc::whole(s);
        for (int k = 0; k < arcs_per_side; ++k) {
            const double a = whole.from + whole.length() * k / arcs_per_side;
            const double b = k + 1 == arcs_per_side ? whole.to : whole.from + whole.length() * (k + 1) / arcs_per_side;
            arcs.push_back({s, a, b});
        }
    }
    return arcs;
}

/// Minimum over the arcs of the kernel-derivative estimate. Solves are
/// independent; up to `jobs` of them run at once.
[[nodiscard]] inline KernelEstimate c2_estimate(double h, int arcs_per_side, unsigned jobs = 1,
                                                double tol = kLaplaceResidualTolerance)
{
    if (arcs_per_side < 8)
        throw std::invalid_argument("arcs_per_side must be at least 8");
    const auto arcs = kernel_arcs(arcs_per_side);
    KernelEstimate out;
    out.h = h;
    out.arcs_per_side = arcs_per_side;
    out.arcs.resize(arcs.size());
    jobs = std::max(1u, jobs);
    for (std::size_t start = 0; start < arcs.size(); start += jobs) {
        const std::size_t stop = std::min(arcs.size(), start + jobs);
        std::vector<std::future<double>> pending;
        for (std::size_t k = start; k < stop; ++k) {
            const Arc arc = arcs[k];
            pending.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                         [arc, h, tol] { return kernel_x_derivative_at_origin(arc, h, tol); }));
        }
        for (std::size_t k = start; k < stop; ++k)
            out.arcs[k] = {static_cast<int>(k), arcs[k], pending[k - start].get()};
    }
    out.argmin = 0;
    for (std::size_t k = 1; k < out.arcs.size(); ++k) {
        if (out.arcs[k].value < out.arcs[static_cast<std::size_t>(out.argmin)].value)
            out.argmin = static_cast<int>(k);
    }
    out.c2_hat = out.arcs[static_cast<std::size_t>(out.argmin)].value;
    return out;
}

}  // namespace ridgelab
