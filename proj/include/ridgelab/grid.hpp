#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ridgelab {

using Complex = std::complex<double>;

/// Sample points over a closed rectangle or a closed disc in the complex plane.
/// Point count is always steps_a * steps_b.
struct Grid {
    enum class Shape { rectangle, polar };

    Shape shape = Shape::rectangle;
    Complex center{0.0, 0.0};
    double half_width_x = 1.0;  // rectangle half-widths, or the disc radius in half_width_x
    double half_width_y = 1.0;
    int steps_a = 2;  // x nodes (rectangle) or radii (polar)
    int steps_b = 2;  // y nodes (rectangle) or angles (polar)

    static Grid rectangle(Complex center, double hx, double hy, int nx, int ny)
    {
        return validated({Shape::rectangle, center, hx, hy, nx, ny});
    }

    /// Radii radius*i/steps for i = 1..steps (the centre itself is excluded),
    /// angles 2*pi*j/steps for j = 0..steps-1.
    static Grid polar(Complex center, double radius, int radial_steps, int angular_steps)
    {
        return validated({Shape::polar, center, radius, radius, radial_steps, angular_steps});
    }

    [[nodiscard]] std::size_t size() const noexcept
    {
        return static_cast<std::size_t>(steps_a) * static_cast<std::size_t>(steps_b);
    }

    [[nodiscard]] std::vector<Complex> points() const
    {
        std::vector<Complex> out;
        out.reserve(size());
        if (shape == Shape::rectangle) {
            for (int i = 0; i < steps_a; ++i) {
                const double x = -half_width_x + 2.0 * half_width_x * i / (steps_a - 1);
                for (int j = 0; j < steps_b; ++j) {
                    const double y = -half_width_y + 2.0 * half_width_y * j / (steps_b - 1);
                    out.emplace_back(center + Complex(x, y));
                }
            }
        } else {
            for (int i = 1; i <= steps_a; ++i) {
                const double r = half_width_x * i / steps_a;
                for (int j = 0; j < steps_b; ++j)
                    out.emplace_back(center + std::polar(r, 2.0 * std::numbers::pi * j / steps_b));
            }
        }
        return out;
    }

private:
    static Grid validated(Grid g)
    {
        if (g.steps_a < 2 || g.steps_b < 2)
            throw std::invalid_argument("grid needs at least 2 steps per axis");
        if (!(g.half_width_x > 0.0) || !(g.half_width_y > 0.0))
            throw std::invalid_argument("grid extents must be positive");
        return g;
    }
};

}  // namespace ridgelab
