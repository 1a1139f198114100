#ifndef ORBITSUM_RENDER_HPP
#define ORBITSUM_RENDER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "orbitsum/diagnostics.hpp"

namespace orbitsum {

struct RenderSpec {
    cplx center{0.0, 0.0};
    double half_extent = 2.5;
    int width = 513;  // odd sizes put a pixel center exactly at the grid center
    int height = 513;
    int max_iter = 200;
    int threads = 1;
};

struct JuliaImage {
    int width = 0, height = 0;
    std::vector<int> steps;           // iterations to escape/converge; -1 = never
    std::vector<std::uint8_t> pixels; // grayscale shading (bright = bounded)
    bool unresolved_warning = false;  // rational map with no detected attractor

    cplx pixel_point(int i, int j) const;
    int step_at(int i, int j) const { return steps[std::size_t(j) * width + i]; }

    RenderSpec spec;
};

// Escape-time shading for polynomials (radius 2 * max(2, coefficient scale));
// cycle-convergence time for rational maps against attracting cycles detected
// from the critical orbits.  Deterministic pixels, threads only split rows.
JuliaImage render_julia(const RationalMap& R, const RenderSpec& spec);

void write_pgm(const JuliaImage& img, const std::string& path);

} // namespace orbitsum

#endif
