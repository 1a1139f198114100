#include "orbitsum/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include "orbitsum/error.hpp"

namespace orbitsum {

cplx JuliaImage::pixel_point(int i, int j) const {
    double dx = 2.0 * spec.half_extent / width;
    double dy = 2.0 * spec.half_extent / height;
    // Center-anchored so the middle pixel of an odd grid is exactly the center.
    return spec.center + cplx((i - (width - 1) / 2.0) * dx, (j - (height - 1) / 2.0) * dy);
}

namespace {

void run_rows(int height, int threads, const std::function<void(int)>& row_fn) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (int j = 0; j < height; ++j) row_fn(j);
        return;
    }
    std::vector<std::thread> pool;
    int chunk = (height + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        int lo = t * chunk, hi = std::min(height, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &row_fn] {
            for (int j = lo; j < hi; ++j) row_fn(j);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

JuliaImage render_julia(const RationalMap& R, const RenderSpec& spec) {
    require(spec.width > 0 && spec.height > 0, "render: grid must be non-empty");
    require(spec.max_iter >= 1, "render: max_iter must be >= 1");
    JuliaImage img;
    img.spec = spec;
    img.width = spec.width;
    img.height = spec.height;
    img.steps.assign(std::size_t(spec.width) * spec.height, -1);
    img.pixels.assign(img.steps.size(), 0);

    if (R.is_polynomial()) {
        double coeff_scale = 0.0;
        cplx lead = R.num().leading();
        for (auto& c : R.num().coeffs()) coeff_scale = std::max(coeff_scale, std::abs(c / lead));
        const double radius = 2.0 * std::max(2.0, coeff_scale);
        const double r2 = radius * radius;
        run_rows(spec.height, spec.threads, [&](int j) {
            for (int i = 0; i < spec.width; ++i) {
                cplx z = img.pixel_point(i, j);
                int esc = -1;
                for (int n = 0; n < spec.max_iter; ++n) {
                    if (abs2(z) > r2) {
                        esc = n;
                        break;
                    }
                    z = R.evaluate_finite(z);
                }
                img.steps[std::size_t(j) * spec.width + i] = esc;
            }
        });
    } else {
        // Attracting cycles detected from critical orbits.
        Thresholds th;
        std::vector<cplx> cycle_points;
        for (auto& c : R.finite_critical_points()) {
            SpherePoint v = R.evaluate(SpherePoint(c));
            if (v.is_infinity()) continue;
            OrbitClassification cls = classify_orbit(R, v.finite(), 4096, th);
            if (!cls.converged) continue;
            cplx p = cls.cycle_representative;
            for (int k = 0; k < cls.period; ++k) {
                cycle_points.push_back(p);
                p = R.evaluate_finite(p);
            }
        }
        bool inf_attracting = R.num().degree() - R.den().degree() >= 2 ||
                              (R.num().degree() - R.den().degree() == 1 &&
                               std::abs(R.den().leading() / R.num().leading()) < 1.0);
        if (cycle_points.empty() && !inf_attracting) {
            img.unresolved_warning = true;
            return img; // unresolved mask: all -1 / black
        }
        const double capture = 1e-4;
        run_rows(spec.height, spec.threads, [&](int j) {
            for (int i = 0; i < spec.width; ++i) {
                cplx z = img.pixel_point(i, j);
                int hit = -1;
                for (int n = 0; n < spec.max_iter; ++n) {
                    if (std::abs(z) > 1e8) {
                        hit = inf_attracting ? n : -1;
                        break;
                    }
                    bool captured = false;
                    for (auto& p : cycle_points) {
                        if (std::abs(z - p) < capture) {
                            captured = true;
                            break;
                        }
                    }
                    if (captured) {
                        hit = n;
                        break;
                    }
                    SpherePoint img_p = R.evaluate(SpherePoint(z));
                    if (img_p.is_infinity()) {
                        hit = inf_attracting ? n : -1;
                        break;
                    }
                    z = img_p.finite();
                }
                img.steps[std::size_t(j) * spec.width + i] = hit;
            }
        });
    }

    for (std::size_t k = 0; k < img.steps.size(); ++k) {
        int s = img.steps[k];
        if (s < 0) img.pixels[k] = 255; // never resolves: bright (Julia/bounded)
        else img.pixels[k] = std::uint8_t((255 * s) / std::max(1, spec.max_iter));
    }
    return img;
}

void write_pgm(const JuliaImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "render: cannot open output file " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
    require(bool(out), "render: write failed for " + path);
}

} // namespace orbitsum
