#include "bakerlab/render.hpp"

#include <cmath>
#include <fstream>

#include "bakerlab/errors.hpp"
#include "bakerlab/parallel.hpp"

namespace bakerlab {

namespace {

struct PixelMap {
    const Viewport& view;
    int width, height;

    Complex centre(int x, int y) const {
        const double dx = (view.re_hi - view.re_lo) / width;
        const double dy = (view.im_hi - view.im_lo) / height;
        return {view.re_lo + (x + 0.5) * dx, view.im_hi - (y + 0.5) * dy};
    }

    void plot(Image& img, Complex z, Rgb color) const {
        const double fx = (z.real() - view.re_lo) / (view.re_hi - view.re_lo) * width;
        const double fy = (view.im_hi - z.imag()) / (view.im_hi - view.im_lo) * height;
        if (!(fx >= 0.0 && fx < width && fy >= 0.0 && fy < height)) return;
        img.pixels[static_cast<std::size_t>(fy) * width + static_cast<std::size_t>(fx)] = color;
    }
};

}  // namespace

Image render_region(const MapModel& model, const Viewport& view, int width, int height,
                    const RenderOverlays& overlays) {
    if (width <= 0 || height <= 0) throw DomainError("render resolution must be positive");
    if (!(view.re_hi > view.re_lo) || !(view.im_hi > view.im_lo))
        throw DomainError("render viewport is empty");

    Image img{width, height, std::vector<Rgb>(static_cast<std::size_t>(width) * height)};
    const PixelMap map{view, width, height};
    const double eps = model.epsilon(), delta = model.delta();
    parallel_for(static_cast<std::size_t>(height), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < width; ++x) {
            const double d = dist_to_poles(model, map.centre(x, y)).to_extended;
            img.pixels[row * width + x] =
                d < eps ? kDiskColor : (d < delta ? kCollarColor : kCertifiedColor);
        }
    });

    const double pixel = std::min((view.re_hi - view.re_lo) / width,
                                  (view.im_hi - view.im_lo) / height);
    for (const LoopPath& loop : overlays.loops) {
        const std::size_t n = loop.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Complex a = loop.vertices[i], b = loop.vertices[(i + 1) % n];
            const int samples = 1 + static_cast<int>(std::ceil(std::abs(b - a) / (0.5 * pixel)));
            for (int s = 0; s < samples; ++s)
                map.plot(img, a + (b - a) * (static_cast<double>(s) / samples), kLoopColor);
        }
    }
    for (const Complex z : overlays.orbit_points) map.plot(img, z, kOrbitColor);
    return img;
}

std::string encode_ppm(const Image& image) {
    std::string out = "P6\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size() * 3);
    for (const Rgb& p : image.pixels) {
        out.push_back(static_cast<char>(p.r));
        out.push_back(static_cast<char>(p.g));
        out.push_back(static_cast<char>(p.b));
    }
    return out;
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    const std::string bytes = encode_ppm(image);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace bakerlab
