#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bakerlab/complexmap.hpp"
#include "bakerlab/loops.hpp"

namespace bakerlab {

struct Viewport {
    double re_lo = -2.0, re_hi = 2.0, im_lo = -2.0, im_hi = 2.0;
};

struct Rgb {
    std::uint8_t r, g, b;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kDiskColor{0, 0, 0};          // dist(z, P~) < eps
inline constexpr Rgb kCollarColor{128, 128, 128};  // eps <= dist < delta
inline constexpr Rgb kCertifiedColor{255, 255, 255};
inline constexpr Rgb kOrbitColor{220, 30, 30};
inline constexpr Rgb kLoopColor{30, 60, 220};

/// Row-major RGB raster, row 0 at the top (largest imaginary part).
struct Image {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderOverlays {
    std::vector<Complex> orbit_points;
    std::vector<LoopPath> loops;
};

/// Pixels (sampled at their centres) coloured by distance band to P~, with
/// optional orbit points and loop polylines drawn on top.
Image render_region(const MapModel& model, const Viewport& view, int width, int height,
                    const RenderOverlays& overlays = {});

/// Binary P6 encoding: "P6\n<w> <h>\n255\n" followed by RGB bytes.
std::string encode_ppm(const Image& image);

/// Throws IoError if the file cannot be written.
void write_ppm(const std::filesystem::path& path, const Image& image);

}  // namespace bakerlab
