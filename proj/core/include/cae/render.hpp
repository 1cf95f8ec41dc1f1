#ifndef CAE_RENDER_HPP
#define CAE_RENDER_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "cae/types.hpp"

namespace cae {

/// Binary PGM (P5), values linearly mapped from [min, max] to [0, 255].
void write_pgm(const std::filesystem::path& path, const Matrix& values);

/// One scatter point: 2-D position plus a color group (label or angle bin).
struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    int group = 0;
};

/// Minimal SVG scatter plot, one fill color per group.
void write_svg_scatter(const std::filesystem::path& path, const std::vector<ScatterPoint>& points,
                       const std::string& title);

} // namespace cae

#endif
