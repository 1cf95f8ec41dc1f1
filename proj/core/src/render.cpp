#include "cae/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cae/error.hpp"

namespace cae {

void write_pgm(const std::filesystem::path& path, const Matrix& values) {
    if (values.rows() < 1 || values.cols() < 1)
        throw ValidationError("cannot render an empty matrix");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");

    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;

    out << "P5\n" << values.cols() << " " << values.rows() << "\n255\n";
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < values.cols(); ++c) {
            const double v = (values(r, c) - lo) / span;
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
        }
    }
    if (!out)
        throw FormatError("write failed: " + path.string());
}

void write_svg_scatter(const std::filesystem::path& path, const std::vector<ScatterPoint>& points,
                       const std::string& title) {
    if (points.empty())
        throw ValidationError("no points to plot");
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");

    double min_x = points.front().x, max_x = min_x;
    double min_y = points.front().y, max_y = min_y;
    int max_group = 0;
    for (const ScatterPoint& p : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
        max_group = std::max(max_group, p.group);
    }
    const double span_x = max_x > min_x ? max_x - min_x : 1.0;
    const double span_y = max_y > min_y ? max_y - min_y : 1.0;

    constexpr int kSize = 640;
    constexpr int kMargin = 40;
    const int groups = max_group + 1;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
        << kSize << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    for (const ScatterPoint& p : points) {
        const double px =
            kMargin + (p.x - min_x) / span_x * (kSize - 2 * kMargin);
        const double py =
            kSize - kMargin - (p.y - min_y) / span_y * (kSize - 2 * kMargin);
        const int hue = groups > 0 ? (p.group * 360) / groups : 0;
        out << "<circle cx=\"" << px << "\" cy=\"" << py
            << "\" r=\"3\" fill=\"hsl(" << hue << ",70%,45%)\" fill-opacity=\"0.7\"/>\n";
    }
    out << "</svg>\n";
    if (!out)
        throw FormatError("write failed: " + path.string());
}

} // namespace cae
