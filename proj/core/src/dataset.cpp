#include "cae/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "cae/error.hpp"
#include "cae/io_util.hpp"

namespace cae {

namespace {
constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;
} // namespace

Matrix LabeledImages::image(Index i) const {
    Matrix img(height, width);
    for (Index r = 0; r < height; ++r)
        for (Index c = 0; c < width; ++c)
            img(r, c) = pixels(i, r * width + c);
    return img;
}

LabeledImages load_idx_images(const std::filesystem::path& images_path) {
    std::ifstream img_in(images_path, std::ios::binary);
    if (!img_in)
        throw FormatError("cannot open " + images_path.string());
    std::uint32_t magic = 0, count = 0, rows = 0, cols = 0;
    if (!io::read_u32_be(img_in, magic) || !io::read_u32_be(img_in, count) ||
        !io::read_u32_be(img_in, rows) || !io::read_u32_be(img_in, cols))
        throw FormatError(images_path.string() + ": truncated IDX header");
    if (magic != kImagesMagic)
        throw FormatError(images_path.string() + ": bad IDX magic " + std::to_string(magic));
    if (count == 0 || rows == 0 || cols == 0)
        throw FormatError(images_path.string() + ": empty IDX image file");

    const std::size_t n_pixels = static_cast<std::size_t>(count) * rows * cols;
    std::vector<unsigned char> raw(n_pixels);
    img_in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n_pixels));
    if (static_cast<std::size_t>(img_in.gcount()) != n_pixels)
        throw FormatError(images_path.string() + ": truncated pixel data (" +
                          std::to_string(img_in.gcount()) + " of " + std::to_string(n_pixels) +
                          " bytes)");

    LabeledImages data;
    data.height = rows;
    data.width = cols;
    data.pixels.resize(count, static_cast<Index>(rows) * cols);
    for (std::uint32_t i = 0; i < count; ++i)
        for (std::uint32_t p = 0; p < rows * cols; ++p)
            data.pixels(i, p) = raw[static_cast<std::size_t>(i) * rows * cols + p] / 255.0;
    data.labels.assign(count, 0);
    return data;
}

LabeledImages load_idx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path) {
    LabeledImages data = load_idx_images(images_path);
    const std::uint32_t count = static_cast<std::uint32_t>(data.count());

    std::ifstream lab_in(labels_path, std::ios::binary);
    if (!lab_in)
        throw FormatError("cannot open " + labels_path.string());
    std::uint32_t lab_magic = 0, lab_count = 0;
    if (!io::read_u32_be(lab_in, lab_magic) || !io::read_u32_be(lab_in, lab_count))
        throw FormatError(labels_path.string() + ": truncated IDX header");
    if (lab_magic != kLabelsMagic)
        throw FormatError(labels_path.string() + ": bad IDX magic " + std::to_string(lab_magic));
    if (lab_count != count)
        throw FormatError("image/label count mismatch: " + std::to_string(count) + " images vs " +
                          std::to_string(lab_count) + " labels");
    std::vector<unsigned char> raw_labels(count);
    lab_in.read(reinterpret_cast<char*>(raw_labels.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(lab_in.gcount()) != count)
        throw FormatError(labels_path.string() + ": truncated label data");

    data.labels.assign(raw_labels.begin(), raw_labels.end());
    return data;
}

void save_idx(const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path, const LabeledImages& data) {
    if (data.pixels.rows() != static_cast<Index>(data.labels.size()))
        throw ValidationError("image/label count mismatch");
    if (data.pixels.cols() != data.height * data.width)
        throw ShapeError("pixel width does not match height*width");

    std::ofstream img_out(images_path, std::ios::binary);
    if (!img_out)
        throw FormatError("cannot open " + images_path.string() + " for writing");
    io::write_u32_be(img_out, kImagesMagic);
    io::write_u32_be(img_out, static_cast<std::uint32_t>(data.count()));
    io::write_u32_be(img_out, static_cast<std::uint32_t>(data.height));
    io::write_u32_be(img_out, static_cast<std::uint32_t>(data.width));
    for (Index i = 0; i < data.pixels.rows(); ++i) {
        for (Index p = 0; p < data.pixels.cols(); ++p) {
            const double v = std::clamp(data.pixels(i, p), 0.0, 1.0);
            const unsigned char byte = static_cast<unsigned char>(std::lround(v * 255.0));
            img_out.put(static_cast<char>(byte));
        }
    }

    std::ofstream lab_out(labels_path, std::ios::binary);
    if (!lab_out)
        throw FormatError("cannot open " + labels_path.string() + " for writing");
    io::write_u32_be(lab_out, kLabelsMagic);
    io::write_u32_be(lab_out, static_cast<std::uint32_t>(data.labels.size()));
    for (int label : data.labels)
        lab_out.put(static_cast<char>(static_cast<unsigned char>(label)));
}

} // namespace cae
