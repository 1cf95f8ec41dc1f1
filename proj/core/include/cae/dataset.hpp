#ifndef CAE_DATASET_HPP
#define CAE_DATASET_HPP

#include <filesystem>
#include <vector>

#include "cae/types.hpp"

namespace cae {

/// A batch of equally sized grayscale images in [0, 1] with integer labels.
/// Pixel rows are flattened row-major: pixel (r, c) sits at index r*width + c.
struct LabeledImages {
    Matrix pixels; // B x (height*width)
    std::vector<int> labels;
    Index height = 0;
    Index width = 0;

    Index count() const { return pixels.rows(); }

    /// One image as a height x width matrix.
    Matrix image(Index i) const;
};

/// Reads the IDX pair (images magic 0x00000803, labels magic 0x00000801,
/// big-endian dimensions, u8 pixels scaled to [0, 1]). Throws FormatError on
/// bad magic, truncation, or image/label count mismatch.
LabeledImages load_idx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path);

/// Images-only variant for unsupervised use; labels come back zero-filled.
LabeledImages load_idx_images(const std::filesystem::path& images_path);

/// Writes the same layout (round-trips with load_idx).
void save_idx(const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path, const LabeledImages& data);

} // namespace cae

#endif
