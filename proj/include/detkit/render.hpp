#pragma once

#include <filesystem>

#include <opencv2/core.hpp>

#include "detkit/augment.hpp"

namespace detkit {

// Load the four source images from `images_dir` (keyed by file_name) and
// paint the composite canvas. Throws IoError when a source file is missing
// or undecodable, ValidationError when its pixel size disagrees with the
// image record.
cv::Mat render_composite(const CompositeSample& sample, const Dataset& source,
                         const std::filesystem::path& images_dir);

// 2-px box outlines, color keyed by category id. Documentation aid.
void draw_boxes(cv::Mat& canvas, const CompositeSample& sample);

// PNG-encode and write atomically.
void write_png(const cv::Mat& image, const std::filesystem::path& path);

}  // namespace detkit
