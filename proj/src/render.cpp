#include "detkit/render.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "detkit/errors.hpp"
#include "detkit/io_util.hpp"

namespace detkit {

namespace {

cv::Scalar category_color(std::int64_t category_id) {
  // spread hues around the wheel; BGR like the rest of OpenCV
  const int hue = static_cast<int>((category_id * 47) % 180);
  cv::Mat hsv(1, 1, CV_8UC3, cv::Scalar(hue, 200, 255));
  cv::Mat bgr;
  cv::cvtColor(hsv, bgr, cv::COLOR_HSV2BGR);
  const auto px = bgr.at<cv::Vec3b>(0, 0);
  return cv::Scalar(px[0], px[1], px[2]);
}

}  // namespace

cv::Mat render_composite(const CompositeSample& sample, const Dataset& source,
                         const std::filesystem::path& images_dir) {
  cv::Mat canvas(sample.canvas_height, sample.canvas_width, CV_8UC3,
                 cv::Scalar(0, 0, 0));
  for (const TilePlacement& tile : sample.tiles) {
    const ImageRecord* record = source.find_image(tile.source_image_id);
    const std::filesystem::path path = images_dir / record->file_name;
    cv::Mat image = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (image.empty()) {
      throw IoError("cannot read image: " + path.string());
    }
    if (image.cols != record->width || image.rows != record->height) {
      throw ValidationError("image size mismatch for " + record->file_name);
    }

    // source -> ROI-local pixels; warpAffine resamples the sub-pixel crop
    const cv::Rect roi(static_cast<int>(std::lround(tile.dest_rect.x1)),
                       static_cast<int>(std::lround(tile.dest_rect.y1)),
                       static_cast<int>(std::lround(tile.dest_rect.width())),
                       static_cast<int>(std::lround(tile.dest_rect.height())));
    cv::Mat transform(2, 3, CV_64F);
    transform.at<double>(0, 0) = tile.map.scale_x;
    transform.at<double>(0, 1) = 0.0;
    transform.at<double>(0, 2) = tile.map.offset_x - tile.dest_rect.x1;
    transform.at<double>(1, 0) = 0.0;
    transform.at<double>(1, 1) = tile.map.scale_y;
    transform.at<double>(1, 2) = tile.map.offset_y - tile.dest_rect.y1;
    cv::Mat target = canvas(roi);
    cv::warpAffine(image, target, transform, target.size(), cv::INTER_LINEAR,
                   cv::BORDER_REPLICATE);
  }
  return canvas;
}

void draw_boxes(cv::Mat& canvas, const CompositeSample& sample) {
  for (const CompositeAnnotation& ann : sample.annotations) {
    const cv::Point p1(static_cast<int>(std::lround(ann.bbox.x1)),
                       static_cast<int>(std::lround(ann.bbox.y1)));
    const cv::Point p2(static_cast<int>(std::lround(ann.bbox.x2)),
                       static_cast<int>(std::lround(ann.bbox.y2)));
    cv::rectangle(canvas, p1, p2, category_color(ann.category_id), 2);
  }
}

void write_png(const cv::Mat& image, const std::filesystem::path& path) {
  std::vector<unsigned char> buffer;
  if (!cv::imencode(".png", image, buffer)) {
    throw IoError("PNG encoding failed for " + path.string());
  }
  write_file_atomic(path, buffer);
}

}  // namespace detkit
