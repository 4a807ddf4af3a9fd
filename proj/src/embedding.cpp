#include "eqcnn/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eqcnn {

bool Image::all_zero() const {
  return std::all_of(pixels.begin(), pixels.end(), [](float v) { return v == 0.0f; });
}

std::size_t ImageSample::label_index() const {
  auto it = std::max_element(label.begin(), label.end());
  if (it == label.end()) throw std::invalid_argument("sample has an empty label");
  return static_cast<std::size_t>(it - label.begin());
}

std::vector<double> one_hot(std::size_t index, std::size_t num_classes) {
  if (index >= num_classes) throw std::out_of_range("label index out of range");
  std::vector<double> v(num_classes, 0.0);
  v[index] = 1.0;
  return v;
}

std::size_t register_size(const Image& image) {
  if (image.size < 2 || !std::has_single_bit(image.size)) {
    throw std::invalid_argument("image side " + std::to_string(image.size) +
                                " is not a power of two >= 2");
  }
  if (image.pixels.size() != image.size * image.size) {
    throw std::invalid_argument("pixel buffer does not match the image side");
  }
  return static_cast<std::size_t>(std::countr_zero(image.size));
}

QuantumState caa_embed(const Image& image) {
  const std::size_t n = register_size(image);
  double norm_sq = 0.0;
  for (float v : image.pixels) norm_sq += static_cast<double>(v) * v;
  if (norm_sq == 0.0) throw std::invalid_argument("cannot embed an all-zero image");
  const double inv = 1.0 / std::sqrt(norm_sq);

  std::vector<Complex> amps(image.pixels.size());
  // Row-major (i, j) is exactly basis index i * N + j.
  for (std::size_t k = 0; k < amps.size(); ++k) amps[k] = static_cast<double>(image.pixels[k]) * inv;
  return QuantumState(2 * n, std::move(amps));
}

Image apply_group_to_image(const Image& image, GroupElement g) {
  register_size(image);
  const std::size_t last = image.size - 1;
  Image out(image.size);
  for (std::size_t i = 0; i < image.size; ++i) {
    for (std::size_t j = 0; j < image.size; ++j) {
      std::size_t ti = i;
      std::size_t tj = j;
      switch (g) {
        case GroupElement::e:
          break;
        case GroupElement::r:
          ti = last - j;
          tj = i;
          break;
        case GroupElement::r2:
          ti = last - i;
          tj = last - j;
          break;
        case GroupElement::r3:
          ti = j;
          tj = last - i;
          break;
        case GroupElement::tx:
          ti = last - i;
          break;
        case GroupElement::ty:
          tj = last - j;
          break;
        case GroupElement::d1:
          ti = last - j;
          tj = last - i;
          break;
        case GroupElement::d2:
          ti = j;
          tj = i;
          break;
      }
      out.at(ti, tj) = image.at(i, j);
    }
  }
  return out;
}

ImageSample apply_group_to_image(const ImageSample& sample, GroupElement g) {
  return ImageSample{apply_group_to_image(sample.image, g), sample.label};
}

}  // namespace eqcnn
