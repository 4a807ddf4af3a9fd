#pragma once

#include <cstddef>
#include <vector>

#include "eqcnn/state.hpp"
#include "eqcnn/symmetry.hpp"

namespace eqcnn {

/// N x N grid stored row-major with the first index i the x-coordinate.
/// Values are float32, the precision of the on-disk dataset format.
struct Image {
  std::size_t size = 0;
  std::vector<float> pixels;

  Image() = default;
  explicit Image(std::size_t n_side, float fill = 0.0f)
      : size(n_side), pixels(n_side * n_side, fill) {}

  float& at(std::size_t i, std::size_t j) { return pixels[i * size + j]; }
  float at(std::size_t i, std::size_t j) const { return pixels[i * size + j]; }

  bool all_zero() const;
  friend bool operator==(const Image&, const Image&) = default;
};

struct ImageSample {
  Image image;
  std::vector<double> label;  // one-hot

  std::size_t label_index() const;
  friend bool operator==(const ImageSample&, const ImageSample&) = default;
};

std::vector<double> one_hot(std::size_t index, std::size_t num_classes);

/// log2 of the side length; throws unless the image is 2^n x 2^n with n >= 1.
std::size_t register_size(const Image& image);

/// Coordinate-aware amplitude embedding: amplitude of |i>|j> is x_ij / ||x||.
QuantumState caa_embed(const Image& image);
inline QuantumState caa_embed(const ImageSample& sample) { return caa_embed(sample.image); }

/// Pixel-space action: tx (i,j)->(N-1-i, j), ty (i,j)->(i, N-1-j),
/// r (i,j)->(N-1-j, i); compositions for the rest.
Image apply_group_to_image(const Image& image, GroupElement g);
ImageSample apply_group_to_image(const ImageSample& sample, GroupElement g);

}  // namespace eqcnn
