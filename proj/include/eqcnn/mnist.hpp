#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "eqcnn/dataset.hpp"
#include "eqcnn/embedding.hpp"
#include "eqcnn/symmetry.hpp"

namespace eqcnn {

/// Raised for malformed IDX files; `offset` is the byte offset of the problem.
class IdxFormatError : public std::runtime_error {
 public:
  IdxFormatError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::uint8_t>> images;
};

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

/// Keeps samples whose label is in `digits` (exactly two distinct digits);
/// pixels scaled to [0, 1]; digits[0] -> [1,0], digits[1] -> [0,1].
std::vector<ImageSample> mnist_from_idx(std::span<const std::uint8_t> image_bytes,
                                        std::span<const std::uint8_t> label_bytes,
                                        std::span<const int> digits);

std::vector<ImageSample> mnist_load(const std::filesystem::path& images,
                                    const std::filesystem::path& labels,
                                    std::span<const int> digits);

/// Bilinear resampling of a 28 x 28 image onto a 16 x 16 grid (corners aligned).
Image downsample(const Image& image);

/// The six transforms used to extend MNIST: e, r, r2, r3, tx, ty.
inline constexpr std::array<GroupElement, 6> kExtensionElements = {
    GroupElement::e, GroupElement::r, GroupElement::r2,
    GroupElement::r3, GroupElement::tx, GroupElement::ty};

struct ExtendedSamples {
  std::vector<ImageSample> samples;
  std::vector<GroupElement> applied;  // one per sample
};

/// Transforms each sample by an independent uniformly drawn extension element.
ExtendedSamples extend_with_group(std::span<const ImageSample> samples, std::uint64_t seed);

/// Canonical IDX file names inside an MNIST directory.
struct MnistFiles {
  std::filesystem::path train_images, train_labels, test_images, test_labels;
  static MnistFiles in(const std::filesystem::path& dir);
  bool exist() const;
};

/// Digits 4 and 5, downsampled to 16 x 16 and extended with random group
/// elements. The training list is shuffled so any prefix is a random draw.
DatasetSplit mnist_dataset(const MnistFiles& files, std::uint64_t seed);

}  // namespace eqcnn
