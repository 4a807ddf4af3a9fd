#include "eqcnn/dataset.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace eqcnn {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> (8 * k)) & 0xff));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (offset + sizeof(T) > bytes.size()) {
    throw DatasetFormatError("EQDS truncated at offset " + std::to_string(offset));
  }
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) v |= std::uint64_t{bytes[offset + k]} << (8 * k);
  offset += sizeof(T);
  return static_cast<T>(v);
}

}  // namespace

std::filesystem::path split_test_path(const std::filesystem::path& train_path) {
  auto out = train_path;
  const auto ext = train_path.has_extension() ? train_path.extension().string() : std::string(".eqds");
  out.replace_extension();
  out += ".test" + ext;
  return out;
}

std::filesystem::path split_sidecar_path(const std::filesystem::path& train_path) {
  auto out = train_path;
  out.replace_extension(".json");
  return out;
}

std::vector<std::uint8_t> encode_eqds(std::span<const ImageSample> samples) {
  std::uint16_t side = 0;
  std::uint16_t classes = 0;
  if (!samples.empty()) {
    side = static_cast<std::uint16_t>(samples.front().image.size);
    classes = static_cast<std::uint16_t>(samples.front().label.size());
  }
  std::vector<std::uint8_t> out = {'E', 'Q', 'D', 'S'};
  put_le<std::uint16_t>(out, kEqdsVersion);
  put_le<std::uint16_t>(out, side);
  put_le<std::uint16_t>(out, classes);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(samples.size()));
  for (const auto& s : samples) {
    if (s.image.size != side || s.label.size() != classes) {
      throw std::invalid_argument("EQDS samples must share image size and class count");
    }
    for (float v : s.image.pixels) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
    out.push_back(static_cast<std::uint8_t>(s.label_index()));
  }
  return out;
}

std::vector<ImageSample> decode_eqds(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "EQDS", 4) != 0) {
    throw DatasetFormatError("EQDS bad magic at offset 0");
  }
  std::size_t offset = 4;
  const auto version = get_le<std::uint16_t>(bytes, offset);
  if (version != kEqdsVersion) {
    throw DatasetFormatError("EQDS unsupported version " + std::to_string(version) +
                             " at offset 4");
  }
  const auto side = get_le<std::uint16_t>(bytes, offset);
  const auto classes = get_le<std::uint16_t>(bytes, offset);
  const auto count = get_le<std::uint32_t>(bytes, offset);

  std::vector<ImageSample> samples;
  samples.reserve(count);
  for (std::uint32_t s = 0; s < count; ++s) {
    ImageSample sample;
    sample.image = Image(side);
    for (auto& v : sample.image.pixels) v = std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset));
    const auto label_offset = offset;
    const auto label = get_le<std::uint8_t>(bytes, offset);
    if (label >= classes) {
      throw DatasetFormatError("EQDS label " + std::to_string(label) + " out of range at offset " +
                               std::to_string(label_offset));
    }
    sample.label = one_hot(label, classes);
    samples.push_back(std::move(sample));
  }
  if (offset != bytes.size()) {
    throw DatasetFormatError("EQDS trailing bytes at offset " + std::to_string(offset));
  }
  return samples;
}

void write_eqds(const std::filesystem::path& path, std::span<const ImageSample> samples) {
  const auto bytes = encode_eqds(samples);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::filesystem::filesystem_error("cannot open for writing", path,
                                                    std::make_error_code(std::errc::io_error));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::filesystem::filesystem_error("write failed", path,
                                                    std::make_error_code(std::errc::io_error));
}

std::vector<ImageSample> read_eqds(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::filesystem::filesystem_error("cannot open for reading", path,
                                                   std::make_error_code(std::errc::no_such_file_or_directory));
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_eqds(bytes);
}

std::string provenance_json(const Provenance& provenance) {
  nlohmann::ordered_json j;
  j["source"] = provenance.source;
  j["seed"] = provenance.seed;
  j["transform_log"] = provenance.transform_log;
  nlohmann::ordered_json notes = nlohmann::ordered_json::array();
  for (const auto& [k, v] : provenance.notes) notes.push_back({k, v});
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

Provenance parse_provenance_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Provenance p;
  p.source = j.at("source").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.transform_log = j.at("transform_log").get<std::vector<std::string>>();
  for (const auto& kv : j.at("notes")) p.notes.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
  return p;
}

void save_split(const std::filesystem::path& train_path, const DatasetSplit& split) {
  write_eqds(train_path, split.train);
  write_eqds(split_test_path(train_path), split.test);
  const auto sidecar = split_sidecar_path(train_path);
  std::ofstream meta(sidecar, std::ios::trunc);
  if (!meta) throw std::filesystem::filesystem_error("cannot open for writing", sidecar,
                                                     std::make_error_code(std::errc::io_error));
  meta << provenance_json(split.provenance);
}

DatasetSplit load_split(const std::filesystem::path& train_path) {
  DatasetSplit split;
  split.train = read_eqds(train_path);
  split.test = read_eqds(split_test_path(train_path));
  const auto sidecar = split_sidecar_path(train_path);
  std::ifstream meta(sidecar);
  if (!meta) throw std::filesystem::filesystem_error("cannot open for reading", sidecar,
                                                     std::make_error_code(std::errc::no_such_file_or_directory));
  const std::string text((std::istreambuf_iterator<char>(meta)), std::istreambuf_iterator<char>());
  split.provenance = parse_provenance_json(text);
  return split;
}

}  // namespace eqcnn
