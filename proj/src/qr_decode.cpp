#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>

#include "qr_layout.hpp"
#include "qrscript/bitstream.hpp"
#include "qrscript/error.hpp"
#include "qrscript/qrio.hpp"
#include "reed_solomon.hpp"

namespace qrscript::qrio {

namespace {

constexpr std::string_view kAlphanumeric = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ $%*+-./:";

// Axis-aligned sampler over a binarized raster.
class ModuleSampler {
 public:
  ModuleSampler(const Raster& image, int threshold, int left, int top, double pitch_x, double pitch_y)
      : image_(image), threshold_(threshold), left_(left), top_(top), pitch_x_(pitch_x), pitch_y_(pitch_y) {}

  bool dark(int x, int y) const {
    const int px = left_ + static_cast<int>(std::floor((x + 0.5) * pitch_x_));
    const int py = top_ + static_cast<int>(std::floor((y + 0.5) * pitch_y_));
    if (px < 0 || py < 0 || px >= image_.width || py >= image_.height) return false;
    return image_.at(px, py) < threshold_;
  }

 private:
  const Raster& image_;
  int threshold_;
  int left_;
  int top_;
  double pitch_x_;
  double pitch_y_;
};

struct Bounds {
  int left = 0;
  int top = 0;
  int right = -1;
  int bottom = -1;
};

int threshold_of(const Raster& image) {
  const auto [lo, hi] = std::minmax_element(image.pixels.begin(), image.pixels.end());
  return (*lo + *hi + 1) / 2;
}

std::optional<Bounds> dark_bounds(const Raster& image, int threshold) {
  Bounds b{image.width, image.height, -1, -1};
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      if (image.at(x, y) >= threshold) continue;
      b.left = std::min(b.left, x);
      b.right = std::max(b.right, x);
      b.top = std::min(b.top, y);
      b.bottom = std::max(b.bottom, y);
    }
  }
  if (b.right < 0) return std::nullopt;
  return b;
}

// Index of the nearest valid word, if it is within three bit errors.
template <typename Words>
std::optional<int> nearest(std::uint32_t observed, const Words& words) {
  int best = -1;
  int best_distance = 4;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const int distance = std::popcount(observed ^ words[i]);
    if (distance < best_distance) {
      best_distance = distance;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::uint32_t read_word(const ModuleSampler& sampler, const std::vector<std::pair<int, int>>& positions) {
  std::uint32_t word = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (sampler.dark(positions[i].first, positions[i].second)) word |= 1u << i;
  }
  return word;
}

std::optional<int> read_version_info(const ModuleSampler& sampler, int size) {
  std::vector<std::uint32_t> words;
  for (int v = 7; v <= kMaxVersion; ++v) words.push_back(detail::version_bits(v));
  for (int copy = 0; copy < 2; ++copy) {
    std::uint32_t observed = 0;
    for (int i = 0; i < 18; ++i) {
      const int a = size - 11 + i % 3;
      const int b = i / 3;
      const bool bit = copy == 0 ? sampler.dark(a, b) : sampler.dark(b, a);
      if (bit) observed |= 1u << i;
    }
    if (auto index = nearest(observed, words)) return *index + 7;
  }
  return std::nullopt;
}

std::vector<std::uint8_t> parse_segments(const std::vector<std::uint8_t>& data, int version) {
  BitStream bits = BitStream::from_bytes(data);
  std::vector<std::uint8_t> out;
  while (bits.remaining() >= 4) {
    const int mode = static_cast<int>(bits.read_bits(4));
    switch (mode) {
      case 0: return out;
      case detail::kModeByte: {
        const auto count = bits.read_bits(static_cast<unsigned>(detail::char_count_bits(mode, version)));
        for (std::uint64_t i = 0; i < count; ++i) out.push_back(static_cast<std::uint8_t>(bits.read_bits(8)));
        break;
      }
      case detail::kModeNumeric: {
        auto count = bits.read_bits(static_cast<unsigned>(detail::char_count_bits(mode, version)));
        while (count > 0) {
          const unsigned digits = count >= 3 ? 3 : static_cast<unsigned>(count);
          const auto value = bits.read_bits(digits == 3 ? 10 : (digits == 2 ? 7 : 4));
          const std::string text = std::to_string(value);
          if (text.size() > digits) throw QrReadError("malformed numeric segment");
          for (std::size_t k = text.size(); k < digits; ++k) out.push_back('0');
          out.insert(out.end(), text.begin(), text.end());
          count -= digits;
        }
        break;
      }
      case detail::kModeAlphanumeric: {
        auto count = bits.read_bits(static_cast<unsigned>(detail::char_count_bits(mode, version)));
        for (; count >= 2; count -= 2) {
          const auto value = bits.read_bits(11);
          if (value >= 45 * 45) throw QrReadError("malformed alphanumeric segment");
          out.push_back(static_cast<std::uint8_t>(kAlphanumeric[value / 45]));
          out.push_back(static_cast<std::uint8_t>(kAlphanumeric[value % 45]));
        }
        if (count == 1) {
          const auto value = bits.read_bits(6);
          if (value >= 45) throw QrReadError("malformed alphanumeric segment");
          out.push_back(static_cast<std::uint8_t>(kAlphanumeric[value]));
        }
        break;
      }
      case detail::kModeKanji: {
        const auto count = bits.read_bits(static_cast<unsigned>(detail::char_count_bits(mode, version)));
        for (std::uint64_t i = 0; i < count; ++i) {
          const auto value = static_cast<unsigned>(bits.read_bits(13));
          unsigned code = (value / 0xC0) << 8 | (value % 0xC0);
          code += code < 0x1F00 ? 0x8140 : 0xC140;
          out.push_back(static_cast<std::uint8_t>(code >> 8));
          out.push_back(static_cast<std::uint8_t>(code & 0xFF));
        }
        break;
      }
      case detail::kModeEci: {
        // Designator only; the bytes of following segments are returned as-is.
        if (bits.read_bit()) {
          bits.read_bits(bits.read_bit() ? 21 : 14);
        } else {
          bits.read_bits(7);
        }
        break;
      }
      case detail::kModeStructuredAppend: bits.read_bits(16); break;
      case detail::kModeFnc1First: break;
      case detail::kModeFnc1Second: bits.read_bits(8); break;
      default: throw QrReadError("unsupported segment mode " + std::to_string(mode));
    }
  }
  return out;
}

std::vector<std::uint8_t> read_symbol(const ModuleSampler& sampler, int version) {
  const int size = 17 + 4 * version;

  std::vector<std::uint32_t> formats;
  for (int ec = 0; ec < 4; ++ec) {
    for (int mask = 0; mask < 8; ++mask) formats.push_back(detail::format_bits(static_cast<EcLevel>(ec), mask));
  }
  auto format = nearest(read_word(sampler, detail::format_positions_primary()), formats);
  if (!format) format = nearest(read_word(sampler, detail::format_positions_secondary(size)), formats);
  if (!format) throw QrReadError("unreadable format information");
  const auto level = static_cast<EcLevel>(*format / 8);
  const int mask = *format % 8;

  const detail::Grid grid(version);
  const auto positions = grid.data_positions();
  const std::size_t codeword_count = static_cast<std::size_t>(detail::raw_data_modules(version) / 8);
  std::vector<std::uint8_t> codewords(codeword_count, 0);
  for (std::size_t i = 0; i < codeword_count * 8; ++i) {
    const auto [x, y] = positions[i];
    const bool bit = sampler.dark(x, y) != detail::mask_applies(mask, x, y);
    if (bit) codewords[i / 8] = static_cast<std::uint8_t>(codewords[i / 8] | (0x80 >> (i % 8)));
  }

  const auto layout = detail::block_layout(version, level);
  std::vector<std::vector<std::uint8_t>> blocks;
  for (const auto& [data_length, ecc_length] : layout) {
    blocks.emplace_back();
    blocks.back().reserve(static_cast<std::size_t>(data_length + ecc_length));
  }
  std::size_t k = 0;
  const std::size_t longest = static_cast<std::size_t>(layout.back().first);
  for (std::size_t i = 0; i < longest; ++i) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (i < static_cast<std::size_t>(layout[b].first)) blocks[b].push_back(codewords[k++]);
    }
  }
  for (int i = 0; i < layout.front().second; ++i) {
    for (auto& block : blocks) block.push_back(codewords[k++]);
  }

  std::vector<std::uint8_t> data;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!detail::reed_solomon_correct(blocks[b], layout[b].second)) {
      throw QrReadError("too many errors in block " + std::to_string(b + 1));
    }
    data.insert(data.end(), blocks[b].begin(), blocks[b].begin() + layout[b].first);
  }
  try {
    return parse_segments(data, version);
  } catch (const TruncationError&) {
    throw QrReadError("segment runs past the end of the data");
  }
}

}  // namespace

std::vector<std::uint8_t> qr_to_payload(const Raster& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw QrReadError("empty or inconsistent image");
  }
  const int threshold = threshold_of(image);
  const auto bounds = dark_bounds(image, threshold);
  if (!bounds) throw QrReadError("no QR symbol found");

  // The top-left finder starts with a dark run seven modules long.
  int run = 0;
  while (bounds->left + run <= bounds->right && image.at(bounds->left + run, bounds->top) < threshold) ++run;
  const double estimate = run / 7.0;
  const int width = bounds->right - bounds->left + 1;
  const int height = bounds->bottom - bounds->top + 1;
  if (estimate < 1.0) throw QrReadError("no QR symbol found");

  const int guess = static_cast<int>(std::lround((width / estimate - 17.0) / 4.0));
  std::vector<int> candidates;
  for (int v : {guess, guess - 1, guess + 1}) {
    if (v >= kMinVersion && v <= kMaxVersion) candidates.push_back(v);
  }
  if (candidates.empty()) throw QrReadError("no QR symbol found");

  std::string last_error = "no QR symbol found";
  for (int version : candidates) {
    const int size = 17 + 4 * version;
    ModuleSampler sampler(image, threshold, bounds->left, bounds->top, static_cast<double>(width) / size,
                          static_cast<double>(height) / size);
    if (version >= 7) {
      const auto stated = read_version_info(sampler, size);
      if (stated && *stated != version) continue;
    }
    try {
      return read_symbol(sampler, version);
    } catch (const QrReadError& e) {
      last_error = e.what();
    }
  }
  throw QrReadError(last_error);
}

}  // namespace qrscript::qrio
