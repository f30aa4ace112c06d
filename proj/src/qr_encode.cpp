#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <stdexcept>

#include "qr_layout.hpp"
#include "qrscript/bitstream.hpp"
#include "qrscript/error.hpp"
#include "qrscript/qrio.hpp"
#include "reed_solomon.hpp"

namespace qrscript::qrio {

namespace {

// Byte-mode capacity per [level][version - 1].
constexpr std::array<std::array<std::uint16_t, 40>, 4> kByteCapacity = {{
    {17,   32,   53,   78,   106,  134,  154,  192,  230,  271,  321,  367,  425,  458,
     520,  586,  644,  718,  792,  858,  929,  1003, 1091, 1171, 1273, 1367, 1465, 1528,
     1628, 1732, 1840, 1952, 2068, 2188, 2303, 2431, 2563, 2699, 2809, 2953},
    {14,   26,   42,   62,   84,   106,  122,  152,  180,  213,  251,  287,  331,  362,
     412,  450,  504,  560,  624,  666,  711,  779,  857,  911,  997,  1059, 1125, 1190,
     1264, 1370, 1452, 1538, 1628, 1722, 1809, 1911, 1989, 2099, 2213, 2331},
    {11,  20,  32,  46,  60,  74,  86,  108, 130, 151, 177,  203,  241,  258,
     292, 322, 364, 394, 442, 482, 509, 565, 611, 661, 715,  751,  805,  868,
     908, 982, 1030, 1112, 1168, 1228, 1283, 1351, 1423, 1499, 1579, 1663},
    {7,   14,  24,  34,  44,  58,  64,  84,  98,  119, 137, 155, 177, 194,
     220, 250, 280, 310, 338, 382, 403, 439, 461, 511, 535, 593, 625, 658,
     698, 742, 790, 842, 898, 958, 983, 1051, 1093, 1139, 1219, 1273},
}};

constexpr int kPenaltyRun = 3;
constexpr int kPenaltyBox = 3;
constexpr int kPenaltyFinderLike = 40;
constexpr int kPenaltyBalance = 10;

std::vector<std::uint8_t> data_codewords_for(std::span<const std::uint8_t> bytes, int version, EcLevel level) {
  const int capacity_bits = detail::data_codewords(version, level) * 8;
  BitStream bits;
  bits.write_bits(detail::kModeByte, 4);
  bits.write_bits(bytes.size(), static_cast<unsigned>(detail::char_count_bits(detail::kModeByte, version)));
  for (std::uint8_t b : bytes) bits.write_bits(b, 8);

  const auto used = static_cast<int>(bits.size());
  for (int i = 0; i < std::min(4, capacity_bits - used); ++i) bits.write_bit(false);
  while (bits.size() % 8 != 0) bits.write_bit(false);
  for (std::uint8_t pad = 0xEC; static_cast<int>(bits.size()) < capacity_bits; pad ^= 0xEC ^ 0x11) {
    bits.write_bits(pad, 8);
  }
  return bits.to_bytes();
}

std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t>& data, int version, EcLevel level) {
  const auto layout = detail::block_layout(version, level);
  std::vector<std::vector<std::uint8_t>> data_blocks;
  std::vector<std::vector<std::uint8_t>> ecc_blocks;
  std::size_t offset = 0;
  for (const auto& [data_length, ecc_length] : layout) {
    const auto first = data.begin() + static_cast<std::ptrdiff_t>(offset);
    data_blocks.emplace_back(first, first + data_length);
    ecc_blocks.push_back(detail::reed_solomon_remainder(data_blocks.back(), ecc_length));
    offset += static_cast<std::size_t>(data_length);
  }
  std::vector<std::uint8_t> out;
  const std::size_t longest = data_blocks.back().size();
  for (std::size_t i = 0; i < longest; ++i) {
    for (const auto& block : data_blocks) {
      if (i < block.size()) out.push_back(block[i]);
    }
  }
  for (std::size_t i = 0; i < ecc_blocks.front().size(); ++i) {
    for (const auto& block : ecc_blocks) out.push_back(block[i]);
  }
  return out;
}

int penalty(const detail::Grid& grid) {
  const int size = grid.size;
  int score = 0;
  auto line_penalty = [&](auto module) {
    // Runs of five or more, and 1:1:3:1:1 finder look-alikes with four light modules on one side.
    int run = 0;
    bool color = false;
    for (int i = 0; i < size; ++i) {
      const bool dark = module(i);
      if (i > 0 && dark == color) {
        ++run;
      } else {
        if (run >= 5) score += kPenaltyRun + run - 5;
        run = 1;
        color = dark;
      }
    }
    if (run >= 5) score += kPenaltyRun + run - 5;

    static constexpr std::array<bool, 7> finder = {true, false, true, true, true, false, true};
    for (int i = 0; i + 7 <= size; ++i) {
      bool match = true;
      for (int k = 0; k < 7 && match; ++k) match = module(i + k) == finder[static_cast<std::size_t>(k)];
      if (!match) continue;
      auto light = [&](int from, int to) {
        for (int k = from; k < to; ++k) {
          if (k >= 0 && k < size && module(k)) return false;
        }
        return true;
      };
      if (light(i - 4, i) || light(i + 7, i + 11)) score += kPenaltyFinderLike;
    }
  };
  for (int y = 0; y < size; ++y) line_penalty([&](int x) { return grid.is_dark(x, y); });
  for (int x = 0; x < size; ++x) line_penalty([&](int y) { return grid.is_dark(x, y); });

  int dark_count = 0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const bool c = grid.is_dark(x, y);
      dark_count += c ? 1 : 0;
      if (x + 1 < size && y + 1 < size && c == grid.is_dark(x + 1, y) && c == grid.is_dark(x, y + 1) &&
          c == grid.is_dark(x + 1, y + 1)) {
        score += kPenaltyBox;
      }
    }
  }
  const int total = size * size;
  const int deviation = std::abs(dark_count * 20 - total * 10);  // |percent - 50| scaled by total/5
  score += (deviation / total) * kPenaltyBalance;
  return score;
}

void apply_mask(detail::Grid& grid, int mask) {
  for (int y = 0; y < grid.size; ++y) {
    for (int x = 0; x < grid.size; ++x) {
      if (!grid.is_function(x, y) && detail::mask_applies(mask, x, y)) {
        grid.dark[grid.index(x, y)] = !grid.dark[grid.index(x, y)];
      }
    }
  }
}

}  // namespace

std::string_view to_string(EcLevel level) {
  switch (level) {
    case EcLevel::L: return "L";
    case EcLevel::M: return "M";
    case EcLevel::Q: return "Q";
    case EcLevel::H: return "H";
  }
  return "?";
}

EcLevel ec_level_from_string(std::string_view text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'L': return EcLevel::L;
      case 'M': return EcLevel::M;
      case 'Q': return EcLevel::Q;
      case 'H': return EcLevel::H;
      default: break;
    }
  }
  throw std::invalid_argument("error correction level must be one of L, M, Q, H");
}

std::size_t byte_capacity(int version, EcLevel level) {
  if (version < kMinVersion || version > kMaxVersion) throw std::out_of_range("QR version must be in [1, 40]");
  return kByteCapacity[static_cast<std::size_t>(level)][static_cast<std::size_t>(version - 1)];
}

int select_version(std::size_t bytes, EcLevel level) {
  for (int version = kMinVersion; version <= kMaxVersion; ++version) {
    if (bytes <= byte_capacity(version, level)) return version;
  }
  throw CapacityError("payload of " + std::to_string(bytes) + " bytes exceeds the " +
                      std::to_string(byte_capacity(kMaxVersion, level)) + "-byte capacity of version 40-" +
                      std::string(to_string(level)));
}

QrSymbol::QrSymbol(int version, EcLevel level, int mask, std::vector<bool> modules)
    : version_(version), level_(level), mask_(mask), modules_(std::move(modules)) {
  if (modules_.size() != static_cast<std::size_t>(size()) * size()) {
    throw std::invalid_argument("module count does not match version");
  }
}

QrSymbol encode_symbol(std::span<const std::uint8_t> bytes, const QrConfig& config) {
  int version = config.version;
  if (version == kAutoVersion) {
    version = select_version(bytes.size(), config.ec_level);
  } else if (version < kMinVersion || version > kMaxVersion) {
    throw std::invalid_argument("QR version must be in [1, 40] or auto");
  } else if (bytes.size() > byte_capacity(version, config.ec_level)) {
    throw CapacityError("payload of " + std::to_string(bytes.size()) + " bytes exceeds the " +
                        std::to_string(byte_capacity(version, config.ec_level)) + "-byte capacity of version " +
                        std::to_string(version) + "-" + std::string(to_string(config.ec_level)));
  }

  const auto codewords = interleave(data_codewords_for(bytes, version, config.ec_level), version, config.ec_level);
  detail::Grid grid(version);
  const auto positions = grid.data_positions();
  for (std::size_t i = 0; i < positions.size() && i < codewords.size() * 8; ++i) {
    const bool bit = ((codewords[i / 8] >> (7 - i % 8)) & 1) != 0;
    grid.dark[grid.index(positions[i].first, positions[i].second)] = bit;
  }

  if (config.mask != kAutoMask && (config.mask < 0 || config.mask > 7)) {
    throw std::invalid_argument("mask must be 0-7");
  }
  int best_mask = config.mask == kAutoMask ? 0 : config.mask;
  int best_score = std::numeric_limits<int>::max();
  for (int mask = 0; mask < 8 && config.mask == kAutoMask; ++mask) {
    apply_mask(grid, mask);
    grid.draw_format(detail::format_bits(config.ec_level, mask));
    const int score = penalty(grid);
    if (score < best_score) {
      best_score = score;
      best_mask = mask;
    }
    apply_mask(grid, mask);  // XOR undoes it
  }
  apply_mask(grid, best_mask);
  grid.draw_format(detail::format_bits(config.ec_level, best_mask));
  return QrSymbol(version, config.ec_level, best_mask, std::move(grid.dark));
}

Raster render(const QrSymbol& symbol, int module_pixels, int quiet_zone) {
  if (module_pixels < 1 || quiet_zone < 0) throw std::invalid_argument("invalid raster geometry");
  Raster image;
  image.width = image.height = (symbol.size() + 2 * quiet_zone) * module_pixels;
  image.pixels.assign(static_cast<std::size_t>(image.width) * image.height, 255);
  for (int y = 0; y < symbol.size(); ++y) {
    for (int x = 0; x < symbol.size(); ++x) {
      if (!symbol.dark(x, y)) continue;
      for (int dy = 0; dy < module_pixels; ++dy) {
        const int py = (y + quiet_zone) * module_pixels + dy;
        auto row = image.pixels.begin() + static_cast<std::ptrdiff_t>(py) * image.width;
        std::fill_n(row + (x + quiet_zone) * module_pixels, module_pixels, std::uint8_t{0});
      }
    }
  }
  return image;
}

Raster payload_to_qr(std::span<const std::uint8_t> payload, const QrConfig& config) {
  if (config.module_pixels < 4) throw std::invalid_argument("module size must be at least 4 pixels");
  return render(encode_symbol(payload, config), config.module_pixels, config.quiet_zone);
}

}  // namespace qrscript::qrio
