#pragma once

// Symbol geometry and tables shared by the QR encoder and decoder.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qrscript/qrio.hpp"

namespace qrscript::qrio::detail {

int ecc_codewords_per_block(int version, EcLevel level);
int error_correction_blocks(int version, EcLevel level);
/// Modules available for data and ECC codewords, remainder bits included.
int raw_data_modules(int version);
int data_codewords(int version, EcLevel level);
std::vector<int> alignment_positions(int version);

/// Bits of the character-count field for a mode indicator at `version`.
int char_count_bits(int mode, int version);

inline constexpr int kModeNumeric = 0b0001;
inline constexpr int kModeAlphanumeric = 0b0010;
inline constexpr int kModeStructuredAppend = 0b0011;
inline constexpr int kModeByte = 0b0100;
inline constexpr int kModeFnc1First = 0b0101;
inline constexpr int kModeEci = 0b0111;
inline constexpr int kModeKanji = 0b1000;
inline constexpr int kModeFnc1Second = 0b1001;

/// 2-bit field used in the format information.
int ec_format_bits(EcLevel level);
EcLevel ec_from_format_bits(int bits);

/// 15-bit masked format word for (level, mask).
std::uint32_t format_bits(EcLevel level, int mask);
/// 18-bit version word, versions 7..40.
std::uint32_t version_bits(int version);

bool mask_applies(int mask, int x, int y);

/// Module grid with a parallel map of which modules belong to function
/// patterns (finders, timing, alignment, format and version areas).
struct Grid {
  explicit Grid(int version);

  int version;
  int size;
  std::vector<bool> dark;
  std::vector<bool> function;

  bool is_dark(int x, int y) const { return dark[index(x, y)]; }
  bool is_function(int x, int y) const { return function[index(x, y)]; }
  void set_function(int x, int y, bool value) {
    dark[index(x, y)] = value;
    function[index(x, y)] = true;
  }
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * size + x; }

  void draw_format(std::uint32_t bits);
  void draw_version();

  /// Data module coordinates in codeword bit order.
  std::vector<std::pair<int, int>> data_positions() const;

 private:
  void draw_finder(int cx, int cy);
  void draw_alignment(int cx, int cy);
};

/// Positions of the 15 format bits (bit i at index i) in the copy around the
/// top-left finder, and in the split copy along the other two finders.
std::vector<std::pair<int, int>> format_positions_primary();
std::vector<std::pair<int, int>> format_positions_secondary(int size);

/// Codeword order inside the symbol: block data interleaved, then ECC interleaved.
/// Returns for each block its (data length, ecc length).
std::vector<std::pair<int, int>> block_layout(int version, EcLevel level);

}  // namespace qrscript::qrio::detail
