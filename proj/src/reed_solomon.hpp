#pragma once

// Reed-Solomon over GF(256) with the QR field polynomial x^8+x^4+x^3+x^2+1
// and generator roots alpha^0 .. alpha^(n-1).

#include <cstdint>
#include <span>
#include <vector>

namespace qrscript::qrio::detail {

std::uint8_t gf_multiply(std::uint8_t a, std::uint8_t b);

/// ECC codewords for one block of data.
std::vector<std::uint8_t> reed_solomon_remainder(std::span<const std::uint8_t> data, int ecc_length);

/// Corrects `codeword` (data followed by ecc_length ECC bytes) in place.
/// Returns false when the errors exceed the correction capacity.
bool reed_solomon_correct(std::span<std::uint8_t> codeword, int ecc_length);

}  // namespace qrscript::qrio::detail
