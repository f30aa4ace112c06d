#include "reed_solomon.hpp"

#include <array>
#include <stdexcept>

namespace qrscript::qrio::detail {

namespace {

struct Field {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};

  Field() {
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
      log[static_cast<std::size_t>(x)] = i;
      x <<= 1;
      if (x & 0x100) x ^= 0x11D;
    }
    for (int i = 255; i < 512; ++i) exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
  }
};

const Field& field() {
  static const Field f;
  return f;
}

std::uint8_t alpha_pow(int power) {
  power %= 255;
  if (power < 0) power += 255;
  return field().exp[static_cast<std::size_t>(power)];
}

std::uint8_t divide(std::uint8_t a, std::uint8_t b) {
  if (b == 0) throw std::domain_error("GF(256) division by zero");
  if (a == 0) return 0;
  const auto& f = field();
  return f.exp[static_cast<std::size_t>(f.log[a] + 255 - f.log[b])];
}

// Polynomials below are stored lowest degree first.
std::uint8_t evaluate(const std::vector<std::uint8_t>& poly, std::uint8_t x) {
  std::uint8_t result = 0;
  for (std::size_t i = poly.size(); i-- > 0;) result = static_cast<std::uint8_t>(gf_multiply(result, x) ^ poly[i]);
  return result;
}

std::vector<std::uint8_t> syndromes(std::span<const std::uint8_t> codeword, int ecc_length) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(ecc_length), 0);
  for (int j = 0; j < ecc_length; ++j) {
    const std::uint8_t x = alpha_pow(j);
    std::uint8_t acc = 0;
    for (std::uint8_t c : codeword) acc = static_cast<std::uint8_t>(gf_multiply(acc, x) ^ c);
    s[static_cast<std::size_t>(j)] = acc;
  }
  return s;
}

}  // namespace

std::uint8_t gf_multiply(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const auto& f = field();
  return f.exp[static_cast<std::size_t>(f.log[a] + f.log[b])];
}

std::vector<std::uint8_t> reed_solomon_remainder(std::span<const std::uint8_t> data, int ecc_length) {
  if (ecc_length < 1 || ecc_length > 254) throw std::invalid_argument("ECC length must be in [1, 254]");
  // Generator coefficients, highest degree first, leading 1 dropped.
  std::vector<std::uint8_t> generator(static_cast<std::size_t>(ecc_length), 0);
  generator.back() = 1;
  std::uint8_t root = 1;
  for (int i = 0; i < ecc_length; ++i) {
    for (std::size_t j = 0; j < generator.size(); ++j) {
      generator[j] = gf_multiply(generator[j], root);
      if (j + 1 < generator.size()) generator[j] ^= generator[j + 1];
    }
    root = gf_multiply(root, 2);
  }
  std::vector<std::uint8_t> remainder(static_cast<std::size_t>(ecc_length), 0);
  for (std::uint8_t b : data) {
    const std::uint8_t factor = b ^ remainder.front();
    remainder.erase(remainder.begin());
    remainder.push_back(0);
    for (std::size_t j = 0; j < remainder.size(); ++j) remainder[j] ^= gf_multiply(generator[j], factor);
  }
  return remainder;
}

bool reed_solomon_correct(std::span<std::uint8_t> codeword, int ecc_length) {
  const auto s = syndromes(codeword, ecc_length);
  bool clean = true;
  for (auto v : s) clean = clean && v == 0;
  if (clean) return true;

  // Berlekamp-Massey.
  std::vector<std::uint8_t> locator{1};
  std::vector<std::uint8_t> previous{1};
  std::size_t degree = 0;
  std::size_t shift = 1;
  std::uint8_t previous_discrepancy = 1;
  for (std::size_t k = 0; k < s.size(); ++k) {
    std::uint8_t d = s[k];
    for (std::size_t i = 1; i <= degree && i < locator.size(); ++i) d ^= gf_multiply(locator[i], s[k - i]);
    if (d == 0) {
      ++shift;
      continue;
    }
    const std::uint8_t scale = divide(d, previous_discrepancy);
    std::vector<std::uint8_t> updated = locator;
    if (updated.size() < previous.size() + shift) updated.resize(previous.size() + shift, 0);
    for (std::size_t i = 0; i < previous.size(); ++i) updated[i + shift] ^= gf_multiply(scale, previous[i]);
    if (2 * degree <= k) {
      previous = locator;
      degree = k + 1 - degree;
      previous_discrepancy = d;
      shift = 1;
    } else {
      ++shift;
    }
    locator = std::move(updated);
  }
  locator.resize(degree + 1);
  if (degree == 0 || 2 * degree > s.size()) return false;

  // Error evaluator: S(x) * locator(x) mod x^ecc_length.
  std::vector<std::uint8_t> evaluator(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < locator.size() && i + j < s.size(); ++j) {
      evaluator[i + j] ^= gf_multiply(s[i], locator[j]);
    }
  }
  std::vector<std::uint8_t> derivative(locator.size() > 1 ? locator.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < locator.size(); i += 2) derivative[i - 1] = locator[i];

  const int n = static_cast<int>(codeword.size());
  std::size_t found = 0;
  for (int k = 0; k < n; ++k) {
    const int power = n - 1 - k;
    const std::uint8_t x_inv = alpha_pow(-power);
    if (evaluate(locator, x_inv) != 0) continue;
    const std::uint8_t denominator = evaluate(derivative, x_inv);
    if (denominator == 0) return false;
    const std::uint8_t magnitude = gf_multiply(alpha_pow(power), divide(evaluate(evaluator, x_inv), denominator));
    codeword[static_cast<std::size_t>(k)] ^= magnitude;
    ++found;
  }
  if (found != degree) return false;
  for (auto v : syndromes(codeword, ecc_length)) {
    if (v != 0) return false;
  }
  return true;
}

}  // namespace qrscript::qrio::detail
