#pragma once

// Lossless coding of statement streams.
//
// Symbols are the distinct statements of a stream, listed once in a header.
// The payload range-codes the stream under the adaptive Carnap predictive
// (n_i + lambda/k) / (n + lambda) with k = alphabet size.
//
// Container: "SEMC", version, varint k, k length-prefixed statement texts,
// varint stream length, payload, CRC-32 (little endian) of all prior bytes.
// Version 1 means lambda = k; version 2 stores lambda as a little-endian
// IEEE double right after the version byte.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semcomm/fol.hpp"

namespace semcomm {

using Bytes = std::vector<std::uint8_t>;

/// 64-bit carryless range coder. Frequency totals must not exceed 2^48.
class RangeEncoder {
 public:
  struct State {
    std::uint64_t low;
    std::uint64_t range;
    bool operator==(const State&) const = default;
  };

  void encode(std::uint64_t cum, std::uint64_t freq, std::uint64_t total);
  /// Emits the fewest bytes that pin the final interval (decoders pad with zeros).
  Bytes finish();
  State state() const { return {low_, range_}; }

 private:
  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~std::uint64_t{0};
  Bytes out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> in);

  /// Cumulative frequency target for the next symbol; call decode() next.
  std::uint64_t target(std::uint64_t total);
  void decode(std::uint64_t cum, std::uint64_t freq);
  RangeEncoder::State state() const { return {low_, range_}; }
  /// Bytes consumed so far, including zero padding past the end.
  std::size_t position() const { return pos_; }

 private:
  std::uint8_t next();
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~std::uint64_t{0};
  std::uint64_t code_ = 0;
};

/// Integer frequencies for the adaptive Carnap model: f_i = 1 + floor(q_i (2^32 - k)).
class AdaptiveModel {
 public:
  /// lambda <= 0 selects lambda = k.
  AdaptiveModel(std::size_t k, double lambda = 0.0);

  std::size_t size() const { return counts_.size(); }
  double lambda() const { return lambda_; }
  double probability(std::size_t symbol) const;
  /// Fills cumulative frequencies (size k + 1); returns the total.
  std::uint64_t frequencies(std::vector<std::uint64_t>& cum) const;
  void update(std::size_t symbol);

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_ = 0;
  double lambda_;
};

struct CodecParams {
  /// <= 0 means lambda = alphabet size.
  double lambda = 0.0;
};

struct CodecStats {
  std::uint64_t header_bits = 0;
  std::uint64_t payload_bits = 0;
  std::uint64_t checksum_bits = 32;
  double ideal_bits = 0.0;  // sum of -log2 q_t
  std::size_t alphabet_size = 0;
  std::size_t stream_length = 0;

  std::uint64_t total_bits() const { return header_bits + payload_bits + checksum_bits; }
};

struct Encoded {
  Bytes bytes;
  CodecStats stats;
};

Encoded lossless_encode(const EvidenceSet& stream, const CodecParams& params = {});
/// Throws DecodeError (with byte position) on any malformed or corrupted input.
EvidenceSet lossless_decode(std::span<const std::uint8_t> bytes, const std::string& source_id = "decoded");

struct BaselineStats {
  std::uint64_t payload_bits = 0;
  double ideal_bits = 0.0;
};

/// Order-0 adaptive byte coder (Laplace counts over 256 symbols), range coded.
BaselineStats shannon_baseline(std::string_view text);

/// Size of a gzip member at the default level, in bits.
std::uint64_t gzip_bits(std::string_view text);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace semcomm
