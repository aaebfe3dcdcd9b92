#include "semcomm/codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>

#include "semcomm/errors.hpp"

namespace semcomm {

namespace {

constexpr std::uint64_t kTop = std::uint64_t{1} << 56;
constexpr std::uint64_t kBot = std::uint64_t{1} << 48;
constexpr std::uint64_t kScale = std::uint64_t{1} << 32;
constexpr std::uint8_t kMagic[4] = {'S', 'E', 'M', 'C'};
constexpr std::uint8_t kVersionDefaultLambda = 1;
constexpr std::uint8_t kVersionExplicitLambda = 2;

void put_varint(Bytes& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(std::uint8_t(v | 0x80));
    v >>= 7;
  }
  out.push_back(std::uint8_t(v));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::size_t pos() const { return pos_; }
  std::uint8_t byte(const char* what) {
    if (pos_ >= in_.size()) throw DecodeError(std::string("truncated ") + what, pos_);
    return in_[pos_++];
  }
  std::uint64_t varint(const char* what) {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = byte(what);
      v |= std::uint64_t(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw DecodeError(std::string("overlong varint in ") + what, start);
  }
  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (in_.size() - pos_ < n) throw DecodeError(std::string("truncated ") + what, pos_);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

void RangeEncoder::encode(std::uint64_t cum, std::uint64_t freq, std::uint64_t total) {
  range_ /= total;
  low_ += cum * range_;
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop || (range_ < kBot && ((range_ = -low_ & (kBot - 1)), true))) {
    out_.push_back(std::uint8_t(low_ >> 56));
    low_ <<= 8;
    range_ <<= 8;
  }
}

Bytes RangeEncoder::finish() {
  using u128 = unsigned __int128;
  const u128 lo = low_;
  const u128 hi = lo + range_;
  for (int m = 0; m <= 8; ++m) {
    const int shift = 64 - 8 * m;
    const u128 unit = u128{1} << shift;
    const u128 v = (lo + unit - 1) / unit * unit;
    if (v < hi && v < (u128{1} << 64)) {
      for (int b = 0; b < m; ++b) out_.push_back(std::uint8_t(std::uint64_t(v >> (56 - 8 * b))));
      break;
    }
  }
  Bytes out = std::move(out_);
  out_.clear();
  low_ = 0;
  range_ = ~std::uint64_t{0};
  return out;
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> in) : in_(in) {
  for (int i = 0; i < 8; ++i) code_ = code_ << 8 | next();
}

std::uint8_t RangeDecoder::next() {
  const std::uint8_t b = pos_ < in_.size() ? in_[pos_] : 0;
  ++pos_;
  return b;
}

std::uint64_t RangeDecoder::target(std::uint64_t total) {
  range_ /= total;
  const std::uint64_t t = (code_ - low_) / range_;
  if (t >= total) throw DecodeError("range decoder left the coding interval", std::min(pos_, in_.size()));
  return t;
}

void RangeDecoder::decode(std::uint64_t cum, std::uint64_t freq) {
  low_ += cum * range_;
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop || (range_ < kBot && ((range_ = -low_ & (kBot - 1)), true))) {
    code_ = code_ << 8 | next();
    low_ <<= 8;
    range_ <<= 8;
  }
}

AdaptiveModel::AdaptiveModel(std::size_t k, double lambda)
    : counts_(k, 0), lambda_(lambda > 0.0 ? lambda : double(k)) {
  if (k == 0) throw DomainError("adaptive model needs at least one symbol");
  if (k >= kScale) throw CapacityError("alphabet too large for 32-bit frequencies");
  if (!std::isfinite(lambda_)) throw DomainError("coder lambda must be finite");
}

double AdaptiveModel::probability(std::size_t symbol) const {
  const double k = double(counts_.size());
  return (double(counts_[symbol]) + lambda_ / k) / (double(n_) + lambda_);
}

std::uint64_t AdaptiveModel::frequencies(std::vector<std::uint64_t>& cum) const {
  const std::size_t k = counts_.size();
  const double spread = double(kScale - k);
  cum.resize(k + 1);
  cum[0] = 0;
  for (std::size_t i = 0; i < k; ++i)
    cum[i + 1] = cum[i] + 1 + std::uint64_t(std::floor(probability(i) * spread));
  return cum[k];
}

void AdaptiveModel::update(std::size_t symbol) {
  ++counts_[symbol];
  ++n_;
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - done, 1u << 30));
    crc = ::crc32(crc, bytes.data() + done, chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

Encoded lossless_encode(const EvidenceSet& stream, const CodecParams& params) {
  const auto& symbols = stream.symbols();
  std::map<AtomicStatement, std::size_t> index;
  std::vector<std::string> alphabet;
  std::vector<std::size_t> seq;
  seq.reserve(stream.size());
  for (const auto& s : stream.statements()) {
    auto [it, inserted] = index.try_emplace(s, alphabet.size());
    if (inserted) alphabet.push_back(to_string(s, symbols));
    seq.push_back(it->second);
  }

  Encoded enc;
  Bytes& out = enc.bytes;
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  if (params.lambda > 0.0) {
    out.push_back(kVersionExplicitLambda);
    const auto bits = std::bit_cast<std::uint64_t>(params.lambda);
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(bits >> (8 * i)));
  } else {
    out.push_back(kVersionDefaultLambda);
  }
  put_varint(out, alphabet.size());
  for (const auto& a : alphabet) {
    put_varint(out, a.size());
    out.insert(out.end(), a.begin(), a.end());
  }
  put_varint(out, seq.size());
  enc.stats.header_bits = 8 * out.size();

  Bytes payload;
  if (!alphabet.empty()) {
    AdaptiveModel model(alphabet.size(), params.lambda);
    RangeEncoder coder;
    std::vector<std::uint64_t> cum;
    for (auto sym : seq) {
      enc.stats.ideal_bits -= std::log2(model.probability(sym));
      const std::uint64_t total = model.frequencies(cum);
      coder.encode(cum[sym], cum[sym + 1] - cum[sym], total);
      model.update(sym);
    }
    payload = coder.finish();
  }
  out.insert(out.end(), payload.begin(), payload.end());
  enc.stats.payload_bits = 8 * payload.size();

  const std::uint32_t crc = crc32(out);
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(crc >> (8 * i)));
  enc.stats.alphabet_size = alphabet.size();
  enc.stats.stream_length = seq.size();
  return enc;
}

EvidenceSet lossless_decode(std::span<const std::uint8_t> bytes, const std::string& source_id) {
  if (bytes.size() < 4 + 1 + 1 + 1 + 4) throw DecodeError("input too short for a SEMC container", bytes.size());
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored |= std::uint32_t(bytes[body + i]) << (8 * i);
  if (crc32(bytes.first(body)) != stored) throw DecodeError("checksum mismatch", body);

  Reader rd(bytes.first(body));
  for (auto m : kMagic)
    if (rd.byte("magic") != m) throw DecodeError("bad magic (not a SEMC container)", rd.pos() - 1);
  const std::uint8_t version = rd.byte("version");
  double lambda = 0.0;
  if (version == kVersionExplicitLambda) {
    std::uint64_t bits = 0;
    auto raw = rd.take(8, "lambda");
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t(raw[i]) << (8 * i);
    lambda = std::bit_cast<double>(bits);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DecodeError("invalid lambda", rd.pos() - 8);
  } else if (version != kVersionDefaultLambda) {
    throw DecodeError("unsupported version " + std::to_string(version), rd.pos() - 1);
  }

  const std::size_t k_pos = rd.pos();
  const std::uint64_t k = rd.varint("alphabet size");
  if (k > body) throw DecodeError("alphabet size exceeds container", k_pos);
  SymbolTable symbols;
  std::vector<AtomicStatement> alphabet;
  std::map<AtomicStatement, std::size_t> seen;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::size_t entry_pos = rd.pos();
    const std::uint64_t len = rd.varint("alphabet entry length");
    auto text = rd.take(std::size_t(std::min<std::uint64_t>(len, body)), "alphabet entry");
    std::string_view sv(reinterpret_cast<const char*>(text.data()), text.size());
    try {
      AtomicStatement s = parse_statement(sv, symbols, std::size_t(i) + 1);
      if (!seen.try_emplace(s, alphabet.size()).second)
        throw DecodeError("duplicate alphabet entry", entry_pos);
      alphabet.push_back(s);
    } catch (const ParseError& e) {
      throw DecodeError("bad alphabet entry: " + e.message, entry_pos);
    } catch (const ArityError& e) {
      throw DecodeError(std::string("bad alphabet entry: ") + e.what(), entry_pos);
    }
  }
  const std::size_t n_pos = rd.pos();
  const std::uint64_t n = rd.varint("stream length");
  if (k == 0 && n != 0) throw DecodeError("non-empty stream over an empty alphabet", n_pos);

  const std::size_t payload_start = rd.pos();
  std::vector<AtomicStatement> stmts;
  if (n > 0) {
    AdaptiveModel model(std::size_t(k), lambda);
    RangeDecoder dec(bytes.subspan(payload_start, body - payload_start));
    std::vector<std::uint64_t> cum;
    stmts.reserve(std::size_t(std::min<std::uint64_t>(n, 1u << 20)));
    for (std::uint64_t t = 0; t < n; ++t) {
      const std::uint64_t total = model.frequencies(cum);
      std::uint64_t target = 0;
      try {
        target = dec.target(total);
      } catch (const DecodeError& e) {
        throw DecodeError("payload does not decode", payload_start + e.position);
      }
      const auto sym = std::size_t(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin() - 1);
      dec.decode(cum[sym], cum[sym + 1] - cum[sym]);
      model.update(sym);
      stmts.push_back(alphabet[sym]);
      if (dec.position() > (body - payload_start) + 16)
        throw DecodeError("payload exhausted before the declared stream length", body);
    }
  }
  return EvidenceSet(source_id, std::move(symbols), std::move(stmts));
}

BaselineStats shannon_baseline(std::string_view text) {
  BaselineStats st;
  if (text.empty()) return st;
  AdaptiveModel model(256);
  RangeEncoder coder;
  std::vector<std::uint64_t> cum;
  for (unsigned char ch : text) {
    st.ideal_bits -= std::log2(model.probability(ch));
    const std::uint64_t total = model.frequencies(cum);
    coder.encode(cum[ch], cum[ch + 1] - cum[ch], total);
    model.update(ch);
  }
  st.payload_bits = 8 * coder.finish().size();
  return st;
}

std::uint64_t gzip_bits(std::string_view text) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error("zlib deflateInit2 failed");
  Bytes out(deflateBound(&zs, uLong(text.size())) + 32);
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(text.data()));
  zs.avail_in = uInt(text.size());
  zs.next_out = out.data();
  zs.avail_out = uInt(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const std::uint64_t size = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error("zlib deflate failed");
  return 8 * size;
}

}  // namespace semcomm
