#include "wrelm/model_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace wrelm {

namespace {

constexpr char kMagic[8] = {'W', 'R', 'E', 'L', 'M', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a64(const std::uint8_t* data, size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { emit(v); }
  void u32(std::uint32_t v) { emit(v); }
  void u64(std::uint64_t v) { emit(v); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    emit(bits);
  }
  void bytes(const char* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::vector<std::uint8_t>& data() const { return buf_; }

 private:
  template <typename T>
  void emit(T v) {  // little-endian
    for (size_t i = 0; i < sizeof(T); ++i)
      buf_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  }
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, size_t len) : data_(data), len_(len) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() { return gather<std::uint16_t>(); }
  std::uint32_t u32() { return gather<std::uint32_t>(); }
  std::uint64_t u64() { return gather<std::uint64_t>(); }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  const std::uint8_t* take(size_t n) {
    if (pos_ + n > len_) throw IoError("model file truncated");
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }
  size_t remaining() const { return len_ - pos_; }

 private:
  template <typename T>
  T gather() {
    const std::uint8_t* p = take(sizeof(T));
    T v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
    return v;
  }
  const std::uint8_t* data_;
  size_t len_;
  size_t pos_ = 0;
};

}  // namespace

void save_model(const OfflineModel& model, const std::string& path) {
  Writer w;
  w.bytes(kMagic, sizeof(kMagic));
  w.u32(kVersion);
  w.u32(0);
  w.u64(model.weights.seed);
  w.u32(static_cast<std::uint32_t>(model.z()));
  w.u32(static_cast<std::uint32_t>(model.n_neurons()));
  w.u8(static_cast<std::uint8_t>(model.activation));
  w.u8(model.w0_diag ? 1 : 0);
  w.u16(0);
  w.f64(model.scaler.p_low());
  w.f64(model.scaler.p_high());
  w.f64(model.svd_tolerance);
  if (model.w0_diag) {
    w.u64(static_cast<std::uint64_t>(model.w0_diag->size()));
    for (Index i = 0; i < model.w0_diag->size(); ++i) w.f64((*model.w0_diag)[i]);
  } else {
    w.u64(1);
    w.f64(model.w0);
  }
  w.u64(static_cast<std::uint64_t>(model.scaler.arity()));
  for (Index c = 0; c < model.scaler.arity(); ++c) {
    w.f64(model.scaler.lo()[c]);
    w.f64(model.scaler.hi()[c]);
  }
  for (Index r = 0; r < model.weights.matrix.rows(); ++r)
    for (Index c = 0; c < model.weights.matrix.cols(); ++c) w.f64(model.weights.matrix(r, c));
  for (Index r = 0; r < model.p0.rows(); ++r)
    for (Index c = 0; c < model.p0.cols(); ++c) w.f64(model.p0(r, c));
  for (Index i = 0; i < model.beta0.size(); ++i) w.f64(model.beta0[i]);

  const std::uint64_t checksum = fnv1a64(w.data().data(), w.data().size());
  w.u64(checksum);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(w.data().data()),
            static_cast<std::streamsize>(w.data().size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

OfflineModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (raw.size() < sizeof(kMagic) + 16) throw IoError("model file truncated");

  // Checksum covers everything before the trailing 8 bytes.
  Reader tail(raw.data() + raw.size() - 8, 8);
  const std::uint64_t stored = tail.u64();
  const std::uint64_t computed = fnv1a64(raw.data(), raw.size() - 8);
  if (stored != computed)
    throw ModelChecksumError("model file checksum mismatch in '" + path + "'");

  Reader r(raw.data(), raw.size() - 8);
  const std::uint8_t* magic = r.take(sizeof(kMagic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError("'" + path + "' is not a model file");
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw ModelVersionError("unsupported model format version " + std::to_string(version));
  r.u32();  // reserved

  OfflineModel model;
  const std::uint64_t seed = r.u64();
  const Index z = static_cast<Index>(r.u32());
  const Index n_neurons = static_cast<Index>(r.u32());
  if (z < 1 || n_neurons < 1) throw IoError("model file has invalid dimensions");
  const std::uint8_t activation = r.u8();
  if (activation > 1) throw IoError("model file has unknown activation tag");
  model.activation = static_cast<Activation>(activation);
  const std::uint8_t w0_mode = r.u8();
  if (w0_mode > 1) throw IoError("model file has unknown weight mode");
  r.u16();  // padding
  const double p_low = r.f64();
  const double p_high = r.f64();
  model.svd_tolerance = r.f64();

  const std::uint64_t w0_len = r.u64();
  if (w0_mode == 0) {
    if (w0_len != 1) throw IoError("model file scalar weight with bad length");
    model.w0 = r.f64();
  } else {
    Vector diag(static_cast<Index>(w0_len));
    for (Index i = 0; i < diag.size(); ++i) diag[i] = r.f64();
    model.w0_diag = std::move(diag);
  }

  const auto cols = static_cast<Index>(r.u64());
  if (cols != z + 1) throw IoError("model file scaler arity mismatch");
  Vector lo(cols), hi(cols);
  for (Index c = 0; c < cols; ++c) {
    lo[c] = r.f64();
    hi[c] = r.f64();
  }
  model.scaler = Scaler(std::move(lo), std::move(hi), p_low, p_high);

  model.weights.seed = seed;
  model.weights.z = z;
  model.weights.n_neurons = n_neurons;
  model.weights.matrix.resize(z, n_neurons);
  for (Index i = 0; i < z; ++i)
    for (Index j = 0; j < n_neurons; ++j) model.weights.matrix(i, j) = r.f64();
  model.p0.resize(n_neurons, n_neurons);
  for (Index i = 0; i < n_neurons; ++i)
    for (Index j = 0; j < n_neurons; ++j) model.p0(i, j) = r.f64();
  model.beta0.resize(n_neurons);
  for (Index i = 0; i < n_neurons; ++i) model.beta0[i] = r.f64();

  if (r.remaining() != 0) throw IoError("model file has trailing bytes");
  return model;
}

}  // namespace wrelm
