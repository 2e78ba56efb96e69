// SPDX-License-Identifier: Apache-2.0
#include "container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "error.hpp"

namespace ptomo {

namespace {

constexpr char kMagic[8] = {'P', 'T', 'O', 'M', 'O', 'S', 'U', 'R'};
constexpr char kTimeMajor[] = "time-major";

class Writer {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  // Reserves the u64 length slot of a field and patches it on close.
  std::size_t open() {
    const std::size_t at = out.size();
    u64(0);
    return at;
  }
  void close(std::size_t at) {
    const std::uint64_t len = out.size() - at - 8;
    for (int i = 0; i < 8; ++i) out[at + i] = static_cast<std::uint8_t>(len >> (8 * i));
  }

  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes(b) {}

  void need(std::size_t n) const {
    if (pos + n > limit()) fail(ErrorCode::format, "surrogate container is truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }

  // Enters a length-prefixed field; `expected` bytes unless 0.
  void open(const char* name, std::uint64_t expected = 0) {
    const std::uint64_t len = u64();
    if (len > limit() - pos || (expected && len != expected))
      fail(ErrorCode::format, std::string("surrogate container: bad length for field '") + name + "'");
    field_end = pos + len;
  }
  void close(const char* name) {
    if (pos != field_end)
      fail(ErrorCode::format, std::string("surrogate container: field '") + name + "' has trailing bytes");
    field_end = 0;
  }

  std::size_t limit() const { return field_end ? field_end : bytes.size(); }

  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;
  std::size_t field_end = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_surrogate(const ParametricSurrogate& s) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kContainerVersion);

  auto f = w.open();
  w.u64(static_cast<std::uint64_t>(s.Q()));
  w.u64(static_cast<std::uint64_t>(s.N()));
  w.u64(static_cast<std::uint64_t>(s.P()));
  w.u64(static_cast<std::uint64_t>(s.total_degree()));
  w.close(f);

  f = w.open();
  w.f64(s.interval().lo);
  w.f64(s.interval().hi);
  w.close(f);

  f = w.open();
  w.u32(static_cast<std::uint32_t>(s.spline().dim));
  w.u32(static_cast<std::uint32_t>(s.spline().per_axis));
  w.u32(static_cast<std::uint32_t>(s.spline().degree));
  w.close(f);

  f = w.open();
  w.u32(static_cast<std::uint32_t>(s.provenance().nodes_per_side));
  w.f64(s.provenance().dt);
  w.f64(s.provenance().final_time);
  w.f64(s.provenance().flux);
  w.close(f);

  const auto& layout = s.layout();
  f = w.open();
  w.raw(kTimeMajor, sizeof kTimeMajor - 1);
  w.close(f);

  f = w.open();
  w.u32(static_cast<std::uint32_t>(layout.dim));
  w.u64(layout.spatial.size());
  w.u64(layout.times.size());
  w.close(f);

  f = w.open();
  for (double t : layout.times) w.f64(t);
  w.close(f);

  f = w.open();
  for (const auto& x : layout.spatial)
    for (double c : x) w.f64(c);
  w.close(f);

  const auto& lam = s.lambda();
  f = w.open();
  for (auto v : lam.row_ptr()) w.u64(static_cast<std::uint64_t>(v));
  w.close(f);
  f = w.open();
  for (auto v : lam.coords()) w.u32(static_cast<std::uint32_t>(v));
  w.close(f);
  f = w.open();
  for (auto v : lam.degrees()) w.u32(static_cast<std::uint32_t>(v));
  w.close(f);

  f = w.open();
  const double* v = s.V().data();
  const std::size_t count = static_cast<std::size_t>(s.V().size());
  if constexpr (std::endian::native == std::endian::little) {
    w.raw(v, count * sizeof(double));
  } else {
    for (std::size_t i = 0; i < count; ++i) w.f64(v[i]);
  }
  w.close(f);
  return std::move(w.out);
}

ParametricSurrogate deserialize_surrogate(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(sizeof kMagic);
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
    fail(ErrorCode::format, "not a surrogate container (bad magic)");
  r.pos = sizeof kMagic;
  const std::uint32_t version = r.u32();
  if (version != kContainerVersion)
    fail(ErrorCode::mismatch, "surrogate container version " + std::to_string(version) +
                                  " is not supported (expected " +
                                  std::to_string(kContainerVersion) + ")");

  r.open("dimensions", 32);
  const std::uint64_t q = r.u64(), n = r.u64(), p = r.u64(), deg = r.u64();
  r.close("dimensions");
  if (p == 0 || p > (1u << 30) || deg > (1u << 20) || q > (1ull << 40) || n > (1ull << 40))
    fail(ErrorCode::format, "surrogate container: implausible dimensions");
  if (n == 0 || q > bytes.size() / n / 8) fail(ErrorCode::format, "surrogate container is truncated");

  r.open("interval", 16);
  const double lo = r.f64(), hi = r.f64();
  r.close("interval");

  r.open("spline", 12);
  SplineMeta spline;
  spline.dim = static_cast<int>(r.u32());
  spline.per_axis = static_cast<int>(r.u32());
  spline.degree = static_cast<int>(r.u32());
  r.close("spline");

  r.open("provenance", 28);
  Provenance prov;
  prov.nodes_per_side = static_cast<int>(r.u32());
  prov.dt = r.f64();
  prov.final_time = r.f64();
  prov.flux = r.f64();
  r.close("provenance");

  r.open("layout");
  const std::string layout_name(reinterpret_cast<const char*>(bytes.data() + r.pos),
                                r.field_end - r.pos);
  r.pos = r.field_end;
  r.close("layout");
  if (layout_name != kTimeMajor)
    fail(ErrorCode::format, "surrogate container: unknown row layout '" + layout_name + "'");

  r.open("layout sizes", 20);
  MeasurementLayout layout;
  layout.dim = static_cast<int>(r.u32());
  const std::uint64_t qs = r.u64(), qt = r.u64();
  r.close("layout sizes");
  if (qs * qt != q) fail(ErrorCode::format, "surrogate container: Q does not match the layout");

  r.open("times", qt * 8);
  layout.times.resize(qt);
  for (auto& t : layout.times) t = r.f64();
  r.close("times");

  r.open("spatial points", qs * 24);
  layout.spatial.resize(qs);
  for (auto& x : layout.spatial)
    for (auto& c : x) c = r.f64();
  r.close("spatial points");

  r.open("lambda row pointer", (n + 1) * 8);
  std::vector<std::int64_t> ptr(n + 1);
  for (auto& v : ptr) v = static_cast<std::int64_t>(r.u64());
  r.close("lambda row pointer");
  const std::uint64_t nnz = static_cast<std::uint64_t>(ptr.back());
  if (nnz > (1ull << 40)) fail(ErrorCode::format, "surrogate container: implausible nnz");
  r.open("lambda coordinates", nnz * 4);
  std::vector<std::int32_t> cs(nnz);
  for (auto& v : cs) v = static_cast<std::int32_t>(r.u32());
  r.close("lambda coordinates");
  r.open("lambda degrees", nnz * 4);
  std::vector<std::int32_t> ds(nnz);
  for (auto& v : ds) v = static_cast<std::int32_t>(r.u32());
  r.close("lambda degrees");

  DegreeMatrix lambda;
  try {
    lambda = DegreeMatrix(static_cast<int>(p), static_cast<int>(deg), std::move(ptr),
                          std::move(cs), std::move(ds));
  } catch (const Error& e) {
    fail(ErrorCode::format, std::string("surrogate container: ") + e.what());
  }

  r.open("V", q * n * 8);
  RowMatrix v(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n));
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(v.data(), bytes.data() + r.pos, q * n * 8);
    r.pos += q * n * 8;
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = r.f64();
  }
  r.close("V");
  if (r.pos != bytes.size()) fail(ErrorCode::format, "surrogate container has trailing bytes");

  ParameterInterval interval;
  try {
    interval = ParameterInterval(lo, hi);
  } catch (const Error& e) {
    fail(ErrorCode::format, std::string("surrogate container: ") + e.what());
  }
  return ParametricSurrogate(std::move(v), std::move(lambda), interval, std::move(layout), spline,
                             prov);
}

void write_surrogate(const std::string& path, const ParametricSurrogate& s) {
  const auto bytes = serialize_surrogate(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::io, "failed writing '" + path + "'");
}

ParametricSurrogate read_surrogate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_surrogate(bytes);
}

}  // namespace ptomo
