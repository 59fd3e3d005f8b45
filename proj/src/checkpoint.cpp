#include "sphereconv/checkpoint.hpp"

#include <cstring>
#include <set>

#include "binary_io.hpp"
#include "sphereconv/error.hpp"
#include "sphereconv/lut.hpp"

namespace sphereconv {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'K', 'P'};
constexpr std::uint16_t kVersion = 1;

void put_string(detail::ByteWriter& w, const std::string& s) {
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
  w.bytes(s.data(), s.size());
}

std::string get_string(detail::ByteReader& r) {
  const auto n = r.le<std::uint32_t>();
  const auto b = r.bytes(n);
  return std::string(b.begin(), b.end());
}

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  detail::ByteWriter w;
  w.bytes(kMagic, 4);
  w.le<std::uint16_t>(kVersion);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(ckpt.meta.size()));
  for (const auto& [k, v] : ckpt.meta) {
    put_string(w, k);
    put_string(w, v);
  }
  w.le<std::uint32_t>(static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    put_string(w, name);
    w.le<std::uint32_t>(static_cast<std::uint32_t>(t.channels()));
    w.le<std::uint32_t>(static_cast<std::uint32_t>(t.height()));
    w.le<std::uint32_t>(static_cast<std::uint32_t>(t.width()));
    for (double v : t.values()) w.le<double>(v);
  }
  w.le<std::uint64_t>(fnv1a64(w.data()));
  detail::write_file(path.string(), w.data());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto data = detail::read_file(path.string());
  const std::string what = "checkpoint " + path.string();
  detail::ByteReader r(data, what);
  if (std::memcmp(r.bytes(4).data(), kMagic, 4) != 0) throw FormatError(what + ": bad magic");
  if (r.le<std::uint16_t>() != kVersion) throw FormatError(what + ": unsupported version");

  Checkpoint ckpt;
  const auto n_meta = r.le<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string k = get_string(r);
    ckpt.meta[k] = get_string(r);
  }
  const auto n_tensors = r.le<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = get_string(r);
    const auto c = r.le<std::uint32_t>();
    const auto h = r.le<std::uint32_t>();
    const auto wd = r.le<std::uint32_t>();
    const std::uint64_t numel = static_cast<std::uint64_t>(c) * h * wd;
    if (numel * 8 > r.remaining()) throw FormatError(what + ": truncated tensor " + name);
    Tensor t(static_cast<int>(c), static_cast<int>(h), static_cast<int>(wd));
    for (double& v : t.values()) v = r.le<double>();
    ckpt.tensors.emplace_back(std::move(name), std::move(t));
  }
  const std::size_t body = r.pos();
  const auto stored = r.le<std::uint64_t>();
  if (r.remaining() != 0) throw FormatError(what + ": trailing bytes");
  if (fnv1a64(std::span<const std::uint8_t>(data).first(body)) != stored) {
    throw ChecksumError(what + ": checksum mismatch");
  }
  return ckpt;
}

Checkpoint make_checkpoint(const ParameterList& params, std::map<std::string, std::string> meta) {
  Checkpoint ckpt;
  ckpt.meta = std::move(meta);
  std::set<std::string> seen;
  for (const Parameter* p : params) {
    if (!seen.insert(p->name).second) throw InvalidArgument("duplicate parameter name " + p->name);
    ckpt.tensors.emplace_back(p->name, p->value);
  }
  return ckpt;
}

void restore_parameters(const Checkpoint& ckpt, const ParameterList& params) {
  for (Parameter* p : params) {
    const Tensor* t = ckpt.find(p->name);
    if (t == nullptr) throw ShapeError("checkpoint has no tensor " + p->name);
    if (t->shape() != p->value.shape()) {
      throw ShapeError("checkpoint tensor " + p->name + " has shape " + to_string(t->shape()) +
                       ", expected " + to_string(p->value.shape()));
    }
    p->value = *t;
  }
}

}  // namespace sphereconv
