#include "contact/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "contact/errors.hpp"

namespace contact {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'N', 'T', 'C', 'K', 'P', 'T', '\0'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void pod(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void str(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path, std::uintmax_t size) : in_(in), path_(std::move(path)), size_(size) {}
  template <typename T>
  T pod(const char* what) {
    T v;
    read(reinterpret_cast<char*>(&v), sizeof(T), what);
    return v;
  }
  std::string str(const char* what) {
    const auto len = pod<std::uint32_t>(what);
    require_available(len, what);
    std::string s(len, '\0');
    read(s.data(), len, what);
    return s;
  }
  // Guards allocations against length fields that overrun the file.
  void require_available(std::uintmax_t n, const char* what) {
    const auto pos = static_cast<std::uintmax_t>(in_.tellg());
    if (n > size_ - pos) throw CheckpointError(path_ + ": truncated while reading " + what);
  }
  void read(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw CheckpointError(path_ + ": truncated while reading " + what);
    }
  }

 private:
  std::istream& in_;
  std::string path_;
  std::uintmax_t size_;
};

std::string get(const std::map<std::string, std::string>& meta, const std::string& key) {
  auto it = meta.find(key);
  if (it == meta.end()) throw CheckpointError("checkpoint metadata lacks '" + key + "'");
  return it->second;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.pod(ckpt.version);
  w.pod(static_cast<std::uint32_t>(ckpt.meta.size()));
  for (const auto& [k, v] : ckpt.meta) {
    w.str(k);
    w.str(v);
  }
  w.pod(static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    w.str(name);
    w.pod(static_cast<std::uint32_t>(t.rank()));
    for (auto e : t.shape()) w.pod(static_cast<std::uint64_t>(e));
    const auto values = t.data();
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  }
  if (!out) throw CheckpointError("failed writing " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  Reader r(in, path.string(), std::filesystem::file_size(path));
  char magic[sizeof(kMagic)];
  r.read(magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw CheckpointError(path.string() + ": not a checkpoint file");
  Checkpoint ckpt;
  ckpt.version = r.pod<std::uint32_t>("version");
  if (ckpt.version != kCheckpointVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " + std::to_string(ckpt.version));
  }
  const auto n_meta = r.pod<std::uint32_t>("metadata count");
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    auto key = r.str("metadata key");
    ckpt.meta[key] = r.str("metadata value");
  }
  const auto n_tensors = r.pod<std::uint32_t>("tensor count");
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    auto name = r.str("tensor name");
    const auto rank = r.pod<std::uint32_t>("tensor rank");
    Shape shape(rank);
    for (auto& e : shape) e = static_cast<std::size_t>(r.pod<std::uint64_t>(name.c_str()));
    r.require_available(shape_numel(shape) * sizeof(double), name.c_str());
    std::vector<double> values(shape_numel(shape));
    r.read(reinterpret_cast<char*>(values.data()), values.size() * sizeof(double), name.c_str());
    ckpt.tensors.emplace_back(std::move(name), Tensor::from(std::move(shape), std::move(values)));
  }
  return ckpt;
}

void load_parameters(const Checkpoint& ckpt, ParameterList& params) {
  std::vector<std::string> missing, mismatched, unexpected;
  for (const auto& p : params.items()) {
    auto it = std::find_if(ckpt.tensors.begin(), ckpt.tensors.end(), [&](const auto& e) { return e.first == p.name; });
    if (it == ckpt.tensors.end()) {
      missing.push_back(p.name);
    } else if (it->second.shape() != p.tensor.shape()) {
      mismatched.push_back(p.name + " (" + shape_str(it->second.shape()) + " vs " + shape_str(p.tensor.shape()) + ")");
    }
  }
  for (const auto& [name, t] : ckpt.tensors) {
    if (params.find(name) == nullptr) unexpected.push_back(name);
  }
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  std::string problems;
  if (!missing.empty()) problems += "missing tensors: " + join(missing) + "; ";
  if (!mismatched.empty()) problems += "shape mismatch: " + join(mismatched) + "; ";
  if (!unexpected.empty()) problems += "unexpected tensors: " + join(unexpected) + "; ";
  if (!problems.empty()) throw CheckpointError("checkpoint does not fit model: " + problems);

  for (const auto& p : params.items()) {
    auto it = std::find_if(ckpt.tensors.begin(), ckpt.tensors.end(), [&](const auto& e) { return e.first == p.name; });
    Tensor dst = p.tensor;
    const auto src = it->second.data();
    std::copy(src.begin(), src.end(), dst.mutable_data().begin());
  }
}

std::map<std::string, std::string> head_config_meta(const HeadConfig& c) {
  auto real = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return std::string(buf);
  };
  return {{"model", "contact_head"},
          {"n", std::to_string(c.n)},
          {"d", std::to_string(c.d)},
          {"width", std::to_string(c.width)},
          {"maps", std::to_string(c.maps)},
          {"gn_groups", std::to_string(c.gn_groups)},
          {"gn_eps", real(c.gn_eps)},
          {"train_gn_affine", c.train_gn_affine ? "1" : "0"},
          {"ablate_cross", c.ablate_cross ? "1" : "0"},
          {"ablate_spatial", c.ablate_spatial ? "1" : "0"}};
}

HeadConfig head_config_from_meta(const std::map<std::string, std::string>& meta) {
  if (get(meta, "model") != "contact_head") throw CheckpointError("checkpoint does not hold a contact head");
  HeadConfig c;
  try {
    c.n = std::stoul(get(meta, "n"));
    c.d = std::stoul(get(meta, "d"));
    c.width = std::stoul(get(meta, "width"));
    c.maps = std::stoul(get(meta, "maps"));
    c.gn_groups = std::stoul(get(meta, "gn_groups"));
    c.gn_eps = std::strtod(get(meta, "gn_eps").c_str(), nullptr);
  } catch (const std::logic_error&) {
    throw CheckpointError("checkpoint metadata holds a malformed number");
  }
  c.train_gn_affine = get(meta, "train_gn_affine") == "1";
  c.ablate_cross = get(meta, "ablate_cross") == "1";
  c.ablate_spatial = get(meta, "ablate_spatial") == "1";
  return c;
}

void save_model(const std::filesystem::path& path, const ContactHead& model) {
  Checkpoint ckpt;
  ckpt.meta = head_config_meta(model.config());
  for (const auto& p : model.parameters().items()) ckpt.tensors.emplace_back(p.name, p.tensor);
  write_checkpoint(path, ckpt);
}

ContactHead load_model(const std::filesystem::path& path) {
  const Checkpoint ckpt = read_checkpoint(path);
  ContactHead model(head_config_from_meta(ckpt.meta));
  load_parameters(ckpt, model.parameters());
  return model;
}

}  // namespace contact
