#include "seac/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace seac::nn {
namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("checkpoint truncated");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  if (n > (1u << 20)) throw std::runtime_error("checkpoint string length implausible");
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) throw std::runtime_error("checkpoint truncated");
  return s;
}

void put_f32(std::ostream& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }
float get_f32(std::istream& in) { return std::bit_cast<float>(get_u32(in)); }

}  // namespace

std::string Checkpoint::tag(const std::string& key) const {
  for (const auto& [k, v] : tags) {
    if (k == key) return v;
  }
  return {};
}

void Checkpoint::set_tag(const std::string& key, const std::string& value) {
  for (auto& [k, v] : tags) {
    if (k == key) {
      v = value;
      return;
    }
  }
  tags.emplace_back(key, value);
}

bool Checkpoint::has_network(const std::string& name) const {
  for (const auto& n : networks) {
    if (n.name == name) return true;
  }
  return false;
}

const MlpParams<float>& Checkpoint::network(const std::string& name) const {
  for (const auto& n : networks) {
    if (n.name == name) return n.params;
  }
  throw std::runtime_error("checkpoint has no network named '" + name + "'");
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(ckpt.tags.size()));
  for (const auto& [k, v] : ckpt.tags) {
    put_string(out, k);
    put_string(out, v);
  }
  put_u32(out, static_cast<std::uint32_t>(ckpt.networks.size()));
  for (const auto& net : ckpt.networks) {
    put_string(out, net.name);
    put_u32(out, static_cast<std::uint32_t>(net.params.hidden));
    put_u32(out, static_cast<std::uint32_t>(net.params.layers.size()));
    for (const auto& l : net.params.layers) {
      put_u32(out, static_cast<std::uint32_t>(l.weight.rows()));
      put_u32(out, static_cast<std::uint32_t>(l.weight.cols()));
    }
  }
  for (const auto& net : ckpt.networks) {
    for (float f : net.params.flatten()) put_f32(out, f);
  }
  if (!out) throw std::runtime_error("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof kCheckpointMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw std::runtime_error("not a SEAC checkpoint (bad magic)");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const std::uint32_t ntags = get_u32(in);
  for (std::uint32_t i = 0; i < ntags; ++i) {
    std::string k = get_string(in);
    std::string v = get_string(in);
    ckpt.tags.emplace_back(std::move(k), std::move(v));
  }
  const std::uint32_t nnets = get_u32(in);
  for (std::uint32_t i = 0; i < nnets; ++i) {
    NamedNetwork net;
    net.name = get_string(in);
    const std::uint32_t act = get_u32(in);
    if (act > static_cast<std::uint32_t>(Activation::Relu)) {
      throw std::runtime_error("unknown activation tag in checkpoint");
    }
    net.params.hidden = static_cast<Activation>(act);
    const std::uint32_t nlayers = get_u32(in);
    for (std::uint32_t l = 0; l < nlayers; ++l) {
      const std::uint32_t rows = get_u32(in);
      const std::uint32_t cols = get_u32(in);
      if (rows == 0 || cols == 0 || rows > (1u << 16) || cols > (1u << 16)) {
        throw std::runtime_error("implausible layer shape in checkpoint");
      }
      net.params.layers.push_back({Matrix<float>(rows, cols), Vector<float>(rows)});
    }
    ckpt.networks.push_back(std::move(net));
  }
  for (auto& net : ckpt.networks) {
    std::vector<float> flat(net.params.parameter_count());
    for (auto& f : flat) f = get_f32(in);
    net.params.assign(flat);
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  return read_checkpoint(in);
}

}  // namespace seac::nn
