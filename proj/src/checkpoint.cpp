#include "rldwa/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rldwa {

namespace {

constexpr const char* kMagic = "RLDWA1";

void push_line(std::vector<std::uint8_t>& out, const std::string& line) {
  out.insert(out.end(), line.begin(), line.end());
  out.push_back('\n');
}

void push_f32_le(std::vector<std::uint8_t>& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  out.push_back(static_cast<std::uint8_t>(bits & 0xff));
  out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xff));
}

float read_f32_le(const std::uint8_t* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

}  // namespace

std::vector<std::uint8_t> save_tensors(const std::vector<NamedTensor>& tensors) {
  std::vector<std::uint8_t> out;
  push_line(out, kMagic);
  push_line(out, "tensors " + std::to_string(tensors.size()));
  for (const auto& t : tensors) {
    if (t.values.size() != t.rows * t.cols)
      throw std::runtime_error("save_tensors: size of '" + t.name + "' does not match its shape");
    push_line(out, t.name + " " + std::to_string(t.rows) + " " + std::to_string(t.cols));
  }
  push_line(out, "data");
  for (const auto& t : tensors)
    for (double v : t.values) push_f32_le(out, static_cast<float>(v));
  return out;
}

std::vector<NamedTensor> load_tensors(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  const auto next_line = [&]() -> std::string {
    std::size_t end = pos;
    while (end < bytes.size() && bytes[end] != '\n') ++end;
    if (end >= bytes.size()) throw std::runtime_error("checkpoint: truncated header");
    std::string line(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(end));
    pos = end + 1;
    return line;
  };

  if (next_line() != kMagic) throw std::runtime_error("checkpoint: bad magic, expected RLDWA1");

  std::istringstream counts(next_line());
  std::string word;
  std::size_t n = 0;
  if (!(counts >> word >> n) || word != "tensors")
    throw std::runtime_error("checkpoint: malformed tensor count line");

  std::vector<NamedTensor> tensors(n);
  for (auto& t : tensors) {
    std::istringstream ls(next_line());
    if (!(ls >> t.name >> t.rows >> t.cols) || t.rows == 0 || t.cols == 0)
      throw std::runtime_error("checkpoint: malformed manifest entry" +
                               (t.name.empty() ? std::string() : " for '" + t.name + "'"));
  }
  if (next_line() != "data") throw std::runtime_error("checkpoint: missing data marker");

  std::size_t total = 0;
  for (const auto& t : tensors) total += t.rows * t.cols;
  if (bytes.size() - pos != total * 4)
    throw std::runtime_error("checkpoint: payload size mismatch (truncated or trailing bytes)");

  for (auto& t : tensors) {
    t.values.resize(t.rows * t.cols);
    for (double& v : t.values) {
      v = static_cast<double>(read_f32_le(bytes.data() + pos));
      pos += 4;
    }
  }
  return tensors;
}

void write_tensor_file(const std::string& path, const std::vector<NamedTensor>& tensors) {
  const auto bytes = save_tensors(tensors);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<NamedTensor> read_tensor_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return load_tensors(bytes);
}

void append_mlp_tensors(std::vector<NamedTensor>& out, const std::string& prefix, const Mlp& net) {
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const MlpLayer& l = net.layers()[i];
    NamedTensor w;
    w.name = prefix + "." + std::to_string(i) + ".W";
    w.rows = static_cast<std::size_t>(l.out);
    w.cols = static_cast<std::size_t>(l.in);
    w.values = l.W;
    out.push_back(std::move(w));
    NamedTensor b;
    b.name = prefix + "." + std::to_string(i) + ".b";
    b.rows = static_cast<std::size_t>(l.out);
    b.cols = 1;
    b.values = l.b;
    out.push_back(std::move(b));
  }
}

const NamedTensor* find_tensor(const std::vector<NamedTensor>& tensors, const std::string& name) {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

double scalar_from_tensors(const std::vector<NamedTensor>& tensors, const std::string& name) {
  const NamedTensor* t = find_tensor(tensors, name);
  if (!t || t->values.empty()) throw std::runtime_error("checkpoint: missing scalar '" + name + "'");
  return t->values[0];
}

Mlp mlp_from_tensors(const std::vector<NamedTensor>& tensors, const std::string& prefix) {
  std::vector<int> dims;
  std::vector<const NamedTensor*> ws, bs;
  for (std::size_t i = 0;; ++i) {
    const NamedTensor* w = find_tensor(tensors, prefix + "." + std::to_string(i) + ".W");
    const NamedTensor* b = find_tensor(tensors, prefix + "." + std::to_string(i) + ".b");
    if (!w && !b) break;
    if (!w || !b)
      throw std::runtime_error("checkpoint: layer " + prefix + "." + std::to_string(i) +
                               " has a weight/bias tensor missing");
    if (b->rows != w->rows || b->cols != 1)
      throw std::runtime_error("checkpoint: bias shape conflict in layer " + prefix + "." +
                               std::to_string(i));
    if (!dims.empty() && static_cast<std::size_t>(dims.back()) != w->cols)
      throw std::runtime_error("checkpoint: layer " + prefix + "." + std::to_string(i) +
                               " input size does not chain with the previous layer");
    if (dims.empty()) dims.push_back(static_cast<int>(w->cols));
    dims.push_back(static_cast<int>(w->rows));
    ws.push_back(w);
    bs.push_back(b);
  }
  if (dims.empty()) throw std::runtime_error("checkpoint: no layers found for '" + prefix + "'");

  Mlp net(dims);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    net.layers()[i].W = ws[i]->values;
    net.layers()[i].b = bs[i]->values;
  }
  return net;
}

}  // namespace rldwa
