#include "inexact/instance_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace inexact {

namespace {

constexpr std::array<char, 8> kMagic = {'I', 'N', 'E', 'X', 'L', 'A', 'S', 'O'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw InstanceFormatError("instance file truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le(in, 8)); }

}  // namespace

void write_instance(const std::string& path, const LassoInstance& inst, double lambda,
                    const InstanceProvenance& provenance) {
  const auto* dense = dynamic_cast<const DenseMatrix*>(inst.A.get());
  if (dense == nullptr) throw std::invalid_argument("write_instance: only dense instances can be stored");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, 0);
  put_u64(out, dense->rows());
  put_u64(out, dense->cols());
  for (double v : dense->row_major()) put_f64(out, v);
  for (double v : inst.b) put_f64(out, v);
  put_f64(out, inst.gamma);
  put_f64(out, lambda);
  if (!out) throw std::runtime_error("write failed for " + path);

  nlohmann::json side;
  side["format_version"] = kVersion;
  side["m"] = dense->rows();
  side["n"] = dense->cols();
  side["seed"] = provenance.seed;
  side["generator"] = provenance.generator;
  side["gamma_mode"] = provenance.gamma_mode;
  side["gamma_value"] = provenance.gamma_value;
  side["gamma"] = inst.gamma;
  side["lambda"] = lambda;
  std::ofstream js(path + ".json");
  js << side.dump(2) << '\n';
  if (!js) throw std::runtime_error("write failed for " + path + ".json");
}

StoredInstance read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InstanceFormatError(path + ": bad magic");
  const auto version = static_cast<std::uint32_t>(get_le(in, 4));
  if (version != kVersion) throw InstanceFormatError(path + ": unsupported version " + std::to_string(version));
  get_le(in, 4);
  const std::uint64_t m = get_le(in, 8);
  const std::uint64_t n = get_le(in, 8);
  if (m == 0 || n == 0 || m > (1u << 20) || n > (1u << 20) || m * n > (1ull << 28)) {
    throw InstanceFormatError(path + ": implausible dimensions");
  }
  std::vector<double> a(m * n);
  for (double& v : a) v = get_f64(in);
  std::vector<double> b(m);
  for (double& v : b) v = get_f64(in);
  const double gamma = get_f64(in);
  const double lambda = get_f64(in);
  if (in.peek() != std::char_traits<char>::eof()) throw InstanceFormatError(path + ": trailing bytes");

  StoredInstance out{LassoInstance::make(std::make_shared<DenseMatrix>(m, n, std::move(a)),
                                         Vector(std::move(b)), gamma),
                     lambda,
                     {}};
  std::ifstream js(path + ".json");
  if (js) {
    try {
      const auto side = nlohmann::json::parse(js);
      out.provenance.seed = side.value("seed", std::uint64_t{0});
      out.provenance.generator = side.value("generator", std::string("gaussian"));
      out.provenance.gamma_mode = side.value("gamma_mode", std::string("scaled"));
      out.provenance.gamma_value = side.value("gamma_value", 1e-3);
    } catch (const nlohmann::json::exception& e) {
      throw InstanceFormatError(path + ".json: " + e.what());
    }
  }
  return out;
}

}  // namespace inexact
