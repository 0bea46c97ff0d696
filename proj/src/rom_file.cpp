#include "fracrom/rom_file.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace fracrom {

namespace {

constexpr char kMagic[6] = {'F', 'R', 'O', 'M', '1', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

void put_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

void put_doubles(std::string& out, const double* p, std::uint64_t n) {
  out.append(reinterpret_cast<const char*>(p), n * sizeof(double));
}

void put_matrix(std::string& out, const DenseMatrix& m) {
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  put_doubles(out, m.data(), static_cast<std::uint64_t>(m.size()));
}

void put_vector(std::string& out, const Vec64& v) {
  put_u64(out, static_cast<std::uint64_t>(v.size()));
  put_doubles(out, v.data(), static_cast<std::uint64_t>(v.size()));
}

struct Reader {
  const std::string& bytes;
  size_t pos = 0;

  void need(size_t n) const {
    if (pos + n > bytes.size())
      throw IoError("reduced-model file truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + pos, 4);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v;
    std::memcpy(&v, bytes.data() + pos, 8);
    pos += 8;
    return v;
  }
  void doubles(double* dst, std::uint64_t n) {
    need(n * sizeof(double));
    std::memcpy(dst, bytes.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
  }
  DenseMatrix matrix() {
    const std::uint64_t rows = u64(), cols = u64();
    if (rows > (1u << 24) || cols > (1u << 24))
      throw IoError("reduced-model file: implausible matrix dimensions");
    DenseMatrix m(rows, cols);
    doubles(m.data(), rows * cols);
    return m;
  }
  Vec64 vector() {
    const std::uint64_t n = u64();
    if (n > (1u << 26)) throw IoError("reduced-model file: implausible vector length");
    Vec64 v(n);
    doubles(v.data(), n);
    return v;
  }
};

nlohmann::json meta_to_json(const RomMeta& m) {
  nlohmann::json j;
  j["problem_id"] = m.problem_id;
  j["nx"] = m.nx;
  j["ny"] = m.ny;
  j["n_dof"] = m.n_dof;
  j["K"] = m.K;
  j["train_h"] = m.train_h;
  j["train_alpha"] = m.train_alpha;
  j["sketch_seed"] = m.sketch_seed;
  j["solver_tol"] = m.solver_tol;
  j["taus"] = m.taus;
  j["op_coeffs"] = m.op_coeffs;
  j["load_coeffs"] = m.load_coeffs;
  j["box_lo"] = m.box_lo;
  j["box_hi"] = m.box_hi;
  j["samples_digest"] = m.samples_digest;
  j["created"] = m.created;
  return j;
}

RomMeta meta_from_json(const nlohmann::json& j) {
  RomMeta m;
  try {
    m.problem_id = j.at("problem_id").get<std::string>();
    m.nx = j.at("nx").get<Index>();
    m.ny = j.at("ny").get<Index>();
    m.n_dof = j.at("n_dof").get<Index>();
    m.K = j.at("K").get<Index>();
    m.train_h = j.at("train_h").get<double>();
    m.train_alpha = j.at("train_alpha").get<double>();
    m.sketch_seed = j.at("sketch_seed").get<std::uint64_t>();
    m.solver_tol = j.at("solver_tol").get<double>();
    m.taus = j.at("taus").get<std::vector<double>>();
    m.op_coeffs = j.at("op_coeffs").get<std::vector<std::string>>();
    m.load_coeffs = j.at("load_coeffs").get<std::vector<std::string>>();
    m.box_lo = j.at("box_lo").get<std::vector<double>>();
    m.box_hi = j.at("box_hi").get<std::vector<double>>();
    m.samples_digest = j.at("samples_digest").get<std::string>();
    m.created = j.at("created").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("reduced-model file: bad metadata: ") + e.what());
  }
  return m;
}

}  // namespace

std::string rom_to_bytes(const RomArtifact& rom) {
  std::string payload;
  const std::string json = meta_to_json(rom.meta).dump();
  put_u64(payload, json.size());
  payload += json;
  put_matrix(payload, rom.V);
  for (const auto& a : rom.A_hat) put_matrix(payload, a);
  put_matrix(payload, rom.M_hat);
  for (const auto& g : rom.g_hat) put_vector(payload, g);

  std::string out;
  out.reserve(payload.size() + 14);
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  out += payload;
  put_u32(out, crc32_update(0, payload.data(), payload.size()));
  return out;
}

RomArtifact rom_from_bytes(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8 ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw IoError("not a reduced-model file (bad magic)");
  Reader r{bytes, sizeof(kMagic)};
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw IoError("unsupported reduced-model file version " +
                  std::to_string(version));
  const size_t payload_begin = r.pos;
  if (bytes.size() < payload_begin + 4)
    throw IoError("reduced-model file truncated");
  const size_t payload_len = bytes.size() - payload_begin - 4;
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
  const std::uint32_t crc =
      crc32_update(0, bytes.data() + payload_begin, payload_len);
  if (crc != stored_crc)
    throw IoError("reduced-model file checksum mismatch (corrupt file)");

  const std::uint64_t json_len = r.u64();
  r.need(json_len);
  nlohmann::json j = nlohmann::json::parse(
      bytes.data() + r.pos, bytes.data() + r.pos + json_len, nullptr,
      /*allow_exceptions=*/false);
  if (j.is_discarded())
    throw IoError("reduced-model file: metadata is not valid JSON");
  r.pos += json_len;

  RomArtifact rom;
  rom.meta = meta_from_json(j);
  rom.V = r.matrix();
  for (size_t t = 0; t < rom.meta.op_coeffs.size(); ++t)
    rom.A_hat.push_back(r.matrix());
  rom.M_hat = r.matrix();
  for (size_t t = 0; t < rom.meta.load_coeffs.size(); ++t)
    rom.g_hat.push_back(r.vector());
  if (r.pos != bytes.size() - 4)
    throw IoError("reduced-model file has trailing bytes");
  if (static_cast<Index>(rom.V.rows()) != rom.meta.n_dof ||
      static_cast<Index>(rom.V.cols()) != rom.meta.K)
    throw IoError("reduced-model file: basis shape disagrees with metadata");
  return rom;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open \"" + path + "\" for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.flush();
  if (!f) throw IoError("write to \"" + path + "\" failed");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("cannot open \"" + path + "\" for reading");
  const std::streamsize n = f.tellg();
  f.seekg(0);
  std::string bytes(static_cast<size_t>(n), '\0');
  f.read(bytes.data(), n);
  if (!f) throw IoError("read from \"" + path + "\" failed");
  return bytes;
}

void save_rom(const std::string& path, const RomArtifact& rom) {
  write_file(path, rom_to_bytes(rom));
}

RomArtifact load_rom(const std::string& path) {
  return rom_from_bytes(read_file(path));
}

}  // namespace fracrom
