#include "sptnoise/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sptnoise/errors.hpp"

namespace sptnoise {

using nlohmann::json;

namespace {

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

[[noreturn]] void fail(const std::string& source, const std::string& path, const std::string& what) {
  throw ValidationError(source + ": field '" + path + "': " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& source, const std::string& path) {
  if (!obj.is_object()) fail(source, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(source, path.empty() ? key : path + "." + key, "missing");
  return *it;
}

int int_field(const json& obj, const std::string& key, const std::string& source) {
  const json& v = field(obj, key, source, "");
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(source, key, "expected a positive integer");
  return v.get<int>();
}

cplx parse_complex(const json& v, const std::string& source, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(source, path, "expected a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

CMatrix parse_matrix(const json& v, int rows, int cols, const std::string& source, const std::string& path) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    fail(source, path, "expected " + std::to_string(rows) + " rows");
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    std::string rp = path + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || static_cast<int>(v[r].size()) != cols)
      fail(source, rp, "expected " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) m(r, c) = parse_complex(v[r][c], source, rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

std::vector<int> parse_moduli(const json& v, const std::string& source) {
  if (!v.is_array() || v.empty()) fail(source, "group", "expected a list of moduli");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<int>() < 1) fail(source, "group", "moduli must be positive integers");
    out.push_back(x.get<int>());
  }
  return out;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string channel_to_json(const QuantumChannel& ch) {
  json j;
  j["dim"] = ch.dim();
  j["kraus"] = json::array();
  for (const auto& k : ch.kraus()) j["kraus"].push_back(matrix_to_json(k));
  return j.dump() + "\n";
}

std::string lindbladian_to_json(const Lindbladian& lb) {
  json j;
  j["dim"] = lb.dim;
  j["h"] = matrix_to_json(lb.hamiltonian);
  j["jumps"] = json::array();
  for (const auto& l : lb.jumps) j["jumps"].push_back(matrix_to_json(l));
  return j.dump() + "\n";
}

std::variant<QuantumChannel, Lindbladian> parse_channel_text(const std::string& text, const std::string& source,
                                                             double completeness_tol) {
  json j = parse_json(text, source);
  if (!j.is_object()) fail(source, "", "top level must be an object");
  const int d = int_field(j, "dim", source);
  if (j.contains("kraus")) {
    const json& ks = j["kraus"];
    if (!ks.is_array() || ks.empty()) fail(source, "kraus", "expected a nonempty list of matrices");
    std::vector<CMatrix> mats;
    for (std::size_t i = 0; i < ks.size(); ++i)
      mats.push_back(parse_matrix(ks[i], d, d, source, "kraus[" + std::to_string(i) + "]"));
    QuantumChannel ch(d, mats);
    auto rep = validate(ch, completeness_tol);
    if (!rep.pass)
      throw ValidationError(source + ": Kraus set is not complete (deviation " + format_real(rep.deviation) + ")");
    return ch;
  }
  if (j.contains("h")) {
    Lindbladian lb{d, parse_matrix(j["h"], d, d, source, "h"), {}};
    if (j.contains("jumps")) {
      const json& js = j["jumps"];
      if (!js.is_array()) fail(source, "jumps", "expected a list of matrices");
      for (std::size_t i = 0; i < js.size(); ++i)
        lb.jumps.push_back(parse_matrix(js[i], d, d, source, "jumps[" + std::to_string(i) + "]"));
    }
    if (!is_hermitian(lb.hamiltonian, 1e-12))
      throw ValidationError(source + ": field 'h': Hamiltonian is not Hermitian (deviation " +
                            format_real(max_abs(lb.hamiltonian - lb.hamiltonian.adjoint())) + ")");
    validate_lindbladian(lb);
    return lb;
  }
  fail(source, "", "expected either 'kraus' or 'h'");
}

std::variant<QuantumChannel, Lindbladian> parse_channel_file(const std::string& path, double completeness_tol) {
  return parse_channel_text(read_text_file(path), path, completeness_tol);
}

std::string state_to_json(const SymmetricMps& state, const std::string& metadata_json) {
  json j;
  const auto& a = state.tensor;
  j["physical_dim"] = a.d();
  j["bond_dim"] = a.D();
  j["tensor"] = json::array();
  for (int i = 0; i < a.d(); ++i) j["tensor"].push_back(matrix_to_json(a[i]));
  j["group"] = state.rep.group().moduli();
  j["rep"] = json::array();
  for (const auto& u : state.rep.matrices()) j["rep"].push_back(matrix_to_json(u));
  j["metadata"] = json::parse(metadata_json);
  return j.dump() + "\n";
}

SymmetricMps parse_state_text(const std::string& text, const std::string& source) {
  json j = parse_json(text, source);
  const int d = int_field(j, "physical_dim", source);
  const int D = int_field(j, "bond_dim", source);
  const json& t = field(j, "tensor", source, "");
  if (!t.is_array() || static_cast<int>(t.size()) != d) fail(source, "tensor", "expected d matrices");
  std::vector<CMatrix> mats;
  for (int i = 0; i < d; ++i) mats.push_back(parse_matrix(t[i], D, D, source, "tensor[" + std::to_string(i) + "]"));
  FiniteAbelianGroup group(parse_moduli(field(j, "group", source, ""), source));
  const json& r = field(j, "rep", source, "");
  if (!r.is_array() || static_cast<int>(r.size()) != group.order()) fail(source, "rep", "expected |G| matrices");
  std::vector<CMatrix> us;
  for (int g = 0; g < group.order(); ++g) us.push_back(parse_matrix(r[g], d, d, source, "rep[" + std::to_string(g) + "]"));
  MpsTensor tensor(mats);
  if (left_canonical_defect(tensor) > 1e-10) {
    tensor = canonicalize(tensor);
  } else if (!is_injective(tensor)) {
    throw NumericalError(source + ": state tensor is not injective");
  }
  return {tensor, OnsiteRep(group, us)};
}

SymmetricMps parse_state_file(const std::string& path) { return parse_state_text(read_text_file(path), path); }

OnsiteRep parse_rep_file(const std::string& path) {
  json j = parse_json(read_text_file(path), path);
  FiniteAbelianGroup group(parse_moduli(field(j, "group", path, ""), path));
  const json& ms = field(j, "matrices", path, "");
  if (!ms.is_array() || static_cast<int>(ms.size()) != group.order()) fail(path, "matrices", "expected |G| matrices");
  if (!ms[0].is_array()) fail(path, "matrices[0]", "expected a matrix");
  const int d = static_cast<int>(ms[0].size());
  std::vector<CMatrix> us;
  for (int g = 0; g < group.order(); ++g)
    us.push_back(parse_matrix(ms[g], d, d, path, "matrices[" + std::to_string(g) + "]"));
  return OnsiteRep(group, us);
}

OnsiteRep builtin_rep(const std::string& name) {
  if (name == "spin1") return spin1_rep();
  if (name.rfind("regular:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(8));
    } catch (const std::exception&) {
      throw ValidationError("bad builtin rep '" + name + "'");
    }
    if (n < 1 || n > 8) throw ValidationError("regular rep modulus must be in [1, 8]");
    return regular_rep(FiniteAbelianGroup::zn_squared(n));
  }
  throw ValidationError("unknown builtin rep '" + name + "' (expected spin1 or regular:n)");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content, bool force) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (fs::exists(target) && !force) throw ValidationError("'" + path + "' exists (use --force to overwrite)");
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw ValidationError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

}  // namespace sptnoise
