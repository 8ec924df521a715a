#include "hkrep/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hkrep/error.hpp"

namespace hkrep {

namespace {

using nlohmann::json;

const json& require_key(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::InvalidInput, std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<std::vector<int>> int_matrix(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(Errc::InvalidInput, what + " must be a list of rows");
  std::vector<std::vector<int>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw Error(Errc::InvalidInput, what + " must be a list of rows");
    std::vector<int> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw Error(Errc::InvalidInput, what + " entries must be integers");
      r.push_back(x.get<int>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<int> int_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(Errc::InvalidInput, what + " must be a list");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error(Errc::InvalidInput, what + " entries must be integers");
    out.push_back(x.get<int>());
  }
  return out;
}

IntMatrix int_matrix_checked(const json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  auto m = int_matrix(j, what);
  if (m.size() != rows) throw Error(Errc::ShapeMismatch, what + ": expected " + std::to_string(rows) + " rows");
  IntMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (m[r].size() != cols) throw Error(Errc::ShapeMismatch, what + ": expected " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m[r][c];
  }
  return out;
}

json int_matrix_json(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

IntMatrix to_int(const FpMatrix& m) {
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

std::string pair_key(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw Error(Errc::InvalidInput, "empty entry in '" + text + "'");
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(Errc::InvalidInput, "not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Config parse_config(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidInput, "config must be an object");
  const int n = require_key(j, "n").get<int>();
  if (n < 0) throw Error(Errc::InvalidInput, "n must be non-negative");
  auto c = int_matrix(require_key(j, "C"), "C");
  auto d = int_list(require_key(j, "D"), "D");
  if (c.size() != static_cast<std::size_t>(n) || d.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::LengthMismatch, "C and D must have n = " + std::to_string(n) + " rows / entries");
  }
  std::vector<std::pair<int, int>> omega;
  if (j.contains("omega")) {
    for (const auto& pr : int_matrix(j.at("omega"), "omega")) {
      if (pr.size() != 2) throw Error(Errc::InvalidInput, "omega entries are pairs [i,j]");
      if (pr[0] < 1 || pr[0] > n || pr[1] < 1 || pr[1] > n) throw Error(Errc::InvalidInput, "omega vertex out of range");
      omega.emplace_back(pr[0] - 1, pr[1] - 1);
    }
  }
  Config out;
  out.datum = make_datum(c, d, omega);
  out.k = j.value("k", 1);
  const long long p = j.value("p", 5LL);
  if (out.k < 1) throw Error(Errc::InvalidInput, "k must be at least 1");
  if (p < 2 || p > (1LL << 31)) throw Error(Errc::NotPrime, "p out of range");
  require_prime(static_cast<std::uint64_t>(p));
  out.p = static_cast<std::uint32_t>(p);
  out.echo = j;
  return out;
}

json parse_toml_subset(const std::string& text) {
  json out = json::object();
  std::stringstream in(text);
  std::string line, pending;
  int depth = 0, line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_comment(line);
    for (char ch : line) depth += ch == '[' ? 1 : ch == ']' ? -1 : 0;
    pending += line + ' ';
    if (depth > 0) continue;
    std::string stmt = trim(pending);
    pending.clear();
    if (stmt.empty()) continue;
    if (depth < 0) throw Error(Errc::InvalidInput, "unbalanced ']' near line " + std::to_string(line_no));
    const auto eq = stmt.find('=');
    if (eq == std::string::npos) throw Error(Errc::InvalidInput, "expected key = value near line " + std::to_string(line_no));
    const std::string key = trim(stmt.substr(0, eq));
    std::string value = trim(stmt.substr(eq + 1));
    // Trailing commas are legal TOML but not JSON.
    for (std::size_t pos; (pos = value.find(",]")) != std::string::npos || (pos = value.find(", ]")) != std::string::npos;) {
      value.erase(pos, value[pos + 1] == ']' ? 1 : 2);
    }
    try {
      out[key] = json::parse(value);
    } catch (const json::exception&) {
      throw Error(Errc::InvalidInput, "cannot parse value of '" + key + "'");
    }
  }
  if (depth != 0) throw Error(Errc::InvalidInput, "unterminated array");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidInput, "cannot write " + path);
  out << text;
}

Config load_config(const std::string& path) {
  const std::string text = read_file(path);
  const bool toml = (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") || trim(text).rfind('{', 0) != 0;
  json j;
  if (toml) {
    j = parse_toml_subset(text);
  } else {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidInput, std::string("malformed JSON config: ") + e.what());
    }
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed config: ") + e.what());
  }
}

json module_to_json(const HModule& m) {
  const auto& datum = m.datum();
  json out;
  out["format_version"] = kFormatVersion;
  out["k"] = m.k();
  out["p"] = m.p();
  if (is_locally_free(m)) {
    // With a lift in standard form the structure is read off the integers.
    const bool integer = m.lift() && m.is_standard_form();
    StructureMatrices s = to_structure_matrices(m);
    if (integer) {
      // to_structure_matrices reads columns x_b of each arrow block; redo it on
      // the integer lift so that the entries survive a change of prime.
      for (std::size_t t = 0; t < datum.omega().size(); ++t) {
        auto [i, j] = datum.omega()[t];
        const int ni = datum.loop_order(i, m.k()), nj = datum.loop_order(j, m.k());
        const int f = datum.f(i, j);
        PolyMatrix& block = s.blocks[t];
        for (std::size_t a = 0; a < datum.arrows().size(); ++a) {
          const auto& spec = datum.arrows()[a];
          if (spec.pair_index != static_cast<int>(t)) continue;
          const IntMatrix& lifted = m.lift()->arrows[a];
          for (int r = 0; r < block.rows; ++r)
            for (int b = 0; b < s.rank[j]; ++b)
              for (int u = 0; u < f; ++u)
                for (int deg = 0; deg < block.length; ++deg) {
                  block(r, b * -datum.c(i, j) + spec.g * f + u, deg) = lifted(r * ni + deg, b * nj + u);
                }
        }
      }
    }
    out["rank"] = s.rank.values();
    json structure = json::object();
    for (std::size_t t = 0; t < datum.omega().size(); ++t) {
      auto [i, j] = datum.omega()[t];
      const PolyMatrix& block = s.blocks[t];
      json rows = json::array();
      for (int r = 0; r < block.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < block.cols; ++c) {
          json coeffs = json::array();
          for (int deg = 0; deg < block.length; ++deg) coeffs.push_back(block(r, c, deg));
          row.push_back(coeffs);
        }
        rows.push_back(row);
      }
      structure[pair_key(i, j)] = rows;
    }
    out["structure"] = structure;
    return out;
  }
  out["dims"] = m.dims();
  json eps = json::array(), arrow = json::array();
  for (int i = 0; i < m.n(); ++i) eps.push_back(int_matrix_json(m.lift() ? m.lift()->loops[i] : to_int(m.loop(i))));
  for (std::size_t a = 0; a < m.arrows().size(); ++a) {
    arrow.push_back(int_matrix_json(m.lift() ? m.lift()->arrows[a] : to_int(m.arrows()[a])));
  }
  out["eps"] = eps;
  out["arrow"] = arrow;
  return out;
}

HModule module_from_json(const DatumPtr& datum, const json& j) {
  try {
    if (!j.is_object()) throw Error(Errc::InvalidInput, "module file must be an object");
    if (j.contains("format_version") && j.at("format_version").get<int>() != kFormatVersion) {
      throw Error(Errc::InvalidInput, "unsupported module format_version");
    }
    const int k = require_key(j, "k").get<int>();
    const long long pl = require_key(j, "p").get<long long>();
    if (k < 1) throw Error(Errc::InvalidInput, "k must be at least 1");
    if (pl < 2 || pl > (1LL << 31)) throw Error(Errc::NotPrime, "p out of range");
    require_prime(static_cast<std::uint64_t>(pl));
    const auto p = static_cast<std::uint32_t>(pl);
    const int n = datum->n();
    if (j.contains("structure")) {
      RankVector r(int_list(require_key(j, "rank"), "rank"));
      if (r.size() != static_cast<std::size_t>(n)) throw Error(Errc::LengthMismatch, "rank has wrong length");
      if (!r.is_nonnegative()) throw Error(Errc::InvalidInput, "rank entries must be non-negative");
      StructureMatrices s = zero_structure(datum, k, r);
      const json& st = j.at("structure");
      for (std::size_t t = 0; t < datum->omega().size(); ++t) {
        auto [i, jj] = datum->omega()[t];
        const std::string key = pair_key(i, jj);
        if (!st.contains(key)) continue;  // absent blocks are zero
        PolyMatrix& block = s.blocks[t];
        const json& rows = st.at(key);
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(block.rows)) {
          throw Error(Errc::ShapeMismatch, "structure " + key + ": expected " + std::to_string(block.rows) + " rows");
        }
        for (int row = 0; row < block.rows; ++row) {
          const json& cols = rows[row];
          if (!cols.is_array() || cols.size() != static_cast<std::size_t>(block.cols)) {
            throw Error(Errc::ShapeMismatch, "structure " + key + ": expected " + std::to_string(block.cols) + " columns");
          }
          for (int c = 0; c < block.cols; ++c) {
            auto coeffs = int_list(cols[c], "structure entry");
            if (static_cast<int>(coeffs.size()) > block.length) {
              throw Error(Errc::EntryDegreeOverflow, "structure " + key + ": entry has more than " +
                                                         std::to_string(block.length) + " coefficients");
            }
            for (std::size_t deg = 0; deg < coeffs.size(); ++deg) block(row, c, static_cast<int>(deg)) = coeffs[deg];
          }
        }
      }
      for (auto it = st.begin(); it != st.end(); ++it) {
        bool known = false;
        for (auto [i, jj] : datum->omega()) known = known || it.key() == pair_key(i, jj);
        if (!known) throw Error(Errc::InvalidInput, "structure key " + it.key() + " is not a pair of the orientation");
      }
      return from_structure_matrices(s, p);
    }
    auto dims = int_list(require_key(j, "dims"), "dims");
    if (dims.size() != static_cast<std::size_t>(n)) throw Error(Errc::LengthMismatch, "dims has wrong length");
    const json& eps = require_key(j, "eps");
    const json& arrow = require_key(j, "arrow");
    if (eps.size() != static_cast<std::size_t>(n) || arrow.size() != datum->arrows().size()) {
      throw Error(Errc::ShapeMismatch, "one eps matrix per vertex and one arrow matrix per arrow");
    }
    IntegerLift lift;
    std::vector<FpMatrix> loops, arrows;
    for (int i = 0; i < n; ++i) {
      lift.loops.push_back(int_matrix_checked(eps[i], dims[i], dims[i], "eps"));
      loops.push_back(lift.loops.back().mod(p));
    }
    for (std::size_t a = 0; a < datum->arrows().size(); ++a) {
      const auto& spec = datum->arrows()[a];
      lift.arrows.push_back(int_matrix_checked(arrow[a], dims[spec.head], dims[spec.tail], "arrow"));
      arrows.push_back(lift.arrows.back().mod(p));
    }
    HModule m(datum, k, p, dims, std::move(loops), std::move(arrows), std::move(lift));
    require_valid(m);
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed module file: ") + e.what());
  }
}

HModule load_module(const DatumPtr& datum, const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed module file: ") + e.what());
  }
  return module_from_json(datum, j);
}

RankVector parse_rank(const std::string& text, int n) {
  if (trim(text).empty()) return RankVector(static_cast<std::size_t>(n));
  RankVector r(parse_int_list(text));
  if (r.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::LengthMismatch, "rank vector '" + text + "' needs " + std::to_string(n) + " entries");
  }
  if (!r.is_nonnegative()) throw Error(Errc::InvalidInput, "rank entries must be non-negative");
  return r;
}

std::vector<RankVector> parse_brseq(const std::string& text, int n) {
  if (trim(text).empty()) throw Error(Errc::LengthMismatch, "empty brseq");
  std::vector<RankVector> out;
  std::string flat = text;
  std::replace(flat.begin(), flat.end(), '/', ';');
  std::stringstream ss(flat);
  std::string part;
  while (std::getline(ss, part, ';')) out.push_back(parse_rank(part, n));
  return out;
}

json config_echo(const Config& config) {
  json out;
  out["config"] = config.echo;
  out["library_version"] = kLibraryVersion;
  out["format_version"] = kFormatVersion;
  return out;
}

}  // namespace hkrep
