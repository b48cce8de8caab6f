#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qca/compat.hpp"
#include "qca/error.hpp"
#include "qca/integer.hpp"
#include "qca/laurent.hpp"
#include "qca/matrix.hpp"
#include "qca/seed.hpp"
#include "qca/structure.hpp"
#include "qca/torus.hpp"

namespace qca::io {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- scalars

/// Integers that fit in 64 bits are JSON numbers; larger ones are decimal strings.
inline Json encode(const Int& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return x.convert_to<std::int64_t>();
  return x.str();
}

inline Int decode_int(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() > start && s.find_first_not_of("0123456789", start) == std::string::npos) return Int(s);
  }
  throw Error(ErrorKind::Parse, "expected an integer, got " + j.dump());
}

inline Json encode(const Rational& r) { return Json::array({encode(numerator(r)), encode(denominator(r))}); }

inline Json encode(const IntVector& v) {
  Json out = Json::array();
  for (const Int& x : v) out.push_back(encode(x));
  return out;
}

inline Json encode(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (std::size_t x : v) out.push_back(x);
  return out;
}

inline Json encode(const IntMatrix& M) {
  Json out = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) out.push_back(encode(M.row(i)));
  return out;
}

inline IntMatrix decode_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!j.is_array() || j.size() != rows) throw Error(ErrorKind::Parse, what + " must have " + std::to_string(rows) + " rows");
  IntMatrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error(ErrorKind::Parse, what + " row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) M(i, c) = decode_int(j[i][c]);
  }
  return M;
}

template <std::size_t Vars>
Json encode(const Laurent<Vars>& x) {
  Json out = Json::array();
  for (const auto& [e, c] : x.terms()) {
    Json t = Json::array();
    for (std::int64_t k : e) t.push_back(k);
    t.push_back(encode(c));
    out.push_back(std::move(t));
  }
  return out;
}

template <std::size_t Vars>
Laurent<Vars> decode_laurent(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "Laurent polynomial must be an array of terms");
  Laurent<Vars> out;
  for (const Json& t : j) {
    if (!t.is_array() || t.size() != Vars + 1) throw Error(ErrorKind::Parse, "bad Laurent term " + t.dump());
    typename Laurent<Vars>::Exponent e{};
    for (std::size_t i = 0; i < Vars; ++i) e[i] = to_int64(decode_int(t[i]));
    out += Laurent<Vars>::monomial(e, decode_int(t[Vars]));
  }
  return out;
}

inline Json encode(const PoissonMatrix& M) {
  Json out = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(encode(M(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline PoissonMatrix decode_poisson(const Json& j, std::size_t m) {
  if (!j.is_array() || j.size() != m) throw Error(ErrorKind::Parse, "Omega must have " + std::to_string(m) + " rows");
  PoissonMatrix out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!j[i].is_array() || j[i].size() != m) throw Error(ErrorKind::Parse, "Omega row " + std::to_string(i));
    for (std::size_t c = 0; c < m; ++c) out(i, c) = decode_laurent<1>(j[i][c]);
  }
  return out;
}

inline Json encode(const TorusElement& x) {
  Json out = Json::array();
  for (const auto& [e, c] : x.terms()) {
    Json ej = Json::array();
    for (std::int64_t k : e) ej.push_back(k);
    out.push_back(Json{{"e", ej}, {"c", encode(c)}});
  }
  return out;
}

// ---------------------------------------------------------------- seed files

struct SeedFile {
  QuantumSeed seed;
  std::optional<IntMatrix> W;
  std::optional<PoissonMatrix> Omega;

  CompatibleTriple triple() const {
    if (!W) throw Error(ErrorKind::InvalidSeed, "seed has no W");
    return CompatibleTriple(seed, *W);
  }
};

inline std::size_t decode_count(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing key '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
    throw Error(ErrorKind::Parse, std::string("'") + key + "' must be a positive integer");
  return v.get<std::size_t>();
}

inline SeedFile decode_seed(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "seed must be a JSON object");
  static const std::set<std::string> known{"m", "n", "B", "Lambda", "W", "Omega"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw Error(ErrorKind::Parse, "unknown key '" + key + "'");
  const std::size_t m = decode_count(j, "m");
  const std::size_t n = decode_count(j, "n");
  if (!j.contains("B") || !j.contains("Lambda")) throw Error(ErrorKind::Parse, "seed needs B and Lambda");
  const IntMatrix B = decode_matrix(j.at("B"), m, n, "B");
  const IntMatrix L = decode_matrix(j.at("Lambda"), m, m, "Lambda");
  SeedFile out{QuantumSeed(B, L), std::nullopt, std::nullopt};
  if (j.contains("W")) {
    out.W = decode_matrix(j.at("W"), m, m, "W");
    (void)out.triple();  // validates W
  }
  if (j.contains("Omega")) {
    out.Omega = decode_poisson(j.at("Omega"), m);
    if (!is_skew_symmetric(*out.Omega)) throw Error(ErrorKind::InvalidSeed, "Omega is not skew-symmetric");
  }
  return out;
}

inline Json encode_seed(const QuantumSeed& s, const std::optional<IntMatrix>& W = std::nullopt,
                        const std::optional<PoissonMatrix>& Omega = std::nullopt) {
  Json out;
  out["m"] = s.m();
  out["n"] = s.n();
  out["B"] = encode(s.B());
  out["Lambda"] = encode(s.Lambda());
  if (W) out["W"] = encode(*W);
  if (Omega) out["Omega"] = encode(*Omega);
  return out;
}

inline Json encode_seed(const CompatibleTriple& t) { return encode_seed(t.seed(), t.W()); }

inline Json encode_seed(const SeedFile& f) { return encode_seed(f.seed, f.W, f.Omega); }

inline Json parse(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

inline Json parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

// ---------------------------------------------------------------- reports

inline Json encode(const Witness& w) { return Json{{"condition", w.condition}, {"indices", encode(w.indices)}}; }

inline Json encode(const CompatReport& r) {
  Json out;
  out["pass"] = r.pass();
  out["depth_checked"] = r.depth_checked;
  out["visited"] = r.visited;
  out["class_exhausted"] = r.class_exhausted;
  out["c1"] = Json{{"pass", r.c1.pass}, {"M", encode(r.c1.M)}};
  Json cs = Json::array();
  for (const auto& c : r.c1_star.c) cs.push_back(encode(c));
  out["c1_star"] = Json{{"pass", r.c1_star.pass}, {"c", cs}, {"integral", r.c1_star.integral}};
  out["c2"] = Json{{"pass", r.c2}, {"witness", r.c2_witness ? encode(*r.c2_witness) : Json()}};
  out["c3"] = Json{{"pass", r.c3}, {"witness", r.c3_witness ? encode(*r.c3_witness) : Json()}};
  out["omega_integral"] = r.omega_integral;
  Json c4 = Json::array();
  for (const auto& c : r.c4_global.c) c4.push_back(encode(c));
  out["c4_global"] = Json{{"pass", r.c4_global.pass}, {"c", c4}};
  Json fails = Json::array();
  for (const auto& f : r.failures)
    fails.push_back(Json{{"sequence", encode(f.sequence)}, {"condition", f.condition}, {"indices", encode(f.indices)}});
  out["failures"] = fails;
  return out;
}

inline Json encode(const TrivialityVerdict& v) {
  Json out;
  out["trivial"] = v.trivial;
  Json blocks = Json::array();
  for (const auto& [idx, a] : v.blocks) blocks.push_back(Json{{"indices", encode(idx)}, {"a", encode(a)}});
  out["blocks"] = blocks;
  out["witness"] = encode(v.witness);
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

inline Json encode(const Candidate& c) {
  Json out;
  out["W"] = encode(c.W);
  out["c"] = encode(c.c);
  out["omega_integral"] = c.omega_integral;
  out["certified"] = c.certified;
  out["depth"] = c.depth;
  out["triviality"] = encode(c.triviality);
  return out;
}

inline Json encode(const SolveResult& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates) cands.push_back(encode(c));
  return Json{{"dimension", r.lattice.size()}, {"basis", cands}};
}

inline Json encode(const Decomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks) {
    Json bj{{"indices", encode(b.indices)}, {"mutable", encode(b.mutables)}, {"B", encode(b.B)}, {"Lambda", encode(b.Lambda)}};
    if (b.W) bj["W"] = encode(*b.W);
    blocks.push_back(std::move(bj));
  }
  Json out{{"decomposable", d.decomposable()}, {"blocks", blocks}};
  if (d.decomposable()) out["theta_pass"] = theta_check(d);
  return out;
}

inline Json encode(const ExtensionPlan& p) {
  Json out;
  out["cseq"] = encode(p.cseq);
  out["C"] = encode(p.C);
  out["row_selection"] = encode(p.row_selection);
  out["kernel_dimension"] = p.kernel_dimension;
  out["p_index"] = p.p_index;
  out["a"] = encode(p.a);
  out["P"] = encode(p.P);
  out["seed"] = encode_seed(QuantumSeed::trusted(p.B_ext, p.Lambda_ext), p.W_ext);
  out["report"] = encode(p.report);
  out["triviality"] = encode(p.triviality);
  return out;
}

// ---------------------------------------------------------------- output

namespace detail {

inline bool has_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array())
    for (const Json& x : j)
      if (has_object(x)) return true;
  return false;
}

inline void write(std::ostream& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out << ",\n";
      first = false;
      out << inner << Json(key).dump() << ": ";
      write(out, value, indent + 1);
    }
    out << "\n" << pad << "}";
  } else if (j.is_array() && !j.empty() && (has_object(j) || j.dump().size() > 100)) {
    out << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out << inner;
      write(out, j[i], indent + 1);
      out << (i + 1 < j.size() ? ",\n" : "\n");
    }
    out << pad << "]";
  } else {
    out << j.dump();
  }
}

}  // namespace detail

/// Deterministic layout: short scalar arrays stay on one line.
inline std::string pretty(const Json& j) {
  std::ostringstream out;
  detail::write(out, j, 0);
  out << "\n";
  return out.str();
}

}  // namespace qca::io
