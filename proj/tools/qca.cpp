// Command-line front end for the qca library. Every command writes one JSON
// document to stdout.
//
// Exit codes: 0 success, 1 a mathematical check failed, 2 malformed input,
// 3 usage error (including bad directions and size bounds).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qca/io.hpp"
#include "qca/qca.hpp"

namespace {

using qca::Error;
using qca::ErrorKind;
using qca::io::Json;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kMalformed = 2;
constexpr int kUsage = 3;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidSeed:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotSkewSymmetrizable:
    case ErrorKind::Overflow:
      return kMalformed;
    case ErrorKind::DirectionOutOfRange:
    case ErrorKind::SizeBound:
    case ErrorKind::InvalidArgument:
      return kUsage;
    default:
      return kFail;
  }
}

Json read_json(const std::string& path) {
  if (path == "-") return qca::io::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  return qca::io::parse(in);
}

qca::io::SeedFile read_seed(const std::string& path) { return qca::io::decode_seed(read_json(path)); }

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 0) throw Error(ErrorKind::InvalidArgument, std::string("bad ") + what + " entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::size_t default_depth() {
  if (const char* env = std::getenv("QCA_DEPTH")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "QCA_DEPTH must be a non-negative integer");
    }
  }
  return 4;
}

void emit(const Json& j) { std::cout << qca::io::pretty(j); }

// Ω of a seed file: explicit, else derived from W, else zero.
qca::PoissonMatrix omega_of(const qca::io::SeedFile& f) {
  if (f.Omega) return *f.Omega;
  if (f.W) return qca::omega_from_W(*f.W, f.seed.Lambda());
  return qca::PoissonMatrix(f.seed.m(), f.seed.m());
}

// W of a seed file: explicit, else derived from Ω.
qca::IntMatrix W_of(const qca::io::SeedFile& f) {
  if (f.W) return *f.W;
  if (f.Omega) return qca::W_from_omega(*f.Omega, f.seed.Lambda());
  throw Error(ErrorKind::InvalidSeed, "seed needs W or Omega");
}

int cmd_mutate(const std::string& path, const std::string& sequence) {
  const auto f = read_seed(path);
  const auto seq = parse_list(sequence, "sequence");
  qca::QuantumSeed seed = f.seed;
  std::optional<qca::IntMatrix> W = f.W;
  std::optional<qca::PoissonMatrix> Omega = f.Omega;
  for (std::size_t k : seq) {
    qca::require_direction(seed.ex(), k);
    if (W) W = qca::mutate_skew_form(*W, seed.ex(), k);
    if (Omega) Omega = qca::mutate_Omega_direct(*Omega, seed, k);
    seed = qca::mutate(seed, k);
  }
  emit(qca::io::encode_seed(seed, W, Omega));
  return kOk;
}

int cmd_check(const std::string& path, std::size_t depth) {
  const auto f = read_seed(path);
  const qca::CompatibleTriple t(f.seed, W_of(f));
  const auto report = qca::verify_triple_bounded(t, depth);
  emit(Json{{"report", qca::io::encode(report)}, {"triviality", qca::io::encode(qca::classify_triviality(t.Lambda(), t.W()))}});
  return report.pass() ? kOk : kFail;
}

int cmd_solve(const std::string& path, std::size_t depth) {
  const auto f = read_seed(path);
  emit(qca::io::encode(qca::solve_second_deformations(f.seed, depth)));
  return kOk;
}

int cmd_decompose(const std::string& path) {
  const auto f = read_seed(path);
  const auto dec = qca::decompose(f.seed.ex(), f.seed.Lambda(), f.W);
  Json out = qca::io::encode(dec);
  if (f.W) out["triviality"] = qca::io::encode(qca::classify_triviality(f.seed.Lambda(), *f.W));
  emit(out);
  return kOk;
}

int cmd_extend(const std::string& path, const std::string& cseq, const std::string& rows, std::size_t depth,
               bool almost, std::size_t p_index, long long a) {
  const auto f = read_seed(path);
  const auto seq = parse_list(cseq, "cseq");
  const auto sel = parse_list(rows, "rows");
  const qca::ExtensionPlan plan = almost ? qca::almost_principal_builder(f.seed, sel, depth, p_index, a)
                                         : qca::build_extension(f.seed, seq, sel, depth, p_index, a);
  emit(qca::io::encode(plan));
  return plan.report.pass() && !plan.triviality.trivial ? kOk : kFail;
}

int cmd_oracle(const std::string& path, std::size_t k) {
  const auto f = read_seed(path);
  qca::require_direction(f.seed.ex(), k);
  const auto Omega = omega_of(f);
  const qca::TorusContext ctx(f.seed.Lambda());
  const auto direct = qca::mutate_Omega_direct(Omega, f.seed, k);
  bool all_equal = true;
  Json entries = Json::array();
  for (std::size_t j = 0; j < f.seed.m(); ++j) {
    if (j == k) continue;
    const auto res = qca::verify_log_canonical_step(ctx, Omega, f.seed, k, j);
    const bool equal = res.ok && res.omega == direct(k, j);
    all_equal = all_equal && equal;
    Json e{{"j", j}, {"direct", qca::io::encode(direct(k, j))}};
    e["log_canonical"] = res.ok;
    e["leibniz"] = res.ok ? qca::io::encode(res.omega) : Json();
    if (!res.ok) e["residual"] = qca::io::encode(res.residual);
    e["equal"] = equal;
    entries.push_back(std::move(e));
  }
  emit(Json{{"direction", k}, {"all_equal", all_equal}, {"entries", entries}});
  return all_equal ? kOk : kFail;
}

int cmd_fixture(const std::string& name, long long w1, long long w2, long long a, long long b) {
  if (name == "sl2") {
    emit(qca::io::encode_seed(qca::fixtures::sl2(w1, w2)));
  } else if (name == "ex5x2") {
    emit(qca::io::encode_seed(qca::fixtures::ex5x2(a, b)));
  } else if (name == "rank2free") {
    emit(qca::io::encode_seed(qca::fixtures::rank2free()));
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown fixture '" + name + "' (sl2, ex5x2, rank2free)");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with quantum cluster seeds and their second quantization"};
  app.require_subcommand(1);

  std::string seed_path;
  std::string sequence;
  std::string cseq;
  std::string rows;
  std::optional<std::size_t> depth;
  std::size_t direction = 0;
  std::size_t p_index = 0;
  long long a = 1;
  bool almost = false;
  std::string fixture_name;
  long long w1 = 3, w2 = 1, fa = 1, fb = 1;

  auto* mutate = app.add_subcommand("mutate", "Apply a mutation sequence to a seed");
  mutate->add_option("--seed", seed_path, "Seed JSON file, '-' for stdin")->required();
  mutate->add_option("--sequence", sequence, "Comma-separated 0-based directions")->required();

  auto* check = app.add_subcommand("check", "Certify a compatible triple up to a mutation depth");
  check->add_option("--seed", seed_path, "Seed JSON file with W or Omega")->required();
  check->add_option("--depth", depth, "Exploration depth (default 4 or QCA_DEPTH)");

  auto* solve = app.add_subcommand("solve-w", "Enumerate second deformation matrices");
  solve->add_option("--seed", seed_path, "Seed JSON file")->required();
  solve->add_option("--depth", depth, "Certification depth");

  auto* dec = app.add_subcommand("decompose", "Split a seed into indecomposable blocks");
  dec->add_option("--seed", seed_path, "Seed JSON file")->required();

  auto* ext = app.add_subcommand("extend", "Build a cluster extension with a non-trivial W");
  ext->add_option("--seed", seed_path, "Seed JSON file")->required();
  ext->add_option("--cseq", cseq, "Mutation sequence selecting the C-matrix (default empty)");
  ext->add_option("--rows", rows, "Comma-separated C rows forming C'")->required();
  ext->add_option("--depth", depth, "Certification depth");
  ext->add_flag("--almost", almost, "Almost principal coefficients (B; I; J)");
  ext->add_option("--p-index", p_index, "Kernel basis vector used for P");
  ext->add_option("--a", a, "Scalar a in W = a*Lambda + P");

  auto* oracle = app.add_subcommand("oracle", "Compare direct Omega mutation with the Leibniz bracket");
  oracle->add_option("--seed", seed_path, "Seed JSON file")->required();
  oracle->add_option("--direction", direction, "Mutation direction")->required();

  auto* fixture = app.add_subcommand("fixture", "Print a built-in seed");
  fixture->add_option("name", fixture_name, "sl2, ex5x2 or rank2free")->required();
  fixture->add_option("--w1", w1, "sl2 parameter w1");
  fixture->add_option("--w2", w2, "sl2 parameter w2");
  fixture->add_option("--a", fa, "ex5x2 parameter a");
  fixture->add_option("--b", fb, "ex5x2 parameter b");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const auto d = [&] { return depth ? *depth : default_depth(); };
    if (*mutate) return cmd_mutate(seed_path, sequence);
    if (*check) return cmd_check(seed_path, d());
    if (*solve) return cmd_solve(seed_path, d());
    if (*dec) return cmd_decompose(seed_path);
    if (*ext) return cmd_extend(seed_path, cseq, rows, d(), almost, p_index, a);
    if (*oracle) return cmd_oracle(seed_path, direction);
    if (*fixture) return cmd_fixture(fixture_name, w1, w2, fa, fb);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
  return kUsage;
}
