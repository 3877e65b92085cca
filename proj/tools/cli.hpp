#pragma once

// latnorm command line: check, certify, verify, decompose, cover, gen,
// reproduce-paper.  Exit 0 = holds, 1 = fails (witness printed), 2 = error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "latnorm/latnorm.hpp"

namespace latnorm::cli {

inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kError = 2;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Worker count from LATNORM_WORKERS; default 1.
inline unsigned workers_from_env() {
  const char* s = std::getenv("LATNORM_WORKERS");
  if (!s || !*s) return 1;
  auto v = detail::parse_int(detail::trim(s));
  if (!v || *v < 1 || *v > 256) throw UsageError("LATNORM_WORKERS must be an integer in 1..256");
  return unsigned(*v);
}

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  unsigned workers = 1;
  bool json = false;
  bool timing = false;
};

inline std::string read_source(Context& cx, const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << cx.in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline std::vector<PolytopeDocument> read_documents(Context& cx, const std::string& path) {
  return parse_documents(read_source(cx, path), path.empty() || path == "-" ? "<stdin>" : path);
}

inline std::string label_of(const PolytopeDocument& d, const std::string& path, std::size_t i) {
  if (d.label) return *d.label;
  return (path.empty() || path == "-" ? std::string("<stdin>") : path) + "#" + std::to_string(i + 1);
}

inline Point parse_point(const std::string& s) {
  std::vector<std::string_view> parts;
  std::string_view v = s;
  std::size_t start = 0;
  while (true) {
    auto c = v.find(',', start);
    parts.push_back(detail::trim(v.substr(start, c == std::string_view::npos ? v.npos : c - start)));
    if (c == std::string_view::npos) break;
    start = c + 1;
  }
  if (parts.empty() || parts.size() > 3) throw UsageError("--point expects x,y[,z]");
  Point p(int(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto x = detail::parse_int(parts[i]);
    if (!x) throw UsageError("--point: not an integer: '" + std::string(parts[i]) + "'");
    p[int(i)] = *x;
  }
  return p;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// check

struct CheckFlags {
  bool normal = false, very_ample = false, smooth = false, simple = false;
  bool any() const { return normal || very_ample || smooth || simple; }
};

inline std::optional<std::string> simple_failure(const Polytope& P) {
  for (std::size_t i = 0; i < P.vertices().size(); ++i) {
    auto n = P.neighbors(i).size();
    if (int(n) != P.dim())
      return "vertex " + P.vertices()[i].str() + " has " + std::to_string(n) + " edges";
  }
  return std::nullopt;
}

inline std::optional<std::string> smooth_failure(const Polytope& P) {
  if (auto s = simple_failure(P)) return s;
  for (std::size_t i = 0; i < P.vertices().size(); ++i) {
    const auto c = vertex_cone(P, i);
    Wide d = P.dim() == 3 ? det3(c.rays[0], c.rays[1], c.rays[2]) : det2(c.rays[0], c.rays[1]);
    if (d != 1 && d != -1)
      return "vertex " + c.apex.str() + " has edge directions of determinant " + std::to_string(Int(d < 0 ? -d : d));
  }
  return std::nullopt;
}

inline std::optional<std::string> very_ample_failure(const Polytope& P) {
  for (std::size_t v = 0; v < P.vertices().size(); ++v) {
    const auto c = vertex_cone(P, v);
    for (const auto& h : hilbert_basis(c).elements)
      if (!P.contains(c.apex + h))
        return "vertex " + c.apex.str() + ": Hilbert basis element " + h.str() + " is not in P - v";
  }
  return std::nullopt;
}

inline Report check_one(const Polytope& P, std::string label, CheckFlags f, unsigned workers, bool timing) {
  if (!P.full_dimensional())
    throw GeometryError("'" + label + "' is not full-dimensional (dim " + std::to_string(P.dim()) + ")");
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.label = std::move(label);
  std::vector<std::string> witnesses;
  auto note = [&](std::optional<bool>& flag, std::optional<std::string> w, const char* name) {
    flag = !w;
    if (w) witnesses.push_back(std::string(name) + ": " + *w);
  };
  if (f.simple) note(r.simple, simple_failure(P), "simple");
  if (f.smooth) note(r.smooth, smooth_failure(P), "smooth");
  if (f.very_ample) note(r.very_ample, very_ample_failure(P), "very_ample");
  if (f.normal) {
    auto n = is_normal(P, false, workers);
    r.normal = n.normal;
    if (!n.normal)
      witnesses.push_back("normal: " + n.witness->point.str() + " in " + std::to_string(n.witness->k) +
                          "P is not a sum of " + std::to_string(n.witness->k) + " lattice points of P");
  }
  if (!witnesses.empty()) {
    std::string w;
    for (const auto& s : witnesses) w += (w.empty() ? "" : "; ") + s;
    r.witness = w;
  }
  if (timing) r.seconds = seconds_since(t0);
  return r;
}

inline int run_check(Context& cx, const std::string& path, CheckFlags f) {
  if (!f.any()) f = {true, true, true, true};
  auto docs = read_documents(cx, path);
  std::vector<Polytope> polys;
  for (const auto& d : docs) polys.push_back(d.polytope());
  std::vector<std::optional<Report>> reports(docs.size());
  std::vector<std::string> errors(docs.size());
  auto work = [&](std::size_t i, unsigned inner) {
    try {
      reports[i] = check_one(polys[i], label_of(docs[i], path, i), f, inner, cx.timing);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  if (docs.size() > 1 && cx.workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(cx.workers, docs.size()); ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < docs.size();) work(i, 1);
      });
  } else {
    for (std::size_t i = 0; i < docs.size(); ++i) work(i, cx.workers);
  }
  for (const auto& e : errors)
    if (!e.empty()) throw GeometryError(e);
  bool holds = true;
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    holds = holds && r->holds();
    if (cx.json)
      arr.push_back(r->json());
    else
      cx.out << r->text();
  }
  if (cx.json) cx.out << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
  return holds ? kHolds : kFails;
}

// ---------------------------------------------------------------------------
// certify / verify

enum class CertifyMode { fibered, prism, qa };

inline int emit_certificate(Context& cx, const NormalityCertificate& cert, bool verify,
                            std::chrono::steady_clock::time_point t0) {
  std::optional<CertificateCheck> check;
  if (verify) {
    check = verify_certificate(cert, {true, true, cx.workers});
    if (!check->valid) {
      cx.out << "certificate: invalid\nreason: " << check->failure << "\n";
      return kFails;
    }
  }
  if (cx.json) {
    auto j = to_json(cert);
    if (check) j["verified_points"] = check->points_checked;
    if (cx.timing) j["seconds"] = seconds_since(t0);
    cx.out << j.dump(2) << "\n";
  } else {
    if (check) cx.out << "# verified: " << check->points_checked << " points of 2P split inside pieces\n";
    if (cx.timing) cx.out << "# seconds: " << seconds_since(t0) << "\n";
    cx.out << write_certificate(cert);
  }
  return kHolds;
}

inline int run_certify(Context& cx, const std::string& path, CertifyMode mode, Int floor_level, bool verify) {
  auto t0 = std::chrono::steady_clock::now();
  auto docs = read_documents(cx, path);
  NormalityCertificate cert;
  try {
    if (mode == CertifyMode::fibered) {
      if (docs.size() != 1) throw UsageError("certify --fibered expects one polytope");
      auto P = docs[0].polytope();
      if (!P.full_dimensional() || P.ambient_dim() != 3) throw UsageError("certify --fibered expects a 3-polytope");
      auto F = detect_fibered(P);
      if (!F) {
        cx.out << "certificate: none\nreason: polytope is not fibered\n";
        return kFails;
      }
      cert = to_original(*F, certify_fibered(*F));
    } else {
      if (docs.size() != 2) throw UsageError("certify --prism/--qa expects two documents: A then I");
      auto A = docs[0].polytope(), I = docs[1].polytope();
      cert = mode == CertifyMode::prism ? certify_prism(A, I) : certify_QA(A, I, floor_level);
    }
  } catch (const GeometryError& e) {
    cx.out << "certificate: none\nreason: " << e.what() << "\n";
    return kFails;
  }
  return emit_certificate(cx, cert, verify, t0);
}

inline int run_verify(Context& cx, const std::string& path, bool oracle) {
  auto cert = parse_certificate(read_source(cx, path), path.empty() || path == "-" ? "<stdin>" : path);
  auto r = verify_certificate(cert, {oracle, true, cx.workers});
  if (cx.json) {
    nlohmann::json j;
    j["valid"] = r.valid;
    if (!r.valid) j["reason"] = r.failure;
    j["pieces"] = cert.pieces.size();
    j["points_checked"] = r.points_checked;
    cx.out << j.dump(2) << "\n";
  } else {
    cx.out << "certificate: " << (r.valid ? "valid" : "invalid") << "\npieces: " << cert.pieces.size()
           << "\npoints_checked: " << r.points_checked << "\n";
    if (!r.valid) cx.out << "reason: " << r.failure << "\n";
  }
  return r.valid ? kHolds : kFails;
}

// ---------------------------------------------------------------------------
// decompose

inline int run_decompose(Context& cx, const std::string& path, const std::string& point, Int k, bool fibered) {
  auto docs = read_documents(cx, path);
  if (docs.size() != 1) throw UsageError("decompose expects one polytope");
  auto P = docs[0].polytope();
  auto m = parse_point(point);
  if (m.dim() != P.ambient_dim()) throw UsageError("--point has the wrong dimension");
  if (k < 1) throw UsageError("--k must be >= 1");
  if (!P.contains_scaled(m, k)) throw UsageError(m.str() + " is not in " + std::to_string(k) + "P");
  std::optional<std::vector<Point>> parts;
  std::optional<std::string> route;
  if (fibered) {
    if (k != 2) throw UsageError("decompose --fibered requires --k 2");
    auto F = detect_fibered(P);
    if (!F) throw UsageError("decompose --fibered: polytope is not fibered");
    const auto& T = F->to_standard;
    auto s = fibered_pair_decompose(*F, T.linear().apply(m) + 2 * T.offset());
    auto back = T.inverse();
    parts = std::vector<Point>{back(s.pair.left), back(s.pair.right)};
    route = std::string(to_string(s.route));
  } else {
    parts = decompose_point(P, m, k);
  }
  if (cx.json) {
    nlohmann::json j;
    j["point"] = to_json(m);
    j["k"] = k;
    j["found"] = bool(parts);
    if (parts) {
      j["summands"] = nlohmann::json::array();
      for (const auto& u : *parts) j["summands"].push_back(to_json(u));
    }
    if (route) j["route"] = *route;
    cx.out << j.dump(2) << "\n";
  } else if (parts) {
    cx.out << m.str() << " =";
    for (std::size_t i = 0; i < parts->size(); ++i) cx.out << (i ? " + " : " ") << (*parts)[i].str();
    cx.out << "\n";
    if (route) cx.out << "route: " << *route << "\n";
  } else {
    cx.out << "witness: " << m.str() << " in " << k << "P is not a sum of " << k << " lattice points of P\n";
  }
  return parts ? kHolds : kFails;
}

// ---------------------------------------------------------------------------
// cover

inline int run_cover(Context& cx, const std::string& path) {
  auto docs = read_documents(cx, path);
  if (docs.size() != 1) throw UsageError("cover expects one polygon");
  auto A = docs[0].polytope();
  if (A.dim() != 2) throw UsageError("cover expects a 2-dimensional polygon");
  ParallelogramCover cov;
  try {
    cov = parallelogram_cover(A);
  } catch (const GeometryError& e) {
    cx.out << "cover: none\nreason: " << e.what() << "\n";
    return kFails;
  }
  if (auto gap = half_integer_cover_gap(A, cov.pieces)) {
    cx.out << "cover: invalid\nreason: " << gap->str() << "/2 is not covered\n";
    return kFails;
  }
  if (cx.json) {
    nlohmann::json j;
    j["base"] = to_json(PolytopeDocument::from(A));
    j["pieces"] = nlohmann::json::array();
    for (const auto& q : cov.pieces) j["pieces"].push_back(to_json(PolytopeDocument::from(q)));
    cx.out << j.dump(2) << "\n";
  } else {
    cx.out << "# " << cov.pieces.size() << " lattice parallelograms\n";
    for (std::size_t i = 0; i < cov.pieces.size(); ++i)
      cx.out << (i ? "\n" : "") << write_document(PolytopeDocument::from(cov.pieces[i], "piece " + std::to_string(i + 1)));
  }
  return kHolds;
}

// ---------------------------------------------------------------------------
// gen

inline int emit_document(Context& cx, const PolytopeDocument& d) {
  if (cx.json)
    cx.out << to_json(d).dump(2) << "\n";
  else
    cx.out << write_document(d);
  return kHolds;
}

// ---------------------------------------------------------------------------
// reproduce-paper

inline int run_reproduce(Context& cx) {
  auto t0 = std::chrono::steady_clock::now();
  bool match = true;
  auto rows = nlohmann::json::array();
  std::ostringstream table;
  table << "q  Q_q very ample  P_q very ample  P_q normal  witness\n";
  for (Int q = 1; q <= 5; ++q) {
    const auto Q = gen_reeve(q), P = gen_bruns_gubeladze(q);
    const bool qva = is_very_ample(Q), pva = is_very_ample(P);
    const auto n = is_normal(P, false, cx.workers);
    match = match && qva == (q < 2) && pva && n.normal == (q < 4);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::string w = n.normal ? "-" : n.witness->point.str() + " in 2P_" + std::to_string(q);
    table << q << "  " << std::left << std::setw(16) << yn(qva) << std::setw(16) << yn(pva) << std::setw(12)
          << yn(n.normal) << w << "\n";
    nlohmann::json r;
    r["q"] = q;
    r["Q_very_ample"] = qva;
    r["P_very_ample"] = pva;
    r["P_normal"] = n.normal;
    if (!n.normal) r["witness"] = to_json(n.witness->point);
    rows.push_back(r);
  }
  if (cx.json) {
    nlohmann::json j;
    j["rows"] = rows;
    j["thresholds_match"] = match;
    if (cx.timing) j["seconds"] = seconds_since(t0);
    cx.out << j.dump(2) << "\n";
  } else {
    cx.out << table.str();
    cx.out << "Q_q not very ample for q >= 2: " << (match ? "reproduced" : "NOT reproduced") << "\n";
    cx.out << "P_q very ample, not normal for q >= 4: " << (match ? "reproduced" : "NOT reproduced") << "\n";
    if (cx.timing) cx.out << "seconds: " << seconds_since(t0) << "\n";
  }
  return match ? kHolds : kFails;
}

// ---------------------------------------------------------------------------
// entry point

/// Runs the command line `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context cx{in, out, err};
  CLI::App app{"latnorm: normality of lattice polytopes and toric fibered 3-folds"};
  app.name("latnorm");
  app.require_subcommand(1);
  app.add_flag("--json", cx.json, "Write JSON instead of text");
  app.add_flag("--timing", cx.timing, "Include wall-clock timing");

  std::string path;
  auto input = [&](CLI::App* sub) { sub->add_option("file", path, "Input file (default: standard input)"); };

  CheckFlags cf;
  auto* check = app.add_subcommand("check", "Classify polytopes: simple, smooth, very ample, normal");
  check->add_flag("--normal", cf.normal);
  check->add_flag("--very-ample", cf.very_ample);
  check->add_flag("--smooth", cf.smooth);
  check->add_flag("--simple", cf.simple);
  input(check);

  bool fib = false, prism = false, qa = false, no_verify = false;
  Int floor_level = 0;
  auto* certify = app.add_subcommand("certify", "Build a normality certificate");
  auto* g = certify->add_option_group("mode");
  g->add_flag("--fibered", fib, "Fibered 3-polytope");
  g->add_flag("--prism", prism, "A + I from two documents");
  g->add_flag("--qa", qa, "Upright prism Q(A) from two documents");
  g->require_option(1);
  certify->add_option("--floor", floor_level, "Floor level for --qa");
  certify->add_flag("--no-verify", no_verify, "Skip certificate verification");
  input(certify);

  bool no_oracle = false;
  auto* verify = app.add_subcommand("verify", "Verify a certificate file");
  verify->add_flag("--no-oracle", no_oracle, "Skip the per-piece normality oracle");
  input(verify);

  std::string point;
  Int k = 2;
  bool dec_fibered = false;
  auto* decompose = app.add_subcommand("decompose", "Write a point of kP as a sum of k lattice points of P");
  decompose->add_option("--point", point, "x,y,z")->required();
  decompose->add_option("--k", k, "Dilation factor")->capture_default_str();
  decompose->add_flag("--fibered", dec_fibered, "Use the fibered construction (k = 2)");
  input(decompose);

  auto* cover = app.add_subcommand("cover", "Cover a smooth polygon by lattice parallelograms");
  input(cover);

  Int q = 1, bound = 8;
  std::uint64_t seed = 1;
  std::string floor_kind = "flat";
  bool isolated = false;
  auto* gen = app.add_subcommand("gen", "Generate example polytopes");
  gen->require_subcommand(1);
  auto* reeve = gen->add_subcommand("reeve", "Reeve simplex Q_q");
  reeve->add_option("--q", q)->required();
  auto* bg = gen->add_subcommand("bg", "Q_q + [0, e3]");
  bg->add_option("--q", q)->required();
  auto* rpoly = gen->add_subcommand("random-polygon", "Random smooth polygon");
  rpoly->add_option("--seed", seed)->capture_default_str();
  rpoly->add_option("--bound", bound)->capture_default_str();
  auto* rfib = gen->add_subcommand("random-fibered", "Random smooth fibered 3-polytope");
  rfib->add_option("--seed", seed)->capture_default_str();
  rfib->add_option("--bound", bound)->capture_default_str();
  rfib->add_option("--floor", floor_kind)->check(CLI::IsMember({"flat", "general"}))->capture_default_str();
  rfib->add_flag("--isolated-roof", isolated, "Force a basic roof triangle meeting no side wall");

  auto* repro = app.add_subcommand("reproduce-paper", "Very ampleness and normality of Q_q and P_q for q = 1..5");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kError;
  }

  try {
    cx.workers = workers_from_env();
    if (check->parsed()) return run_check(cx, path, cf);
    if (certify->parsed())
      return run_certify(cx, path, fib ? CertifyMode::fibered : prism ? CertifyMode::prism : CertifyMode::qa,
                         floor_level, !no_verify);
    if (verify->parsed()) return run_verify(cx, path, !no_oracle);
    if (decompose->parsed()) return run_decompose(cx, path, point, k, dec_fibered);
    if (cover->parsed()) return run_cover(cx, path);
    if (reeve->parsed()) return emit_document(cx, PolytopeDocument::from(gen_reeve(q), "Q_" + std::to_string(q)));
    if (bg->parsed()) return emit_document(cx, PolytopeDocument::from(gen_bruns_gubeladze(q), "P_" + std::to_string(q)));
    if (rpoly->parsed())
      return emit_document(cx, PolytopeDocument::from(gen_random_smooth_polygon(seed, bound),
                                                      "random-polygon seed=" + std::to_string(seed) +
                                                          " bound=" + std::to_string(bound)));
    if (rfib->parsed()) {
      FiberedShape shape;
      shape.floor = floor_kind == "general" ? FiberedShape::Floor::general : FiberedShape::Floor::flat;
      shape.isolated_basic_roof = isolated;
      auto F = gen_random_fibered(seed, bound, shape);
      return emit_document(cx, PolytopeDocument::from(F.original, "random-fibered seed=" + std::to_string(seed) +
                                                                      " bound=" + std::to_string(bound) + " floor=" +
                                                                      floor_kind + (isolated ? " isolated-roof" : "")));
    }
    if (repro->parsed()) return run_reproduce(cx);
  } catch (const std::exception& e) {
    err << "latnorm: error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace latnorm::cli
