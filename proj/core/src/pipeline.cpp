#include "k3ks/pipeline.hpp"

#include <gmp.h>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "k3ks/error.hpp"

namespace k3ks {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::malformed_input, what); }

Matrix<Integer> reference_matrix() { return SymCubicField::reference().matrix(); }

unsigned env_precision() {
  const char* v = std::getenv("K3KS_PRECISION");
  if (!v || !*v) return 128;
  char* end = nullptr;
  const long bits = std::strtol(v, &end, 10);
  if (*end != '\0' || bits < 32 || bits > 4096)
    malformed(std::string("K3KS_PRECISION must be an integer in [32, 4096], got '") + v + "'");
  return static_cast<unsigned>(bits);
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool geometric_pattern(const TranscendentalSpace& s) {
  const auto& p = s.patterns;
  return s.invariants.signature == Signature{2, 7} && s.chosen_embedding && p[0].positives == 1 &&
         p[1].positives == 1 && p[2].positives == 0;
}

std::array<FieldElt, 3> resolve_phi(const PipelineConfig& c, const SymCubicField& f) {
  switch (c.phi) {
    case PhiSelection::paper_computational:
      return {f.alpha(), f.element(-1, -1, 1), f.one()};
    case PhiSelection::paper_listed:
      return {f.element(10, -1, -1), f.element(2, -7, 2), f.element(-1, -1, 0)};
    case PhiSelection::searched:
      return search_prop33(f, c.search).f;
    case PhiSelection::explicit_coords: {
      std::array<FieldElt, 3> out;
      for (int k = 0; k < 3; ++k) out[k] = f.element(c.phi_coords[k][0], c.phi_coords[k][1], c.phi_coords[k][2]);
      return out;
    }
  }
  throw Error(ErrorCode::internal, "unknown phi selection");
}

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const std::exception&) {
    malformed(std::string("config key \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::string to_string(PhiSelection s) {
  switch (s) {
    case PhiSelection::paper_computational: return "paper_computational";
    case PhiSelection::paper_listed: return "paper_listed";
    case PhiSelection::searched: return "searched";
    case PhiSelection::explicit_coords: return "explicit";
  }
  return "?";
}

PhiSelection parse_phi_selection(const std::string& s) {
  if (s == "paper_computational" || s == "paper-computational") return PhiSelection::paper_computational;
  if (s == "paper_listed" || s == "paper-listed") return PhiSelection::paper_listed;
  if (s == "searched" || s == "search") return PhiSelection::searched;
  if (s == "explicit") return PhiSelection::explicit_coords;
  malformed("unknown phi selection '" + s + "'");
}

std::vector<WordPolicy> policies_for(const std::string& name) {
  if (name == "paper" || name == "restricted") return {WordPolicy::restricted_four_fold()};
  if (name == "closure") return {WordPolicy::closure()};
  if (name == "both") return {WordPolicy::restricted_four_fold(), WordPolicy::closure()};
  if (name == "all") return {WordPolicy::three_fold(), WordPolicy::restricted_four_fold(), WordPolicy::closure()};
  malformed("unknown word policy '" + name + "' (paper, closure, both, all)");
}

PipelineConfig default_config() {
  PipelineConfig c;
  c.a = reference_matrix();
  c.policies = policies_for(c.policy);
  c.precision = env_precision();
  return c;
}

PipelineConfig parse_config(const Json& j) {
  PipelineConfig c = default_config();
  if (j.is_null()) return c;
  if (!j.is_object()) malformed("config must be a JSON object");
  static const std::vector<std::string> known = {"A", "phi", "t", "prime", "policy", "convention",
                                                 "d", "precision", "small_instance", "threads", "out"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) malformed("unknown config key \"" + key + "\"");

  if (j.contains("A")) {
    c.a = integer_matrix_from_json(j["A"]);
    if (c.a.rows() != 3 || c.a.cols() != 3) malformed("A must be 3x3");
  }
  if (j.contains("phi")) {
    const Json& p = j["phi"];
    if (p.is_string()) {
      c.phi = parse_phi_selection(p.get<std::string>());
      if (c.phi == PhiSelection::explicit_coords) malformed("explicit phi needs coordinates");
    } else if (p.is_array()) {
      if (p.size() != 3) malformed("explicit phi needs three elements");
      c.phi = PhiSelection::explicit_coords;
      for (int k = 0; k < 3; ++k) {
        if (!p[k].is_array() || p[k].size() != 3) malformed("each phi element needs three coordinates over (I, A, A^2)");
        for (int i = 0; i < 3; ++i) c.phi_coords[k][i] = rational_from_json(p[k][i]);
      }
    } else if (p.is_object()) {
      c.phi = parse_phi_selection(get_as<std::string>(p.value("selection", Json("searched")), "phi.selection"));
      if (c.phi != PhiSelection::searched) malformed("phi objects configure the search only");
      if (p.contains("epsilon")) c.search.epsilon = rational_from_json(p["epsilon"]);
      if (p.contains("height")) c.search.height = get_as<int>(p["height"], "phi.height");
      if (p.contains("max_den")) c.search.max_den = get_as<int>(p["max_den"], "phi.max_den");
      if (c.search.epsilon <= 0 || c.search.height < 1 || c.search.max_den < 1)
        malformed("search needs epsilon > 0, height >= 1, max_den >= 1");
    } else {
      malformed("phi must be a selection name, a search object or three coordinate triples");
    }
  }
  if (j.contains("t")) {
    c.t = rational_from_json(j["t"]);
    if (*c.t <= 0) throw Error(ErrorCode::t_out_of_range, "t must be positive");
  }
  if (j.contains("prime")) {
    const Json& p = j["prime"];
    if (!p.is_number_integer()) malformed("prime must be an integer");
    const long long v = p.get<long long>();
    if (v < 2) throw Error(ErrorCode::invalid_prime, std::to_string(v) + " is not a prime below 2^31");
    PrimeField check(static_cast<std::uint64_t>(v));
    c.prime = check.modulus();
  }
  if (j.contains("policy")) {
    const Json& p = j["policy"];
    if (p.is_string()) {
      c.policy = p.get<std::string>();
      c.policies = policies_for(c.policy);
    } else if (p.is_object()) {
      const auto len = get_as<std::size_t>(p.value("max_length", Json(0)), "policy.max_length");
      if (len < 1) malformed("policy.max_length must be at least 1");
      std::vector<std::size_t> last;
      for (const auto& x : p.value("last_factors", Json::array())) {
        const auto k = get_as<std::size_t>(x, "policy.last_factors");
        if (k < 1 || k > 9) malformed("last_factors are generator numbers 1..9");
        last.push_back(k - 1);
      }
      c.policy = "custom";
      c.policies = {WordPolicy::up_to(len, last)};
    } else {
      malformed("policy must be a name or {max_length, last_factors}");
    }
  }
  if (j.contains("convention")) c.convention = parse_relation_convention(get_as<std::string>(j["convention"], "convention"));
  if (j.contains("d")) {
    c.d = get_as<long>(j["d"], "d");
    if (c.d < 1) throw Error(ErrorCode::invalid_lattice_parameter, "d must be at least 1");
  }
  if (j.contains("precision")) {
    const long bits = get_as<long>(j["precision"], "precision");
    if (bits < 32 || bits > 4096) malformed("precision must lie in [32, 4096]");
    c.precision = static_cast<unsigned>(bits);
  }
  if (j.contains("small_instance")) c.small_instance = get_as<bool>(j["small_instance"], "small_instance");
  if (j.contains("threads")) c.threads = get_as<unsigned>(j["threads"], "threads");
  if (j.contains("out")) c.out = get_as<std::string>(j["out"], "out");
  return c;
}

PipelineConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return default_config();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    malformed("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Json to_json(const PipelineConfig& c) {
  Json out{{"A", to_json(c.a)}, {"phi", to_string(c.phi)}};
  if (c.phi == PhiSelection::explicit_coords) {
    Json coords = Json::array();
    for (const auto& e : c.phi_coords) coords.push_back(Json::array({to_json(e[0]), to_json(e[1]), to_json(e[2])}));
    out["phi_coords"] = coords;
  }
  if (c.phi == PhiSelection::searched)
    out["search"] = Json{{"epsilon", to_json(c.search.epsilon)}, {"height", c.search.height}, {"max_den", c.search.max_den}};
  out["t"] = c.t ? to_json(*c.t) : Json(nullptr);
  out["prime"] = c.prime;
  out["policy"] = c.policy;
  Json pols = Json::array();
  for (const auto& p : c.policies) pols.push_back(p.name);
  out["policies"] = pols;
  out["convention"] = to_string(c.convention);
  out["d"] = c.d;
  out["precision"] = c.precision;
  out["small_instance"] = c.small_instance;
  return out;
}

std::string to_string(StageStatus s) {
  switch (s) {
    case StageStatus::verified: return "verified";
    case StageStatus::failed: return "failed";
    case StageStatus::skipped: return "skipped";
    case StageStatus::error: return "error";
  }
  return "?";
}

bool PipelineReport::all_verified() const { return first_failure() == nullptr; }

const StageResult* PipelineReport::first_failure() const {
  for (const auto& s : stages)
    if (s.status == StageStatus::failed || s.status == StageStatus::error) return &s;
  return nullptr;
}

const StageResult* PipelineReport::stage(const std::string& name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  PipelineReport report;
  report.config = config;
  bool halted = false;

  // Runs body unless an earlier stage errored; body fills the stage in place.
  auto run = [&](const std::string& name, const std::string& method, const std::function<void(StageResult&)>& body) {
    StageResult st;
    st.name = name;
    st.method = method;
    if (halted) {
      st.detail = "not reached";
      report.stages.push_back(std::move(st));
      return;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      st.status = StageStatus::verified;
      body(st);
    } catch (const Error& e) {
      st.status = StageStatus::error;
      st.error = e.code();
      st.detail = e.what();
      halted = true;
    } catch (const std::exception& e) {
      st.status = StageStatus::error;
      st.error = ErrorCode::internal;
      st.detail = e.what();
      halted = true;
    }
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.stages.push_back(std::move(st));
  };

  std::optional<SymCubicField> field;
  std::array<FieldElt, 3> phi;
  std::optional<TranscendentalSpace> space;
  bool geometric = false;

  run("field", "exact + interval", [&](StageResult& st) {
    field = SymCubicField::make(config.a);
    st.data = to_json(*field);
    const auto b = field->b_basis();
    st.data["b_basis"] = Json::array({b[0].to_string(), b[1].to_string(), b[2].to_string()});
    st.data["alpha_pattern"] = to_json(field->alpha().sign_pattern());
  });

  run("phi", "exact + interval", [&](StageResult& st) {
    phi = resolve_phi(config, *field);
    st.data["selection"] = to_string(config.phi);
    Json coords = Json::array(), text = Json::array(), patterns = Json::array();
    for (const auto& x : phi) {
      coords.push_back(to_json(x));
      text.push_back(x.to_string());
      patterns.push_back(to_json(x.sign_pattern()));
    }
    st.data["phi"] = coords;
    st.data["phi_text"] = text;
    st.data["patterns"] = patterns;
  });

  run("transcendental", "exact", [&](StageResult& st) {
    space = build_transcendental(*field, phi);
    st.data["signature"] = to_json(space->invariants.signature);
    st.data["invariants"] = to_json(space->invariants);
    st.data["signature_matches_patterns"] = space->signature_matches_patterns;
    st.data["chosen_embedding"] = space->chosen_embedding ? Json(*space->chosen_embedding) : Json(nullptr);
    geometric = geometric_pattern(*space);
    st.data["geometric"] = geometric;
    if (!space->signature_matches_patterns) {
      st.status = StageStatus::failed;
      st.detail = "signature of D differs from the sum of the phi sign patterns";
    } else if (!geometric) {
      const auto& s = space->invariants.signature;
      st.detail = "D has signature (" + std::to_string(s.positive) + "," + std::to_string(s.negative) +
                  "); the K3 stages need (2,7) with patterns (1,2),(1,2),(0,3)";
    }
  });

  auto geometric_stage = [&](const std::string& name, const std::string& method,
                             const std::function<void(StageResult&)>& body) {
    if (!halted && !geometric) {
      StageResult st;
      st.name = name;
      st.method = method;
      st.detail = "skipped: phi sign patterns do not give a K3 transcendental space";
      report.stages.push_back(std::move(st));
      return;
    }
    run(name, method, body);
  };

  std::optional<PeriodVector> period;
  geometric_stage("embedding", "exact", [&](StageResult& st) {
    const ComplementCertificate cert = embeds_in_k3(*space, config.d);
    st.data = to_json(cert);
    st.data["d"] = config.d;
    if (!cert.verified) {
      st.status = StageStatus::failed;
      st.detail = "complement does not reproduce the invariants of L_2d";
    }
  });
  geometric_stage("period", "interval", [&](StageResult& st) {
    const Rational t = config.t ? *config.t : default_period_parameter(*space);
    period = solve_period(*space, t, config.precision);
    st.data = to_json(*period);
    if (!period->residual_ok || !period->hermitian_contains_two_q2_t2 || !period->hermitian_positive) {
      st.status = StageStatus::failed;
      st.detail = "period residual or Hermitian norm check failed";
    }
  });
  geometric_stage("hodge", "exact + interval", [&](StageResult& st) {
    const HodgeIsometryReport r = hodge_vs_isometry(*space, std::nullopt, period);
    st.data = to_json(r);
    if (!r.established) {
      st.status = StageStatus::failed;
      st.detail = "CM witness did not separate Hodge endomorphisms from isometries";
    }
  });

  if (!config.policies.empty()) run("ranks", "mod-p", [&](StageResult& st) {
    KSRankConfig pc;
    pc.field = *field;
    pc.phi = phi;
    pc.prime = config.prime;
    pc.policies = config.policies;
    pc.convention = config.convention;
    pc.threads = config.threads;
    const KSRankReport r = run_prop51(pc);
    st.data = to_json(r);
    std::string joined;
    for (const auto& g : r.generators) joined += g + "\n";
    st.data["generator_checksum"] = "fnv1a64:" + fnv1a(joined);
    Json timing = Json::object();
    for (const auto& x : r.ranks) timing[x.policy] = x.seconds;
    st.data["_rank_seconds"] = timing;
    const bool reference_field = *field == SymCubicField::reference();
    if (reference_field && !(r.golden_ok && r.identities_ok)) {
      st.status = StageStatus::failed;
      st.detail = "generator golden check failed";
    }
  });

  if (config.small_instance) {
    run("ks", "exact", [&](StageResult& st) {
      const SmallKSInstance s = run_small_instance();
      st.data = to_json(s);
      bool classes = true;
      for (const auto& v : s.pullback.right_multiplied) classes = classes && v.proportional && v.same_class;
      const bool ok = s.cs.squares_to_minus_one && s.polarization.sign && s.embedding.equivariant &&
                      s.pullback.proportional && s.pullback.lambda_positive && s.pullback.weil_positive && classes;
      if (!ok) {
        st.status = StageStatus::failed;
        st.detail = "small Kuga-Satake instance failed a check";
      }
    });
  }
  return report;
}

std::string emit_report(const PipelineReport& report, ReportFormat format, bool with_timing) {
  const StageResult* fail = report.first_failure();
  if (format == ReportFormat::json) {
    Json out{{"tool", "k3ks"},
             {"version", "0.1.0"},
             {"gmp", gmp_version},
             {"hasse_convention", "product of Hilbert symbols over i<=j (i<j values listed alongside)"},
             {"config", to_json(report.config)}};
    Json stages = Json::array();
    Json timings = Json::object();
    for (const auto& s : report.stages) {
      Json data = s.data;
      if (data.is_object() && data.contains("_rank_seconds")) {
        timings[s.name + ".ranks"] = data["_rank_seconds"];
        data.erase("_rank_seconds");
      }
      Json st{{"name", s.name}, {"status", to_string(s.status)}, {"method", s.method}, {"detail", s.detail}};
      st["error"] = s.error ? Json(to_string(*s.error)) : Json(nullptr);
      st["data"] = data;
      stages.push_back(std::move(st));
      timings[s.name] = s.seconds;
    }
    out["stages"] = stages;
    out["verified"] = fail == nullptr;
    out["failed_stage"] = fail ? Json(fail->name) : Json(nullptr);
    if (with_timing) out["timings"] = timings;
    return out.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "k3ks pipeline report\n";
  os << "Hasse invariant convention: product over i<=j (the i<j values differ by (disc,-1))\n";
  os << "A = " << to_json(report.config.a).dump() << ", phi = " << to_string(report.config.phi)
     << ", p = " << report.config.prime << ", policy = " << report.config.policy
     << ", relations = " << to_string(report.config.convention) << "\n\n";
  for (const auto& s : report.stages) {
    os << "[" << to_string(s.status) << "] " << s.name << " (" << s.method << ")";
    if (with_timing && s.status != StageStatus::skipped) os << " " << std::fixed << s.seconds << " s";
    os << "\n";
    if (s.error) os << "    error " << to_string(*s.error) << ": " << s.detail << "\n";
    else if (!s.detail.empty()) os << "    " << s.detail << "\n";
    const Json& d = s.data;
    if (s.status == StageStatus::error || s.status == StageStatus::skipped || !d.is_object()) continue;
    if (s.name == "field") {
      os << "    charpoly " << d["charpoly"].get<std::string>() << ", discriminant "
         << d["discriminant"].get<std::string>() << "\n";
    } else if (s.name == "phi") {
      for (std::size_t k = 0; k < 3; ++k)
        os << "    phi" << k + 1 << " = " << d["phi_text"][k].get<std::string>() << "  pattern ("
           << d["patterns"][k]["positives"] << "," << d["patterns"][k]["negatives"] << ")\n";
    } else if (s.name == "transcendental") {
      os << "    signature(D) = (" << d["signature"][0] << "," << d["signature"][1] << ")\n";
    } else if (s.name == "embedding") {
      os << "    complement of dimension " << d["complement"]["dim"] << " into L_" << 2 * d["d"].get<long>()
         << ", verified " << d["verified"] << "\n";
    } else if (s.name == "period") {
      os << "    t = " << d["t"].get<std::string>() << ", |v^T D v| <= " << d["residual_bound"].get<std::string>()
         << "\n";
    } else if (s.name == "hodge") {
      os << "    witness " << d["witness"].get<std::string>() << ": cup preserving " << d["witness_cup_preserving"]
         << ", sweep failures " << d["sweep_failures"] << "\n";
    } else if (s.name == "ranks") {
      os << "    golden generators " << d["golden_ok"] << ", field identities " << d["identities_ok"] << "\n";
      for (const auto& r : d["ranks"])
        os << "    " << r["policy"].get<std::string>() << ": rank " << r["rank"] << " mod " << r["modulus"]
           << (r["words"].get<std::size_t>() ? " (" + std::to_string(r["words"].get<std::size_t>()) + " words)" : std::string()) << "\n";
      if (d.contains("alternate_ranks"))
        for (const auto& r : d["alternate_ranks"])
          os << "    [" << d["alternate_convention"].get<std::string>() << "] " << r["policy"].get<std::string>()
             << ": rank " << r["rank"] << "\n";
      os << "    ranks mod p are lower bounds for ranks over Q\n";
    } else if (s.name == "ks") {
      os << "    J^2 = -1 " << d["complex_structure"]["squares_to_minus_one"] << ", sign "
         << d["polarization"]["sign"] << ", equivariant " << d["embedding"]["equivariant"];
      if (d.contains("pullback")) os << ", lambda " << d["pullback"]["lambda"].get<std::string>();
      os << "\n";
    }
  }
  os << "\n" << (fail ? "FAILED at stage " + fail->name : std::string("all executed stages verified")) << "\n";
  return os.str();
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::precondition: return 3;
    case ErrorKind::verification: return 4;
    case ErrorKind::internal: return 5;
  }
  return 5;
}

int exit_code(const PipelineReport& report) {
  const StageResult* fail = report.first_failure();
  if (!fail) return 0;
  if (fail->status == StageStatus::failed) return 4;
  return exit_code(kind_of(fail->error.value_or(ErrorCode::internal)));
}

}  // namespace k3ks
