// k3ks command-line front end. Each subcommand prints JSON (or text for
// `pipeline --format text`) on stdout and maps errors to exit codes
// 2 config, 3 precondition, 4 verification, 5 internal.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "k3ks/error.hpp"
#include "k3ks/pipeline.hpp"
#include "k3ks/serialize.hpp"

namespace {

using namespace k3ks;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

Json parse_json_arg(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::malformed_input, std::string(what) + " is not valid JSON: " + e.what());
  }
}

// "--diag 1,-2,3", "--gram [[..]]", or a lattice name L0 / L2d:<d>.
QForm form_from_args(const std::string& diag, const std::string& gram, const std::string& lattice) {
  const int given = !diag.empty() + !gram.empty() + !lattice.empty();
  if (given != 1) throw Error(ErrorCode::malformed_input, "give exactly one of --diag, --gram, --lattice");
  if (!diag.empty()) {
    std::vector<Rational> entries;
    for (const auto& x : split(diag, ',')) entries.push_back(parse_rational(x));
    return QForm::diagonal(entries);
  }
  if (!gram.empty()) return QForm(matrix_from_json(parse_json_arg(gram, "--gram")));
  if (lattice == "L0") return gram_L0();
  if (lattice == "E8") return gram_E8();
  if (lattice == "U") return gram_U();
  if (lattice.rfind("L2d:", 0) == 0) return gram_L2d(std::stol(lattice.substr(4)));
  throw Error(ErrorCode::malformed_input, "unknown lattice '" + lattice + "' (L0, L2d:<d>, E8, U)");
}

SymCubicField field_from_arg(const std::string& a) {
  if (a.empty()) return SymCubicField::reference();
  return SymCubicField::make(integer_matrix_from_json(parse_json_arg(a, "--A")));
}

FieldElt element_from_arg(const SymCubicField& f, const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw Error(ErrorCode::malformed_input, "field element needs c0,c1,c2 over (I, A, A^2)");
  return f.element(parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2]));
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact quadratic-form, cubic-field, K3 lattice and Kuga-Satake computations"};
  app.require_subcommand(1);

  // qform
  auto* qf = app.add_subcommand("qform", "Invariants of a rational quadratic form, or a complement embedding it");
  std::string q_diag, q_gram, q_lattice, into_diag, into_gram, into_lattice, q_conv = "leq";
  qf->add_option("--diag", q_diag, "Diagonal entries, comma separated");
  qf->add_option("--gram", q_gram, "Gram matrix as JSON rows");
  qf->add_option("--lattice", q_lattice, "Named lattice: L0, L2d:<d>, E8, U");
  qf->add_option("--into-diag", into_diag, "Target form (diagonal) for a complement");
  qf->add_option("--into-gram", into_gram, "Target form (Gram JSON) for a complement");
  qf->add_option("--into-lattice", into_lattice, "Target lattice for a complement");
  qf->add_option("--convention", q_conv, "Hasse pairing: leq (i<=j) or lt (i<j)")->check(CLI::IsMember({"leq", "lt"}));

  // field
  auto* fd = app.add_subcommand("field", "Totally real cubic field data, element patterns and the triple search");
  std::string f_a;
  std::vector<std::string> f_elements;
  bool f_search = false;
  std::string f_eps = "1/2";
  int f_height = 30, f_den = 64, f_sweep = -1;
  unsigned f_bits = 64;
  fd->add_option("--A", f_a, "Symmetric integer 3x3 matrix as JSON (default: the reference matrix)");
  fd->add_option("--element", f_elements, "Element c0,c1,c2 over (I, A, A^2); repeatable");
  fd->add_option("--bits", f_bits, "Root enclosure width 2^-bits")->check(CLI::Range(8u, 4096u));
  fd->add_flag("--search", f_search, "Search for a triple (f1, f2, f3) with the required sign patterns");
  fd->add_option("--epsilon", f_eps, "Search tolerance");
  fd->add_option("--height", f_height, "Search height bound");
  fd->add_option("--max-den", f_den, "Search denominator bound");
  fd->add_option("--sweep", f_sweep, "Rational-square sweep up to this height");

  // k3
  auto* k3 = app.add_subcommand("k3", "Transcendental space, embedding into L_2d, period and CM report");
  std::string k_a, k_phi = "searched", k_t;
  long k_d = 1;
  unsigned k_prec = 0;
  k3->add_option("--A", k_a, "Field matrix as JSON");
  k3->add_option("--phi", k_phi, "paper_computational | paper_listed | searched | c0,c1,c2;c0,c1,c2;c0,c1,c2");
  k3->add_option("--t", k_t, "Period parameter (x2 = i t)");
  k3->add_option("--d", k_d, "Embedding target L_2d")->check(CLI::PositiveNumber);
  k3->add_option("--precision", k_prec, "Interval precision in bits (default from K3KS_PRECISION or 128)");

  // clifford
  auto* cl = app.add_subcommand("clifford", "Products and ranks in a Clifford algebra");
  std::string c_diag, c_gram, c_policy = "paper", c_gens;
  std::vector<std::string> c_mul;
  std::uint64_t c_prime = 101;
  cl->add_option("--diag", c_diag, "Diagonal form");
  cl->add_option("--gram", c_gram, "Gram matrix as JSON (relation e_i e_j + e_j e_i = 2 B_ij)");
  cl->add_option("--mul", c_mul, "Elements like \"e1e2 + 2*e3\"; prints their product");
  cl->add_option("--generators", c_gens, "Semicolon separated elements whose word span rank is computed");
  cl->add_option("--policy", c_policy, "paper | closure | both | all | upto:<L>");
  cl->add_option("--prime", c_prime, "Modulus for ranks");

  // ks
  auto* ks = app.add_subcommand("ks", "Kuga-Satake generators, ranks and the small polarized instance");
  std::string s_policy = "all", s_conv = "quadratic-coefficients", s_sel = "same-sign";
  std::uint64_t s_prime = 101;
  bool s_small_only = false, s_no_alt = false;
  unsigned s_threads = 0;
  ks->add_option("--policy", s_policy, "paper | closure | both | all");
  ks->add_option("--prime", s_prime, "Modulus for ranks");
  ks->add_option("--convention", s_conv, "Relations from D: quadratic-coefficients or polar");
  ks->add_flag("--no-alternate", s_no_alt, "Skip the other relation convention");
  ks->add_flag("--small-only", s_small_only, "Only the 4-generator polarized instance");
  ks->add_option("--pair", s_sel, "Polarization pair: same-sign or negative")->check(CLI::IsMember({"same-sign", "negative"}));
  ks->add_option("--threads", s_threads, "Worker threads for word products (0 = all cores)");

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "End-to-end run with a staged, machine-readable report");
  std::string p_config, p_policy, p_out, p_format = "json";
  std::optional<std::uint64_t> p_prime;
  bool p_no_timing = false;
  pl->add_option("--config", p_config, "JSON config file");
  pl->add_option("--policy", p_policy, "paper | closure | both | all")->check(CLI::IsMember({"paper", "restricted", "closure", "both", "all"}));
  pl->add_option("--prime", p_prime, "Modulus for ranks");
  pl->add_option("--out", p_out, "Write the report here instead of stdout");
  pl->add_option("--format", p_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  pl->add_flag("--no-timing", p_no_timing, "Leave the timing block out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*qf) {
      const QForm q = form_from_args(q_diag, q_gram, q_lattice);
      const bool embed = !into_diag.empty() || !into_gram.empty() || !into_lattice.empty();
      if (embed) {
        print(to_json(complement_for_embedding(q, form_from_args(into_diag, into_gram, into_lattice))));
      } else {
        const auto conv = q_conv == "lt" ? HasseConvention::lt : HasseConvention::leq;
        print(Json{{"form", to_json(q)}, {"invariants", to_json(form_invariants(q, conv))}});
      }
      return 0;
    }

    if (*fd) {
      const SymCubicField f = field_from_arg(f_a);
      Json out = to_json(f);
      Json roots = Json::array();
      for (const auto& r : f.roots(f_bits)) roots.push_back(to_json(r, static_cast<int>(f_bits / 3 + 5)));
      out["roots"] = roots;
      Json b = Json::array();
      for (const auto& x : f.b_basis()) b.push_back(x.to_string());
      out["b_basis"] = b;
      Json elems = Json::array();
      for (const auto& s : f_elements) {
        const FieldElt x = element_from_arg(f, s);
        Json conj = Json::array();
        for (const auto& c : x.conjugates(f_bits)) conj.push_back(to_json(c, 20));
        elems.push_back(Json{{"element", x.to_string()},
                             {"pattern", to_json(x.sign_pattern())},
                             {"conjugates", conj},
                             {"square_is_rational", (x * x).is_rational()}});
      }
      if (!elems.empty()) out["elements"] = elems;
      if (f_search) {
        SearchOptions opt;
        opt.epsilon = parse_rational(f_eps);
        opt.height = f_height;
        opt.max_den = f_den;
        const SignPatternTriple t = search_prop33(f, opt);
        Json tr = Json::array();
        for (int k = 0; k < 3; ++k)
          tr.push_back(Json{{"element", t.f[k].to_string()}, {"coords", to_json(t.f[k])}, {"pattern", to_json(t.patterns[k])}});
        out["triple"] = Json{{"f", tr}, {"embedding", t.embedding}, {"height_used", t.height_used}};
      }
      if (f_sweep >= 0) out["sweep"] = Json{{"height", f_sweep}, {"failures", rational_square_sweep(f, f_sweep)}};
      print(out);
      return 0;
    }

    if (*k3) {
      Json cfg = Json::object();
      if (!k_a.empty()) cfg["A"] = parse_json_arg(k_a, "--A");
      if (k_phi.find(',') != std::string::npos) {
        Json coords = Json::array();
        for (const auto& part : split(k_phi, ';')) coords.push_back(split(part, ','));
        cfg["phi"] = coords;
      } else {
        cfg["phi"] = k_phi;
      }
      if (!k_t.empty()) cfg["t"] = k_t;
      cfg["d"] = k_d;
      if (k_prec) cfg["precision"] = k_prec;
      cfg["small_instance"] = false;
      PipelineConfig c = parse_config(cfg);
      c.policies.clear();
      const PipelineReport rep = run_pipeline(c);
      std::cout << emit_report(rep, ReportFormat::json, false);
      return exit_code(rep);
    }

    if (*cl) {
      Matrix<Rational> g;
      if (!c_diag.empty()) g = form_from_args(c_diag, "", "").gram();
      else if (!c_gram.empty()) g = matrix_from_json(parse_json_arg(c_gram, "--gram"));
      else throw Error(ErrorCode::malformed_input, "give --diag or --gram");
      const auto alg = QClifford::make(g);
      Json out{{"n", alg->n()}, {"dim", alg->dim()}};
      if (!c_mul.empty()) {
        QElt prod = alg->scalar(Rational(1));
        Json factors = Json::array();
        for (const auto& s : c_mul) {
          const QElt x = parse_clifford(s, alg);
          factors.push_back(x.to_string());
          prod = prod * x;
        }
        out["factors"] = factors;
        out["product"] = prod.to_string();
        out["product_terms"] = to_json(prod);
      }
      if (!c_gens.empty()) {
        PrimeField{c_prime};  // invalid_prime before any word is built
        std::vector<QElt> gens;
        for (const auto& s : split(c_gens, ';')) gens.push_back(parse_clifford(s, alg));
        std::vector<WordPolicy> pols;
        if (c_policy.rfind("upto:", 0) == 0) pols = {WordPolicy::up_to(std::stoul(c_policy.substr(5)))};
        else pols = policies_for(c_policy);
        Json ranks = Json::array();
        for (const auto& p : pols) ranks.push_back(to_json(rank_report(gens, p, c_prime), true));
        out["ranks"] = ranks;
      }
      print(out);
      return 0;
    }

    if (*ks) {
      const PairSelection sel = s_sel == "negative" ? PairSelection::negative_squares : PairSelection::same_sign_as_f;
      Json out = Json::object();
      if (!s_small_only) {
        KSRankConfig pc;
        pc.policies = policies_for(s_policy);
        pc.prime = PrimeField(s_prime).modulus();
        pc.convention = parse_relation_convention(s_conv);
        pc.include_alternate = !s_no_alt;
        pc.threads = s_threads;
        out["ranks"] = to_json(run_prop51(pc), true);
      }
      out["small_instance"] = to_json(run_small_instance(sel));
      print(out);
      return 0;
    }

    if (*pl) {
      PipelineConfig c = p_config.empty() ? default_config() : parse_config_file(p_config);
      if (!p_policy.empty()) {
        c.policy = p_policy;
        c.policies = policies_for(p_policy);
      }
      if (p_prime) c.prime = PrimeField(*p_prime).modulus();
      if (!p_out.empty()) c.out = p_out;
      const PipelineReport rep = run_pipeline(c);
      const std::string text =
          emit_report(rep, p_format == "text" ? ReportFormat::text : ReportFormat::json, !p_no_timing);
      if (c.out) {
        std::ofstream f(*c.out);
        if (!f || !(f << text)) throw Error(ErrorCode::io_failure, "cannot write report to '" + *c.out + "'");
      } else {
        std::cout << text;
      }
      if (const StageResult* fail = rep.first_failure())
        std::cerr << "stage '" << fail->name << "' " << to_string(fail->status)
                  << (fail->error ? std::string(" [") + to_string(*fail->error) + "]" : std::string()) << ": "
                  << fail->detail << "\n";
      return exit_code(rep);
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
