#include <doctest.h>

#include "k3ks/error.hpp"
#include "k3ks/pipeline.hpp"

using namespace k3ks;

TEST_CASE("rational and matrix JSON round trips") {
  const Rational q(-7, 3);
  CHECK(rational_from_json(to_json(q)) == q);
  const Matrix<Rational> m{{1, Rational(1, 2)}, {Rational(1, 2), -4}};
  CHECK(matrix_from_json(to_json(m)) == m);
  const QForm f(m);
  CHECK(qform_from_json(to_json(f)) == f);
  CHECK_THROWS_AS(rational_from_json(Json::array()), Error);
}

TEST_CASE("field JSON round trips") {
  const auto f = SymCubicField::reference();
  const auto g = field_from_json(to_json(f));
  CHECK(g == f);
  const auto x = f.element(1, Rational(-2, 5), 3);
  CHECK(field_elt_from_json(to_json(x), f) == x);
}

TEST_CASE("Clifford JSON round trips") {
  const auto alg = QClifford::make(QForm::diagonal({1, -2, 3}).gram());
  const QElt x = alg->scalar(Rational(1, 3)) + alg->generator(0) * alg->generator(2);
  const Json j = to_json(x);
  CHECK(clifford_from_json(j, alg) == x);
  CHECK(j.dump() == R"([[[],"1/3"],[[1,3],"1"]])");
}

TEST_CASE("config parsing") {
  const auto d = default_config();
  CHECK(d.prime == 101);
  CHECK(d.phi == PhiSelection::paper_computational);
  const auto e = parse_config(Json::object());
  CHECK(to_json(e).dump() == to_json(d).dump());
  auto code_of = [](const Json& j) {
    try {
      parse_config(j);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::internal;
  };
  CHECK(code_of(Json{{"prime", 4}}) == ErrorCode::invalid_prime);
  CHECK(code_of(Json{{"phi", "nonsense"}}) == ErrorCode::malformed_input);
  CHECK(code_of(Json{{"t", "0"}}) == ErrorCode::t_out_of_range);
  CHECK(code_of(Json{{"prime", "x"}}) == ErrorCode::malformed_input);
  CHECK(policies_for("all").size() == 3);
  CHECK(policies_for("both").size() == 2);
  CHECK(exit_code(ErrorKind::config) == 2);
  CHECK(exit_code(ErrorKind::precondition) == 3);
  CHECK(exit_code(ErrorKind::verification) == 4);
  CHECK(exit_code(ErrorKind::internal) == 5);
}

TEST_CASE("searched pipeline verifies every stage") {
  PipelineConfig c = default_config();
  c.phi = PhiSelection::searched;
  c.d = 2;
  c.policies = {};
  c.small_instance = false;
  const auto r = run_pipeline(c);
  for (const auto& s : r.stages) INFO(s.name << ": " << to_string(s.status) << " " << s.detail);
  for (const char* name : {"field", "phi", "transcendental", "embedding", "period", "hodge"}) {
    REQUIRE(r.stage(name) != nullptr);
    CHECK(r.stage(name)->status == StageStatus::verified);
  }
  CHECK(exit_code(r) == 0);
  // Reports without timing are byte-identical.
  const auto again = run_pipeline(c);
  CHECK(emit_report(r, ReportFormat::json, false) == emit_report(again, ReportFormat::json, false));
  const Json parsed = Json::parse(emit_report(r, ReportFormat::json, false));
  CHECK(parsed.contains("stages"));
}

TEST_CASE("pipeline stops at a stage error") {
  PipelineConfig c = default_config();
  c.phi = PhiSelection::searched;
  c.t = Rational(5);
  c.policies = {};
  c.small_instance = false;
  const auto r = run_pipeline(c);
  const auto* bad = r.first_failure();
  REQUIRE(bad != nullptr);
  CHECK(bad->name == "period");
  CHECK(bad->error == ErrorCode::t_out_of_range);
  CHECK(exit_code(r) == 3);
}

TEST_CASE("K3 stages are skipped for an unsuitable phi") {
  PipelineConfig c = default_config();
  c.policies = {};
  c.small_instance = false;
  const auto r = run_pipeline(c);
  REQUIRE(r.stage("period") != nullptr);
  CHECK(r.stage("period")->status == StageStatus::skipped);
  CHECK(r.stage("transcendental")->status == StageStatus::verified);
}
