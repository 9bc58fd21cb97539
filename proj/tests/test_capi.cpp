#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "tik/tik.h"

namespace {

struct Session {
  tik_session* s;
  explicit Session(const char* species) : s(tik_session_create(species)) {}
  ~Session() { tik_session_destroy(s); }
  operator tik_session*() const { return s; }
};

struct Out {
  char* p = nullptr;
  ~Out() { tik_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

}  // namespace

TEST_CASE("session creation") {
  Session lz("complex-lorentz");
  CHECK(lz.s != nullptr);
  Session unit("unit");
  CHECK(unit.s != nullptr);
  Session dflt(nullptr);
  CHECK(dflt.s != nullptr);
  CHECK(tik_session_create("no-such-species") == nullptr);
  CHECK(std::string(tik_version()).size() > 0);
}

TEST_CASE("parse and eval through the C API") {
  Session s("complex-lorentz");
  CHECK(tik_env_load_json(s, "T", R"({"signature": ["up", "down"]})") == TIK_OK);

  Out dump;
  REQUIRE(tik_parse(s, "{T | 1 n}T", &dump.p) == TIK_OK);
  CHECK(dump.str() == "(eval 0 1 (tensor \"T\"))");

  Out tensor_json;
  REQUIRE(tik_eval(s, "{T | m n}T", &tensor_json.p) == TIK_OK);
  CHECK(tensor_json.str().find("\"signature\"") != std::string::npos);

  // eval output re-binds and evaluates identically
  CHECK(tik_env_load_json(s, "U", tensor_json.p) == TIK_OK);
  Out again;
  REQUIRE(tik_eval(s, "{U | m n}T", &again.p) == TIK_OK);
  CHECK(again.str() == tensor_json.str());
}

TEST_CASE("error categories surface as status codes") {
  Session s("complex-lorentz");
  Out out;
  CHECK(tik_parse(s, "{oops", &out.p) == TIK_ERR_PARSE);
  CHECK(std::string(tik_last_error(s)).size() > 0);
  CHECK(tik_parse(s, "{pauliContr | m}T", &out.p) == TIK_ERR_ELAB_ARITY);
  CHECK(tik_parse(s, "{eta | m m}T", &out.p) == TIK_ERR_ELAB_DUALITY);
  CHECK(tik_parse(s, "{pauliContr | m m m}T", &out.p) == TIK_ERR_ELAB_MULTIPLICITY);
  CHECK(tik_parse(s, "{unknownName | m}T", &out.p) == TIK_ERR_ENV_MISSING);
  CHECK(tik_env_load_file(s, nullptr, "/nonexistent/file.json") == TIK_ERR_ENV_MISSING);
  CHECK(std::string(tik_status_category(TIK_ERR_ELAB_DUALITY)) == "elaborate-duality");
  CHECK(std::string(tik_status_category(TIK_OK)) == "ok");
}

TEST_CASE("prove-eq: the Pauli identity and a failing variant") {
  Session s("complex-lorentz");
  Out report;
  CHECK(tik_prove_eq(s,
                     "{pauliCo | n a b @ pauliContr | n a' b' = 2 *. epsL | a a' @ epsR | b b'}T",
                     1e-10, &report.p) == TIK_OK);
  CHECK(report.str().find("equal") != std::string::npos);

  Out report2;
  CHECK(tik_prove_eq(s,
                     "{pauliCo | n a b @ pauliContr | n a' b' = 3 *. epsL | a a' @ epsR | b b'}T",
                     1e-10, &report2.p) == TIK_ERR_NOT_EQUAL);
  CHECK(report2.str().find("not-equal") != std::string::npos);
}

TEST_CASE("axioms through the C API") {
  for (const char* species : {"complex-lorentz", "unit"}) {
    Session s(species);
    Out report;
    CHECK(tik_check_axioms(s, 1e-12, 0, &report.p) == TIK_OK);
    CHECK(report.str().find("all axioms pass") != std::string::npos);
    Out js;
    CHECK(tik_check_axioms(s, 1e-12, 1, &js.p) == TIK_OK);
    CHECK(js.str().find("\"all_pass\":true") != std::string::npos);
  }
}

TEST_CASE("simplify with trace") {
  Session s("complex-lorentz");
  CHECK(tik_env_load_json(s, "T", R"({"signature": ["up", "down"]})") == TIK_OK);
  Out dump, trace;
  REQUIRE(tik_simplify(s, "{- - T | m n}T", 1, &dump.p, &trace.p) == TIK_OK);
  CHECK(dump.str() == "(tensor \"T\")");
  CHECK(trace.str().find("neg_neg") != std::string::npos);
}

TEST_CASE("constants dump writes JSON files") {
  Session s("complex-lorentz");
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "tik_capi_constants";
  std::filesystem::remove_all(dir);
  REQUIRE(tik_constants_dump(s, dir.string().c_str()) == TIK_OK);
  CHECK(std::filesystem::exists(dir / "eta.json"));
  CHECK(std::filesystem::exists(dir / "pauliContr.json"));
  CHECK(std::filesystem::exists(dir / "epsLP.json"));
  CHECK(std::filesystem::exists(dir / "delta_up.json"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("null arguments are rejected, not crashed on") {
  Session s("unit");
  CHECK(tik_parse(s, nullptr, nullptr) == TIK_ERR_BAD_ARGUMENT);
  CHECK(tik_parse(nullptr, "{x | }T", nullptr) == TIK_ERR_BAD_ARGUMENT);
  CHECK(tik_env_load_file(s, nullptr, nullptr) == TIK_ERR_BAD_ARGUMENT);
  tik_string_free(nullptr);
}
