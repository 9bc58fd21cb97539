// tik command line: parse, evaluate, simplify and compare tensor
// index-notation expressions, audit species axioms, dump constants.
// Talks to the core exclusively through the C API in tik/tik.h; exit
// codes equal the tik_status values.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tik/tik.h"

namespace {

struct SessionDeleter {
  void operator()(tik_session* s) const { tik_session_destroy(s); }
};
using SessionPtr = std::unique_ptr<tik_session, SessionDeleter>;

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { tik_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

int report_failure(tik_status st, const tik_session* session, bool as_json) {
  const std::string message = tik_last_error(session);
  if (as_json)
    std::printf("{\"category\": \"%s\", \"message\": \"%s\"}\n", tik_status_category(st),
                json_escape(message).c_str());
  else
    std::fprintf(stderr, "error (%s): %s\n", tik_status_category(st), message.c_str());
  return static_cast<int>(st);
}

SessionPtr open_session(const std::string& species, const std::vector<std::string>& env_files,
                        tik_status& st) {
  SessionPtr session(tik_session_create(species.c_str()));
  if (!session) {
    std::fprintf(stderr, "error (bad-argument): unknown species '%s'\n", species.c_str());
    st = TIK_ERR_BAD_ARGUMENT;
    return nullptr;
  }
  for (const std::string& f : env_files) {
    st = tik_env_load_file(session.get(), nullptr, f.c_str());
    if (st != TIK_OK) return session;
  }
  st = TIK_OK;
  return session;
}

int run_selftest(const std::string& species) {
  SessionPtr session(tik_session_create(species.c_str()));
  if (!session) return TIK_ERR_BAD_ARGUMENT;
  int failures = 0;
  auto check = [&](const char* what, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what);
    failures += !ok;
  };
  OwnedString report;
  check("species axioms at 1e-12",
        tik_check_axioms(session.get(), 1e-12, 0, &report.p) == TIK_OK);
  if (species == "complex-lorentz") {
    OwnedString verdict;
    check("pauliCo contracted with pauliContr equals 2 epsL x epsR",
          tik_prove_eq(session.get(),
                       "{pauliCo | n a b @ pauliContr | n a' b' = 2 *. epsL | a a' @ epsR | b "
                       "b'}T",
                       1e-10, &verdict.p) == TIK_OK);
    OwnedString dump;
    check("parse of a contraction",
          tik_parse(session.get(), "{eta | m n @ eta' | n s}T", &dump.p) == TIK_OK &&
              dump.str() == "(contr 1 1 (prod (tensor \"eta\") (tensor \"eta'\")))");
  }
  std::printf("%s\n", failures ? "selftest FAILED" : "selftest passed");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tensor index notation kit"};
  app.require_subcommand(1);

  std::string species = "complex-lorentz";
  std::vector<std::string> env_files;
  double tol = -1.0;
  bool as_json = false;
  bool with_trace = false;
  app.add_option("--species", species, "tensor species (complex-lorentz | unit)");
  app.add_option("--env", env_files, "tensor JSON file (repeatable); binding name = file stem")
      ->expected(1)
      ->allow_extra_args(false);
  app.add_option("--tol", tol, "tolerance (default 1e-10; axioms 1e-12)");
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_flag("--trace", with_trace, "print rewrite steps (simplify)");

  app.fallthrough();

  std::string expr;
  std::string out_dir;

  CLI::App* cmd_parse = app.add_subcommand("parse", "elaborate and dump the tensor tree");
  cmd_parse->add_option("expr", expr, "index-notation expression")->required();
  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate to a tensor (JSON)");
  cmd_eval->add_option("expr", expr, "index-notation expression")->required();
  CLI::App* cmd_simplify = app.add_subcommand("simplify", "rewrite to normal form");
  cmd_simplify->add_option("expr", expr, "index-notation expression")->required();
  CLI::App* cmd_prove = app.add_subcommand("prove-eq", "check an equality expression");
  cmd_prove->add_option("expr", expr, "expression containing '='")->required();
  CLI::App* cmd_axioms = app.add_subcommand("axioms", "verify the species axioms");
  CLI::App* cmd_constants = app.add_subcommand("constants", "species constants");
  CLI::App* cmd_dump = cmd_constants->add_subcommand("dump", "write constants as JSON files");
  cmd_dump->add_option("dir", out_dir, "output directory")->required();
  cmd_constants->require_subcommand(1);
  CLI::App* cmd_selftest = app.add_subcommand("selftest", "run built-in smoke checks");

  CLI11_PARSE(app, argc, argv);

  if (cmd_selftest->parsed()) return run_selftest(species);

  tik_status st = TIK_OK;
  SessionPtr session = open_session(species, env_files, st);
  if (!session) return static_cast<int>(st);
  if (st != TIK_OK) return report_failure(st, session.get(), as_json);

  if (cmd_parse->parsed()) {
    OwnedString dump;
    st = tik_parse(session.get(), expr.c_str(), &dump.p);
    if (st != TIK_OK) return report_failure(st, session.get(), as_json);
    if (as_json)
      std::printf("{\"tree\": \"%s\"}\n", json_escape(dump.str()).c_str());
    else
      std::printf("%s\n", dump.p);
    return 0;
  }
  if (cmd_eval->parsed()) {
    OwnedString out;
    st = tik_eval(session.get(), expr.c_str(), &out.p);
    if (st != TIK_OK) return report_failure(st, session.get(), as_json);
    std::printf("%s\n", out.p);
    return 0;
  }
  if (cmd_simplify->parsed()) {
    OwnedString dump, trace;
    st = tik_simplify(session.get(), expr.c_str(), with_trace ? 1 : 0, &dump.p, &trace.p);
    if (st != TIK_OK) return report_failure(st, session.get(), as_json);
    if (as_json)
      std::printf("{\"tree\": \"%s\"}\n", json_escape(dump.str()).c_str());
    else
      std::printf("%s\n", dump.p);
    if (with_trace && trace.p && trace.p[0]) std::printf("%s", trace.p);
    return 0;
  }
  if (cmd_prove->parsed()) {
    OwnedString report;
    st = tik_prove_eq(session.get(), expr.c_str(), tol, &report.p);
    if (st != TIK_OK && st != TIK_ERR_NOT_EQUAL)
      return report_failure(st, session.get(), as_json);
    if (as_json)
      std::printf("{\"equal\": %s, \"verdict\": \"%s\"}\n", st == TIK_OK ? "true" : "false",
                  json_escape(report.str()).c_str());
    else
      std::printf("%s\n", report.p);
    return static_cast<int>(st);
  }
  if (cmd_axioms->parsed()) {
    OwnedString report;
    st = tik_check_axioms(session.get(), tol > 0 ? tol : 1e-12, as_json ? 1 : 0, &report.p);
    if (st != TIK_OK && st != TIK_ERR_AXIOMS_FAIL)
      return report_failure(st, session.get(), as_json);
    std::printf("%s\n", report.p);
    return st == TIK_OK ? 0 : 1;
  }
  if (cmd_dump->parsed()) {
    st = tik_constants_dump(session.get(), out_dir.c_str());
    if (st != TIK_OK) return report_failure(st, session.get(), as_json);
    std::printf("wrote constants to %s\n", out_dir.c_str());
    return 0;
  }
  return 0;
}
