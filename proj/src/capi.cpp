#include "tik/tik.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "error.hpp"
#include "session.hpp"

using tik::ErrorCategory;

struct tik_session {
  tik::Session impl;
  std::string last_error;
  explicit tik_session(const std::string& species) : impl(species) {}
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tik_status status_of(ErrorCategory cat) {
  switch (cat) {
    case ErrorCategory::Internal: return TIK_ERR_INTERNAL;
    case ErrorCategory::Parse: return TIK_ERR_PARSE;
    case ErrorCategory::ElabArity: return TIK_ERR_ELAB_ARITY;
    case ErrorCategory::ElabDuality: return TIK_ERR_ELAB_DUALITY;
    case ErrorCategory::ElabMultiplicity: return TIK_ERR_ELAB_MULTIPLICITY;
    case ErrorCategory::EnvMissing: return TIK_ERR_ENV_MISSING;
    case ErrorCategory::NotEqual: return TIK_ERR_NOT_EQUAL;
    case ErrorCategory::NoMatch: return TIK_ERR_BAD_ARGUMENT;
    case ErrorCategory::BadArgument: return TIK_ERR_BAD_ARGUMENT;
    case ErrorCategory::Io: return TIK_ERR_IO;
  }
  return TIK_ERR_INTERNAL;
}

// Runs body, routing exceptions into the session's last_error.
template <typename F>
tik_status guarded(tik_session* s, F&& body) {
  if (!s) return TIK_ERR_BAD_ARGUMENT;
  s->last_error.clear();
  try {
    return body();
  } catch (const tik::Error& e) {
    s->last_error = e.what();
    return status_of(e.category());
  } catch (const std::exception& e) {
    s->last_error = e.what();
    return TIK_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

tik_session* tik_session_create(const char* species_name) {
  try {
    return new tik_session(species_name ? species_name : "complex-lorentz");
  } catch (...) {
    return nullptr;
  }
}

void tik_session_destroy(tik_session* s) { delete s; }

const char* tik_status_category(tik_status st) {
  switch (st) {
    case TIK_OK: return "ok";
    case TIK_ERR_INTERNAL: return "internal";
    case TIK_ERR_PARSE: return "parse";
    case TIK_ERR_ELAB_ARITY: return "elaborate-arity";
    case TIK_ERR_ELAB_DUALITY: return "elaborate-duality";
    case TIK_ERR_ELAB_MULTIPLICITY: return "elaborate-multiplicity";
    case TIK_ERR_ENV_MISSING: return "env-missing";
    case TIK_ERR_NOT_EQUAL: return "not-equal";
    case TIK_ERR_AXIOMS_FAIL: return "axioms-fail";
    case TIK_ERR_BAD_ARGUMENT: return "bad-argument";
    case TIK_ERR_IO: return "io";
  }
  return "internal";
}

const char* tik_last_error(const tik_session* s) {
  return s ? s->last_error.c_str() : "null session";
}

tik_status tik_env_load_file(tik_session* s, const char* name, const char* path) {
  return guarded(s, [&]() -> tik_status {
    if (!path) {
      s->last_error = "null path";
      return TIK_ERR_BAD_ARGUMENT;
    }
    s->impl.load_env_file(name ? name : "", path);
    return TIK_OK;
  });
}

tik_status tik_env_load_json(tik_session* s, const char* name, const char* tensor_json) {
  return guarded(s, [&]() -> tik_status {
    if (!name || !tensor_json) {
      s->last_error = "null argument";
      return TIK_ERR_BAD_ARGUMENT;
    }
    s->impl.load_env_json(name, tensor_json);
    return TIK_OK;
  });
}

tik_status tik_parse(tik_session* s, const char* expr, char** out_dump) {
  return guarded(s, [&]() -> tik_status {
    if (!expr || !out_dump) {
      s->last_error = "null argument";
      return TIK_ERR_BAD_ARGUMENT;
    }
    *out_dump = dup_string(s->impl.cmd_parse(expr));
    return TIK_OK;
  });
}

tik_status tik_eval(tik_session* s, const char* expr, char** out_tensor_json) {
  return guarded(s, [&]() -> tik_status {
    if (!expr || !out_tensor_json) {
      s->last_error = "null argument";
      return TIK_ERR_BAD_ARGUMENT;
    }
    *out_tensor_json = dup_string(s->impl.cmd_eval(expr));
    return TIK_OK;
  });
}

tik_status tik_simplify(tik_session* s, const char* expr, int with_trace, char** out_dump,
                        char** out_trace) {
  return guarded(s, [&]() -> tik_status {
    if (!expr || !out_dump) {
      s->last_error = "null argument";
      return TIK_ERR_BAD_ARGUMENT;
    }
    std::string trace;
    const std::string dump =
        s->impl.cmd_simplify(expr, with_trace && out_trace ? &trace : nullptr);
    *out_dump = dup_string(dump);
    if (with_trace && out_trace) *out_trace = dup_string(trace);
    return TIK_OK;
  });
}

tik_status tik_prove_eq(tik_session* s, const char* expr, double tol, char** out_report) {
  return guarded(s, [&]() -> tik_status {
    if (!expr) {
      s->last_error = "null argument";
      return TIK_ERR_BAD_ARGUMENT;
    }
    const tik::EqualityResult res = s->impl.cmd_prove_eq(expr, tol > 0 ? tol : 1e-10);
    std::string report = std::string(tik::verdict_name(res.verdict)) + ": " + res.detail;
    if (out_report) *out_report = dup_string(report);
    if (res.equal()) return TIK_OK;
    s->last_error = report;
    return TIK_ERR_NOT_EQUAL;
  });
}

tik_status tik_check_axioms(tik_session* s, double tol, int as_json, char** out_report) {
  return guarded(s, [&]() -> tik_status {
    const tik::AxiomReport report = s->impl.cmd_axioms(tol > 0 ? tol : 1e-12);
    const std::string text =
        as_json ? s->impl.axioms_json(report) : s->impl.axioms_text(report);
    if (out_report) *out_report = dup_string(text);
    if (report.all_pass()) return TIK_OK;
    s->last_error = "species axioms failed";
    return TIK_ERR_AXIOMS_FAIL;
  });
}

tik_status tik_constants_dump(tik_session* s, const char* dir) {
  return guarded(s, [&]() -> tik_status {
    if (!dir) {
      s->last_error = "null directory";
      return TIK_ERR_BAD_ARGUMENT;
    }
    s->impl.cmd_constants_dump(dir);
    return TIK_OK;
  });
}

void tik_string_free(char* s) { std::free(s); }

const char* tik_version(void) { return "0.1.0"; }

}  // extern "C"
