#include "gpil.h"

#include <cstring>
#include <string>

#include "session.hpp"

using namespace gpil;

struct gpil_workspace {
  Workspace ws;
  std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) return nullptr;
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::vector<std::string> split_names(const char* csv) {
  std::vector<std::string> out;
  if (!csv) return out;
  std::string cur;
  for (const char* p = csv;; p++) {
    if (*p == ',' || *p == '\0') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      if (*p == '\0') break;
    } else if (!std::isspace(static_cast<unsigned char>(*p))) {
      cur.push_back(*p);
    }
  }
  return out;
}

gpil_status finish(gpil_workspace* ws, const OpResult& r, char** out, char** warnings) {
  if (r.status == StatusError) {
    ws->last_error = r.output;
    if (out) *out = nullptr;
    if (warnings) *warnings = nullptr;
    return GPIL_ERROR;
  }
  if (out) *out = dup_string(r.output);
  if (warnings) *warnings = dup_string(r.warnings);
  return static_cast<gpil_status>(r.status);
}

}  // namespace

extern "C" {

const char* gpil_version(void) { return "gpil 0.1.0"; }

gpil_workspace* gpil_workspace_new(void) { return new gpil_workspace(); }

void gpil_workspace_free(gpil_workspace* ws) { delete ws; }

const char* gpil_last_error(const gpil_workspace* ws) {
  return ws ? ws->last_error.c_str() : "";
}

void gpil_string_free(char* s) { std::free(s); }

gpil_status gpil_set_option_int(gpil_workspace* ws, const char* key, int64_t value) {
  if (!ws || !key) return GPIL_ERROR;
  std::string k = key;
  try {
    if (k == "max-nodes") ws->ws.opts.max_nodes = static_cast<int>(value);
    else if (k == "max-parallel") ws->ws.opts.max_parallel = static_cast<int>(value);
    else if (k == "max-steps") ws->ws.opts.max_steps = value;
    else if (k == "int-window") ws->ws.opts.int_window = value;
    else if (k == "seed") ws->ws.opts.seed = static_cast<uint64_t>(value);
    else if (k == "jobs") ws->ws.opts.jobs = static_cast<int>(value);
    else if (k == "machine") ws->ws.opts.machine = value != 0;
    else if (k == "growth-cap") ws->ws.opts.growth_cap = static_cast<int>(value);
    else throw std::runtime_error("unknown integer option: " + k);
  } catch (const std::exception& e) {
    ws->last_error = e.what();
    return GPIL_ERROR;
  }
  return GPIL_OK;
}

gpil_status gpil_set_option_str(gpil_workspace* ws, const char* key, const char* value) {
  if (!ws || !key || !value) return GPIL_ERROR;
  std::string k = key;
  try {
    if (k == "labels") ws->ws.opts.labels = parse_label_list(value);
    else if (k == "base-dir") ws->ws.opts.base_dir = value;
    else throw std::runtime_error("unknown string option: " + k);
  } catch (const std::exception& e) {
    ws->last_error = e.what();
    return GPIL_ERROR;
  }
  return GPIL_OK;
}

gpil_status gpil_load_rules_file(gpil_workspace* ws, const char* path) {
  if (!ws || !path) return GPIL_ERROR;
  try {
    ws->ws.load_rules_file(path);
  } catch (const std::exception& e) {
    ws->last_error = e.what();
    return GPIL_ERROR;
  }
  return GPIL_OK;
}

gpil_status gpil_load_rules_text(gpil_workspace* ws, const char* text) {
  if (!ws || !text) return GPIL_ERROR;
  try {
    ws->ws.load_rules_text(text);
  } catch (const std::exception& e) {
    ws->last_error = e.what();
    return GPIL_ERROR;
  }
  return GPIL_OK;
}

gpil_status gpil_run(gpil_workspace* ws, const char* program, const char* graph,
                     char** out, char** warnings) {
  if (!ws || !program || !graph) return GPIL_ERROR;
  return finish(ws, ws->ws.op_run(program, graph), out, warnings);
}

gpil_status gpil_outcomes(gpil_workspace* ws, const char* program, const char* graph,
                          char** out, char** warnings) {
  if (!ws || !program || !graph) return GPIL_ERROR;
  return finish(ws, ws->ws.op_outcomes(program, graph), out, warnings);
}

gpil_status gpil_satisfies(gpil_workspace* ws, const char* cond, const char* graph,
                           char** out, char** warnings) {
  if (!ws || !cond || !graph) return GPIL_ERROR;
  return finish(ws, ws->ws.op_satisfies(cond, graph), out, warnings);
}

gpil_status gpil_app(gpil_workspace* ws, const char* rule_names, char** out,
                     char** warnings) {
  if (!ws) return GPIL_ERROR;
  return finish(ws, ws->ws.op_app(split_names(rule_names)), out, warnings);
}

gpil_status gpil_wpost(gpil_workspace* ws, const char* rule_names, const char* cond,
                       char** out, char** warnings) {
  if (!ws || !cond) return GPIL_ERROR;
  return finish(ws, ws->ws.op_wpost(split_names(rule_names), cond), out, warnings);
}

gpil_status gpil_check(gpil_workspace* ws, const char* proof, char** out,
                       char** warnings) {
  if (!ws || !proof) return GPIL_ERROR;
  return finish(ws, ws->ws.op_check(proof), out, warnings);
}

gpil_status gpil_validate(gpil_workspace* ws, const char* triple, char** out,
                          char** warnings) {
  if (!ws || !triple) return GPIL_ERROR;
  return finish(ws, ws->ws.op_validate(triple), out, warnings);
}

gpil_status gpil_difftest(gpil_workspace* ws, const char* kind, const char* rule_names,
                          const char* cond, const char* mutation, char** out,
                          char** warnings) {
  if (!ws || !kind) return GPIL_ERROR;
  return finish(ws,
                ws->ws.op_difftest(kind, split_names(rule_names),
                                   cond ? cond : "", mutation ? mutation : ""),
                out, warnings);
}

}  // extern "C"
