#pragma once
// Command implementations behind the CLI binary, exposed with explicit
// streams so tests can drive them without spawning processes. Every command
// returns a process exit code: 0 when all goals pass, 1 when a goal fails,
// 2 on usage or input errors.

#include <ostream>
#include <string>
#include <vector>

#include "lbox/check.hpp"
#include "lbox/fincat.hpp"

namespace lbox {

// Model configuration overrides from flags; empty/negative fields fall back
// to the `model` declaration in the theory file.
struct ModelOverrides {
  std::string monoid;             // trivial | z2 | path to a table file
  int depth = -1;
  std::vector<std::string> vals;  // NAME=SIZE or NAME@L=SIZE
  std::string csv;                // write the first judgment's table here
};

// {"rule": ..., "conclusion": ..., "premises": [...]} rendered with the
// surface grammar inside "conclusion".
std::string json_of_derivation(const DerivP& d);

// First line: carrier element names. Each following line i: the products
// elems[i] * elems[j] in carrier order. The unit is detected; BadInput when
// no element acts as one.
FinMonoid load_monoid_table(const std::string& path);
// "trivial", "z2", or a table file path.
FinMonoid monoid_by_name(const std::string& name);

int cmd_check(const std::string& file, const std::string& mode, bool json,
              std::ostream& out, std::ostream& err);
int cmd_levels(const std::string& file, std::ostream& out, std::ostream& err);
int cmd_normalize(const std::string& expr, int budget, std::ostream& out,
                  std::ostream& err);
int cmd_eq(const std::string& file, std::ostream& out, std::ostream& err);
int cmd_translate(const std::string& file, const std::string& to,
                  std::ostream& out, std::ostream& err);
int cmd_model(const std::string& file, const ModelOverrides& ov,
              std::ostream& out, std::ostream& err);
int cmd_laws(const std::string& monoid, int maxSize, std::ostream& out,
             std::ostream& err);

int run_cli(int argc, const char* const* argv);

} // namespace lbox
