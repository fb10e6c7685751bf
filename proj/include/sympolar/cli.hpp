#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sympolar/matops.hpp"

// JSON-in / JSON-out command-line front end. One report object on standard
// output, diagnostics on standard error, and stable exit codes:
//   0  computed; verdict (if any) positive
//   2  computed; verdict negative
//   1  input or shape error
//   3  numerical failure

namespace sympolar::cli {

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct MatrixDocument {
  int n = 0;
  std::string kind;  // sym | spd | symplectic | plane-basis
  bool half = false; // kind sym only: matrix is n x n instead of 2n x 2n
  Matrix matrix;
};

struct ValidationIssue {
  std::string path;  // JSON pointer into the document
  std::string message;
};

struct ValidationResult {
  std::vector<ValidationIssue> errors;
  std::optional<MatrixDocument> doc;
  bool ok() const { return errors.empty(); }
};

// Shape/kind checks plus the numeric invariants of each kind; collects
// every problem instead of stopping at the first.
ValidationResult validate_document(const nlohmann::json& j);

// Sorted keys, floats printed with 17 significant digits; indent 0 gives
// the compact single-line form.
std::string dump_deterministic(const nlohmann::json& j, int indent = 2);

std::uint64_t fnv1a64(std::string_view bytes);

// Which subcommand is the canonical surface of each library operation.
struct OpBinding {
  std::string op;
  std::string subcommand;
};

const std::vector<OpBinding>& op_bindings();

}  // namespace sympolar::cli
