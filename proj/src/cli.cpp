#include "sympolar/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sympolar/detrng.hpp"
#include "sympolar/duality.hpp"
#include "sympolar/oracle.hpp"
#include "sympolar/quantum.hpp"

namespace sympolar::cli {

using nlohmann::json;

// ---------------------------------------------------------------- dumping

namespace {

void append_escaped(const std::string& s, std::string& out) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

std::string format_double(double v) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_value(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  const char* nl = indent > 0 ? "\n" : "";

  switch (j.type()) {
    case json::value_t::null: out += "null"; break;
    case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
    case json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
    case json::value_t::number_float: out += format_double(j.get<double>()); break;
    case json::value_t::string: append_escaped(j.get<std::string>(), out); break;
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        out += nl;
        if (indent > 0) out += pad;
        dump_value(item, out, indent, depth + 1);
      }
      out += nl;
      if (indent > 0) out += close_pad;
      out += ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nl;
        if (indent > 0) out += pad;
        append_escaped(it.key(), out);
        out += indent > 0 ? ": " : ":";
        dump_value(it.value(), out, indent, depth + 1);
      }
      out += nl;
      if (indent > 0) out += close_pad;
      out += '}';
      break;
    }
    default: out += "null";
  }
}

}  // namespace

std::string dump_deterministic(const json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

// ------------------------------------------------------------- validation

namespace {

bool parse_matrix(const json& j, Matrix& m, std::vector<ValidationIssue>& errors) {
  if (!j.is_array() || j.empty()) {
    errors.push_back({"/matrix", "must be a nonempty 2D array"});
    return false;
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  if (j[0].is_array()) cols = j[0].size();
  if (cols == 0) {
    errors.push_back({"/matrix/0", "rows must be nonempty arrays"});
    return false;
  }
  m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  bool ok = true;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      errors.push_back({"/matrix/" + std::to_string(r), "inconsistent row length"});
      ok = false;
      continue;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& cell = j[r][c];
      if (!cell.is_number()) {
        errors.push_back(
            {"/matrix/" + std::to_string(r) + "/" + std::to_string(c), "not a number"});
        ok = false;
        continue;
      }
      const double v = cell.get<double>();
      if (!std::isfinite(v)) {
        errors.push_back(
            {"/matrix/" + std::to_string(r) + "/" + std::to_string(c), "not finite"});
        ok = false;
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return ok;
}

}  // namespace

ValidationResult validate_document(const json& j) {
  ValidationResult res;
  auto fail = [&](std::string path, std::string message) {
    res.errors.push_back({std::move(path), std::move(message)});
  };

  if (!j.is_object()) {
    fail("", "document must be a JSON object");
    return res;
  }

  int n = 0;
  if (!j.contains("n")) {
    fail("/n", "missing");
  } else if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1) {
    fail("/n", "must be a positive integer");
  } else {
    n = j["n"].get<int>();
  }

  std::string kind;
  if (!j.contains("kind")) {
    fail("/kind", "missing");
  } else if (!j["kind"].is_string()) {
    fail("/kind", "must be a string");
  } else {
    kind = j["kind"].get<std::string>();
    if (kind != "sym" && kind != "spd" && kind != "symplectic" && kind != "plane-basis") {
      fail("/kind", "unknown kind '" + kind + "'");
    }
  }

  bool half = false;
  if (j.contains("half")) {
    if (!j["half"].is_boolean()) {
      fail("/half", "must be a boolean");
    } else {
      half = j["half"].get<bool>();
      if (half && !kind.empty() && kind != "sym") {
        fail("/half", "only valid for kind 'sym'");
      }
    }
  }

  Matrix m;
  bool have_matrix = false;
  if (!j.contains("matrix")) {
    fail("/matrix", "missing");
  } else {
    have_matrix = parse_matrix(j["matrix"], m, res.errors);
  }

  if (n > 0 && !kind.empty() && have_matrix) {
    Eigen::Index want_rows = 2 * n;
    Eigen::Index want_cols = 2 * n;
    if (kind == "plane-basis") {
      want_cols = n;
    } else if (kind == "sym" && half) {
      want_rows = n;
      want_cols = n;
    }
    if (m.rows() != want_rows || m.cols() != want_cols) {
      std::ostringstream os;
      os << "expected " << want_rows << "x" << want_cols << " for kind '" << kind << "', got "
         << m.rows() << "x" << m.cols();
      fail("/matrix", os.str());
    }
  }

  if (!res.errors.empty()) return res;

  try {
    if (kind == "sym") {
      m = SymMatrix(m).mat();
    } else if (kind == "spd") {
      m = SpdMatrix(m).mat();
    } else if (kind == "symplectic") {
      const SymplecticCheck check = is_symplectic(m);
      if (!check.ok) {
        std::ostringstream os;
        os << "not symplectic (residual " << check.residual << ")";
        fail("/matrix", os.str());
      }
    } else if (kind == "plane-basis") {
      LagrangianPlane::from_basis(m);
    }
  } catch (const Error& e) {
    fail("/matrix", e.what());
  }

  if (!res.errors.empty()) return res;
  res.doc = MatrixDocument{n, kind, half, std::move(m)};
  return res;
}

// ------------------------------------------------------------ op bindings

const std::vector<OpBinding>& op_bindings() {
  static const std::vector<OpBinding> table = {
      {"sym_eig", "spectrum"},
      {"spd_roots", "williamson"},
      {"psd_margin", "pairtest"},
      {"schur_complement", "project"},
      {"standard_j", "spectrum"},
      {"symp_product", "lagdual"},
      {"is_symplectic", "williamson"},
      {"symplectic_eigenvalues", "spectrum"},
      {"williamson", "williamson"},
      {"random_symplectic", "thm1"},
      {"plane_from_basis", "lagdual"},
      {"plane_from_ab", "lagdual"},
      {"is_transverse", "project"},
      {"frame_symplectic", "john"},
      {"polar_dual", "dual"},
      {"linear_image", "dual"},
      {"orthogonal_projection", "project"},
      {"lagrangian_projection", "project"},
      {"capacity", "capacity"},
      {"support_function", "oracle shadow"},
      {"john_of_dual_product", "john"},
      {"mahler_volume", "dual"},
      {"lagrangian_polar_dual", "lagdual"},
      {"dual_pair_verdict", "pairtest"},
      {"thm1_check", "thm1"},
      {"reconstruct_ball", "reconstruct"},
      {"product_capacity", "product-capacity"},
      {"certify", "certify"},
      {"uncertainty_ellipsoid", "certify"},
      {"gaussian_wigner_eval", "wigner"},
      {"gaussian_state_wigner_form", "wigner"},
      {"hardy_verdict", "hardy"},
      {"joint_diagonalize", "jointdiag"},
      {"wigner_subgaussian_check", "capacity"},
      {"mc_polar_membership", "oracle polar"},
      {"mc_projection_support", "oracle shadow"},
      {"wigner_quadrature", "oracle quadrature"},
      {"random_spd", "oracle polar"},
  };
  return table;
}

// ----------------------------------------------------------------- helpers

namespace {

struct DocumentInvalid {
  std::string flag;
  std::vector<ValidationIssue> issues;
};

struct Loaded {
  MatrixDocument doc;
  std::string digest;
};

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const std::vector<double>& v) {
  json arr = json::array();
  for (const double x : v) arr.push_back(x);
  return arr;
}

json eigen_vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Loaded load_document(const std::string& path, const std::string& flag) {
  std::string bytes;
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    bytes = os.str();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw DocumentInvalid{flag, {{"", "cannot open '" + path + "'"}}};
    std::ostringstream os;
    os << file.rdbuf();
    bytes = os.str();
  }

  json parsed;
  try {
    parsed = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw DocumentInvalid{flag, {{"", std::string("JSON parse error: ") + e.what()}}};
  }

  ValidationResult validated = validate_document(parsed);
  if (!validated.ok()) throw DocumentInvalid{flag, std::move(validated.errors)};

  char digest[32];
  std::snprintf(digest, sizeof digest, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return {std::move(*validated.doc), digest};
}

SpdMatrix as_spd(const MatrixDocument& doc, const std::string& flag) {
  try {
    return SpdMatrix(doc.matrix);
  } catch (const Error& e) {
    throw DocumentInvalid{flag, {{"/matrix", e.what()}}};
  }
}

Vector parse_vector(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DocumentInvalid{flag, {{"", "cannot parse '" + item + "' as a number"}}};
    }
  }
  if (values.empty()) throw DocumentInvalid{flag, {{"", "empty vector"}}};
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SYMPOLAR_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      return 0;
    }
  }
  return 0;
}

// Options shared by every subcommand plus the report under construction.
struct Ctx {
  std::vector<std::string> args;
  double tol_override = -1.0;
  int indent = 2;
  json inputs = json::object();
  json result = json::object();
  json tolerances = json::object();
  std::optional<std::uint64_t> seed_used;

  double tol(double fallback) const { return tol_override >= 0.0 ? tol_override : fallback; }

  Loaded load(const std::string& path, const std::string& flag) {
    Loaded loaded = load_document(path, flag);
    inputs[flag] = loaded.digest;
    return loaded;
  }

  json report() const {
    json rep;
    rep["command"] = args;
    rep["inputs"] = inputs;
    rep["result"] = result;
    rep["tolerances"] = tolerances;
    if (seed_used) rep["seed"] = *seed_used;
    return rep;
  }
};

LagrangianPlane plane_from_doc(const MatrixDocument& doc, bool ab, const std::string& flag) {
  try {
    if (ab) {
      const int n = doc.n;
      return LagrangianPlane::from_ab(doc.matrix.topRows(n), doc.matrix.bottomRows(n));
    }
    return LagrangianPlane::from_basis(doc.matrix);
  } catch (const Error& e) {
    throw DocumentInvalid{flag, {{"/matrix", e.what()}}};
  }
}

// Planes given through --plane-l/--plane-lp, else the coordinate pair.
TransversePair load_pair(Ctx& ctx, const std::string& plane_l, const std::string& plane_lp,
                         bool ab, int n) {
  std::optional<LagrangianPlane> first;
  std::optional<LagrangianPlane> second;
  if (!plane_l.empty()) {
    first = plane_from_doc(ctx.load(plane_l, "--plane-l").doc, ab, "--plane-l");
  }
  if (!plane_lp.empty()) {
    second = plane_from_doc(ctx.load(plane_lp, "--plane-lp").doc, ab, "--plane-lp");
  }
  if (!first) first = LagrangianPlane::coordinate_x(n);
  if (!second) second = LagrangianPlane::coordinate_p(n);
  return {*first, *second};
}

}  // namespace

// ---------------------------------------------------------------- handlers

namespace {

int run_spectrum(Ctx& ctx, const std::string& in) {
  const SpdMatrix m = as_spd(ctx.load(in, "--in").doc, "--in");
  ctx.result["lambdas"] = vector_to_json(symplectic_eigenvalues(m));
  return 0;
}

int run_williamson(Ctx& ctx, const std::string& in) {
  const SpdMatrix m = as_spd(ctx.load(in, "--in").doc, "--in");
  const WilliamsonForm w = williamson(m);
  const int n = m.dim() / 2;

  Vector diag(2 * n);
  for (int i = 0; i < n; ++i) diag(i) = diag(n + i) = w.lambdas[static_cast<std::size_t>(i)];
  const Matrix rebuilt = w.s.mat().transpose() * diag.asDiagonal() * w.s.mat();
  const double recon =
      (rebuilt - m.mat()).cwiseAbs().maxCoeff() / m.mat().cwiseAbs().maxCoeff();

  ctx.result["lambdas"] = vector_to_json(w.lambdas);
  ctx.result["s"] = matrix_to_json(w.s.mat());
  ctx.result["symplectic_residual"] = is_symplectic(w.s.mat()).residual;
  ctx.result["reconstruction_residual"] = recon;
  ctx.tolerances["reconstruction"] = tol::kWilliamsonReconstruction;
  ctx.tolerances["symplectic_residual"] = tol::kSymplecticResidual;
  return 0;
}

int run_capacity(Ctx& ctx, const std::string& in) {
  const SpdMatrix m = as_spd(ctx.load(in, "--in").doc, "--in");
  const AmbientEllipsoid omega{m};
  const std::vector<double> lambdas = symplectic_eigenvalues(m);
  ctx.result["capacity"] = capacity(omega);
  ctx.result["lambda_max"] = lambdas.front();
  ctx.result["subgaussian"] = {{"verdict", to_string(wigner_subgaussian_check(m))},
                               {"lambdas", vector_to_json(lambdas)}};
  ctx.tolerances["verdict"] = ctx.tol(tol::kVerdict);
  return 0;
}

int run_dual(Ctx& ctx, const std::string& in, const std::string& linear) {
  SpdMatrix a = as_spd(ctx.load(in, "--in").doc, "--in");
  PlaneEllipsoid x{LagrangianPlane::coordinate_x(a.dim()), a};
  if (!linear.empty()) {
    const MatrixDocument ldoc = ctx.load(linear, "--linear").doc;
    x = linear_image(ldoc.matrix, x);
    ctx.result["transformed_form"] = matrix_to_json(x.form().mat());
  }
  const PlaneEllipsoid dual = polar_dual(x);
  const PlaneEllipsoid bidual = polar_dual(dual);
  const double biduality = (bidual.form().mat() - x.form().mat()).cwiseAbs().maxCoeff() /
                           x.form().mat().cwiseAbs().maxCoeff();
  ctx.result["dual_form"] = matrix_to_json(dual.form().mat());
  ctx.result["biduality_residual"] = biduality;
  ctx.result["mahler_volume"] = mahler_volume(x);
  ctx.result["volume"] = volume(x);
  ctx.result["volume_dual"] = volume(dual);
  ctx.tolerances["biduality"] = 1e-10;
  return 0;
}

int run_lagdual(Ctx& ctx, const std::string& in, const std::string& plane_l,
                const std::string& plane_lp, bool ab) {
  const MatrixDocument doc = ctx.load(in, "--in").doc;
  const SpdMatrix form = as_spd(doc, "--in");
  const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, form.dim());
  if (pair.dof() != form.dim()) {
    throw BadShape("lagdual: form dimension does not match the planes");
  }
  const PlaneEllipsoid x{pair.first(), form};
  const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);

  // omega-pairing of the two stored bases, computed through symp_product
  const int n = pair.dof();
  Matrix pairing(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      pairing(i, j) = symp_product(PhaseVector::from_stacked(pair.first().basis().col(i)),
                                   PhaseVector::from_stacked(pair.second().basis().col(j)));
    }
  }

  ctx.result["dual_form"] = matrix_to_json(dual.form().mat());
  ctx.result["dual_plane_basis"] = matrix_to_json(dual.plane().basis());
  ctx.result["coordinate_form"] = matrix_to_json(coordinate_form(x, pair, PairSlot::First).mat());
  ctx.result["omega_pairing"] = matrix_to_json(pairing);
  ctx.result["pair_margin"] = pair.margin();
  return 0;
}

int run_project(Ctx& ctx, const std::string& in, const std::string& onto,
                const std::string& plane_l, const std::string& plane_lp, bool ab) {
  const SpdMatrix m = as_spd(ctx.load(in, "--in").doc, "--in");
  const AmbientEllipsoid omega{m};
  PlaneEllipsoid shadow = [&] {
    if (onto == "x") return orthogonal_projection(omega, CoordinateAxis::X);
    if (onto == "p") return orthogonal_projection(omega, CoordinateAxis::P);
    if (onto != "first" && onto != "second") {
      throw DocumentInvalid{"--onto", {{"", "must be one of x|p|first|second"}}};
    }
    const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, omega.dof());
    ctx.result["transverse_margin"] = is_transverse(pair.first(), pair.second()).margin;
    return lagrangian_projection(omega, pair,
                                 onto == "first" ? PairSlot::First : PairSlot::Second);
  }();
  ctx.result["form"] = matrix_to_json(shadow.form().mat());
  ctx.result["onto"] = onto;
  ctx.result["plane_basis"] = matrix_to_json(shadow.plane().basis());
  return 0;
}

int run_john(Ctx& ctx, const std::string& in, const std::string& plane_l,
             const std::string& plane_lp, bool ab) {
  const SpdMatrix form = as_spd(ctx.load(in, "--in").doc, "--in");
  const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, form.dim());
  const PlaneEllipsoid x{pair.first(), form};
  const AmbientEllipsoid john = john_of_dual_product(x, pair);
  ctx.result["form"] = matrix_to_json(john.form().mat());
  ctx.result["capacity"] = capacity(john);
  ctx.result["lambdas"] = vector_to_json(symplectic_eigenvalues(john.form()));
  ctx.result["frame"] = matrix_to_json(pair.frame().mat());
  return 0;
}

int run_thm1(Ctx& ctx, const std::string& omega_path, const std::string& plane_l,
             const std::string& plane_lp, bool ab, int trials, std::uint64_t seed) {
  const SpdMatrix m = as_spd(ctx.load(omega_path, "--omega").doc, "--omega");
  const AmbientEllipsoid omega{m};
  const double tolerance = ctx.tol(tol::kVerdict);
  ctx.tolerances["margin"] = tolerance;

  if (trials <= 0) {
    const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, omega.dof());
    try {
      const Thm1Result r = thm1_check(omega, pair, tolerance);
      ctx.result["status"] = to_string(r.status);
      ctx.result["inclusion_margin"] = r.inclusion_margin;
      ctx.result["equality_residual"] = r.equality_residual;
      ctx.result["capacity"] = r.capacity;
      ctx.result["hypothesis_met"] = true;
      return r.inclusion_margin >= -tolerance ? 0 : 2;
    } catch (const HypothesisNotMet&) {
      ctx.result["hypothesis_met"] = false;
      ctx.result["capacity"] = capacity(omega);
      return 2;
    }
  }

  ctx.seed_used = seed;
  const int n = omega.dof();
  double min_margin = std::numeric_limits<double>::infinity();
  double max_equality = 0.0;
  int failures = 0;
  bool hypothesis_met = true;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = rng::derive(seed, static_cast<std::uint64_t>(t));
    // skip nearly-tangent pairs; their frames exceed the 1e-9 residual gate
    auto make_pair = [&] {
      for (std::uint64_t attempt = 0;; ++attempt) {
        const SymplecticMatrix s =
            random_symplectic(rng::derive(trial_seed, attempt), n, 0.75);
        const LagrangianPlane l1 = LagrangianPlane::from_basis(s.mat().leftCols(n));
        const LagrangianPlane l2 = LagrangianPlane::from_basis(s.mat().rightCols(n));
        if (is_transverse(l1, l2).margin >= 1e-2) return TransversePair{l1, l2};
      }
    };
    const TransversePair pair = make_pair();
    try {
      const Thm1Result r = thm1_check(omega, pair, tolerance);
      min_margin = std::min(min_margin, r.inclusion_margin);
      max_equality = std::max(max_equality, r.equality_residual);
      if (r.inclusion_margin < -tolerance) ++failures;
    } catch (const HypothesisNotMet&) {
      hypothesis_met = false;
      break;
    }
  }
  ctx.result["hypothesis_met"] = hypothesis_met;
  ctx.result["capacity"] = capacity(omega);
  if (hypothesis_met) {
    ctx.result["trials"] = trials;
    ctx.result["min_inclusion_margin"] = min_margin;
    ctx.result["max_equality_residual"] = max_equality;
    ctx.result["failures"] = failures;
  }
  return hypothesis_met && failures == 0 ? 0 : 2;
}

int run_reconstruct(Ctx& ctx, const std::string& in, const std::string& plane_l,
                    const std::string& plane_lp, bool ab) {
  const SpdMatrix form = as_spd(ctx.load(in, "--in").doc, "--in");
  const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, form.dim());
  const PlaneEllipsoid x{pair.first(), form};
  const AmbientEllipsoid ball = reconstruct_ball(x, pair);

  const PlaneEllipsoid back = lagrangian_projection(ball, pair, PairSlot::First);
  const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);
  const PlaneEllipsoid back2 = lagrangian_projection(ball, pair, PairSlot::Second);
  const double r1 = (back.form().mat() - form.mat()).cwiseAbs().maxCoeff() /
                    form.mat().cwiseAbs().maxCoeff();
  const double r2 = (back2.form().mat() - dual.form().mat()).cwiseAbs().maxCoeff() /
                    dual.form().mat().cwiseAbs().maxCoeff();

  ctx.result["form"] = matrix_to_json(ball.form().mat());
  ctx.result["capacity"] = capacity(ball);
  ctx.result["roundtrip_residual_first"] = r1;
  ctx.result["roundtrip_residual_second"] = r2;
  ctx.tolerances["roundtrip"] = tol::kVerdict;
  return 0;
}

int run_pairtest(Ctx& ctx, const std::string& x_path, const std::string& p_path,
                 const std::string& plane_l, const std::string& plane_lp, bool ab) {
  const SpdMatrix a = as_spd(ctx.load(x_path, "--x").doc, "--x");
  const SpdMatrix b = as_spd(ctx.load(p_path, "--p").doc, "--p");
  const double tolerance = ctx.tol(tol::kVerdict);
  DualPairVerdict verdict{};
  if (plane_l.empty() && plane_lp.empty()) {
    verdict = dual_pair_verdict(a, b, tolerance);
  } else {
    const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, a.dim());
    verdict = dual_pair_verdict({pair.first(), a}, {pair.second(), b}, pair, tolerance);
  }
  ctx.result["status"] = to_string(verdict.status);
  ctx.result["margin"] = verdict.margin;
  ctx.result["exactness_residual"] = verdict.exactness_residual;
  ctx.tolerances["verdict"] = tolerance;
  return verdict.status == DualStatus::NotDual ? 2 : 0;
}

int run_product_capacity(Ctx& ctx, const std::string& x_path, const std::string& p_path) {
  const SpdMatrix a = as_spd(ctx.load(x_path, "--x").doc, "--x");
  const SpdMatrix b = as_spd(ctx.load(p_path, "--p").doc, "--p");
  const double value = product_capacity(a, b);
  ctx.result["capacity"] = value;
  ctx.result["dual_pair_status"] = to_string(dual_pair_verdict(a, b, ctx.tol(tol::kVerdict)).status);
  return 0;
}

int run_certify(Ctx& ctx, const std::string& in) {
  const CovarianceMatrix sigma{as_spd(ctx.load(in, "--in").doc, "--in")};
  const CertificationReport report = certify(sigma);
  const AmbientEllipsoid omega = uncertainty_ellipsoid(sigma);
  ctx.result["admissible"] = report.admissible;
  ctx.result["rs_margins"] = vector_to_json(report.rs_margins);
  ctx.result["min_hermitian_eig"] = report.min_hermitian_eig;
  ctx.result["min_symplectic_eig"] = report.min_symplectic_eig;
  ctx.result["uncertainty_capacity"] = capacity(omega);
  ctx.result["uncertainty_form"] = matrix_to_json(omega.form().mat());
  ctx.tolerances["verdict"] = ctx.tol(tol::kVerdict);
  ctx.tolerances["route_agreement"] = tol::kRouteAgreement;
  return report.admissible ? 0 : 2;
}

int run_hardy(Ctx& ctx, const std::string& a_path, const std::string& b_path) {
  const SpdMatrix a = as_spd(ctx.load(a_path, "--a").doc, "--a");
  const SpdMatrix b = as_spd(ctx.load(b_path, "--b").doc, "--b");
  const HardyReport report = hardy_verdict(a, b);
  ctx.result["verdict"] = to_string(report.verdict);
  ctx.result["ab_eigenvalues"] = vector_to_json(report.ab_eigenvalues);
  ctx.result["dual_pair_status"] = to_string(dual_pair_verdict(a, b, ctx.tol(tol::kVerdict)).status);
  ctx.tolerances["verdict"] = ctx.tol(tol::kVerdict);
  return report.verdict == UncertaintyVerdict::Inadmissible ? 2 : 0;
}

int run_jointdiag(Ctx& ctx, const std::string& a_path, const std::string& b_path) {
  const SpdMatrix a = as_spd(ctx.load(a_path, "--a").doc, "--a");
  const SpdMatrix b = as_spd(ctx.load(b_path, "--b").doc, "--b");
  const JointDiagonalization jd = joint_diagonalize(a, b);
  const int n = a.dim();

  Vector lam(n);
  for (int i = 0; i < n; ++i) lam(i) = std::sqrt(jd.lambdas[static_cast<std::size_t>(i)]);
  const Matrix lhs = jd.l.transpose() * a.mat() * jd.l;
  const Matrix linv = jd.l.partialPivLu().inverse();
  const Matrix rhs = linv * b.mat() * linv.transpose();
  const Matrix target = lam.asDiagonal();

  ctx.result["l"] = matrix_to_json(jd.l);
  ctx.result["lambdas"] = vector_to_json(jd.lambdas);
  ctx.result["residual_a"] = (lhs - target).cwiseAbs().maxCoeff();
  ctx.result["residual_b"] = (rhs - target).cwiseAbs().maxCoeff();
  return 0;
}

int run_wigner(Ctx& ctx, const std::string& a_path, const std::string& b_path,
               const std::string& z_text) {
  const SpdMatrix a = as_spd(ctx.load(a_path, "--a").doc, "--a");
  const MatrixDocument bdoc = ctx.load(b_path, "--b").doc;
  const GaussianState psi{a, SymMatrix(bdoc.matrix)};
  const int n = psi.dof();
  const Vector z = parse_vector(z_text, "--z");
  if (z.size() != 2 * n) throw DocumentInvalid{"--z", {{"", "expected 2n components"}}};
  const PhaseVector zv = PhaseVector::from_stacked(z);

  const AmbientEllipsoid gform = gaussian_state_wigner_form(psi);
  const double analytic =
      std::pow(M_PI, -n) * std::exp(-z.dot(gform.form().mat() * z));

  // same value through the covariance route: Sigma = (1/2) G^{-1}
  const CovarianceMatrix sigma{SpdMatrix(0.5 * spd_inverse(gform.form()))};
  const double gauss = gaussian_wigner_eval(sigma, PhaseVector::zero(n), zv);

  ctx.result["g"] = matrix_to_json(gform.form().mat());
  ctx.result["value"] = analytic;
  ctx.result["value_covariance_route"] = gauss;
  ctx.result["sigma"] = matrix_to_json(sigma.sigma().mat());
  ctx.result["lambdas"] = vector_to_json(symplectic_eigenvalues(gform.form()));
  return 0;
}

int run_oracle_polar(Ctx& ctx, const std::string& in, const std::string& candidate_text,
                     std::uint64_t seed, int count, int trials, int candidates) {
  ctx.seed_used = seed;
  ctx.tolerances["accept"] = tol::kMcAccept;

  if (trials > 0) {
    // randomized agreement harness: sampled membership vs the analytic
    // dual form, outside a 2e-3 shell around the boundary
    int disagreements = 0;
    int tested = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t trial_seed = rng::derive(seed, static_cast<std::uint64_t>(t));
      const int n = 1 + static_cast<int>(trial_seed % 3);
      const SpdMatrix a = oracle::random_spd(trial_seed, n, 2.0);
      const oracle::SampleCloud cloud =
          oracle::ellipsoid_boundary_cloud(a, rng::derive(trial_seed, 1), static_cast<std::size_t>(count));
      const Matrix ainv = spd_inverse(a);
      rng::Stream st(trial_seed, 2);
      for (int c = 0; c < candidates; ++c) {
        Vector p(n);
        for (int i = 0; i < n; ++i) p(i) = st.normal();
        p /= std::sqrt(p.dot(ainv.llt().solve(p)));  // on the dual boundary
        p *= st.uniform(0.7, 1.3);
        const double gauge = std::sqrt(p.dot(ainv * p));
        if (std::abs(gauge - 1.0) <= 2e-3) continue;
        ++tested;
        const bool analytic = gauge <= 1.0;
        if (oracle::mc_polar_membership(cloud, p).accepted != analytic) ++disagreements;
      }
    }
    ctx.result["trials"] = trials;
    ctx.result["candidates_tested"] = tested;
    ctx.result["disagreements"] = disagreements;
    return disagreements == 0 ? 0 : 2;
  }

  if (in.empty() || candidate_text.empty()) {
    throw DocumentInvalid{"--in", {{"", "need --in and --candidate (or --trials)"}}};
  }
  if (count <= 0) throw DocumentInvalid{"--count", {{"", "must be positive"}}};
  const SpdMatrix a = as_spd(ctx.load(in, "--in").doc, "--in");
  const Vector p = parse_vector(candidate_text, "--candidate");
  if (p.size() != a.dim()) throw DocumentInvalid{"--candidate", {{"", "wrong dimension"}}};
  const oracle::SampleCloud cloud =
      oracle::ellipsoid_boundary_cloud(a, seed, static_cast<std::size_t>(count));
  const oracle::MembershipVerdict verdict = oracle::mc_polar_membership(cloud, p);
  ctx.result["accepted"] = verdict.accepted;
  ctx.result["max_inner"] = verdict.max_inner;
  ctx.result["count"] = count;
  return verdict.accepted ? 0 : 2;
}

int run_oracle_shadow(Ctx& ctx, const std::string& omega_path, const std::string& onto,
                      const std::string& plane_l, const std::string& plane_lp, bool ab,
                      std::uint64_t seed, int directions, int samples) {
  const SpdMatrix m = as_spd(ctx.load(omega_path, "--omega").doc, "--omega");
  const AmbientEllipsoid omega{m};
  const TransversePair pair = load_pair(ctx, plane_l, plane_lp, ab, omega.dof());
  PairSlot slot = PairSlot::First;
  if (onto == "p" || onto == "second") {
    slot = PairSlot::Second;
  } else if (onto != "x" && onto != "first") {
    throw DocumentInvalid{"--onto", {{"", "must be one of x|p|first|second"}}};
  }
  if (directions <= 0 || samples <= 0) {
    throw DocumentInvalid{"--samples", {{"", "counts must be positive"}}};
  }
  ctx.seed_used = seed;

  const oracle::SampleCloud dirs =
      oracle::direction_cloud(omega.dof(), seed, static_cast<std::size_t>(directions));
  const oracle::SampleCloud boundary = oracle::ellipsoid_boundary_cloud(
      omega.form(), rng::derive(seed, 1), static_cast<std::size_t>(samples));
  const std::vector<double> estimates =
      oracle::mc_projection_support(omega, pair, slot, dirs, boundary);

  const PlaneEllipsoid shadow = lagrangian_projection(omega, pair, slot);
  json rows = json::array();
  double worst = 0.0;
  for (std::size_t d = 0; d < dirs.count; ++d) {
    const Vector u = dirs.points.row(static_cast<Eigen::Index>(d)).transpose();
    const double analytic = support_function(shadow, u);
    worst = std::max(worst, std::abs(estimates[d] - analytic));
    rows.push_back({{"direction", eigen_vector_to_json(u)},
                    {"estimate", estimates[d]},
                    {"analytic", analytic}});
  }
  ctx.result["directions"] = rows;
  ctx.result["max_abs_deviation"] = worst;
  ctx.result["samples"] = samples;
  return 0;
}

int run_oracle_quadrature(Ctx& ctx, const std::string& a_path, const std::string& b_path,
                          const std::string& z_text, double half_width, int points) {
  const SpdMatrix a = as_spd(ctx.load(a_path, "--a").doc, "--a");
  const MatrixDocument bdoc = ctx.load(b_path, "--b").doc;
  const GaussianState psi{a, SymMatrix(bdoc.matrix)};
  const Vector z = parse_vector(z_text, "--z");
  if (z.size() != 2) throw DocumentInvalid{"--z", {{"", "expected x,p"}}};
  const PhaseVector zv = PhaseVector::from_stacked(z);

  if (half_width <= 0.0) half_width = 12.0 / std::sqrt(psi.a.min_eig());
  const double value = oracle::wigner_quadrature(psi, zv, half_width, points);
  const AmbientEllipsoid gform = gaussian_state_wigner_form(psi);
  const double analytic = (1.0 / M_PI) * std::exp(-z.dot(gform.form().mat() * z));

  ctx.result["value"] = value;
  ctx.result["analytic"] = analytic;
  ctx.result["abs_error"] = std::abs(value - analytic);
  ctx.result["half_width"] = half_width;
  ctx.result["points"] = points;
  return 0;
}

}  // namespace

// ---------------------------------------------------------------- dispatch

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lagrangian polar duality toolkit"};
  app.require_subcommand(1);

  Ctx ctx;
  ctx.args = args;

  std::string in, omega_path, x_path, p_path, a_path, b_path, linear;
  std::string plane_l, plane_lp, onto = "x", z_text = "0,0", candidate;
  bool ab = false;
  int trials = 0, count = 20000, candidates = 1000, directions = 16, samples = 100000;
  int points = 1601;
  double half_width = -1.0;
  std::uint64_t seed = default_seed();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", ctx.tol_override, "verdict tolerance override");
    sub->add_option("--json-indent", ctx.indent, "report indentation (0 = compact)");
  };
  auto add_planes = [&](CLI::App* sub) {
    sub->add_option("--plane-l", plane_l, "first plane document (plane-basis)");
    sub->add_option("--plane-lp", plane_lp, "second plane document (plane-basis)");
    sub->add_flag("--ab", ab, "treat plane documents as stacked [A; B] constraint matrices");
  };

  CLI::App* c_spectrum = app.add_subcommand("spectrum", "symplectic eigenvalues of an SPD form");
  c_spectrum->add_option("--in", in)->required();
  add_common(c_spectrum);

  CLI::App* c_williamson = app.add_subcommand("williamson", "Williamson normal form");
  c_williamson->add_option("--in", in)->required();
  add_common(c_williamson);

  CLI::App* c_capacity = app.add_subcommand("capacity", "symplectic capacity of an ellipsoid");
  c_capacity->add_option("--in", in)->required();
  add_common(c_capacity);

  CLI::App* c_dual = app.add_subcommand("dual", "polar dual of a plane ellipsoid form");
  c_dual->add_option("--in", in)->required();
  c_dual->add_option("--linear", linear, "apply L to the body first (sym half document)");
  add_common(c_dual);

  CLI::App* c_lagdual = app.add_subcommand("lagdual", "Lagrangian polar dual across a pair");
  c_lagdual->add_option("--in", in)->required();
  add_planes(c_lagdual);
  add_common(c_lagdual);

  CLI::App* c_project = app.add_subcommand("project", "projection of an ambient ellipsoid");
  c_project->add_option("--in", in)->required();
  c_project->add_option("--onto", onto, "x|p|first|second");
  add_planes(c_project);
  add_common(c_project);

  CLI::App* c_john = app.add_subcommand("john", "John ellipsoid of X x X^o");
  c_john->add_option("--in", in)->required();
  add_planes(c_john);
  add_common(c_john);

  CLI::App* c_thm1 = app.add_subcommand("thm1", "projection duality check");
  c_thm1->add_option("--omega", omega_path)->required();
  c_thm1->add_option("--trials", trials, "number of random transverse pairs");
  c_thm1->add_option("--seed", seed);
  add_planes(c_thm1);
  add_common(c_thm1);

  CLI::App* c_reconstruct = app.add_subcommand("reconstruct", "unique symplectic ball");
  c_reconstruct->add_option("--in", in)->required();
  add_planes(c_reconstruct);
  add_common(c_reconstruct);

  CLI::App* c_pairtest = app.add_subcommand("pairtest", "dual-pair verdict for two forms");
  c_pairtest->add_option("--x", x_path)->required();
  c_pairtest->add_option("--p", p_path)->required();
  add_planes(c_pairtest);
  add_common(c_pairtest);

  CLI::App* c_product = app.add_subcommand("product-capacity", "c_max of X x P");
  c_product->add_option("--x", x_path)->required();
  c_product->add_option("--p", p_path)->required();
  add_common(c_product);

  CLI::App* c_certify = app.add_subcommand("certify", "quantum admissibility of a covariance");
  c_certify->add_option("--in", in)->required();
  add_common(c_certify);

  CLI::App* c_hardy = app.add_subcommand("hardy", "matrix Hardy uncertainty test");
  c_hardy->add_option("--a", a_path)->required();
  c_hardy->add_option("--b", b_path)->required();
  add_common(c_hardy);

  CLI::App* c_jointdiag = app.add_subcommand("jointdiag", "joint diagonalization of A and B");
  c_jointdiag->add_option("--a", a_path)->required();
  c_jointdiag->add_option("--b", b_path)->required();
  add_common(c_jointdiag);

  CLI::App* c_wigner = app.add_subcommand("wigner", "Gaussian-state Wigner form and values");
  c_wigner->add_option("--a", a_path)->required();
  c_wigner->add_option("--b", b_path)->required();
  c_wigner->add_option("--z", z_text, "phase-space point x1,..,p1,..");
  add_common(c_wigner);

  CLI::App* c_oracle = app.add_subcommand("oracle", "brute-force validators");
  c_oracle->require_subcommand(1);
  CLI::App* c_polar = c_oracle->add_subcommand("polar", "sampled polar membership");
  c_polar->add_option("--in", in);
  c_polar->add_option("--candidate", candidate);
  c_polar->add_option("--seed", seed);
  c_polar->add_option("--count", count, "boundary samples");
  c_polar->add_option("--trials", trials, "agreement harness: number of random ellipsoids");
  c_polar->add_option("--candidates", candidates, "agreement harness: candidates per ellipsoid");
  add_common(c_polar);

  CLI::App* c_shadow = c_oracle->add_subcommand("shadow", "sampled projection support");
  c_shadow->add_option("--omega", omega_path)->required();
  c_shadow->add_option("--onto", onto, "x|p|first|second");
  c_shadow->add_option("--seed", seed);
  c_shadow->add_option("--directions", directions);
  c_shadow->add_option("--samples", samples);
  add_planes(c_shadow);
  add_common(c_shadow);

  CLI::App* c_quadrature = c_oracle->add_subcommand("quadrature", "Wigner integral, n = 1");
  c_quadrature->add_option("--a", a_path)->required();
  c_quadrature->add_option("--b", b_path)->required();
  c_quadrature->add_option("--z", z_text);
  c_quadrature->add_option("--half-width", half_width);
  c_quadrature->add_option("--points", points);
  add_common(c_quadrature);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sympolar");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help() << std::flush;
    return 0;
  } catch (const CLI::ParseError& e) {
    json rep;
    rep["command"] = args;
    rep["error"] = {{"kind", "usage"}, {"message", e.what()}};
    out << dump_deterministic(rep, ctx.indent) << "\n";
    return 1;
  }

  auto finish = [&](int code) {
    out << dump_deterministic(ctx.report(), ctx.indent) << "\n";
    return code;
  };

  try {
    if (*c_spectrum) return finish(run_spectrum(ctx, in));
    if (*c_williamson) return finish(run_williamson(ctx, in));
    if (*c_capacity) return finish(run_capacity(ctx, in));
    if (*c_dual) return finish(run_dual(ctx, in, linear));
    if (*c_lagdual) return finish(run_lagdual(ctx, in, plane_l, plane_lp, ab));
    if (*c_project) return finish(run_project(ctx, in, onto, plane_l, plane_lp, ab));
    if (*c_john) return finish(run_john(ctx, in, plane_l, plane_lp, ab));
    if (*c_thm1) return finish(run_thm1(ctx, omega_path, plane_l, plane_lp, ab, trials, seed));
    if (*c_reconstruct) return finish(run_reconstruct(ctx, in, plane_l, plane_lp, ab));
    if (*c_pairtest) return finish(run_pairtest(ctx, x_path, p_path, plane_l, plane_lp, ab));
    if (*c_product) return finish(run_product_capacity(ctx, x_path, p_path));
    if (*c_certify) return finish(run_certify(ctx, in));
    if (*c_hardy) return finish(run_hardy(ctx, a_path, b_path));
    if (*c_jointdiag) return finish(run_jointdiag(ctx, a_path, b_path));
    if (*c_wigner) return finish(run_wigner(ctx, a_path, b_path, z_text));
    if (*c_polar)
      return finish(run_oracle_polar(ctx, in, candidate, seed, count,
                                     c_polar->count("--trials") ? trials : 0, candidates));
    if (*c_shadow)
      return finish(run_oracle_shadow(ctx, omega_path, onto, plane_l, plane_lp, ab, seed,
                                      directions, samples));
    if (*c_quadrature)
      return finish(run_oracle_quadrature(ctx, a_path, b_path, z_text, half_width, points));
  } catch (const DocumentInvalid& e) {
    json issues = json::array();
    for (const ValidationIssue& issue : e.issues) {
      issues.push_back({{"input", e.flag}, {"path", issue.path}, {"message", issue.message}});
    }
    json rep;
    rep["command"] = args;
    rep["error"] = {{"kind", "input"}, {"issues", issues}};
    out << dump_deterministic(rep, ctx.indent) << "\n";
    return 1;
  } catch (const Error& e) {
    const bool numerical = dynamic_cast<const NumericalFailure*>(&e) != nullptr ||
                           dynamic_cast<const NotPositiveDefinite*>(&e) != nullptr ||
                           dynamic_cast<const InternalInconsistency*>(&e) != nullptr;
    json rep;
    rep["command"] = args;
    rep["error"] = {{"kind", numerical ? "numerical" : "input"}, {"message", e.what()}};
    out << dump_deterministic(rep, ctx.indent) << "\n";
    return numerical ? 3 : 1;
  } catch (const std::exception& e) {
    json rep;
    rep["command"] = args;
    rep["error"] = {{"kind", "numerical"}, {"message", e.what()}};
    out << dump_deterministic(rep, ctx.indent) << "\n";
    return 3;
  }

  json rep;
  rep["command"] = args;
  rep["error"] = {{"kind", "usage"}, {"message", "unknown subcommand"}};
  out << dump_deterministic(rep, ctx.indent) << "\n";
  return 1;
}

}  // namespace sympolar::cli
