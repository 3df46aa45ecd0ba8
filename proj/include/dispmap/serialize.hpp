#pragma once

// JSON and plain-text rendering for operator specs, check reports, analyses,
// and the closed-form gallery. JSON is the machine format: keys are emitted
// in sorted order and doubles use shortest round-trip notation, so the same
// inputs always produce byte-identical files. Text is the human format.

#include <dispmap/displacement.hpp>
#include <dispmap/gallery.hpp>
#include <dispmap/operator_spec.hpp>
#include <dispmap/report.hpp>
#include <dispmap/suites.hpp>

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace dispmap {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& M) {
  Json rows = Json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw InputError(what + ": expected a nonempty array of rows");
  const auto rows = static_cast<Index>(j.size());
  Index cols = -1;
  for (const auto& row : j) {
    if (!row.is_array() || row.empty())
      throw InputError(what + ": each row must be a nonempty array");
    if (cols < 0)
      cols = static_cast<Index>(row.size());
    else if (static_cast<Index>(row.size()) != cols)
      throw InputError(what + ": rows have inconsistent lengths");
    for (const auto& v : row)
      if (!v.is_number()) throw InputError(what + ": entries must be numbers");
  }
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
  return M;
}

// Columns of an n x k frame are serialized as a list of k length-n vectors.
inline Json frame_to_json(const Matrix& frame) {
  Json cols = Json::array();
  for (Index c = 0; c < frame.cols(); ++c) {
    Json col = Json::array();
    for (Index i = 0; i < frame.rows(); ++i) col.push_back(frame(i, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

inline Matrix frame_from_json(const Json& j, const std::string& what) {
  return matrix_from_json(j, what).transpose();
}

inline Json spec_to_json(const OperatorSpec& spec) {
  Json j;
  j["kind"] = kind_name(spec.kind);
  j["n"] = spec.n;
  switch (spec.kind) {
    case OperatorKind::matrix:
      j["rows"] = matrix_to_json(spec.entries);
      break;
    case OperatorKind::projection:
    case OperatorKind::neg_projection:
    case OperatorKind::reflection:
    case OperatorKind::neg_reflection:
      j["frame"] = frame_to_json(spec.frame);
      break;
    case OperatorKind::cyclic_shift:
      break;
    case OperatorKind::block_rotation: {
      Json turns = Json::array();
      for (const auto& t : spec.turns)
        turns.push_back(std::to_string(t.num) + "/" + std::to_string(t.den));
      j["turns"] = std::move(turns);
      break;
    }
    case OperatorKind::signed_permutation: {
      Json perm = Json::array();
      for (Index p : spec.perm) perm.push_back(p);
      Json signs = Json::array();
      for (int s : spec.signs) signs.push_back(s);
      j["perm"] = std::move(perm);
      j["signs"] = std::move(signs);
      break;
    }
    case OperatorKind::random_nonexpansive:
      j["seed"] = spec.seed;
      j["norm_cap"] = spec.norm_cap;
      break;
  }
  return j;
}

namespace detail {

inline RationalTurn turn_from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
    throw InputError("turns: expected fractions like \"1/4\", got '" + s +
                     "'");
  try {
    std::size_t used = 0;
    const long long num = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw InputError("");
    const std::string den_part = s.substr(slash + 1);
    const long long den = std::stoll(den_part, &used);
    if (used != den_part.size()) throw InputError("");
    return RationalTurn{num, den};
  } catch (const std::exception&) {
    throw InputError("turns: expected fractions like \"1/4\", got '" + s +
                     "'");
  }
}

inline const Json& require_field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(std::string("operator spec: missing field '") + key +
                     "'");
  return *it;
}

inline Index index_field(const Json& j, const char* key) {
  const Json& v = require_field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError(std::string("operator spec: field '") + key +
                     "' must be a nonnegative integer");
  return static_cast<Index>(v.get<long long>());
}

}  // namespace detail

inline OperatorSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("operator spec: expected a JSON object");
  const Json& kind_val = detail::require_field(j, "kind");
  if (!kind_val.is_string())
    throw InputError("operator spec: field 'kind' must be a string");
  const OperatorKind kind = kind_from_name(kind_val.get<std::string>());
  const Index n = detail::index_field(j, "n");

  OperatorSpec spec;
  spec.kind = kind;
  spec.n = n;
  switch (kind) {
    case OperatorKind::matrix: {
      spec.entries = matrix_from_json(detail::require_field(j, "rows"),
                                      "operator spec: rows");
      if (spec.entries.rows() != n || spec.entries.cols() != n)
        throw InputError("operator spec: rows must form an n x n matrix");
      break;
    }
    case OperatorKind::projection:
    case OperatorKind::neg_projection:
    case OperatorKind::reflection:
    case OperatorKind::neg_reflection: {
      spec.frame = frame_from_json(detail::require_field(j, "frame"),
                                   "operator spec: frame");
      if (spec.frame.rows() != n)
        throw InputError(
            "operator spec: frame vectors must have length n");
      break;
    }
    case OperatorKind::cyclic_shift:
      break;
    case OperatorKind::block_rotation: {
      const Json& turns = detail::require_field(j, "turns");
      if (!turns.is_array() || turns.empty())
        throw InputError("operator spec: turns must be a nonempty array");
      for (const auto& t : turns) {
        if (!t.is_string())
          throw InputError("operator spec: turns must be strings like "
                           "\"1/4\"");
        spec.turns.push_back(detail::turn_from_string(t.get<std::string>()));
      }
      if (n != static_cast<Index>(2 * spec.turns.size()))
        throw InputError(
            "operator spec: a block rotation with k turns needs n = 2k");
      break;
    }
    case OperatorKind::signed_permutation: {
      const Json& perm = detail::require_field(j, "perm");
      const Json& signs = detail::require_field(j, "signs");
      if (!perm.is_array() || !signs.is_array())
        throw InputError("operator spec: perm and signs must be arrays");
      for (const auto& p : perm) {
        if (!p.is_number_integer() || p.get<long long>() < 0)
          throw InputError(
              "operator spec: perm entries must be nonnegative integers");
        spec.perm.push_back(static_cast<Index>(p.get<long long>()));
      }
      for (const auto& s : signs) {
        if (!s.is_number_integer())
          throw InputError("operator spec: signs entries must be +1 or -1");
        spec.signs.push_back(static_cast<int>(s.get<long long>()));
      }
      if (static_cast<Index>(spec.perm.size()) != n ||
          static_cast<Index>(spec.signs.size()) != n)
        throw InputError("operator spec: perm and signs must have length n");
      break;
    }
    case OperatorKind::random_nonexpansive: {
      const Json& seed = detail::require_field(j, "seed");
      if (!seed.is_number_integer() || seed.get<long long>() < 0)
        throw InputError(
            "operator spec: seed must be a nonnegative integer");
      spec.seed = seed.get<std::uint64_t>();
      if (auto it = j.find("norm_cap"); it != j.end()) {
        if (!it->is_number())
          throw InputError("operator spec: norm_cap must be a number");
        spec.norm_cap = it->get<double>();
      }
      if (!(spec.norm_cap > 0.0) || spec.norm_cap > 1.0)
        throw InputError("operator spec: norm_cap must lie in (0, 1]");
      break;
    }
  }
  return spec;
}

inline OperatorSpec parse_spec_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("operator spec: invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof())
    throw InputError("failed while reading '" + path + "'");
  return buf.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open file '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out.good()) throw InputError("failed while writing '" + path + "'");
}

inline OperatorSpec load_spec_file(const std::string& path) {
  return parse_spec_text(read_text_file(path));
}

inline Json check_to_json(const CheckReport& check) {
  Json j;
  j["check_id"] = check.check_id;
  j["claim"] = check.claim;
  j["residual"] = check.residual;
  j["tol"] = check.tol;
  j["pass"] = check.pass;
  j["skipped"] = check.skipped;
  return j;
}

inline Json checks_to_json(const std::vector<CheckReport>& checks) {
  Json arr = Json::array();
  for (const auto& check : checks) arr.push_back(check_to_json(check));
  return arr;
}

struct CheckTally {
  int total = 0;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
};

inline CheckTally tally_checks(const std::vector<CheckReport>& checks) {
  CheckTally t;
  t.total = static_cast<int>(checks.size());
  for (const auto& check : checks) {
    if (check.skipped)
      ++t.skipped;
    else if (check.pass)
      ++t.passed;
    else
      ++t.failed;
  }
  return t;
}

inline Json verify_report_json(const OperatorSpec& spec,
                               const SuiteOptions& opt,
                               const std::vector<CheckReport>& checks) {
  const CheckTally t = tally_checks(checks);
  Json j;
  j["spec"] = spec_to_json(spec);
  j["suite"] = opt.suite;
  j["seed"] = opt.seed;
  j["m_max"] = opt.m_max;
  j["checks"] = checks_to_json(checks);
  j["summary"] = {{"total", t.total},
                  {"passed", t.passed},
                  {"failed", t.failed},
                  {"skipped", t.skipped}};
  j["all_pass"] = all_pass(checks);
  return j;
}

inline Json analysis_to_json(const DisplacementAnalysis& a) {
  Json j;
  j["n"] = a.n;
  j["operator"] = matrix_to_json(a.R);
  j["fixed_dim"] = a.fixed_space.dim();
  j["moving_dim"] = a.moving_space.dim();
  j["fixed_basis"] = frame_to_json(a.fixed_space.basis());
  j["moving_basis"] = frame_to_json(a.moving_space.basis());
  j["proj_fixed"] = matrix_to_json(a.proj_fixed);
  j["proj_moving"] = matrix_to_json(a.proj_moving);
  j["displacement"] = matrix_to_json(a.displacement);
  j["displacement_pinv"] = matrix_to_json(a.displacement_pinv);
  j["selection"] = matrix_to_json(a.selection);
  if (a.min_modulus)
    j["min_modulus"] = *a.min_modulus;
  else
    j["min_modulus"] = nullptr;
  j["resolvent_double"] = matrix_to_json(a.resolvent_double);
  j["half_shift_inverse"] = matrix_to_json(a.half_shift_inverse);
  return j;
}

inline Json gallery_to_json(const GalleryReport& rep) {
  Json blocks = Json::array();
  for (const auto& block : rep.blocks) {
    Json b;
    b["name"] = block.name;
    b["checks"] = checks_to_json(block.checks);
    blocks.push_back(std::move(b));
  }
  Json discrepancies = Json::array();
  for (const auto& d : rep.discrepancies) {
    Json dj;
    dj["block"] = d.block;
    dj["stated"] = d.stated;
    dj["computed"] = d.computed;
    dj["residual_stated"] = d.residual_stated;
    dj["residual_computed"] = d.residual_computed;
    discrepancies.push_back(std::move(dj));
  }
  Json notes = Json::array();
  for (const auto& note : rep.notes) {
    Json nj;
    nj["block"] = note.block;
    nj["text"] = note.text;
    nj["residual_preferred"] = note.residual_preferred;
    nj["residual_variant"] = note.residual_variant;
    notes.push_back(std::move(nj));
  }
  Json j;
  j["n"] = rep.n;
  j["dim_u"] = rep.dim_u;
  j["seed"] = rep.seed;
  j["closed_form_tol"] = rep.closed_form_tol;
  j["blocks"] = std::move(blocks);
  j["discrepancies"] = std::move(discrepancies);
  j["notes"] = std::move(notes);
  j["all_pass"] = rep.all_pass;
  return j;
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string render_checks_text(const std::vector<CheckReport>& checks) {
  std::size_t width = std::string("check").size();
  for (const auto& check : checks)
    width = std::max(width, check.check_id.size());

  std::ostringstream out;
  out << "check";
  out << std::string(width - 5, ' ') << "  status  residual   tol\n";
  for (const auto& check : checks) {
    out << check.check_id
        << std::string(width - check.check_id.size(), ' ') << "  ";
    if (check.skipped) {
      out << "skip    -          -\n";
      out << "  " << check.claim << "\n";
    } else {
      out << (check.pass ? "pass" : "FAIL") << "    "
          << detail::sci(check.residual) << "  " << detail::sci(check.tol)
          << "\n";
      if (!check.pass) out << "  claim: " << check.claim << "\n";
    }
  }
  const CheckTally t = tally_checks(checks);
  out << t.total << " checks: " << t.passed << " passed, " << t.failed
      << " failed, " << t.skipped << " skipped\n";
  return out.str();
}

namespace detail {

inline void render_matrix(std::ostringstream& out, const char* name,
                          const Matrix& M) {
  out << name << " (" << M.rows() << " x " << M.cols() << "):\n";
  for (Index i = 0; i < M.rows(); ++i) {
    out << " ";
    for (Index j = 0; j < M.cols(); ++j) out << " " << num(M(i, j));
    out << "\n";
  }
}

}  // namespace detail

inline std::string render_analysis_text(const DisplacementAnalysis& a) {
  std::ostringstream out;
  out << "ambient dimension: " << a.n << "\n";
  out << "fixed space dimension: " << a.fixed_space.dim() << "\n";
  out << "moving space dimension: " << a.moving_space.dim() << "\n";
  if (a.min_modulus)
    out << "smallest positive singular value of Id - R: "
        << detail::num(*a.min_modulus) << "\n";
  else
    out << "smallest positive singular value of Id - R: none (R = Id)\n";
  detail::render_matrix(out, "operator R", a.R);
  detail::render_matrix(out, "displacement Id - R", a.displacement);
  detail::render_matrix(out, "projector onto the fixed space", a.proj_fixed);
  detail::render_matrix(out, "projector onto the moving space", a.proj_moving);
  detail::render_matrix(out, "pseudoinverse of Id - R", a.displacement_pinv);
  detail::render_matrix(out, "selection S", a.selection);
  detail::render_matrix(out, "resolvent of 2S", a.resolvent_double);
  detail::render_matrix(out, "inverse of Id/2 + S", a.half_shift_inverse);
  return out.str();
}

inline std::string render_gallery_text(const GalleryReport& rep) {
  std::ostringstream out;
  out << "closed-form gallery: n = " << rep.n << ", dimU = " << rep.dim_u
      << ", seed = " << rep.seed << ", tol = " << detail::sci(rep.closed_form_tol)
      << "\n\n";
  for (const auto& block : rep.blocks) {
    out << "[" << block.name << "]\n";
    out << render_checks_text(block.checks) << "\n";
  }
  for (const auto& d : rep.discrepancies) {
    out << "DISCREPANCY [" << d.block << "]: stated form \"" << d.stated
        << "\" does not hold (distance " << detail::sci(d.residual_stated)
        << "); computed form \"" << d.computed << "\" holds (distance "
        << detail::sci(d.residual_computed) << ")\n";
  }
  for (const auto& note : rep.notes) {
    out << "note [" << note.block << "]: " << note.text
        << " (preferred distance " << detail::sci(note.residual_preferred)
        << ", variant distance " << detail::sci(note.residual_variant)
        << ")\n";
  }
  out << (rep.all_pass ? "gallery: all checks passed\n"
                       : "gallery: FAILURES present\n");
  return out.str();
}

}  // namespace dispmap
