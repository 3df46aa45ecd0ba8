// Command-line front end: write operator spec files, analyze the
// displacement structure of an operator, run verification suites, and
// reproduce the closed-form gallery. Exit codes: 0 all checks pass, 1 a
// check failed or the computation lost accuracy, 2 bad input, 3 the operator
// is not nonexpansive.

#include <dispmap/dispmap.hpp>

#include "CLI11.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace {

using namespace dispmap;

Matrix parse_rows_arg(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find(';', pos), text.size());
    std::vector<double> row;
    std::size_t p = pos;
    while (p <= end) {
      const std::size_t q = std::min(text.find(',', p), end);
      const std::string tok = text.substr(p, q - p);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(
                                        tok[used])))
          ++used;
        if (used != tok.size()) throw InputError("");
      } catch (const std::exception&) {
        throw InputError("--rows: '" + tok + "' is not a number");
      }
      p = q + 1;
      if (q == end) break;
    }
    rows.push_back(std::move(row));
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (rows.empty()) throw InputError("--rows: empty matrix");
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols)
      throw InputError("--rows: rows have different lengths");
  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      M(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return M;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t q = std::min(text.find(',', pos), text.size());
    out.push_back(text.substr(pos, q - pos));
    if (q == text.size()) break;
    pos = q + 1;
  }
  return out;
}

std::vector<RationalTurn> parse_turns_arg(const std::string& text) {
  std::vector<RationalTurn> turns;
  for (const auto& tok : split_commas(text))
    turns.push_back(dispmap::detail::turn_from_string(tok));
  if (turns.empty()) throw InputError("--turns: no fractions given");
  return turns;
}

std::vector<Index> parse_perm_arg(const std::string& text) {
  std::vector<Index> perm;
  for (const auto& tok : split_commas(text)) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size() || v < 0) throw InputError("");
      perm.push_back(static_cast<Index>(v));
    } catch (const std::exception&) {
      throw InputError("--perm: '" + tok + "' is not a nonnegative integer");
    }
  }
  return perm;
}

std::vector<int> parse_signs_arg(const std::string& text) {
  std::vector<int> signs;
  for (const auto& tok : split_commas(text)) {
    if (tok == "1" || tok == "+1")
      signs.push_back(1);
    else if (tok == "-1")
      signs.push_back(-1);
    else
      throw InputError("--signs: '" + tok + "' must be +1 or -1");
  }
  return signs;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::fputs(content.c_str(), stdout);
  else
    write_text_file(out_path, content);
}

struct MakeArgs {
  std::string kind;
  Index n = 0;
  Index dim_u = 0;
  std::uint64_t seed = 1;
  double norm_cap = 0.95;
  std::string rows, turns, perm, signs, out;
};

int run_make(const MakeArgs& args) {
  OperatorSpec spec;
  auto need_n = [&args]() {
    if (args.n < 1) throw InputError("make: --n is required for this kind");
  };
  auto frame_spec = [&](OperatorKind kind) {
    need_n();
    if (args.dim_u < 1)
      throw InputError("make: --dimU is required for this kind");
    return make_frame_spec(kind, args.n, args.dim_u, args.seed);
  };
  if (args.kind == "projection")
    spec = frame_spec(OperatorKind::projection);
  else if (args.kind == "neg-projection")
    spec = frame_spec(OperatorKind::neg_projection);
  else if (args.kind == "reflection")
    spec = frame_spec(OperatorKind::reflection);
  else if (args.kind == "neg-reflection")
    spec = frame_spec(OperatorKind::neg_reflection);
  else if (args.kind == "cyclic") {
    need_n();
    spec = make_cyclic_spec(args.n);
  } else if (args.kind == "rotation") {
    if (args.turns.empty()) throw InputError("make rotation: --turns required");
    spec = make_rotation_spec(parse_turns_arg(args.turns));
  } else if (args.kind == "signed-perm") {
    if (args.perm.empty()) throw InputError("make signed-perm: --perm required");
    auto perm = parse_perm_arg(args.perm);
    auto signs = args.signs.empty() ? std::vector<int>(perm.size(), 1)
                                    : parse_signs_arg(args.signs);
    spec = make_signed_perm_spec(std::move(perm), std::move(signs));
  } else if (args.kind == "random") {
    need_n();
    if (!(args.norm_cap > 0.0) || args.norm_cap > 1.0)
      throw InputError("make random: --norm-cap must lie in (0, 1]");
    spec = make_random_spec(args.n, args.seed, args.norm_cap);
  } else if (args.kind == "matrix") {
    if (args.rows.empty()) throw InputError("make matrix: --rows required");
    Matrix M = parse_rows_arg(args.rows);
    if (M.rows() != M.cols())
      throw InputError("make matrix: --rows must be square");
    spec = make_matrix_spec(std::move(M));
  } else {
    throw InputError(
        "make: unknown kind '" + args.kind +
        "' (expected projection, neg-projection, reflection, "
        "neg-reflection, cyclic, rotation, signed-perm, random, or matrix)");
  }

  // realizing validates the payload before anything is written
  realize(spec);
  emit(spec_to_json(spec).dump(2) + "\n", args.out);
  return 0;
}

Tolerances tolerances_from_flag(double tol_flag) {
  Tolerances tol;
  if (tol_flag > 0.0) {
    tol.identity_tol = tol_flag;
    tol.psd_tol = tol_flag;
  }
  tol.validate();
  return tol;
}

int run_analyze(const std::string& spec_path, double tol_flag,
                const std::string& format, const std::string& out) {
  const Tolerances tol = tolerances_from_flag(tol_flag);
  const OperatorSpec spec = load_spec_file(spec_path);
  const DisplacementAnalysis a = analyze(realize(spec, tol), tol);
  if (format == "json")
    emit(analysis_to_json(a).dump(2) + "\n", out);
  else
    emit(render_analysis_text(a), out);
  return 0;
}

int run_verify(const std::string& spec_path, const SuiteOptions& opt,
               double tol_flag, const std::string& format,
               const std::string& out) {
  const Tolerances tol = tolerances_from_flag(tol_flag);
  const OperatorSpec spec = load_spec_file(spec_path);
  const DisplacementAnalysis a = analyze(realize(spec, tol), tol);
  const std::vector<CheckReport> checks = run_suite(a, opt);
  if (format == "json") {
    emit(verify_report_json(spec, opt, checks).dump(2) + "\n", out);
  } else {
    std::string text = "operator: " + std::string(kind_name(spec.kind)) +
                       ", n = " + std::to_string(spec.n) +
                       ", suite = " + opt.suite +
                       ", seed = " + std::to_string(opt.seed) + "\n";
    emit(text + render_checks_text(checks), out);
  }
  return all_pass(checks) ? 0 : 1;
}

int run_gallery_cmd(Index n, Index dim_u, std::uint64_t seed, double tol_flag,
                    const std::string& format, const std::string& out) {
  const Tolerances tol = tolerances_from_flag(tol_flag);
  const GalleryReport rep = run_gallery(n, dim_u, seed, tol);
  if (format == "json")
    emit(gallery_to_json(rep).dump(2) + "\n", out);
  else
    emit(render_gallery_text(rep), out);
  return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "displacement toolkit: fixed spaces, selections, set-valued inverses, "
      "and resolvent identities for linear nonexpansive operators"};
  app.require_subcommand(1);

  MakeArgs make_args;
  auto* make_cmd =
      app.add_subcommand("make", "write an operator spec file");
  make_cmd->add_option("kind", make_args.kind,
                       "projection | neg-projection | reflection | "
                       "neg-reflection | cyclic | rotation | signed-perm | "
                       "random | matrix")
      ->required();
  make_cmd->add_option("--n", make_args.n, "ambient dimension");
  make_cmd->add_option("--dimU", make_args.dim_u,
                       "frame dimension for the U-based kinds");
  make_cmd->add_option("--seed", make_args.seed,
                       "seed for the frame or random draw (default 1)");
  make_cmd->add_option("--norm-cap", make_args.norm_cap,
                       "operator norm of the random draw (default 0.95)");
  make_cmd->add_option("--rows", make_args.rows,
                       "matrix entries, rows separated by ';', e.g. "
                       "\"0,1;1,0\"");
  make_cmd->add_option("--turns", make_args.turns,
                       "rotation angles as fractions of a turn, e.g. "
                       "\"1/4,1/6\"");
  make_cmd->add_option("--perm", make_args.perm,
                       "0-based permutation, e.g. \"1,2,0\"");
  make_cmd->add_option("--signs", make_args.signs,
                       "signs for the permutation, e.g. \"1,-1,1\"");
  make_cmd->add_option("-o,--out", make_args.out,
                       "output path (stdout when omitted)");

  std::string analyze_spec, analyze_format = "text", analyze_out;
  double analyze_tol = 0.0;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "fixed space, moving space, selection, pseudoinverse, and "
                 "resolvents of Id - R");
  analyze_cmd->add_option("spec", analyze_spec, "operator spec file")
      ->required();
  analyze_cmd->add_option("--tol", analyze_tol,
                          "identity and psd tolerance override");
  analyze_cmd->add_option("--format", analyze_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("-o,--out", analyze_out,
                          "output path (stdout when omitted)");

  std::string verify_spec, verify_format = "text", verify_out;
  double verify_tol = 0.0;
  SuiteOptions suite_opt;
  auto* verify_cmd = app.add_subcommand(
      "verify", "run a verification suite and report one check per claim");
  verify_cmd->add_option("spec", verify_spec, "operator spec file")
      ->required();
  verify_cmd->add_option("--suite", suite_opt.suite,
                         "all | inverse | resolvent | isometry | properties");
  verify_cmd->add_option("--seed", suite_opt.seed,
                         "seed for the uniqueness perturbations (default 1)");
  verify_cmd->add_option("--m-max", suite_opt.m_max,
                         "order detection cap for the isometry suite "
                         "(default 24)");
  verify_cmd->add_option("--perturbations", suite_opt.perturbations,
                         "rejected candidates per operator (default 20)");
  verify_cmd->add_option("--tol", verify_tol,
                         "identity and psd tolerance override");
  verify_cmd->add_option("--format", verify_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  verify_cmd->add_option("-o,--out", verify_out,
                         "output path (stdout when omitted)");

  Index gallery_n = 6, gallery_dim_u = 3;
  std::uint64_t gallery_seed = 1;
  std::string gallery_format = "text", gallery_out;
  double gallery_tol = 0.0;
  auto* gallery_cmd = app.add_subcommand(
      "gallery", "closed-form catalogue over a seeded frame and the "
                 "coordinate cycles of orders 2 through 8");
  gallery_cmd->add_option("--n", gallery_n, "ambient dimension (default 6)");
  gallery_cmd->add_option("--dimU", gallery_dim_u,
                          "frame dimension, 1 <= dimU < n (default 3)");
  gallery_cmd->add_option("--seed", gallery_seed, "frame seed (default 1)");
  gallery_cmd->add_option("--tol", gallery_tol,
                          "identity and psd tolerance override");
  gallery_cmd->add_option("--format", gallery_format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));
  gallery_cmd->add_option("-o,--out", gallery_out,
                          "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (make_cmd->parsed()) return run_make(make_args);
    if (analyze_cmd->parsed())
      return run_analyze(analyze_spec, analyze_tol, analyze_format,
                         analyze_out);
    if (verify_cmd->parsed())
      return run_verify(verify_spec, suite_opt, verify_tol, verify_format,
                        verify_out);
    if (gallery_cmd->parsed())
      return run_gallery_cmd(gallery_n, gallery_dim_u, gallery_seed,
                             gallery_tol, gallery_format, gallery_out);
    std::fputs("error: no subcommand given\n", stderr);
    return 2;
  } catch (const NotNonexpansiveError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
