#include <dispmap/dispmap.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace dispmap;

namespace {

bool sorted_by_id(const std::vector<CheckReport>& checks) {
  for (std::size_t i = 1; i < checks.size(); ++i)
    if (checks[i - 1].check_id > checks[i].check_id) return false;
  return true;
}

int count_prefix(const std::vector<CheckReport>& checks,
                 const std::string& prefix) {
  int c = 0;
  for (const auto& check : checks)
    if (check.check_id.rfind(prefix, 0) == 0) ++c;
  return c;
}

const CheckReport& find_check(const std::vector<CheckReport>& checks,
                              const std::string& id) {
  for (const auto& check : checks)
    if (check.check_id == id) return check;
  FAIL("check id not found: " << id);
  throw std::logic_error("unreachable");
}

// Families of ids collapse onto one catalogue entry.
std::string normalize_id(const std::string& id) {
  static const std::regex reject("^inverse\\.unique\\.reject-[0-9]+$");
  static const std::regex shift("^gallery\\.shift-[0-9]+\\.");
  if (std::regex_match(id, reject)) return "inverse.unique.reject-NN";
  return std::regex_replace(id, shift, "gallery.shift-M.");
}

using Catalogue = std::map<std::string, std::set<std::string>>;

Catalogue parse_catalogue(const std::string& text) {
  Catalogue out;
  std::istringstream in(text);
  std::string line;
  std::string current;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("### ", 0) == 0) {
      current = line.substr(4);
      out[current];
    } else if (!line.empty() && line.front() == '#') {
      current.clear();
    } else if (!line.empty() && !current.empty()) {
      out[current].insert(line);
    }
  }
  return out;
}

// Operators chosen so that, together, they exercise every claim variant the
// suites can emit: the full set of live checks, every skip reason, and both
// perturbation labels.
Catalogue emitted_catalogue() {
  Catalogue cat;
  auto absorb = [&cat](const std::vector<CheckReport>& checks) {
    for (const auto& check : checks)
      cat[normalize_id(check.check_id)].insert(check.claim);
  };
  SuiteOptions opt;
  absorb(run_suite(analyze(make_cyclic_shift(3).R), opt));
  absorb(run_suite(analyze(Matrix::Identity(3, 3)), opt));
  NormalSampler rng(7);
  absorb(run_suite(analyze(rng.nonexpansive(4, 0.9)), opt));
  absorb(run_suite(analyze(make_block_rotation({{1, 25}}).R), opt));
  auto gallery = run_gallery(6, 3, 1);
  for (const auto& block : gallery.blocks) absorb(block.checks);
  return cat;
}

}  // namespace

TEST_CASE("the check catalogue and the emitted checks agree exactly") {
  const std::string doc_path =
      std::string(DISPMAP_DOCS_DIR) + "/TRACEABILITY.md";
  const Catalogue documented = parse_catalogue(read_text_file(doc_path));
  const Catalogue emitted = emitted_catalogue();

  for (const auto& [id, claims] : emitted) {
    INFO("emitted id: " << id);
    auto it = documented.find(id);
    REQUIRE(it != documented.end());
    for (const auto& claim : claims) {
      INFO("emitted claim: " << claim);
      CHECK(it->second.count(claim) == 1);
    }
  }
  for (const auto& [id, claims] : documented) {
    INFO("documented id: " << id);
    auto it = emitted.find(id);
    REQUIRE(it != emitted.end());
    for (const auto& claim : claims) {
      INFO("documented claim: " << claim);
      CHECK(it->second.count(claim) == 1);
    }
  }
}

TEST_CASE("the full suite on a 3-cycle has the expected shape") {
  auto a = analyze(make_cyclic_shift(3).R);
  SuiteOptions opt;
  auto checks = run_suite(a, opt);

  CHECK(checks.size() == 61);
  CHECK(sorted_by_id(checks));
  CHECK(all_pass(checks));
  CHECK(count_prefix(checks, "inverse.") == 34);
  CHECK(count_prefix(checks, "resolvent.") == 4);
  CHECK(count_prefix(checks, "isometry.") == 9);
  CHECK(count_prefix(checks, "properties.") == 14);
  CHECK(count_prefix(checks, "inverse.unique.reject-") == 20);
  for (const auto& check : checks) CHECK_FALSE(check.skipped);
}

TEST_CASE("single suites select exactly their prefix") {
  auto a = analyze(make_cyclic_shift(4).R);
  for (const std::string name :
       {"inverse", "resolvent", "isometry", "properties"}) {
    SuiteOptions opt;
    opt.suite = name;
    auto checks = run_suite(a, opt);
    CHECK(!checks.empty());
    CHECK(sorted_by_id(checks));
    CHECK(count_prefix(checks, name + ".") ==
          static_cast<int>(checks.size()));
  }
  SuiteOptions bad;
  bad.suite = "everything";
  CHECK_THROWS_AS(run_suite(a, bad), InputError);
}

TEST_CASE("perturbation count controls the reject family") {
  auto a = analyze(make_cyclic_shift(3).R);
  SuiteOptions opt;
  opt.suite = "inverse";
  opt.perturbations = 5;
  auto checks = run_suite(a, opt);
  CHECK(count_prefix(checks, "inverse.unique.reject-") == 5);
  find_check(checks, "inverse.unique.reject-04");

  opt.perturbations = 0;
  CHECK(count_prefix(run_suite(a, opt), "inverse.unique.reject-") == 0);

  opt.perturbations = -1;
  CHECK_THROWS_AS(run_suite(a, opt), InputError);
  opt.perturbations = 1000;
  CHECK_THROWS_AS(run_suite(a, opt), InputError);
}

TEST_CASE("both perturbation labels appear and both pass") {
  auto a = analyze(make_cyclic_shift(3).R);
  auto checks = inverse_suite(a, 1, 4);
  const auto& even = find_check(checks, "inverse.unique.reject-00");
  const auto& odd = find_check(checks, "inverse.unique.reject-01");
  CHECK(even.claim.find("decomposition") != std::string::npos);
  CHECK(odd.claim.find("sandwich") != std::string::npos);
  CHECK(even.pass);
  CHECK(odd.pass);
  CHECK(even.tol == 0.0);

  // a different seed still rejects every perturbation
  for (const auto& check : inverse_suite(a, 777, 6))
    CHECK(check.pass);
}

TEST_CASE("identity operator: range checks skip, isometry suite skips") {
  auto a = analyze(Matrix::Identity(3, 3));
  SuiteOptions opt;
  auto checks = run_suite(a, opt);
  CHECK(all_pass(checks));

  const auto& upper = find_check(checks, "inverse.range.upper");
  CHECK(upper.skipped);
  CHECK(upper.pass);
  CHECK(upper.residual == 0.0);
  CHECK(upper.tol == 0.0);
  CHECK(upper.claim.rfind("skipped:", 0) == 0);
  CHECK(find_check(checks, "inverse.range.lower").skipped);

  int iso_skipped = 0;
  for (const auto& check : checks)
    if (check.check_id.rfind("isometry.", 0) == 0 && check.skipped)
      ++iso_skipped;
  CHECK(iso_skipped == 9);
  CHECK(find_check(checks, "isometry.sandwich").claim.find("order 1") !=
        std::string::npos);

  // the uniqueness certificate still works: candidates must equal 0 = S
  CHECK(find_check(checks, "inverse.unique.accept").pass);
  CHECK(find_check(checks, "inverse.unique.reject-00").pass);
}

TEST_CASE("non-isometries and high orders skip the isometry suite") {
  NormalSampler rng(7);
  auto contraction = analyze(rng.nonexpansive(4, 0.9));
  auto checks = isometry_suite(contraction);
  REQUIRE(checks.size() == 9);
  for (const auto& check : checks) {
    CHECK(check.skipped);
    CHECK(check.claim.find("not an isometry") != std::string::npos);
  }

  auto slow = analyze(make_block_rotation({{1, 25}}).R);
  for (const auto& check : isometry_suite(slow, 24)) {
    CHECK(check.skipped);
    CHECK(check.claim.find("no finite order") != std::string::npos);
  }
  // raising the cap revives the suite
  for (const auto& check : isometry_suite(slow, 25)) {
    CHECK_FALSE(check.skipped);
    CHECK(check.pass);
  }
}

TEST_CASE("m_max flows through the options") {
  auto slow = analyze(make_block_rotation({{1, 25}}).R);
  SuiteOptions opt;
  opt.suite = "isometry";
  opt.m_max = 25;
  for (const auto& check : run_suite(slow, opt)) CHECK_FALSE(check.skipped);
}

TEST_CASE("suite passes across a structured and random corpus") {
  std::vector<Matrix> ops;
  ops.push_back(make_cyclic_shift(5).R);
  ops.push_back(make_block_rotation({{1, 3}, {1, 4}}).R);
  ops.push_back(make_signed_permutation({1, 2, 0, 4, 3}, {1, 1, -1, 1, 1}).R);
  NormalSampler rng(12);
  Matrix U = rng.orthonormal(6, 2);
  Matrix P = U * U.transpose();
  ops.push_back(P);
  ops.push_back(-P);
  ops.push_back(2.0 * P - Matrix::Identity(6, 6));
  for (std::uint64_t seed : {101, 102, 103})
    ops.push_back(NormalSampler(seed).nonexpansive(8, 0.95));

  SuiteOptions opt;
  for (const auto& R : ops) {
    auto checks = run_suite(analyze(R), opt);
    INFO("operator with n = " << R.rows());
    CHECK(all_pass(checks));
    CHECK(sorted_by_id(checks));
  }
}
