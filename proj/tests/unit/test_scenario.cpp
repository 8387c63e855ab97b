#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pfg/scenario.hpp"

using namespace pfg;

namespace {

ErrorKind validate_kind(const std::string& src, const ValidateOptions& opts = {}) {
  auto r = parse(src);
  REQUIRE_MESSAGE(r.ok(), (r.diagnostics.empty() ? "" : format(r.diagnostics[0])));
  try {
    validate(*r.spec, opts);
  } catch (const ScenarioError& e) {
    CHECK(e.loc().line >= 1);
    return e.kind();
  }
  FAIL("validated");
  return ErrorKind::Io;
}

ParseDiagnostic first_diagnostic(const std::string& src) {
  auto r = parse(src);
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  return r.diagnostics[0];
}

const char* kExample =
    "group G = semidirect(cyclic(9), units_mod(3,2), mult_action)\n"
    "endo f on G = scale_first(3)\n"
    "analyze theorem_a(G, f)\n";

}  // namespace

TEST_CASE("parse") {
  auto empty = parse("");
  REQUIRE(empty.ok());
  CHECK(empty.spec->statements.empty());
  CHECK(empty.spec->analyses().empty());

  auto r = parse(kExample);
  REQUIRE(r.ok());
  CHECK(r.spec->analyses().size() == 1);
  CHECK(r.spec->definitions().size() == 2);

  auto c = parse("# comment only\n\n   # indented\n");
  REQUIRE(c.ok());
  CHECK(c.spec->statements.empty());
}

TEST_CASE("diagnostics carry line and column") {
  auto d = first_diagnostic("group G = cyclic(");
  CHECK(d.line == 1);
  CHECK(d.column == 17);
  CHECK(d.message.find("unclosed") != std::string::npos);

  d = first_diagnostic("group G = cyclic(4)\nfrobnicate G");
  CHECK(d.line == 2);
  CHECK(d.column == 1);
  CHECK(d.message.find("frobnicate") != std::string::npos);

  d = first_diagnostic("group G = cyclic(4, 5)");
  CHECK(d.message.find("arity") != std::string::npos);

  d = first_diagnostic("set colour = 3");
  CHECK(d.column == 5);

  d = first_diagnostic("group G = cyclic(99999999999999999999999)");
  CHECK(d.message.find("too large") != std::string::npos);

  auto text = format(first_diagnostic("group G = cyclic("));
  CHECK(text.find("1:17: error:") == 0);
  CHECK(text.find("group G = cyclic(") != std::string::npos);
  CHECK(text.find('^') != std::string::npos);
}

TEST_CASE("every bad statement is reported") {
  auto r = parse("frob\ngroup G = cyclic(4)\nwibble\n");
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].line == 1);
  CHECK(r.diagnostics[1].line == 3);
}

TEST_CASE("columns count code points") {
  auto d = first_diagnostic("set label = \"\xc3\xa9\xc3\xa9\" wibble");
  CHECK(d.column == 18);
}

TEST_CASE("round trip") {
  const char* src =
      "set label = \"x\"\n"
      "group A = cyclic(4)\n"
      "group G = product(A, cyclic(9))\n"
      "endo d on G = scale(0, 2)\n"
      "endo n on A = power(-1)\n"
      "endo m on A = map {g0 -> g0^3 * 1}\n"
      "endo r on G = map {g0 -> @2, g1 -> g1}\n"
      "semigroup L on G = {d} commutative\n"
      "tower T = units_semidirect(3) depth 2\n"
      "analyze hom_search(A, <g0^2>)\n"
      "analyze fewprimes(A, A, {2})\n"
      "analyze regulation(G, L, {})\n";
  auto a = parse(src);
  REQUIRE(a.ok());
  auto text = unparse(*a.spec);
  auto b = parse(text);
  REQUIRE(b.ok());
  CHECK(*a.spec == *b.spec);
  CHECK(unparse(*b.spec) == text);
}

TEST_CASE("validate") {
  auto r = parse(kExample);
  auto sc = validate(*r.spec);
  CHECK(sc.groups.at("G")->order() == 54);
  REQUIRE(sc.analyses.size() == 1);
  CHECK(sc.analyses[0].kind == "theorem_a");
  CHECK(sc.analyses[0].target == "G, f");

  auto t = parse("tower T = units_semidirect(3) depth 3\nanalyze theorem_a(T)\nanalyze theorem_b(T)\n");
  auto st = validate(*t.spec);
  CHECK(st.towers.size() == 1);
  CHECK(st.analyses.size() == 2);
}

TEST_CASE("validate errors") {
  try {
    validate(*parse("group G = cyclic(4)\ngroup H = cyclic(3)\nendo f on G = map {g0 -> @1}\n"
                    "hom h from G to H = map {g0 -> g0}\n")
                  .spec);
    FAIL("accepted a non-homomorphism");
  } catch (const ScenarioError& e) {
    CHECK(e.kind() == ErrorKind::NotAHomomorphism);
    CHECK(e.loc().line == 4);
    CHECK_FALSE(e.witness().empty());
  }
  CHECK(validate_kind("group G = cyclic(4)\ngroup G = cyclic(3)") == ErrorKind::DuplicateName);
  CHECK(validate_kind("endo f on G = identity") == ErrorKind::NameUnresolved);
  CHECK(validate_kind("group G = cyclic(4)\nanalyze theorem_a(G, G)") == ErrorKind::TypeMismatch);
  CHECK(validate_kind("group G = cyclic(6000)") == ErrorKind::OrderGuard);
  CHECK(validate_kind("set order_guard = 10\ngroup G = cyclic(12)") == ErrorKind::OrderGuard);
  CHECK(validate_kind("group G = cyclic(12)", {std::size_t{10}, ""}) == ErrorKind::OrderGuard);
  CHECK(validate_kind("group G = symmetric(3)\nendo a on G = conj(g0)\nendo b on G = conj(g1)\n"
                      "semigroup L on G = {a, b} commutative") == ErrorKind::CommutativityFailed);
  CHECK(validate_kind("group G = cyclic(4)\nanalyze o_pi(G, {4})") == ErrorKind::ParamOutOfRange);
}

TEST_CASE("table files") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "pfg_table_test";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "z3.table") << "0 1 2\n1 2 0\n2 0 1\n";
    std::ofstream(dir / "ragged.table") << "0 1\n1\n";
  }
  auto ok = validate(*parse("group Z = table(\"z3.table\")").spec, {std::nullopt, dir.string()});
  CHECK(ok.groups.at("Z")->order() == 3);
  CHECK(read_table_file((dir / "z3.table").string()).size() == 3);
  CHECK(validate_kind("group Z = table(\"ragged.table\")", {std::nullopt, dir.string()}) == ErrorKind::BadTable);
  CHECK(validate_kind("group Z = table(\"missing.table\")", {std::nullopt, dir.string()}) == ErrorKind::Io);
  fs::remove_all(dir);
}

TEST_CASE("analysis_kinds") {
  const auto& k = analysis_kinds();
  for (const char* name : {"theorem_a", "splitthm", "theorem_b", "regulation", "tfrelstab2", "shrinkind", "o_pi",
                           "fewprimes", "hom_search", "typef", "contraction"})
    CHECK_MESSAGE(std::find(k.begin(), k.end(), name) != k.end(), name);
}
