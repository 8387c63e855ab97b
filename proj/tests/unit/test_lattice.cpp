#include <doctest.h>

#include "instances.hpp"
#include "oracles.hpp"
#include "pfg/catalog.hpp"
#include "pfg/group_ops.hpp"
#include "pfg/lattice.hpp"

using namespace pfg;
namespace o = pfg::oracle;

namespace {

std::map<std::size_t, std::size_t> index_counts(const SubgroupCatalog& c) {
  std::map<std::size_t, std::size_t> m;
  for (const auto& s : c.entries) ++m[s.index()];
  return m;
}

Subgroup of_order(const std::vector<Subgroup>& list, std::size_t n) {
  for (const auto& s : list)
    if (s.size() == n) return s;
  FAIL("no subgroup of order " << n);
  return list.front();
}

}  // namespace

TEST_CASE("enumerate_subgroups") {
  auto s3 = symmetric(3);
  auto one = enumerate_subgroups(s3, 1);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].is_whole());

  auto three = enumerate_subgroups(s3, 3);
  CHECK(three.complete);
  CHECK(index_counts(three) == std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}, {3, 3}});

  auto z4 = enumerate_subgroups(cyclic(4), 2);
  REQUIRE(z4.entries.size() == 2);
  CHECK(z4.entries[0].elements() == std::vector<Elem>{0, 2});
  CHECK(z4.entries[1].is_whole());

  CHECK(enumerate_subgroups(symmetric(4), 24).entries.size() == 30);
}

TEST_CASE("enumerate_subgroups reports an exhausted budget") {
  auto cat = enumerate_subgroups(symmetric(5), 120, 10);
  CHECK_FALSE(cat.complete);
}

TEST_CASE("enumerate_normals") {
  auto z12 = cyclic(12);
  CHECK(enumerate_normals(z12).size() == enumerate_subgroups(z12, 12).entries.size());
  auto s3 = enumerate_normals(symmetric(3));
  REQUIRE(s3.size() == 3);
  CHECK(s3[0].is_trivial());
  CHECK(s3[1].size() == 3);
  CHECK(s3[2].is_whole());
  CHECK(enumerate_normals(dihedral(4)).size() == 6);
  CHECK(enumerate_normals(symmetric(4)).size() == 4);
}

TEST_CASE("residual_intersection") {
  auto s3 = symmetric(3);
  CHECK(residual_intersection(s3, 1).is_whole());
  CHECK(residual_intersection(s3, 2).size() == 3);

  auto c4 = cyclic(4), c2 = cyclic(2);
  auto d8 = semidirect(c4, c2, invert_action(c4, c2));
  auto i2 = residual_intersection(d8, 2);
  CHECK(i2.size() == 2);
  for (Elem x : i2.elements())
    for (Elem y = 0; y < 8; ++y) CHECK(d8->mul(x, y) == d8->mul(y, x));
  CHECK(residual_intersection(d8, 8).is_trivial());

  // An automorphism swapping the two Klein subgroups leaves only the
  // rotations and the center among index-<=2 normals.
  auto z = direct_product(cyclic(2), cyclic(2));
  std::vector<Elem> swap(4);
  for (Elem x = 0; x < 4; ++x) {
    auto [a, b] = z->coordinates(x);
    swap[x] = z->from_coordinates(b, a);
  }
  AutoSet om(z, {Endomorphism(z, swap)});
  CHECK(invariant_normals(z, 2, om).size() == 2);
  CHECK(residual_intersection(z, 2, om).size() == 2);
  CHECK(residual_intersection(z, 2).is_trivial());
}

TEST_CASE("AutoSet rejects non-bijections") {
  auto z4 = cyclic(4);
  try {
    AutoSet(z4, {Endomorphism(z4, {0, 2, 0, 2})});
    FAIL("accepted a non-bijective map");
  } catch (const Error&) {
  }
}

TEST_CASE("o_pi") {
  auto s3 = symmetric(3);
  CHECK(o_pi(s3, {2, 3}).is_trivial());
  CHECK(o_pi(s3, {2}).size() == 3);
  CHECK(o_pi(s3, {3}).is_whole());
  CHECK(o_pi(cyclic(12), {2}).size() == 3);
}

TEST_CASE("count_profile") {
  auto triv = count_profile(cyclic(1), 3);
  CHECK(triv.counts == std::map<std::size_t, std::size_t>{{1, 1}});
  CHECK(count_profile(symmetric(3), 3).counts == std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}, {3, 3}});
  auto v4 = direct_product(cyclic(2), cyclic(2));
  CHECK(count_profile(v4, 2).counts == std::map<std::size_t, std::size_t>{{1, 1}, {2, 3}});
}

TEST_CASE("maximal_normals") {
  auto m = maximal_normals(symmetric(4));
  REQUIRE(m.size() == 1);
  CHECK(m[0].size() == 12);
  CHECK(maximal_normals(cyclic(6)).size() == 2);
}

TEST_CASE("property: lattice against the closure oracle") {
  for (const auto& c : pfg::testing::catalog_groups(32)) {
    auto cat = enumerate_subgroups(c.group, c.group->order());
    auto oracle = o::all_subgroups(*c.group);
    REQUIRE(cat.entries.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(cat.entries[i].elements() == oracle[i]);
    for (std::size_t n : {2, 3, 4}) {
      auto i = residual_intersection(c.group, n);
      o::Set meet = o::all_elements(*c.group);
      for (const auto& s : o::normal_subgroups(*c.group))
        if (c.group->order() / s.size() <= n) meet = o::meet(meet, s);
      CHECK(i.elements() == meet);
    }
    for (std::set<std::uint64_t> pi : {std::set<std::uint64_t>{2}, std::set<std::uint64_t>{3}}) {
      CHECK(o_pi(c.group, pi).elements() == o::o_pi(*c.group, o::all_elements(*c.group), pi));
    }
  }
}

TEST_CASE("D8 has a normal subgroup of order 4") {
  auto d8 = dihedral(4);
  auto rot = of_order(enumerate_normals(d8), 4);
  CHECK(is_normal(rot));
}
