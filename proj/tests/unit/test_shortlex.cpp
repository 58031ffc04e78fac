#include <doctest.h>

#include <algorithm>

#include "cga/bs.hpp"
#include "cga/oracle.hpp"
#include "cga/shortlex.hpp"

using namespace cga;

TEST_CASE("successor steps") {
  OrderedAlphabet ab({"a", "b"});
  CHECK(join(successor(split_words("b b"), ab)) == "a a a");
  CHECK(join(successor(split_words("a b"), ab)) == "b a");
  CHECK(join(successor(Word{}, ab)) == "a");
  CHECK(join(successor(split_words("a"), ab)) == "b");
}

TEST_CASE("successor enumerates the first 500 strings in order") {
  OrderedAlphabet ab({"a", "b"});
  std::vector<Word> exhaustive{{}};
  for (std::size_t i = 0; exhaustive.size() < 600; ++i)
    for (const char* c : {"a", "b"}) {
      Word w = exhaustive[i];
      w.push_back(c);
      exhaustive.push_back(w);
    }
  std::sort(exhaustive.begin(), exhaustive.end(), [](const Word& u, const Word& v) {
    return u.size() != v.size() ? u.size() < v.size() : u < v;
  });
  Word v;
  for (std::size_t i = 0; i < 500; ++i) {
    REQUIRE(v == exhaustive[i]);
    Word next = successor(v, ab);
    REQUIRE(compare(v, next, ab) == std::strong_ordering::less);
    v = next;
  }
}

TEST_CASE("compare is length then lexicographic") {
  OrderedAlphabet ab({"a", "b"});
  CHECK(compare(split_words("b"), split_words("a a"), ab) == std::strong_ordering::less);
  CHECK(compare(split_words("a b"), split_words("b a"), ab) == std::strong_ordering::less);
  CHECK(compare(split_words("a b"), split_words("a b"), ab) == std::strong_ordering::equal);
  // The order is the alphabet's, not the tokens' spelling.
  OrderedAlphabet ba({"b", "a"});
  CHECK(compare(split_words("b"), split_words("a"), ba) == std::strong_ordering::less);
  CHECK(ab.first() == "a");
  CHECK(ab.last() == "b");
}

TEST_CASE("skip prefix jumps past every word sharing the prefix") {
  OrderedAlphabet ab({"a", "b"});
  CHECK(join(skip_prefix(split_words("a a b"), 2, ab)) == "a b a");
  CHECK(join(skip_prefix(split_words("b b a"), 2, ab)) == "a a a a");
  CHECK(join(skip_prefix(split_words("a b"), 1, ab)) == "b a");
}

TEST_CASE("geodesic normal forms") {
  FreeGroupOracle free;
  OrderedAlphabet x({"a", "a-", "b", "b-"});
  CHECK(join(*geodesic_normal_form(free, x, split_words("a a- b"))) == "b");
  CHECK(geodesic_normal_form(free, x, Word{})->empty());

  BSOracle bs(2, 3);
  OrderedAlphabet g({"a", "a-", "t", "t-"});
  Word a9(9, "a");
  auto v = geodesic_normal_form(bs, g, a9);
  REQUIRE(v);
  CHECK(v->size() == 8);
  CHECK(bs.equal(*v, a9));
  // Nothing Shortlex-smaller is equal to it.
  for (Word u; compare(u, *v, g) == std::strong_ordering::less; u = successor(u, g)) REQUIRE_FALSE(bs.equal(u, a9));
  CHECK_FALSE(geodesic_normal_form(bs, g, a9, 4).has_value());
}

TEST_CASE("geodesic length bounds") {
  FreeGroupOracle free;
  OrderedAlphabet x({"a", "a-", "b", "b-"});
  for (const char* w : {"a b a", "b- a- b", "a a b b-"}) {
    Word u = split_words(w);
    auto len = geodesic_length(free, x, u);
    REQUIRE(len);
    CHECK(*len <= u.size());
    if (free_reduce(u) == u) CHECK(*len == u.size());
  }
  GeodesicTable table(free, x, 3);
  REQUIRE(table.lookup(split_words("a b a- a")) != nullptr);
  CHECK(join(*table.lookup(split_words("a b a- a"))) == "a b");
  CHECK(table.lookup(split_words("a a a a")) == nullptr);
}
