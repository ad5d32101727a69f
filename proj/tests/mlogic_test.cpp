#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace kripkesec;

namespace {

const std::string kFig2 = "var u, s in {0,1}; var p in {0}\nif u = 1 then p := s";

std::vector<kst::Built> sample_frames() {
  std::vector<kst::Built> out;
  out.push_back(kst::build(kFig2, kst::policy_json({"p", "u"}, {"u"})));
  out.push_back(kst::build(kst::kRdDecl + "(if u = 1 then p := s); if s and h then loop",
                           kst::policy_json({"p", "u"}, {"u"})));
  out.push_back(kst::build("var s, t, u in {0,1}\nif s = 1 then t := u", kst::policy_json({"t", "u"}, {"u"}, false)));
  out.push_back(kst::build("var p, s1, s2 in {0,1}\np := s1 xor s2",
                           kst::policy_json({"p"}, {}, true, ", \"declass\": {\"A\": \"s1 xor s2\"}")));
  return out;
}

std::size_t world_at(const SecurityFrame& f, std::initializer_list<Int> init) {
  std::vector<Int> want(init);
  for (std::size_t w = 0; w < f.size(); ++w) {
    if (f.worlds[w].depth != 0 || f.worlds[w].limit) continue;
    bool eq = true;
    for (std::size_t i = 0; i < want.size(); ++i) eq = eq && f.stores[w][i] == Value::of(want[i]);
    if (eq) return w;
  }
  ADD_FAILURE() << "no such world";
  return 0;
}

}  // namespace

// Compiled bitset evaluation against a world-by-world reading of the clauses.
TEST(Eval, MatchesNaiveSemantics) {
  std::mt19937_64 rng(7);
  for (const auto& b : sample_frames()) {
    const auto& f = b.frame;
    for (int i = 0; i < 300; ++i) {
      Formula phi = kst::random_formula(f, rng, 4);
      WorldSet ph = kst::random_ts(f, rng).to_set(f);
      WorldSet ext = extension(f, phi, ph);
      for (std::size_t w = 0; w < f.size(); ++w)
        ASSERT_EQ(ext.test(w), kst::naive_holds(f, w, phi, ph)) << to_string(phi) << " at world " << w;
    }
  }
}

TEST(Eval, CompiledFormulaReusableAcrossBindings) {
  std::mt19937_64 rng(11);
  auto b = sample_frames()[1];
  const auto& f = b.frame;
  Formula phi = parse_formula("dia(WC[A]) (eventually box(KC[A]) S and not box(KP[A]) eventually S)");
  CompiledFormula c(f, phi);
  EXPECT_TRUE(c.uses_placeholder());
  for (int i = 0; i < 50; ++i) {
    WorldSet ph = kst::random_ts(f, rng).to_set(f);
    EXPECT_EQ(c.evaluate(ph).count(), extension(f, phi, ph).count());
  }
}

TEST(Formula, ParseMatchesConstructors) {
  using namespace fm;
  EXPECT_EQ(to_string(parse_formula("box(KC[A]) eventually S")),
            to_string(box(Rel::kKC, "A", eventually(placeholder()))));
  EXPECT_EQ(to_string(parse_formula("not halted -> dia(WP[A]) s@1=0")),
            to_string(implies(neg(halted()), dia(Rel::kWP, "A", atom("s", 1, 0)))));
  EXPECT_EQ(to_string(parse_formula("always (a@0=0 or b@0=1) and true")),
            to_string(conj(always(disj(atom("a", 0, 0), atom("b", 0, 1))), top())));
  EXPECT_NO_THROW(parse_formula("dia(K#[A]) set(0,-,1)"));
  EXPECT_THROW(parse_formula("box(Q[A]) p@0=0"), ParseError);
  EXPECT_THROW(parse_formula("p@0="), ParseError);
}

TEST(Atoms, TimeZeroAtomsSelectWholeRuns) {
  auto b = sample_frames()[0];
  const auto& f = b.frame;
  TSProperty s = atom_extension(f, fm::atom("s", 0, 0));
  for (std::size_t r = 0; r < f.runs.size(); ++r) {
    bool s0 = f.stores[f.runs[r].first][1] == Value::of(0);
    EXPECT_EQ(s.cuts[r], s0 ? 0u : f.runs[r].size);
  }
}

TEST(Atoms, DeepAtomOnDivergingRunUnsupported) {
  auto b = kst::build("var s, p in {0,1}\np := s; if s = 1 then loop", kst::policy_json({"p"}, {}));
  EXPECT_NO_THROW(atom_set(b.frame, "p", 1, 1));
  EXPECT_THROW(atom_set(b.frame, "p", 50, 1), UnsupportedError);
}

TEST(Eval, WriteStepReachesKnowledge) {
  auto b = sample_frames()[0];
  const auto& f = b.frame;
  std::size_t w000 = world_at(f, {0, 0, 0});
  Formula phi = parse_formula("dia(WC[A]) eventually box(KC[A]) s@0=0");
  EXPECT_TRUE(eval(f, w000, phi));
  EXPECT_FALSE(eval(f, w000, parse_formula("eventually box(KC[A]) s@0=0")));
}

TEST(Stability, SecretAtomIsWriteStable) {
  auto b = sample_frames()[0];
  EXPECT_TRUE(is_write_stable(b.frame, 0, atom_set(b.frame, "s", 0, 0)));
  EXPECT_FALSE(is_write_stable(b.frame, 0, atom_set(b.frame, "u", 0, 0)));
}

TEST(Stability, TrustedEffectNotReadStable) {
  auto b = sample_frames()[2];
  EXPECT_FALSE(is_read_stable(b.frame, 0, atom_set(b.frame, "t", 1, 1)));
}

TEST(Enumerate, ExhaustiveVisitsEveryCutVectorOnce) {
  auto b = sample_frames()[0];
  const auto& f = b.frame;
  std::set<TSProperty> seen;
  enumerate_ts(f, SearchMode::exhaustive(), [&](const TSProperty& s, const WorldSet& set) {
    EXPECT_TRUE(is_temporally_sound(f, set));
    EXPECT_TRUE(seen.insert(s).second);
    return true;
  });
  std::uint64_t expected = 1;
  for (const auto& r : f.runs) expected *= r.size + 1;
  EXPECT_EQ(seen.size(), expected);
  EXPECT_EQ(exhaustive_count(f), expected);
}

TEST(Enumerate, RunsetIsASubsetOfExhaustive) {
  auto b = sample_frames()[1];
  const auto& f = b.frame;
  std::size_t n = 0;
  enumerate_ts(f, SearchMode::runset(2), [&](const TSProperty& s, const WorldSet& set) {
    EXPECT_EQ(TSProperty::from_set(f, set), s);
    ++n;
    return true;
  });
  EXPECT_EQ(n, runset_count(f, 2));
  EXPECT_LE(n, exhaustive_count(f));
}

TEST(Enumerate, ExhaustiveBoundEnforced) {
  auto b = sample_frames()[1];
  EXPECT_THROW(enumerate_ts(b.frame, SearchMode::exhaustive(), [](auto&, auto&) { return true; }, nullptr, 10),
               BoundError);
}

TEST(Enumerate, ModeParsing) {
  EXPECT_EQ(SearchMode::parse("runset:3").k, 3u);
  EXPECT_EQ(SearchMode::parse("exhaustive").kind, SearchMode::kExhaustive);
  EXPECT_THROW(SearchMode::parse("sometimes"), Error);
}
