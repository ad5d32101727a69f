#include <set>

#include <gtest/gtest.h>

#include "kripkesec/tracegen.hpp"
#include "support.hpp"

using namespace kripkesec;

namespace {

ObsEntry obs(std::vector<Int> xs, bool halted = false) {
  ObsEntry e;
  for (auto x : xs) e.values.push_back(Value::of(x));
  e.halted = halted;
  return e;
}

const std::string kRdProgram = "var u, s in {0,1}; var p in {0}\nif u = 1 then p := s";

}  // namespace

TEST(Destutter, CollapsesRepeats) {
  ObsSeq s = destutter({obs({0}), obs({0}), obs({1}), obs({1}), obs({0})});
  ASSERT_EQ(s.entries.size(), 3u);
  EXPECT_EQ(s.entries[2], obs({0}));
}

TEST(Destutter, HaltFlagIsAnObservation) {
  ObsSeq s = destutter({obs({0}), obs({0}, true)});
  EXPECT_EQ(s.entries.size(), 2u);
}

TEST(Frame, WorldsAreRunPrefixes) {
  auto b = kst::build(kRdProgram, kst::policy_json({"p", "u"}, {"u"}));
  std::size_t expected = 0;
  for (const Store& init : enumerate_initial_stores(b.program, b.ctx)) {
    kripkesec::Run r = unfold_run(b.program, init);
    ASSERT_TRUE(r.halts());
    expected += r.configs.size();
  }
  EXPECT_EQ(b.frame.size(), expected);
  EXPECT_EQ(b.frame.size(), 8u);
  EXPECT_EQ(b.frame.runs.size(), 4u);
}

TEST(Frame, KnowledgeClassesOfConditionalRelease) {
  auto b = kst::build(kRdProgram, kst::policy_json({"p", "u"}, {"u"}));
  EXPECT_EQ(b.frame.agents[0].kc.members.size(), 5u);
  EXPECT_TRUE(b.frame.agents[0].kc.same_as(b.frame.agents[0].kp));
}

// K^C recomputed from views of run prefixes.
TEST(Frame, KnowledgeIsEqualView) {
  for (bool signals : {false, true}) {
    auto b = kst::build(kst::kRdDecl + "(if u = 1 then p := s); if s = 1 then loop",
                        kst::policy_json({"p", "u"}, {"u"}, signals));
    const auto& f = b.frame;
    std::vector<kripkesec::Run> runs;
    for (const Store& init : enumerate_initial_stores(b.program, b.ctx)) runs.push_back(unfold_run(b.program, init));
    auto view_at = [&](std::size_t w) {
      const kripkesec::Run& r = runs[f.worlds[w].run];
      if (f.worlds[w].limit) return maximal_view(b.ctx, 0, r);
      return view(b.ctx, 0, std::span<const Config>(r.configs.data(), f.worlds[w].depth + 1));
    };
    for (std::size_t w = 0; w < f.size(); ++w)
      for (std::size_t v = 0; v < f.size(); ++v)
        ASSERT_EQ(f.agents[0].kc.related(w, v), view_at(w) == view_at(v)) << w << " " << v << " signals " << signals;
  }
}

TEST(Frame, WriteCapabilityRelatesOnlyInitialWorlds) {
  auto b = kst::build(kRdProgram, kst::policy_json({"p", "u"}, {"u"}));
  const auto& f = b.frame;
  for (std::size_t w = 0; w < f.size(); ++w)
    for (std::size_t v = 0; v < f.size(); ++v) {
      if (w == v || !f.agents[0].wc.related(w, v)) continue;
      EXPECT_EQ(f.worlds[w].depth, 0u);
      EXPECT_EQ(f.worlds[v].depth, 0u);
      // equal on everything A cannot write
      EXPECT_EQ(f.stores[w][1], f.stores[v][1]);
      EXPECT_EQ(f.stores[w][2], f.stores[v][2]);
    }
}

TEST(Frame, DivergingRunGetsLimitWorld) {
  auto b = kst::build("var s, p in {0,1}\np := s; if s = 1 then loop", kst::policy_json({"p"}, {}));
  std::size_t limits = 0;
  for (const auto& w : b.frame.worlds) limits += w.limit;
  EXPECT_EQ(limits, 2u);  // runs with s = 1
}

TEST(Frame, UnsupportedDivergenceThrows) {
  EXPECT_THROW(kst::build("var x in 0..3\nwhile true do x := 1 - x", kst::policy_json({"x"}, {})),
               UnsupportedError);
}

TEST(Frame, RecallAndCharacteristicFormulaeOnNamedCorpus) {
  for (const auto& m : kst::named_corpus()) {
    SecurityFrame f = build_frame(m.program, m.ctx);
    FrameReport r = check_frame_properties(f);
    EXPECT_TRUE(r.perfect_recall) << m.name;
    EXPECT_TRUE(r.characteristic) << m.name;
    if (m.ctx.signals_termination) EXPECT_TRUE(r.signals_termination) << m.name;
  }
}

TEST(Frame, CommutationWithStepClock) {
  for (const auto& m : kst::named_corpus()) {
    SecurityContext ctx = m.ctx;
    ctx.synchronous = true;
    EXPECT_TRUE(check_frame_properties(build_frame(m.program, ctx)).commutation) << m.name;
  }
}

// A stuttering step makes a later world indistinguishable from the initial
// one, which W^C relates to other initial worlds; from the later world W^C
// is the identity, so W^C;K^C misses what K^C;W^C reaches.
TEST(Frame, CommutationFailsOnStutterWithoutClock) {
  auto b = kst::build("var t, u in {0,1}\nu := 0; t := u", kst::policy_json({"t", "u"}, {"u"}));
  FrameReport r = check_frame_properties(b.frame);
  EXPECT_FALSE(r.commutation);
  std::size_t later = b.frame.world_index(0, 1, false);
  std::size_t other = b.frame.world_index(1, 0, false);
  const auto& a = b.frame.agents[0];
  EXPECT_TRUE(a.kc.related(later, b.frame.world_index(0, 0, false)));
  EXPECT_TRUE(a.wc.related(b.frame.world_index(0, 0, false), other));
  EXPECT_FALSE(a.kc.related(later, other));
}

TEST(Frame, DeclassificationRefinesOnlyPermission) {
  auto b = kst::build("var p, s1, s2 in {0,1}\np := s1 xor s2",
                      kst::policy_json({"p"}, {}, true, ", \"declass\": {\"A\": \"s1 xor s2\"}"));
  const auto& a = b.frame.agents[0];
  EXPECT_TRUE(a.declassified);
  EXPECT_FALSE(a.kp.same_as(a.kc));
  EXPECT_TRUE(a.kp.same_as(a.kp.intersect(a.kc)));
}

TEST(Frame, JsonRoundTripIsIsomorphic) {
  auto b = kst::build(kst::kRdDecl + "(if u = 1 then p := s); if s and h then loop", kst::policy_json({"p", "u"}, {"u"}));
  std::string j = export_json(b.frame);
  SecurityFrame back = import_json(j);
  EXPECT_TRUE(isomorphic(b.frame, back));
  EXPECT_EQ(export_json(back), j);
}

TEST(Frame, DotIsStableAndClustered) {
  auto b = kst::build(kRdProgram, kst::policy_json({"p", "u"}, {"u"}));
  std::string a = export_dot(b.frame), c = export_dot(b.frame);
  EXPECT_EQ(a, c);
  std::size_t clusters = 0;
  for (std::size_t pos = 0; (pos = a.find("subgraph cluster_k", pos)) != std::string::npos; ++pos) ++clusters;
  EXPECT_EQ(clusters, 5u);
}

TEST(Frame, CountingRelationIsCoarserThanKnowledge) {
  // equal view lengths, different values
  auto b = kst::build("var s in {0,1}; var p in {0}\np := s + 1", kst::policy_json({"p"}, {}));
  const auto& a = b.frame.agents[0];
  EXPECT_TRUE(a.kc.same_as(a.kc.intersect(a.count)));
  EXPECT_FALSE(a.kc.same_as(a.count));
}

TEST(Frame, SynchronousViewsSeeTheClock) {
  std::string src = "var u in {0,1}; var p in {0}\nif u = 1 then (skip; p := 1) else p := 1";
  auto async = kst::build(src, kst::policy_json({"p"}, {}));
  Policy pol = parse_policy(kst::policy_json({"p"}, {}));
  pol.synchronous = true;
  Program prog = parse_program(src);
  SecurityFrame sync = build_frame(prog, bind_policy(pol, prog));
  EXPECT_LT(async.frame.agents[0].kc.members.size(), sync.agents[0].kc.members.size());
}
