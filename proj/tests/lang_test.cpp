#include <gtest/gtest.h>

#include "kripkesec/lang.hpp"
#include "kripkesec/tracegen.hpp"
#include "support.hpp"

using namespace kripkesec;

namespace {

Store run_to_end(const Program& p, Store init) {
  kripkesec::Run r = unfold_run(p, std::move(init));
  EXPECT_TRUE(r.halts());
  return r.configs.back().store;
}

Store store_of(const Program& p, std::initializer_list<std::pair<const char*, Int>> vals) {
  Store s(p.var_count(), Value::of(0));
  for (const auto& [name, v] : vals) s[p.syms.require(name)] = Value::of(v);
  for (VarId v = 0; v < p.var_count(); ++v)
    if (p.syms.vars[v].reserved) s[v] = p.syms.vars[v].domain.front();
  return s;
}

}  // namespace

TEST(Parse, AssignmentRoundTrips) {
  Program p = parse_program("var a, b in {0,1}\nb := a");
  EXPECT_EQ(p.var_count(), 2u);
  EXPECT_EQ(to_source(p.ast, p.syms), "b := a");
}

TEST(Parse, ElseBindsToNearestIf) {
  Program p = parse_program("var u, s, p in {0,1}\nif u = 1 then if s = 1 then p := 1 else p := 0");
  Store out = run_to_end(p, store_of(p, {{"u", 1}, {"s", 0}, {"p", 1}}));
  EXPECT_EQ(out[p.syms.require("p")], Value::of(0));
  out = run_to_end(p, store_of(p, {{"u", 0}, {"s", 0}, {"p", 1}}));
  EXPECT_EQ(out[p.syms.require("p")], Value::of(1));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_program("var x in {0,1}\nx := ");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Parse, UndeclaredVariableRejected) {
  EXPECT_THROW(parse_program("var x in {0,1}\nx := y"), ParseError);
}

TEST(Parse, UndeclaredProgramGetsDefaultDomains) {
  Program p = parse_program("p := s");
  EXPECT_EQ(p.var_count(), 2u);
}

TEST(Desugar, Idempotent) {
  for (const char* src : {"var s in 0..3; var i, p in {0}\nfor i = 0..s do p := i", "var x in {0,1}\nloop",
                          "var t, u in {0,1}\nendorse(A, t); t := u", "var x in {0,1}\noutput(x); output(x)"}) {
    Program p = parse_program(src);
    Ast again = desugar(p.core, p.syms);
    EXPECT_EQ(to_source(again, p.syms), to_source(p.core, p.syms)) << src;
  }
}

TEST(Semantics, ForLoopCountsUpToBound) {
  Program p = parse_program("var s in 0..3; var i in {0}; var p in {0}\nfor i = 0..s do p := i");
  for (Int s = 0; s <= 3; ++s) {
    Store out = run_to_end(p, store_of(p, {{"s", s}}));
    EXPECT_EQ(out[p.syms.require("p")], Value::of(s));
  }
}

TEST(Semantics, XorTruthTable) {
  Program p = parse_program("var p, a, b in {0,1}\np := a xor b");
  for (Int a = 0; a <= 1; ++a)
    for (Int b = 0; b <= 1; ++b) {
      Store out = run_to_end(p, store_of(p, {{"a", a}, {"b", b}}));
      EXPECT_EQ(out[p.syms.require("p")], Value::of(a ^ b));
    }
}

TEST(Semantics, OutputPrependsToChannel) {
  Program p = parse_program("var x in {1}\noutput(x); output(x + 1)");
  Store out = run_to_end(p, store_of(p, {{"x", 1}}));
  EXPECT_EQ(out[p.syms.out], Value::list({2, 1}));
}

TEST(Semantics, EndorseInsertsToken) {
  Program p = parse_program("var t, u in {0,1}\nendorse(A, t)");
  ASSERT_NE(p.syms.endorsed, kNone);
  Store out = run_to_end(p, store_of(p, {}));
  EXPECT_EQ(out[p.syms.endorsed].items.size(), 1u);
}

TEST(Semantics, AssignmentIsOneStep) {
  Program p = parse_program("var x in {0,1}\nx := 1; x := 0");
  Config c = initial_config(p, store_of(p, {}));
  int steps = 0;
  while (!c.halted) {
    c = step(p, c).next;
    ++steps;
  }
  EXPECT_EQ(steps, 2);
  EXPECT_THROW(step(p, c), Error);
}

TEST(Semantics, LoopIsSilentLasso) {
  Program p = parse_program("var x in {0,1}\nx := 1; loop");
  kripkesec::Run r = unfold_run(p, store_of(p, {}));
  EXPECT_EQ(r.status, RunStatus::kSilentDiverge);
  EXPECT_EQ(r.configs.back().store[0], Value::of(1));
}

TEST(Semantics, CountingLoopUnsupported) {
  Program p = parse_program("var x in 0..3\nwhile true do x := 1 - x");
  kripkesec::Run r = unfold_run(p, store_of(p, {}));
  EXPECT_FALSE(r.supported());
}

TEST(Semantics, BudgetExceeded) {
  Program p = parse_program("var x in {0}\nwhile x < 1000 do x := x + 1");
  EXPECT_EQ(unfold_run(p, store_of(p, {}), 100).status, RunStatus::kBudgetExceeded);
  EXPECT_TRUE(unfold_run(p, store_of(p, {}), 5000).halts());
}

TEST(Policy, JsonRoundTrip) {
  Policy a = parse_policy(kst::policy_json({"p", "u"}, {"u"}));
  Policy b = parse_policy(policy_to_json(a));
  EXPECT_EQ(policy_to_json(a), policy_to_json(b));
  EXPECT_TRUE(b.signals_termination);
}

TEST(Policy, UnknownKeyRejected) { EXPECT_THROW(parse_policy("{\"agents\": [\"A\"], \"reads\": {}}"), Error); }
