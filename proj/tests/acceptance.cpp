// Acceptance run: one PASS/FAIL line per criterion, details indented below.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "kripkesec/corpus.hpp"
#include "kripkesec/report.hpp"

using namespace kripkesec;
using P = PropertyId;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kFigureSeconds = 10.0;
constexpr double kDifferentialSeconds = 300.0;
constexpr std::uint64_t kExhaustiveLimit = 100'000;
constexpr std::size_t kSeeds = 200;

int failures = 0;

struct Criterion {
  int number;
  std::string title;
  bool ok = true;
  std::vector<std::string> details;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      details.push_back("mismatch: " + what);
    }
  }
  void note(const std::string& s) { details.push_back(s); }

  ~Criterion() {
    std::printf("%s  %2d  %s\n", ok ? "PASS" : "FAIL", number, title.c_str());
    for (const auto& d : details) std::printf("          %s\n", d.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

std::string policy(const std::vector<std::string>& read, const std::vector<std::string>& write,
                   const std::string& extra = "") {
  auto list = [](const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ",\"" : "\"") + xs[i] + "\"";
    return out + "]";
  };
  return "{\"agents\":[\"A\"],\"read\":{\"A\":" + list(read) + "},\"write\":{\"A\":" + list(write) +
         "},\"flags\":{\"signals_termination\":true}" + extra + "}";
}

SecurityFrame frame_of(const std::string& src, const std::string& pol, bool sync = false) {
  Program p = parse_program(src);
  Policy pl = parse_policy(pol);
  pl.synchronous = sync;
  return build_frame(p, bind_policy(pl, p));
}

Verdict verdict(const SecurityFrame& f, P id) { return check(f, id).front(); }
Status status(const SecurityFrame& f, P id) { return verdict(f, id).status; }

void expect_status(Criterion& c, const std::string& label, const SecurityFrame& f, P id, Status want) {
  Status got = status(f, id);
  c.expect(got == want, label + ": " + std::string(to_string(id)) + " is " + to_string(got) + ", expected " +
                            to_string(want));
}

const char* kFigure[6][4] = {
    {"--", "--", "--", "--"},
    {"s@0=0", "s@0=0", "s@0=0", "s@0=0"},
    {"s@0=0", "--", "--", "--"},
    {"s@0=0", "s@0=0", "--", "--"},
    {"s@0=0", "s@0=0", "s@0=0", "--"},
    {"s@0=0", "s@0=0", "s@0=0", "h@0=1 ∨ s@0=0"},
};

// Mismatches of one matrix against the expected cells.
std::vector<std::string> figure_mismatches(const Figure1& fig) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const Figure1Row& row = fig.rows[r];
      const Verdict& v = row.cells[c];
      std::string where = row.label + " " + std::string(to_string(figure1_columns()[c]));
      std::string cell = figure1_cell(v);
      if (cell != kFigure[r][c]) {
        std::string at = v.witnesses.empty() ? "" : " at " + row.frame.world_label(v.witnesses.front().world) + " [" +
                                                        row.frame.store_label(v.witnesses.front().world) + "]";
        out.push_back(where + ": got " + cell + at + ", expected " + kFigure[r][c]);
      } else if (!v.witnesses.empty() && v.witnesses.front().world != 0) {
        out.push_back(where + ": witness at " + row.frame.world_label(v.witnesses.front().world) +
                      ", expected the all-zero initial world");
      }
    }
  return out;
}

void criterion1() {
  Criterion c{1, "Figure 1 matrix: 24 verdicts and witnesses"};
  auto t0 = Clock::now();
  Figure1 fig = figure1(false);
  double t = since(t0);
  std::size_t verdicts = 0;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t k = 0; k < 4; ++k)
      verdicts += (fig.rows[r].cells[k].status == Status::kSatisfied) == (std::string(kFigure[r][k]) == "--");
  c.note("verdicts matching: " + std::to_string(verdicts) + "/24, runtime " + secs(t));
  for (const auto& m : figure_mismatches(fig)) c.expect(false, m);
  c.expect(t < kFigureSeconds, "runtime " + secs(t));
  auto sync = figure_mismatches(figure1(true));
  c.note("informative: with a step clock (figure1 --sync) " +
         (sync.empty() ? std::string("all 24 cells and witnesses match") : std::to_string(sync.size()) + " cells differ"));
}

void criterion2() {
  Criterion c{2, "confidentiality trio"};
  std::string pol = policy({"p"}, {});
  auto a = frame_of("var s, p in {0,1}\np := s", pol);
  expect_status(c, "p:=s", a, P::kConf, Status::kViolated);
  expect_status(c, "p:=s", a, P::kTiConf, Status::kViolated);
  auto b = frame_of("var s, p in {0,1}\np := s; if s = 1 then loop", pol);
  expect_status(c, "guarded loop", b, P::kConf, Status::kViolated);
  expect_status(c, "guarded loop", b, P::kTiConfIntermediate, Status::kViolated);
  expect_status(c, "guarded loop", b, P::kTiConf, Status::kSatisfied);
  auto d = frame_of("var s, p in {0,1}\np := s; loop", pol);
  expect_status(c, "trailing loop", d, P::kConf, Status::kViolated);
  expect_status(c, "trailing loop", d, P::kTiConfIntermediate, Status::kSatisfied);
  expect_status(c, "trailing loop", d, P::kTiConf, Status::kSatisfied);
}

void criterion3() {
  Criterion c{3, "progress insensitivity"};
  std::string pol = policy({"p"}, {});
  std::string decl = "var s in 0..3; var i in {0}; var p in {0}\n";
  auto up = frame_of(decl + "for i = 0..s do p := i", pol);
  expect_status(c, "count up", up, P::kPiConf, Status::kSatisfied);
  expect_status(c, "count up", up, P::kConf, Status::kViolated);
  expect_status(c, "count up", up, P::kTiConf, Status::kViolated);
  auto down = frame_of(decl + "for i = 0..s do p := s - i", pol);
  expect_status(c, "count down", down, P::kPiConf, Status::kViolated);
}

void criterion4() {
  Criterion c{4, "integrity and endorsement"};
  std::string pol = policy({"t", "u"}, {"u"});
  expect_status(c, "u:=0; t:=u", frame_of("var t, u in {0,1}\nu := 0; t := u", pol), P::kInteg, Status::kSatisfied);
  auto copy = frame_of("var s, t, u in {0,1}\nt := u", pol);
  Verdict v = verdict(copy, P::kCauseInteg);
  c.expect(v.status == Status::kViolated, "t:=u: CAUSE_INTEG is " + std::string(to_string(v.status)));
  if (!v.witnesses.empty()) {
    c.expect(v.witnesses.front().rendered == "u@0=0", "CAUSE_INTEG witness " + v.witnesses.front().rendered);
    c.note("CAUSE_INTEG witness " + v.witnesses.front().rendered + " at " +
           copy.world_label(v.witnesses.front().world));
  }
  std::string ev = policy({"t", "u"}, {"u"}, ",\"endorse\":{\"mode\":\"event\"}");
  expect_status(c, "endorse; t:=u", frame_of("var t, u in {0,1}\nendorse(A, t); t := u", ev), P::kInteg,
                Status::kSatisfied);
  expect_status(c, "t:=u; endorse", frame_of("var t, u in {0,1}\nt := u; endorse(A, t)", ev), P::kInteg,
                Status::kViolated);
}

void criterion5() {
  Criterion c{5, "transparent endorsement examples"};
  std::string pol = policy({"t", "u"}, {"u"});
  expect_status(c, "(i)", frame_of("var s, t, u in {0,1}\nt := u", pol), P::kTiTe, Status::kSatisfied);
  expect_status(c, "(ii)", frame_of("var s, t, u in {0,1}\nif s = 1 then t := u", pol), P::kTiTe, Status::kViolated);
  expect_status(c, "(iii)",
                frame_of("var s, t1, t2, u in {0,1}\nif s = 1 then t1 := u else t2 := u", policy({"t1", "t2", "u"}, {"u"})),
                P::kTiTe, Status::kSatisfied);
}

void criterion6() {
  Criterion c{6, "robust declassification boundary programs"};
  std::string pol = policy({"p", "u"}, {"u"});
  std::string decl = "var u, s, h in {0,1}; var p in {0}\n";
  auto a = frame_of(decl + "if u = 1 then p := s else loop", pol);
  expect_status(c, "release or loop", a, P::kTiRd, Status::kSatisfied);
  expect_status(c, "release or loop", a, P::kRdAlt, Status::kViolated);
  auto b = frame_of(decl + "p := s; if u = 0 then loop", pol);
  expect_status(c, "release then loop", b, P::kRd, Status::kSatisfied);
  expect_status(c, "release then loop", b, P::kRdAlt, Status::kViolated);
  auto bs = frame_of(decl + "p := s; if u = 0 then loop", pol, true);
  c.note(std::string("informative: with a step clock, release then loop gives RD ") + to_string(status(bs, P::kRd)) +
         ", RD_ALT " + to_string(status(bs, P::kRdAlt)));
}

void criterion7() {
  Criterion c{7, "what-declassification"};
  auto f = frame_of("var p, s1, s2 in {0,1}\np := s1 xor s2", policy({"p"}, {}, ",\"declass\":{\"A\":\"s1 xor s2\"}"));
  std::size_t w = f.world_index(3, 0, false);
  c.expect(f.store_label(w) == "011", "world 3 has store " + f.store_label(w));
  c.expect(eval(f, w, parse_formula("box(KP[A]) eventually p@1=0")), "[K^P_A] eventually p@1=0 fails at (0,1,1)");
  expect_status(c, "refined", f, P::kConf, Status::kSatisfied);
  auto plain = frame_of("var p, s1, s2 in {0,1}\np := s1 xor s2", policy({"p"}, {}));
  expect_status(c, "unrefined", plain, P::kConf, Status::kViolated);
}

std::vector<CorpusMember> load_corpus(Criterion& c) {
  std::vector<CorpusMember> out;
  for (const auto& e : load_manifest(std::filesystem::path(KRIPKESEC_CORPUS_DIR) / "manifest.json")) {
    try {
      out.push_back(realize(e));
    } catch (const Error& ex) {
      c.expect(false, e.name + ": " + ex.what());
    }
  }
  return out;
}

void criterion8() {
  Criterion c{8, "theorem differentials over named and generated programs"};
  auto t0 = Clock::now();
  auto corpus = load_corpus(c);
  std::size_t agree = 0, disagree = 0, skipped = 0, named = 0, seeds = 0;
  for (const auto& m : corpus) {
    (m.name.rfind("seed ", 0) == 0 ? seeds : named)++;
    for (const auto& d : differential(m.program, m.ctx)) {
      if (d.agreement == Agreement::kAgree) ++agree;
      if (d.agreement == Agreement::kSkipped) ++skipped;
      if (d.agreement == Agreement::kDisagree) {
        ++disagree;
        c.expect(false, m.name + " " + pairing_name(d.pairing));
      }
    }
  }
  double t = since(t0);
  c.expect(seeds == kSeeds, std::to_string(seeds) + " generated programs");
  c.expect(t < kDifferentialSeconds, "runtime " + secs(t));
  c.note(std::to_string(named) + " named + " + std::to_string(seeds) + " generated programs: " + std::to_string(agree) +
         " agree, " + std::to_string(disagree) + " disagree, " + std::to_string(skipped) +
         " skipped (assumptions fail or policy refined); " + secs(t));
}

void criterion9() {
  Criterion c{9, "frame invariants and RD simplification"};
  auto corpus = load_corpus(c);
  std::size_t frames = 0, eligible = 0, rd_diff = 0, sync_diff = 0, noncommuting = 0, sync_noncommuting = 0;
  std::vector<std::string> examples;
  std::string first_noncommuting;
  for (const auto& m : corpus) {
    SecurityFrame f = build_frame(m.program, m.ctx);
    ++frames;
    FrameReport r = check_frame_properties(f);
    c.expect(r.perfect_recall, m.name + ": perfect recall");
    c.expect(r.characteristic, m.name + ": characteristic formulae");
    c.expect(!m.ctx.signals_termination || r.signals_termination, m.name + ": signals termination");
    if (!r.commutation) {
      if (noncommuting++ == 0) first_noncommuting = m.name + ": " + r.problems.front();
    }
    if (!m.ctx.synchronous) {
      SecurityContext sctx = m.ctx;
      sctx.synchronous = true;
      sync_noncommuting += !check_frame_properties(build_frame(m.program, sctx)).commutation;
    }
    if (f.has_declassification()) continue;
    ++eligible;
    if (!check_rd_equivalence(f)) {
      ++rd_diff;
      if (examples.size() < 5) examples.push_back(m.name);
    }
    if (m.ctx.synchronous) continue;
    // informative: the same program under a step clock
    Program p = m.program;
    SecurityContext sctx = m.ctx;
    sctx.synchronous = true;
    try {
      if (!check_rd_equivalence(build_frame(p, sctx))) ++sync_diff;
    } catch (const Error&) {
    }
  }
  c.note("frame properties checked on " + std::to_string(frames) + " frames");
  c.expect(noncommuting == 0, "W^C and K^C fail to commute on " + std::to_string(noncommuting) + "/" +
                                  std::to_string(frames) + " frames, first " + first_noncommuting);
  c.note("informative: with a step clock commutation fails on " + std::to_string(sync_noncommuting) + " frames");
  c.expect(rd_diff == 0, "RD and RD_SIMPLIFIED differ on " + std::to_string(rd_diff) + "/" + std::to_string(eligible) +
                             " frames with K^C=K^P");
  if (!examples.empty()) {
    std::string s;
    for (const auto& e : examples) s += (s.empty() ? "" : ", ") + e;
    c.note("first differing frames: " + s);
  }
  c.note("informative: with a step clock they differ on " + std::to_string(sync_diff) + " frames");
}

void criterion10() {
  Criterion c{10, "implication audit"};
  auto corpus = load_corpus(c);
  AuditReport rep = implication_audit(corpus);
  std::size_t holding = 0;
  for (const auto& a : rep.arrows) {
    std::string name = std::string(to_string(a.arrow.stronger)) + " => " + std::string(to_string(a.arrow.weaker));
    if (a.counterexamples.empty()) {
      ++holding;
      continue;
    }
    c.expect(false, name + ": " + std::to_string(a.counterexamples.size()) + " counterexamples, first " +
                        a.counterexamples.front());
  }
  std::size_t separated = 0;
  for (const auto& s : rep.separations) {
    if (s.ok) {
      ++separated;
      continue;
    }
    c.expect(false, "separation " + s.separation.name + ": " + std::string(to_string(s.separation.satisfied)) + " " +
                        to_string(s.satisfied_status) + ", " + std::string(to_string(s.separation.violated)) + " " +
                        to_string(s.violated_status));
  }
  std::vector<CorpusMember> clocked;
  for (const auto& m : corpus) {
    CorpusMember x = m;
    x.ctx.synchronous = true;
    clocked.push_back(std::move(x));
  }
  AuditReport srep = implication_audit(clocked);
  std::string failing;
  for (const auto& a : srep.arrows)
    if (!a.counterexamples.empty())
      failing += (failing.empty() ? "" : ", ") + std::string(to_string(a.arrow.stronger)) + " => " +
                 std::string(to_string(a.arrow.weaker)) + " (" + std::to_string(a.counterexamples.size()) + ")";
  c.note("informative: with a step clock on every corpus frame, failing arrows: " +
         (failing.empty() ? std::string("none") : failing));
  c.note(std::to_string(holding) + "/" + std::to_string(rep.arrows.size()) + " arrows hold over " +
         std::to_string(corpus.size()) + " frames; " + std::to_string(separated) + "/" +
         std::to_string(rep.separations.size()) + " separations");
}

void criterion11() {
  Criterion c{11, "RUNSET(2) agrees with EXHAUSTIVE where feasible"};
  auto corpus = load_corpus(c);
  CheckOptions ex;
  ex.mode = SearchMode::exhaustive();
  ex.exhaustive_bound = kExhaustiveLimit;
  std::size_t frames = 0, compared = 0;
  for (const auto& m : corpus) {
    SecurityFrame f = build_frame(m.program, m.ctx);
    if (exhaustive_count(f) > kExhaustiveLimit) continue;
    ++frames;
    for (PropertyId id : all_properties()) {
      Status a = combined_status(check(f, id));
      Status b = combined_status(check(f, id, {}, ex));
      ++compared;
      c.expect(a == b, m.name + " " + std::string(to_string(id)) + ": runset " + to_string(a) + ", exhaustive " +
                           to_string(b));
    }
  }
  c.note(std::to_string(compared) + " verdicts compared on " + std::to_string(frames) + " frames");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
