#include <gtest/gtest.h>

#include "formring/runner.hpp"

using namespace formring;

namespace {

const char* kCuspPair = R"(
# the cusp pair
[ring]
vars = x, y
[sequence]
a = y^2 - x^3, y^2 + x^3
[job]
command = bezout
)";

JobFile job(const std::string& text) { return parse_job_text(text); }

}  // namespace

TEST(JobParser, FullGrammar) {
  auto j = job(R"(
[ring]
vars = x, y   # trailing comment
field = Fp:101
[module]
J = (x + y)*(x - y), x^3
[ideal]
q = x^2, y
[sequence]
a = x
b = x + y^2
[job]
command = homology
n_range = 2..6
trunc_max = 40
agree_window = 4
out = results
)");
  EXPECT_EQ(j.vars, (std::vector<std::string>{"x", "y"}));
  EXPECT_TRUE(j.field.prime);
  EXPECT_EQ(j.field.p, 101u);
  EXPECT_EQ(j.J, (std::vector<std::string>{"(x + y)*(x - y)", "x^3"}));
  EXPECT_FALSE(j.q_maximal);
  EXPECT_EQ(j.q.size(), 2u);
  EXPECT_EQ(j.command, "homology");
  EXPECT_EQ(*j.n_lo, 2);
  EXPECT_EQ(*j.n_hi, 6);
  EXPECT_EQ(*j.trunc_max, 40u);
  EXPECT_EQ(*j.agree_window, 4u);
  EXPECT_EQ(j.out, "results");
}

TEST(JobParser, Defaults) {
  auto j = job("[ring]\nvars = x\n");
  EXPECT_FALSE(j.field.prime);
  EXPECT_TRUE(j.q_maximal);
  EXPECT_TRUE(j.command.empty());
  EXPECT_FALSE(j.n_hi);
  auto k = job("[ring]\nvars = x\n[ideal]\nq = maximal\n[job]\nn_range = 7\n");
  EXPECT_TRUE(k.q_maximal);
  EXPECT_EQ(*k.n_lo, 1);
  EXPECT_EQ(*k.n_hi, 7);
}

TEST(JobParser, FieldSpellings) {
  EXPECT_FALSE(parse_field_spec("Q").prime);
  EXPECT_EQ(parse_field_spec("Fp:7").p, 7u);
  EXPECT_EQ(parse_field_spec("Fp 7").p, 7u);
  EXPECT_THROW(parse_field_spec("R"), job_error);
  EXPECT_THROW(parse_field_spec("Fp:8"), std::exception);
}

TEST(JobParser, Errors) {
  EXPECT_THROW(job("[ring]\nvars = x\n[bogus]\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars = x\ncolor = red\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars = x\nvars = y\n"), job_error);
  EXPECT_THROW(job("vars = x\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars x\n"), job_error);
  EXPECT_THROW(job("[ring\nvars = x\n"), job_error);
  EXPECT_THROW(job("[module]\nJ = x\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars = x\n[job]\ncommand = frobnicate\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars = x\n[job]\nn_range = 5..2\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars = x\n[job]\nn_range = 0..2\n"), job_error);
  EXPECT_THROW(job("[ring]\nvars = x\n[ideal]\nq =\n"), job_error);
  try {
    job("[ring]\nvars = x\n\n[job]\ntrunc_max = many\n");
    FAIL();
  } catch (const job_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}

TEST(JobRunner, UndeclaredVariableIsAnInputError) {
  auto j = job("[ring]\nvars = x, y\n[sequence]\na = z\n[job]\ncommand = regseq\n");
  EXPECT_THROW(run_job(j, "run"), job_error);
}

TEST(JobRunner, BezoutExample) {
  auto out = run_job(job(kCuspPair), "run");
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_NE(out.report.find("e0=6, c*d=4, t=2, slack=0"), std::string::npos) << out.report;
  EXPECT_EQ(out.summary["verdicts"][0]["claim"], "REMARK_5_5");
  EXPECT_TRUE(out.summary["verdicts"][0]["holds"].get<bool>());
}

TEST(JobRunner, HilbertSamuelExample) {
  auto out = run_job(job("[ring]\nvars = x, y\n[module]\nJ = y^2 - x^3\n[job]\ncommand = hs\n"), "run");
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_NE(out.report.find("d=1, e0=2"), std::string::npos) << out.report;
  ASSERT_TRUE(out.files.count("hs.csv"));
  EXPECT_EQ(out.files["hs.csv"].rfind("n,length,N_window\n1,1,", 0), 0u) << out.files["hs.csv"];
}

TEST(JobRunner, NonRegularIsASuccessfulRun) {
  auto out = run_job(job("[ring]\nvars = x, y\n[module]\nJ = x^2\n[sequence]\na = x + y^3\n"), "regseq");
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_NE(out.report.find("NOT regular"), std::string::npos);
  EXPECT_NE(out.report.find("witness n="), std::string::npos) << out.report;
}

TEST(JobRunner, HomologyCsvIsOrderedAndDeterministic) {
  const std::string text = "[ring]\nvars = x, y\n[sequence]\na = x, y\n[job]\ncommand = homology\nn_range = 1..3\n";
  auto a = run_job(job(text), "run");
  auto b = run_job(job(text), "run");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.files, b.files);
  EXPECT_EQ(a.report, b.report);
  const auto& csv = a.files.at("L_homology.csv");
  EXPECT_EQ(csv.rfind("n,i,length,N_window\n1,0,1,", 0), 0u) << csv;
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1 + 3 * 3);
}

TEST(JobRunner, EmptyTableIsHeaderOnly) {
  HomologyTable t;
  EXPECT_EQ(homology_csv(t), "n,i,length,N_window\n");
  EXPECT_EQ(length_table_csv(LengthTable{}), "n,length,N_window\n");
}

TEST(JobRunner, HypothesisFailureExitsWithOne) {
  // (x, x^2) is not a system of parameters
  auto out = run_job(job("[ring]\nvars = x, y\n[sequence]\na = x, x^2\n"), "multiplicity");
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_TRUE(out.summary.contains("error"));
}

TEST(JobRunner, FieldOverrideAgrees) {
  auto q = run_job(job(kCuspPair), "run");
  RunOptions o;
  o.field = parse_field_spec("Fp:32003");
  auto p = run_job(job(kCuspPair), "run", o);
  EXPECT_EQ(p.summary["field"], "Fp:32003");
  EXPECT_EQ(q.summary["verdicts"][0]["witness"]["e0"], p.summary["verdicts"][0]["witness"]["e0"]);
}

TEST(JobRunner, CommandValidation) {
  EXPECT_THROW(run_job(job("[ring]\nvars = x\n"), "run"), job_error);
  EXPECT_THROW(run_job(job("[ring]\nvars = x\n"), "bogus"), job_error);
  auto out = run_job(job("[ring]\nvars = x, y, z\n[sequence]\na = x, y\n"), "bezout");
  EXPECT_EQ(out.exit_code, 1);
}
