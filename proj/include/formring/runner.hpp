#pragma once

// Executes a job: builds the ring, module, ideal and sequence for the
// requested field, runs the checkers for the command and renders the
// report, the JSON summary and the CSV tables. Nothing here touches the
// file system; the CLI writes the outputs.

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "formring/job.hpp"
#include "formring/theorems.hpp"

namespace formring {

struct RunOptions {
  std::optional<long> n_max;               // --nmax
  std::optional<FieldSpec> field;          // --field
  std::optional<std::uint32_t> trunc_max;  // --trunc-max
};

struct RunOutput {
  int exit_code = 0;
  std::string report;
  json summary = json::object();
  std::map<std::string, std::string> files;  // CSV tables by file name
};

namespace detail {

inline std::string csv_window(const StabilizedValue& v) {
  if (!v.stable) return "NON-STABILIZED";
  std::string s;
  for (std::size_t i = 0; i < v.levels.size(); ++i) s += (i ? ";" : "") + std::to_string(v.levels[i]);
  return s;
}

inline std::string csv_length(const StabilizedValue& v) {
  return v.stable ? std::to_string(v.value) : "NON-STABILIZED";
}

}  // namespace detail

/// n,i,length,N_window rows ordered by n then i; header only when empty.
inline std::string homology_csv(const HomologyTable& t) {
  std::ostringstream os;
  os << "n,i,length,N_window\n";
  for (const auto& [key, v] : t.entries)
    os << key.first << ',' << key.second << ',' << detail::csv_length(v) << ',' << detail::csv_window(v) << '\n';
  return os.str();
}

inline std::string length_table_csv(const LengthTable& t) {
  std::ostringstream os;
  os << "n,length,N_window\n";
  for (std::size_t k = 0; k < t.n.size(); ++k)
    os << t.n[k] << ',' << detail::csv_length(t.values[k]) << ',' << detail::csv_window(t.values[k]) << '\n';
  return os.str();
}

inline json verdict_json(const Verdict& v) {
  json j;
  j["claim"] = v.claim;
  j["holds"] = v.holds;
  j["summary"] = v.summary;
  j["window"] = v.window;
  j["witness"] = v.witness;
  j["certificates"] = v.certificates;
  return j;
}

inline std::string verdict_text(const Verdict& v) {
  std::ostringstream os;
  os << "[" << v.claim << "] " << (v.holds ? "HOLDS" : "FAILS") << ": " << v.summary << "\n";
  if (!v.window.empty()) os << "  window: " << v.window << "\n";
  os << "  witness: " << v.witness.dump() << "\n";
  os << "  certificates (" << v.certificates.size() << "):\n";
  for (const auto& c : v.certificates) os << "    " << c << "\n";
  return os.str();
}

template <class F>
class JobRunner {
public:
  JobRunner(const JobFile& job, const F& field, const RunOptions& opts) : job_(job), opts_(opts) {
    TruncationPolicy policy;
    if (job.trunc_start) policy.n_start = *job.trunc_start;
    if (job.trunc_step) policy.n_step = *job.trunc_step;
    if (job.trunc_max) policy.n_max = *job.trunc_max;
    if (job.agree_window) policy.agree_window = *job.agree_window;
    if (opts.trunc_max) policy.n_max = *opts.trunc_max;
    ring_ = std::make_shared<const LocalRing<F>>(field, job.vars, policy);
    J_ = parse_all(job.J, "J");
    a_ = parse_all(job.a, "a");
    b_ = parse_all(job.b, "b");
    if (!job.q_maximal) q_ = parse_all(job.q, "q");
  }

  RunOutput run(const std::string& command) {
    out_.summary["command"] = command;
    out_.summary["field"] = ring_->field().name();
    out_.summary["vars"] = job_.vars;
    out_.summary["module_relations"] = printed(J_);
    out_.summary["ideal"] = job_.q_maximal ? json("maximal") : json(printed(q_));
    out_.summary["a"] = printed(a_);
    out_.summary["b"] = printed(b_);
    const auto& pol = ring_->policy();
    out_.summary["truncation"] = {{"start", pol.n_start}, {"step", pol.n_step}, {"max", pol.n_max},
                                  {"agree_window", pol.agree_window}};
    header(command);
    try {
      dispatch(command);
    } catch (const hypothesis_error& e) {
      fail_input("hypothesis not satisfied: " + std::string(e.what()));
    } catch (const stabilization_error& e) {
      fail_input("stabilization error: " + std::string(e.what()));
    } catch (const std::logic_error& e) {
      fail_input("input error: " + std::string(e.what()));
    } catch (const std::runtime_error& e) {
      fail_input("error: " + std::string(e.what()));
    }
    out_.summary["verdicts"] = verdicts_;
    out_.summary["exit_code"] = out_.exit_code;
    rep_ << "exit code: " << out_.exit_code << "\n";
    out_.report = rep_.str();
    return std::move(out_);
  }

private:
  std::vector<Poly<F>> parse_all(const std::vector<std::string>& texts, const std::string& what) {
    std::vector<Poly<F>> out;
    for (const auto& t : texts) {
      try {
        out.push_back(ring_->parse(t));
      } catch (const parse_error& e) {
        throw job_error("cannot parse " + what + " entry '" + t + "': " + e.what());
      }
    }
    return out;
  }

  std::vector<std::string> printed(const std::vector<Poly<F>>& ps) const {
    std::vector<std::string> out;
    for (const auto& p : ps) out.push_back(ring_->print(p));
    return out;
  }

  static std::string joined(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
    return s;
  }

  void header(const std::string& command) {
    const auto& pol = ring_->policy();
    rep_ << "formring " << command << "\n";
    rep_ << "ring: " << ring_->field().name() << "[" << joined(job_.vars) << "] localized at the origin\n";
    if (J_.empty())
      rep_ << "module: M = A\n";
    else
      rep_ << "module: M = A/(" << joined(printed(J_)) << ")\n";
    rep_ << "ideal: q = " << (job_.q_maximal ? std::string("maximal") : "(" + joined(printed(q_)) + ")") << "\n";
    if (!a_.empty()) rep_ << "sequence: a = (" << joined(printed(a_)) << ")\n";
    if (!b_.empty()) rep_ << "lift candidates: b = (" << joined(printed(b_)) << ")\n";
    rep_ << "truncation: start " << (pol.n_start ? std::to_string(pol.n_start) : std::string("auto")) << ", step "
         << pol.n_step << ", max " << pol.n_max << ", agree window " << pol.agree_window << "\n\n";
  }

  void fail_input(const std::string& msg) {
    rep_ << msg << "\n";
    out_.summary["error"] = msg;
    if (out_.exit_code == 0) out_.exit_code = 1;
  }

  void record(const Verdict& v) {
    rep_ << verdict_text(v);
    verdicts_.push_back(verdict_json(v));
    if (!v.holds) out_.exit_code = 2;
  }

  /// verify-all: hypothesis failures skip a checker instead of aborting.
  void attempt(const std::string& claim, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const hypothesis_error& e) {
      rep_ << "[" << claim << "] SKIPPED: " << e.what() << "\n";
      verdicts_.push_back({{"claim", claim}, {"skipped", e.what()}});
    } catch (const stabilization_error& e) {
      rep_ << "[" << claim << "] ERROR: " << e.what() << "\n";
      verdicts_.push_back({{"claim", claim}, {"error", e.what()}});
      if (out_.exit_code == 0) out_.exit_code = 1;
    }
  }

  ModulePresentation<F> module() const { return ModulePresentation<F>(ring_, J_); }
  IdealOfDefinition<F> ideal() const {
    return job_.q_maximal ? IdealOfDefinition<F>::maximal(*ring_) : IdealOfDefinition<F>::generated_by(q_);
  }

  std::uint32_t input_degree() const {
    std::uint32_t d = 0;
    for (const auto& p : b_) d = std::max(d, p.max_degree());
    return d;
  }

  long n_max() const {
    if (opts_.n_max) return *opts_.n_max;
    if (job_.n_hi) return *job_.n_hi;
    return 0;
  }

  Context<F>& context() {
    if (!ctx_) {
      if (module().is_zero_module()) throw job_error("the module M = A/J is zero");
      ctx_ = std::make_unique<Context<F>>(module(), ideal(), a_, input_degree(), n_max());
      if (!ctx_->module().validate()) throw hypothesis_error("q is not m-primary on M (l(M/qM) is not finite)");
      out_.summary["n_window"] = {job_.n_lo.value_or(1), ctx_->n_max()};
    }
    return *ctx_;
  }

  void require_sequence() const {
    if (a_.empty()) throw job_error("this command needs [sequence] a");
  }

  void dispatch(const std::string& command) {
    if (command == "hs") return cmd_hs();
    if (command == "initform") return cmd_initform();
    if (command == "bezout") return cmd_bezout();
    require_sequence();
    if (command == "regseq") return cmd_regseq();
    if (command == "homology") return cmd_homology();
    if (command == "formula") return cmd_formula();
    if (command == "multiplicity") return cmd_multiplicity();
    if (command == "decompose") return cmd_decompose();
    if (command == "chi") return cmd_chi();
    if (command == "euler") return cmd_euler();
    if (command == "verify-all") return cmd_verify_all();
    throw job_error("unknown command '" + command + "'");
  }

  void cmd_hs() {
    auto& ctx = context();
    const auto& hs = ctx.hs_q();
    rep_ << "Hilbert-Samuel function n -> l(M/q^n M):\n";
    for (std::size_t k = 0; k < hs.table.n.size(); ++k)
      rep_ << "  n=" << hs.table.n[k] << "  length=" << detail::csv_length(hs.table.values[k]) << "  "
           << hs.table.values[k].certificate() << "\n";
    out_.files["hs.csv"] = length_table_csv(hs.table);
    json e = json::array();
    if (hs.fitted) {
      rep_ << "d=" << hs.dim << ", e0=" << hs.e0() << "\n";
      rep_ << "coefficients e_i:";
      for (auto x : hs.e) rep_ << " " << x, e.push_back(x);
      rep_ << " (polynomial from n=" << hs.poly_from << ")\n";
    } else {
      rep_ << "Hilbert-Samuel polynomial not determined on the computed table\n";
      if (out_.exit_code == 0) out_.exit_code = 1;
    }
    out_.summary["hilbert_samuel"] = {{"fitted", hs.fitted}, {"dim", hs.dim}, {"e", e}, {"poly_from", hs.poly_from},
                                      {"lengths", hs.table.lengths()}};
  }

  void cmd_initform() {
    auto& ctx = context();
    json items = json::array();
    auto show = [&](const std::string& label, const Poly<F>& p) {
      auto init = initial_degree(ctx.ambient(), p);
      rep_ << label << " = " << ring_->print(p) << ": ";
      json j{{"element", ring_->print(p)}};
      if (init.in_all_powers) {
        rep_ << "in q^" << init.c << " up to the truncation bound (initial degree not determined)\n";
        j["degree"] = nullptr;
        if (out_.exit_code == 0) out_.exit_code = 1;
      } else {
        rep_ << "initial degree c=" << init.c;
        j["degree"] = init.c;
        if (job_.q_maximal) {
          rep_ << ", initial form " << ring_->print(p.lowest_form());
          j["initial_form"] = ring_->print(p.lowest_form());
        }
        if (!init.certified_levels.empty()) {
          StabilizedValue sv;
          sv.stable = true;
          sv.levels = init.certified_levels;
          rep_ << "  (non-membership in q^" << init.c + 1 << ": " << sv.certificate() << ")";
          j["certificate"] = sv.certificate();
        }
        rep_ << "\n";
      }
      items.push_back(j);
    };
    for (std::size_t i = 0; i < a_.size(); ++i) show("a_" + std::to_string(i + 1), a_[i]);
    for (std::size_t i = 0; i < b_.size(); ++i) show("b_" + std::to_string(i + 1), b_[i]);
    out_.summary["initial_degrees"] = items;
  }

  void cmd_regseq() {
    auto& ctx = context();
    record(check_regseq_form(ctx, ctx.seq()));
    record(check_rees_regseq(ctx, ctx.seq()));
  }

  void cmd_homology() {
    auto& ctx = context();
    const long lo = job_.n_lo.value_or(1), hi = ctx.n_max();
    HomologyTable L, K;
    L.kind = to_string(ComplexKind::LQuot);
    K.kind = to_string(ComplexKind::KSub);
    json rows = json::array();
    rep_ << "homology lengths l(L_i(n)) | l(H_i(a,q,M;n)), i = 0..d:\n";
    for (long n = lo; n <= hi; ++n) {
      const auto& l = ctx.l_homology(ctx.seq(), n);
      const auto& k = ctx.k_homology(ctx.seq(), n);
      L.put(n, l);
      K.put(n, k);
      rep_ << "  n=" << n << "  L:";
      for (const auto& v : l) rep_ << " " << detail::csv_length(v);
      rep_ << "  | K:";
      for (const auto& v : k) rep_ << " " << detail::csv_length(v);
      rep_ << "  | euler_L=" << (all_stable(l) ? std::to_string(euler_sum(l)) : "?")
           << " chi=" << (all_stable(k) ? std::to_string(euler_sum(k)) : "?") << "\n";
      for (std::size_t i = 0; i < l.size(); ++i) rep_ << "      L_" << i << " " << l[i].certificate() << "\n";
      for (std::size_t i = 0; i < k.size(); ++i) rep_ << "      H_" << i << " " << k[i].certificate() << "\n";
      rows.push_back({{"n", n}, {"L", values_of(l)}, {"K", values_of(k)}, {"L_stable", all_stable(l)},
                      {"K_stable", all_stable(k)}});
    }
    out_.files["L_homology.csv"] = homology_csv(L);
    out_.files["K_homology.csv"] = homology_csv(K);
    out_.summary["homology"] = rows;
  }

  void cmd_formula() {
    auto& ctx = context();
    if (b_.empty()) throw job_error("formula needs [sequence] b");
    auto lift = lift_to_sequence(ctx, b_);
    record(lift.verdict);
    if (!lift.solvable) throw hypothesis_error("the lift is unsolvable, so the colon formula does not apply");
    record(check_vanishing_formula(ctx, lift));
    record(check_graded_koszul_vanishing(ctx, b_.size()));
  }

  void cmd_multiplicity() {
    auto& ctx = context();
    record(check_multiplicity_identity(ctx, b_));
    record(check_improved_bound(ctx, b_));
    record(check_upper_bound_cor54(ctx, b_));
  }

  void cmd_decompose() {
    auto& ctx = context();
    record(decompose_L1(ctx, b_).second);
  }

  void cmd_bezout() {
    if (ring_->nvars() != 2 || a_.size() != 2) throw job_error("bezout needs two variables and a = f, g");
    if (!J_.empty() || !job_.q_maximal) throw job_error("bezout works on A itself with q maximal");
    auto rep = bezout_plane(ring_, a_[0], a_[1]);
    rep_ << "e0=" << rep.e0 << ", c*d=" << rep.c * rep.d_deg << ", t=" << rep.t << ", slack=" << rep.slack << "\n";
    record(rep.verdict);
  }

  void cmd_chi() {
    auto& ctx = context();
    record(check_euler_characteristics(ctx));
    record(check_lemma61(ctx));
    record(check_chi_bounds(ctx));
  }

  void cmd_euler() {
    auto& ctx = context();
    record(check_euler_monotonicity(ctx));
    record(check_remark65_kernel(ctx));
  }

  void cmd_verify_all() {
    auto& ctx = context();
    attempt("THM_3_1", [&] { record(check_regseq_form(ctx, ctx.seq())); });
    attempt("COR_3_2", [&] { record(check_rees_regseq(ctx, ctx.seq())); });
    if (!b_.empty()) {
      attempt("LEMMA_4_2", [&] {
        auto lift = lift_to_sequence(ctx, b_);
        record(lift.verdict);
        if (!lift.solvable) throw hypothesis_error("lift unsolvable; colon formula skipped");
        attempt("THM_4_3", [&] { record(check_vanishing_formula(ctx, lift)); });
        attempt("PROP_4_4", [&] { record(check_graded_koszul_vanishing(ctx, b_.size())); });
      });
    }
    attempt("THM_5_1", [&] { record(check_multiplicity_identity(ctx, b_)); });
    attempt("PROP_5_2", [&] { record(decompose_L1(ctx, b_).second); });
    attempt("COR_5_3", [&] { record(check_improved_bound(ctx, b_)); });
    attempt("COR_5_4", [&] { record(check_upper_bound_cor54(ctx, b_)); });
    if (ring_->nvars() == 2 && a_.size() == 2 && J_.empty() && job_.q_maximal)
      attempt("REMARK_5_5", [&] { record(bezout_plane(ring_, a_[0], a_[1]).verdict); });
    attempt("EULER_CHI", [&] { record(check_euler_characteristics(ctx)); });
    attempt("LEMMA_6_1", [&] { record(check_lemma61(ctx)); });
    attempt("COR_6_2", [&] { record(check_chi_bounds(ctx)); });
    attempt("LEMMA_6_3", [&] { record(check_euler_monotonicity(ctx)); });
    attempt("REMARK_6_5", [&] { record(check_remark65_kernel(ctx)); });
  }

  JobFile job_;
  RunOptions opts_;
  RingPtr<F> ring_;
  std::vector<Poly<F>> J_, q_, a_, b_;
  std::unique_ptr<Context<F>> ctx_;
  std::ostringstream rep_;
  json verdicts_ = json::array();
  RunOutput out_;
};

/// Runs `command` ("run" or empty: the job's own command) on the job.
inline RunOutput run_job(const JobFile& job, std::string command, const RunOptions& opts = {}) {
  if (command.empty() || command == "run") command = job.command;
  if (command.empty()) throw job_error("no command given on the command line or in [job]");
  bool known = false;
  for (const auto& c : job_commands()) known = known || c == command;
  if (!known) throw job_error("unknown command '" + command + "'");
  const FieldSpec fs = opts.field.value_or(job.field);
  if (fs.prime) return JobRunner<PrimeField>(job, PrimeField(fs.p), opts).run(command);
  return JobRunner<RationalField>(job, RationalField{}, opts).run(command);
}

}  // namespace formring
