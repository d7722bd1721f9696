#include "bernsup/reports.hpp"

#include <cstdio>

#include "json.hpp"

namespace bernsup {

namespace {

using ojson = nlohmann::ordered_json;

ojson prob_json(const Dyadic& d, Mode mode) {
  if (mode == Mode::Exact) return ojson{{"num", d.num}, {"den2exp", d.den2exp}};
  return ojson(d.value());
}

ojson probs_json(const std::vector<Dyadic>& ps, Mode mode) {
  ojson arr = ojson::array();
  for (const auto& p : ps) arr.push_back(prob_json(p, mode));
  return arr;
}

ojson estimate_json(const MCEstimate& e) {
  return ojson{{"estimate", e.estimate},
               {"ci95", {e.lo, e.hi}},
               {"samples", e.samples},
               {"seed", e.seed}};
}

ojson plan_json(const ConstantPlan& plan) {
  ojson j;
  j["K"] = plan.truncation;
  ojson levels = ojson::array();
  for (const auto& l : plan.levels) {
    ojson lv;
    lv["k"] = l.k;
    lv["C"] = l.c;
    lv["p"] = l.p;
    if (l.count)
      lv["N"] = *l.count;
    else
      lv["N"] = ojson{{"log2", round_sig12(double(l.log2_count))}};
    lv["base"] = round_sig12(l.base);
    lv["correction"] = round_sig12(l.correction);
    lv["term"] = round_sig12(l.term);
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  j["tailBound"] = round_sig12(plan.tail_bound);
  j["tailBoundLog2"] = round_sig12(double(plan.tail_bound_log2));
  j["total"] = round_sig12(plan.total);
  j["claimedBound"] = kClaimedTotal;
  j["paper_claim_met"] = plan.paper_claim_met;
  return j;
}

ojson check_json(const CheckResult& r) {
  ojson j;
  j["checkId"] = r.check_id;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["holds"] = r.holds;
  j["margin"] = r.margin;
  j["inputs"] = r.inputs_digest;
  j["theoremBacked"] = r.theorem_backed;
  j["hypothesisViolated"] = r.hypothesis_violated;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_json(const TailReport& rep) {
  ojson j;
  j["mode"] = mode_name(rep.mode);
  j["n"] = rep.n;
  j["thresholds"] = rep.thresholds;
  j["pX"] = probs_json(rep.p_x, rep.mode);
  j["pY"] = probs_json(rep.p_y, rep.mode);
  j["pAbsDev"] = probs_json(rep.p_abs_dev, rep.mode);
  j["EX"] = rep.ex;
  j["EYplus"] = rep.ey_plus;
  j["EabsY"] = rep.e_abs_y;
  ojson moms = ojson::array();
  for (size_t i = 0; i < rep.moment_orders.size(); ++i)
    moms.push_back(ojson{{"p", rep.moment_orders[i]}, {"value", rep.moments[i]}});
  j["moments"] = std::move(moms);
  return j.dump();
}

std::string to_json(const MCReport& rep) {
  ojson j;
  j["mode"] = mode_name(rep.mode);
  j["n"] = rep.n;
  j["samples"] = rep.samples;
  j["seed"] = rep.seed;
  j["thresholds"] = rep.thresholds;
  ojson px = ojson::array(), py = ojson::array();
  for (const auto& e : rep.p_x) px.push_back(estimate_json(e));
  for (const auto& e : rep.p_y) py.push_back(estimate_json(e));
  j["pX"] = std::move(px);
  j["pY"] = std::move(py);
  j["EX"] = ojson{{"estimate", rep.ex.mean}, {"ci95", {rep.ex.lo, rep.ex.hi}}};
  return j.dump();
}

std::string to_json(const ConstantPlan& plan) { return plan_json(plan).dump(); }

std::string to_json(const ChainingNet& net) {
  ojson j;
  ojson levels = ojson::array();
  for (const auto& l : net.levels)
    levels.push_back(ojson{{"k", l.k}, {"N", l.count}, {"points", l.points}});
  j["levels"] = std::move(levels);
  return j.dump();
}

std::string to_json(const CheckResult& r) { return check_json(r).dump(); }

std::string to_json(const SuiteReport& rep) {
  ojson j;
  j["summary"] = ojson{{"total", rep.summary.total},
                       {"passed", rep.summary.passed},
                       {"failed", rep.summary.failed},
                       {"skippedHypothesis", rep.summary.skipped_hypothesis}};
  ojson cands = ojson::array();
  for (const auto& c : rep.conjecture_candidates)
    cands.push_back(ojson{{"familyDigest", c.family_digest}, {"n", c.n}, {"ratio", c.ratio}});
  j["conjectureCandidates"] = std::move(cands);
  ojson results = ojson::array();
  for (const auto& r : rep.results) results.push_back(check_json(r));
  j["results"] = std::move(results);
  return j.dump();
}

std::string to_json(const SearchState& st) {
  ojson j;
  j["n"] = st.incumbent.n();
  j["c"] = st.c;
  j["budget"] = st.budget;
  j["evaluations"] = st.evaluations;
  j["seed"] = st.seed;
  j["ratio"] = st.ratio;
  j["countX"] = st.count_x;
  j["countY"] = st.count_y;
  j["familyDigest"] = st.family_digest;
  j["counterexampleCandidate"] = st.counterexample_candidate;
  j["family"] = nlohmann::ordered_json::parse(family_to_json(st.incumbent));
  return j.dump();
}

std::string to_json(std::span<const SharpnessRow> rows, double c, uint64_t budget, uint64_t seed) {
  ojson j;
  j["c"] = c;
  j["budget"] = budget;
  j["seed"] = seed;
  ojson arr = ojson::array();
  for (const auto& r : rows)
    arr.push_back(ojson{{"n", r.n},
                        {"bestRatio", r.best_ratio},
                        {"familyDigest", r.family_digest},
                        {"counterexampleCandidate", r.counterexample_candidate},
                        {"evaluations", r.evaluations}});
  j["rows"] = std::move(arr);
  return j.dump();
}

std::string to_json(const ConstantRow& row) {
  ojson j;
  j["preset"] = preset_name(row.preset);
  j["c1"] = row.c1;
  j["multiplier"] = round_sig12(row.multiplier);
  j["tailConstant"] = round_sig12(row.tail_constant);
  j["alpha"] = row.alpha;
  j["theta"] = round_sig12(row.theta);
  return j.dump();
}

std::string to_json(const FamilyBound& fb, const ConstantPlan& plan, const std::string& family_digest) {
  ojson j;
  j["familyDigest"] = family_digest;
  j["sigma"] = fb.sigma;
  j["EXupper"] = fb.bound;
  j["closed"] = fb.closed;
  j["closureLevel"] = fb.closure_level;
  j["residual"] = fb.residual;
  j["plan"] = plan_json(plan);
  return j.dump();
}

std::string suite_to_csv(const SuiteReport& rep) {
  std::string out = "checkId,lhs,rhs,holds,margin,inputs,theoremBacked,hypothesisViolated,note\n";
  for (const auto& r : rep.results) {
    out += r.check_id;
    out += ',';
    out += fmt(r.lhs);
    out += ',';
    out += fmt(r.rhs);
    out += ',';
    out += r.holds ? "true" : "false";
    out += ',';
    out += fmt(r.margin);
    out += ',';
    out += r.inputs_digest;
    out += ',';
    out += r.theorem_backed ? "true" : "false";
    out += ',';
    out += r.hypothesis_violated ? "true" : "false";
    out += ',';
    out += r.note;
    out += '\n';
  }
  return out;
}

std::string sharpness_to_csv(std::span<const SharpnessRow> rows) {
  std::string out = "n,bestRatio,familyDigest,counterexampleCandidate,evaluations\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += fmt(r.best_ratio);
    out += ',';
    out += r.family_digest;
    out += ',';
    out += r.counterexample_candidate ? "true" : "false";
    out += ',';
    out += std::to_string(r.evaluations);
    out += '\n';
  }
  return out;
}

}  // namespace bernsup
