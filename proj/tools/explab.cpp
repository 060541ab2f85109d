// expander-lab CLI: runs the experiment suites (projective geometry checks,
// action formulas, irreducibility, fixed spaces, gap surveys, witness norms,
// the appendix combinatorics and spectral experiments) and emits CSV/JSON
// reports with deterministic formatting.
//
// Exit codes: 0 all checks passed, 1 a mathematical check failed,
// 2 usage/config error, 3 resource or convergence error.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "explab/report.hpp"
#include "explab/representation.hpp"
#include "explab/sl2_lab.hpp"
#include "explab/sl3_lab.hpp"

namespace {

using namespace explab;

struct Output {
  std::string format = "json";
  std::string path;  // empty = stdout
};

std::vector<std::int64_t> primes_upto(std::int64_t n, bool odd_only) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= n; ++p)
    if (is_prime(p) && !(odd_only && p == 2)) out.push_back(p);
  return out;
}

std::vector<std::int64_t> parse_prime_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const std::int64_t p = std::stoll(item);
    if (!is_prime(p)) throw std::domain_error("not a prime: " + item);
    out.push_back(p);
  }
  if (out.empty()) throw std::domain_error("empty prime list");
  return out;
}

std::string csv_cell(const Json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_sig(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string records_csv(const std::vector<Json>& records, const std::vector<std::string>& cols) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_cell(rec.at(cols[i]));
    out << "\n";
  }
  return out.str();
}

int finish(SuiteReport& rep, const Output& output, const std::vector<std::string>& csv_cols) {
  std::string text;
  if (output.format == "csv")
    text = records_csv(rep.records, csv_cols);
  else if (output.format == "json")
    text = report_to_json(rep).dump(2) + "\n";
  else
    throw std::domain_error("unknown format: " + output.format);
  if (output.path.empty())
    std::cout << text;
  else
    write_text_file(output.path, text);
  std::cerr << rep.command << ": " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.records.size()
            << " records, " << format_sig(rep.elapsed_seconds, 3) << "s)\n";
  return rep.pass ? 0 : 1;
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(clock::now() - start_).count(); }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

// ---------------------------------------------------------------------------

int run_projective_enumerate(std::int64_t p, int dim, bool with_points, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "projective enumerate";
  rep.config = {{"p", p}, {"dim", dim}};
  const auto space = ProjectiveSpace::enumerate(p, dim);
  const std::int64_t closed_form = dim == 1 ? p + 1 : p * p + p + 1;
  Json rec{{"p", p},
           {"dim", dim},
           {"size", space.size()},
           {"closed_form", closed_form},
           {"claim", dim == 1 ? "|P^1(F_p)| = p+1" : "|P^2(F_p)| = p^2+p+1"}};
  if (with_points) {
    Json pts = Json::array();
    for (int i = 0; i < space.size(); ++i) pts.push_back(space.point(i).str());
    rec["points"] = pts;
  }
  rep.add(std::move(rec), space.size() == closed_form);
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "dim", "size", "closed_form", "pass"});
}

int run_verify_actions(const std::vector<std::int64_t>& ps, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "verify actions";
  for (const std::int64_t p : ps) {
    const ActionFormulaReport r = verify_action_formulas(p);
    Json rec{{"p", p},
             {"points_checked", r.points_checked},
             {"failures", r.failures},
             {"claim", "sigma_p(h)[t]=[t+1], sigma_p(k)[t]=[-1/t] pointwise"}};
    rep.add(std::move(rec), r.pass());
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "points_checked", "pass"});
}

int run_verify_irreducibility(const std::string& group, const std::vector<std::int64_t>& ps,
                              const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "verify irreducibility";
  rep.config = {{"group", group}};
  for (const std::int64_t p : ps) {
    if (group == "sl2") {
      const auto space = ProjectiveSpace::enumerate(p, 1);
      const int cd = commutant_dimension({permutation_of(generator_matrix("h", Group::SL2), space),
                                          permutation_of(generator_matrix("k", Group::SL2), space)});
      const HEigenspaceReport he = h_eigenspace_check(space);
      Json rec{{"p", p},
               {"commutant_dimension", cd},
               {"h_eigenspace_dimension", he.dimension},
               {"h_eigenspace_basis_matches", he.expected_basis_spans},
               {"claim", "commutant dimension 2: the mean-zero subrepresentation is irreducible"}};
      rep.add(std::move(rec), cd == 2 && he.pass());
    } else if (group == "sl3") {
      const auto space = ProjectiveSpace::enumerate(p, 2);
      std::vector<Permutation> perms;
      for (const auto& g : sl3_symmetric_set().elements) perms.push_back(permutation_of(g.matrix, space));
      const int cd = commutant_dimension(perms);
      Json rec{{"p", p},
               {"commutant_dimension", cd},
               {"claim", "commutant dimension 2: the mean-zero subrepresentation is irreducible"}};
      rep.add(std::move(rec), cd == 2);
    } else {
      throw std::domain_error("unknown group: " + group);
    }
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "commutant_dimension", "pass"});
}

int run_verify_fixed_space(const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs,
                           const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "verify fixed-space";
  for (const auto& [q, p] : pairs) {
    const auto bq = RepresentationBundle::build(ProjectiveSpace::enumerate(q, 1), sl2_generating_set());
    const auto bp = RepresentationBundle::build(ProjectiveSpace::enumerate(p, 1), sl2_generating_set());
    std::vector<Permutation> tensors;
    for (const auto& label : {"h", "k"})
      tensors.push_back(tensor_permutation(bq.permutation(label), bp.permutation(label)));
    const FixedSpaceResult fs = fixed_space(tensors);
    bool constant = fs.dimension == 1;
    if (constant)
      for (const auto& c : fs.rational_basis[0]) constant = constant && c == fs.rational_basis[0][0];
    Json rec{{"q", q},
             {"p", p},
             {"dimension", fs.dimension},
             {"basis_is_chi_tensor", constant},
             {"claim", "fixed vectors of conj(pi_q) (x) pi_p are multiples of chi_q (x) chi_p"}};
    rep.add(std::move(rec), fs.dimension == 1 && constant);
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "p", "dimension", "pass"});
}

int run_gap_sl2(std::int64_t max_prime, const std::string& sigma, int threads, double eig_tol,
                const std::string& baseline_path, const std::string& write_baseline_path,
                const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "gap sl2";
  rep.config = {{"max_prime", max_prime}, {"sigma", sigma}, {"threads", threads}, {"tol_eig", eig_tol}};
  const SigmaVariant variant = sigma == "ihk" ? SigmaVariant::IHK : SigmaVariant::Symmetric;
  if (sigma != "ihk" && sigma != "symmetric") throw std::domain_error("--sigma must be symmetric or ihk");
  const auto records = sl2_gap_survey(primes_upto(max_prime, /*odd_only=*/true), variant, threads, eig_tol);
  if (!write_baseline_path.empty())
    write_text_file(write_baseline_path, sl2_gap_baseline_json(records, variant).dump(2) + "\n");
  for (const auto& r : records) {
    Json rec{{"p", r.p},
             {"n", r.n},
             {"second_eigenvalue", r.second_eigenvalue},
             {"gap", r.gap},
             {"claim", "per-prime expander gap of the mean-zero representation"}};
    rep.add(std::move(rec), r.gap > 0);
  }
  if (!baseline_path.empty()) {
    const BaselineDiff diff = compare_gap_baseline(records, read_json_file(baseline_path));
    for (const auto& reg : diff.regressions)
      rep.add(Json{{"p", reg.p},
                   {"kind", "baseline_regression"},
                   {"baseline_gap", reg.baseline_gap},
                   {"gap", reg.new_gap}},
              false);
    rep.config["baseline"] = baseline_path;
    rep.config["baseline_additions"] = diff.additions;
    rep.config["baseline_missing"] = diff.missing;
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "n", "second_eigenvalue", "gap"});
}

int run_gap_sl3(const std::vector<std::int64_t>& qs, int threads, int dense_cap, double eig_tol,
                const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "gap sl3";
  rep.config = {{"threads", threads}, {"dense_cap", dense_cap}, {"tol_eig", eig_tol}};
  GapExperimentOptions opt;
  opt.dense_cap = dense_cap;
  opt.eig_tol = eig_tol;
  const auto records = sl3_kazhdan_survey(qs, opt, threads);
  for (const auto& r : records) {
    Json rec{{"q", r.q},
             {"n", r.n},
             {"dim", r.dimension},
             {"top_multiplicity", r.top_multiplicity},
             {"epsilon", r.epsilon},
             {"claim", "spec(s) in [-1, 1-eps] u {1} with fixed space of dimension 2"}};
    rep.add(std::move(rec), r.pass);
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "n", "dim", "top_multiplicity", "epsilon", "pass"});
}

int run_witness(const std::vector<std::int64_t>& qs, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "witness-norm";
  for (const std::int64_t q : qs) {
    const double norm = witness_norm(q);
    const double disp = chi_orthogonal_displacement(q);
    const bool ok = std::abs(norm - 4.0) <= 1e-9 && std::abs(disp - std::sqrt(2.0)) <= 1e-12;
    Json rec{{"q", q},
             {"norm", norm},
             {"norm_error", std::abs(norm - 4.0)},
             {"displacement", disp},
             {"displacement_error", std::abs(disp - std::sqrt(2.0))},
             {"claim", "|| v(x)v + sum_{I,h,k} pi(x)pi || = 4 and ||chi - v chi|| = sqrt(2)"}};
    rep.add(std::move(rec), ok);
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "norm", "norm_error", "displacement", "pass"});
}

int run_beta(int samples, int dim, std::uint64_t seed, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "beta-test";
  rep.config = {{"samples", samples}, {"dim", dim}, {"seed", seed}};
  const BetaSuiteResult res = beta_defect_suite(samples, dim, seed);
  Json rec{{"samples", res.samples},
           {"violations", res.violations},
           {"max_defect_over_bound", res.max_ratio},
           {"claim", "near-fixed defect of a contraction family is at most 2 sqrt(2 n eps)"}};
  rep.add(std::move(rec), res.violations == 0);
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"samples", "violations", "max_defect_over_bound", "pass"});
}

int run_appendix_chain(int length, std::int64_t start, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix chain";
  rep.config = {{"length", length}, {"start", start}};
  const PrimeChain chain = dirichlet_chain(length, start);
  for (std::size_t i = 0; i < chain.primes.size(); ++i)
    rep.add(Json{{"index", i}, {"prime", chain.primes[i]}, {"claim", "p = 1 mod q for all chain pairs"}},
            true);
  rep.pass = rep.pass && chain.valid();
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"index", "prime"});
}

int run_appendix_xsets(const std::vector<std::int64_t>& chain, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix xsets";
  for (const std::int64_t p : chain) {
    const CharacteristicSet xs = x_set(p);
    Json rec{{"p", p},
             {"size", xs.size},
             {"lower", static_cast<double>(xs.space_size) / 3.0},
             {"upper", static_cast<double>(xs.space_size) / 2.0},
             {"claim", "|L_p|/3 < |X_p| = (p^2+p)/2 < |L_p|/2"}};
    rep.add(std::move(rec), xs.bounds_hold());
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "size", "lower", "upper", "pass"});
}

int run_appendix_disjoint(const std::vector<std::int64_t>& chain, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix disjoint";
  for (const std::int64_t p : chain)
    for (const std::int64_t q : chain) {
      if (p == q) continue;
      const bool ok = triple_disjointness(p, q);
      rep.add(Json{{"p", p},
                   {"q", q},
                   {"claim", "sigma_p(h^q)X_p, X_p, sigma_p(h^-q)X_p are disjoint"}},
              ok);
    }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "q", "pass"});
}

int run_appendix_fbound(const std::vector<std::int64_t>& chain, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix fbound";
  for (const std::int64_t p : chain)
    for (const std::int64_t q : chain) {
      if (p == q) continue;
      const Rational fmax = f_bound(p, q);
      Json rec{{"p", p},
               {"q", q},
               {"fmax", to_string(fmax)},
               {"fmax_value", to_double(fmax)},
               {"claim", "f = (1/3)(indicator sum) <= 2/3"}};
      rep.add(std::move(rec), fmax <= Rational(2, 3));
    }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"p", "q", "fmax_value", "pass"});
}

int run_appendix_tnorm(const std::vector<std::int64_t>& qs, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix tnorm";
  for (const std::int64_t q : qs) {
    const TNormResult r = t_norm_formula(q);
    Json rec{{"q", r.q},
             {"n", r.n},
             {"xsize", r.xsize},
             {"closed_form", to_string(r.closed_form)},
             {"closed_form_value", to_double(r.closed_form)},
             {"matrix_value", r.matrix_value},
             {"claim", "||t_q(T~)||_HS^2 < 25/36 with closed form = matrix value"}};
    rep.add(std::move(rec), r.agree && r.below_bound);
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "n", "xsize", "closed_form_value", "matrix_value", "pass"});
}

int run_appendix_trace(const std::vector<std::int64_t>& qs, const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix trace";
  for (const std::int64_t q : qs) {
    const Rational v = trace_identity(q);
    Json rec{{"q", q},
             {"value", to_string(v)},
             {"value_float", to_double(v)},
             {"claim", "Tr(T*T e_q) = |X_q|/|L_q| > 1/3"}};
    rep.add(std::move(rec), v > Rational(1, 3));
  }
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "value_float", "pass"});
}

Json gap_record_json(const GapExperimentResult& r) {
  return Json{{"q", r.q},
              {"standin", r.stand_in},
              {"dim", r.dimension},
              {"two_mult", r.two_multiplicity},
              {"k1_dim", r.k1_dimension},
              {"gap", r.gap_below_two},
              {"epsilon_emp", r.epsilon_emp},
              {"min_eigenvalue", r.min_eigenvalue},
              {"dense_path", r.dense_path},
              {"claim", "2 in spec(r_q) in [-1, 2 - 1e-4 eps] u {2} with multiplicity dim K_1"}};
}

int run_appendix_gap(std::int64_t q, const std::string& standin, int dense_cap, double eig_tol,
                     const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix gap";
  rep.config = {{"q", q}, {"standin", standin}, {"dense_cap", dense_cap}, {"tol_eig", eig_tol}};
  GapExperimentOptions opt;
  opt.dense_cap = dense_cap;
  opt.eig_tol = eig_tol;
  const GapExperimentResult r = gap_experiment(q, StandIn::parse(standin), opt);
  rep.add(gap_record_json(r), r.pass);
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "standin", "dim", "two_mult", "k1_dim", "gap", "epsilon_emp", "pass"});
}

int run_appendix_projection(std::int64_t q, const std::string& standin, int dense_cap, double eig_tol,
                            const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "appendix projection";
  rep.config = {{"q", q}, {"standin", standin}};
  GapExperimentOptions opt;
  opt.dense_cap = dense_cap;
  opt.eig_tol = eig_tol;
  const SpectralProjectionTrace t = spectral_projection_trace(q, StandIn::parse(standin), opt);
  Json rec{{"q", t.q},
           {"standin", t.stand_in},
           {"dim", t.dimension},
           {"rank", t.rank},
           {"tau", t.tau},
           {"projection_defect", t.projection_defect},
           {"claim", "the spectral projection at 2 has rank dim K_1 and positive normalized trace"}};
  rep.add(std::move(rec), t.tau > 0);
  rep.elapsed_seconds = timer.seconds();
  return finish(rep, output, {"q", "standin", "dim", "rank", "tau", "pass"});
}

int run_baseline_compare(const std::string& report_path, const std::string& baseline_path, double tol,
                         const Output& output) {
  Timer timer;
  SuiteReport rep;
  rep.command = "baseline compare";
  rep.config = {{"report", report_path}, {"baseline", baseline_path}, {"tol", tol}};
  const Json report = read_json_file(report_path);
  std::vector<SelbergGapRecord> records;
  for (const auto& rec : report.at("records")) {
    if (!rec.contains("p") || !rec.contains("gap")) continue;
    SelbergGapRecord r;
    r.p = rec["p"].get<std::int64_t>();
    r.gap = rec["gap"].get<double>();
    records.push_back(r);
  }
  if (records.empty()) throw std::domain_error("report contains no gap records");
  const BaselineDiff diff = compare_gap_baseline(records, read_json_file(baseline_path), tol);
  for (const auto& reg : diff.regressions)
    rep.add(Json{{"p", reg.p},
                 {"kind", "regression"},
                 {"baseline_gap", reg.baseline_gap},
                 {"gap", reg.new_gap}},
            false);
  for (const std::int64_t p : diff.additions)
    rep.add(Json{{"p", p}, {"kind", "addition"}, {"baseline_gap", 0.0}, {"gap", 0.0}}, true);
  rep.elapsed_seconds = timer.seconds();
  if (rep.records.empty()) rep.add(Json{{"p", 0}, {"kind", "no_diff"}, {"baseline_gap", 0.0}, {"gap", 0.0}}, true);
  return finish(rep, output, {"p", "kind", "baseline_gap", "gap", "pass"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"expander-lab: spectral and combinatorial checks for the finite permutation representations of SL(2,Z) and SL(3,Z)"};
  app.require_subcommand(1);

  Output output;
  std::int64_t p = 0, q = 0, max_prime = 0, start = 3;
  std::uint64_t seed = 20240817;
  int dim = 1, threads = 0, length = 3, samples = 1000, beta_dim = 6;
  int dense_cap = 2000;
  double tol_eig = 1e-13, baseline_tol = 1e-9;
  bool with_points = false;
  std::string group = "sl2", sigma = "symmetric", standin = "trivial";
  std::string chain_text = "3,7,43", baseline_path, report_path;
  int exit_code = 0;

  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", output.format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", output.path, "Write the report to this file instead of stdout");
  };
  const auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "Worker threads (default: EXPANDER_LAB_THREADS or hardware)");
  };

  // projective enumerate
  auto* projective = app.add_subcommand("projective", "Projective space utilities");
  auto* penum = projective->add_subcommand("enumerate", "Enumerate P^dim(F_p) and check the point count");
  penum->add_option("--p", p, "Prime")->required();
  penum->add_option("--dim", dim, "Projective dimension (1 or 2)")->check(CLI::IsMember({1, 2}));
  penum->add_flag("--points", with_points, "Include the point list in the JSON report");
  add_output(penum);
  penum->callback([&] { exit_code = run_projective_enumerate(p, dim, with_points, output); });

  // verify ...
  auto* verify = app.add_subcommand("verify", "Exact structural checks");
  auto* vact = verify->add_subcommand("actions", "Pointwise generator action formulas on P^1(F_p)");
  vact->add_option("--p", p, "Single prime");
  vact->add_option("--max-prime", max_prime, "Check every prime up to this bound");
  add_output(vact);
  vact->callback([&] {
    const auto ps = p ? std::vector<std::int64_t>{p} : primes_upto(max_prime ? max_prime : 31, false);
    exit_code = run_verify_actions(ps, output);
  });

  auto* virr = verify->add_subcommand("irreducibility", "Commutant dimension 2 by two independent methods");
  virr->add_option("--group", group, "sl2 or sl3")->check(CLI::IsMember({"sl2", "sl3"}));
  virr->add_option("--p", p, "Single prime");
  virr->add_option("--max-prime", max_prime, "Check every prime up to this bound");
  add_output(virr);
  virr->callback([&] {
    const auto ps = p ? std::vector<std::int64_t>{p}
                      : primes_upto(max_prime ? max_prime : (group == "sl2" ? 31 : 7), group == "sl3");
    exit_code = run_verify_irreducibility(group, ps, output);
  });

  auto* vfix = verify->add_subcommand("fixed-space", "Fixed space of conj(pi_q) (x) pi_p is one dimensional");
  vfix->add_option("--p", p, "First prime");
  vfix->add_option("--q", q, "Second prime");
  vfix->add_option("--max-prime", max_prime, "All ordered pairs of distinct primes up to this bound");
  add_output(vfix);
  vfix->callback([&] {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    if (p && q) {
      if (p == q) throw std::domain_error("fixed-space: p and q must differ");
      pairs.emplace_back(q, p);
    } else {
      const auto ps = primes_upto(max_prime ? max_prime : 13, false);
      for (const auto a : ps)
        for (const auto b : ps)
          if (a != b) pairs.emplace_back(a, b);
    }
    exit_code = run_verify_fixed_space(pairs, output);
  });

  // gap ...
  auto* gap = app.add_subcommand("gap", "Spectral gap surveys");
  auto* gsl2 = gap->add_subcommand("sl2", "Per-prime expander gaps on P^1(F_p)");
  gsl2->add_option("--max-prime", max_prime, "Largest prime surveyed")->default_val(200);
  gsl2->add_option("--sigma", sigma, "Generator set: symmetric {h,h^-1,k} or ihk {I,h,k}")
      ->check(CLI::IsMember({"symmetric", "ihk"}));
  gsl2->add_option("--baseline", baseline_path, "Compare gaps against this committed baseline");
  std::string write_baseline_path;
  gsl2->add_option("--write-baseline", write_baseline_path, "Write the surveyed gaps as a new baseline file");
  gsl2->add_option("--tol-eig", tol_eig, "Eigensolver tolerance")->check(CLI::PositiveNumber);
  add_threads(gsl2);
  add_output(gsl2);
  gsl2->callback([&] {
    exit_code = run_gap_sl2(max_prime, sigma, resolve_thread_count(threads), tol_eig, baseline_path,
                            write_baseline_path, output);
  });

  std::vector<std::int64_t> qs;
  auto* gsl3 = gap->add_subcommand("sl3", "Kazhdan-style gaps of s on conj(pi_q) (x) pi_q");
  gsl3->add_option("--q", qs, "Primes q (repeatable)");
  gsl3->add_option("--dense-cap", dense_cap, "Dense eigensolver cap");
  gsl3->add_option("--tol-eig", tol_eig, "Eigensolver tolerance")->check(CLI::PositiveNumber);
  add_threads(gsl3);
  add_output(gsl3);
  gsl3->callback([&] {
    if (qs.empty()) qs = {3, 7};
    exit_code = run_gap_sl3(qs, resolve_thread_count(threads), dense_cap, tol_eig, output);
  });

  // witness-norm
  auto* witness = app.add_subcommand("witness-norm", "Norm-4 witness operator and sqrt(2) displacement");
  witness->add_option("--q", q, "Single odd prime");
  witness->add_option("--max-prime", max_prime, "All odd primes up to this bound");
  add_output(witness);
  witness->callback([&] {
    const auto list = q ? std::vector<std::int64_t>{q} : primes_upto(max_prime ? max_prime : 13, true);
    exit_code = run_witness(list, output);
  });

  // beta-test
  auto* beta = app.add_subcommand("beta-test", "Sampled defect bound 2 sqrt(2 n eps) for contraction families");
  beta->add_option("--samples", samples, "Number of sampled families")->check(CLI::PositiveNumber);
  beta->add_option("--dim", beta_dim, "Ambient dimension")->check(CLI::PositiveNumber);
  beta->add_option("--seed", seed, "RNG seed");
  add_output(beta);
  beta->callback([&] { exit_code = run_beta(samples, beta_dim, seed, output); });

  // appendix ...
  auto* appendix = app.add_subcommand("appendix", "Projective-plane experiments for SL(3,Z)");
  auto* achain = appendix->add_subcommand("chain", "Greedy Dirichlet prime chain");
  achain->add_option("--length", length, "Chain length")->check(CLI::PositiveNumber);
  achain->add_option("--start", start, "First chain prime");
  add_output(achain);
  achain->callback([&] { exit_code = run_appendix_chain(length, start, output); });

  const auto add_chain_opt = [&](CLI::App* cmd) {
    cmd->add_option("--chain", chain_text, "Comma-separated chain primes (default 3,7,43)");
  };
  auto* axsets = appendix->add_subcommand("xsets", "Sizes and strict bounds of the sets X_p");
  add_chain_opt(axsets);
  add_output(axsets);
  axsets->callback([&] { exit_code = run_appendix_xsets(parse_prime_list(chain_text), output); });

  auto* adis = appendix->add_subcommand("disjoint", "Triple disjointness of the shifted X_p");
  add_chain_opt(adis);
  add_output(adis);
  adis->callback([&] { exit_code = run_appendix_disjoint(parse_prime_list(chain_text), output); });

  auto* afb = appendix->add_subcommand("fbound", "Max of the indicator average f, at most 2/3");
  add_chain_opt(afb);
  add_output(afb);
  afb->callback([&] { exit_code = run_appendix_fbound(parse_prime_list(chain_text), output); });

  auto* atn = appendix->add_subcommand("tnorm", "Cut-down Hilbert-Schmidt norm of the commutant unit");
  atn->add_option("--q", q, "Single prime");
  add_chain_opt(atn);
  add_output(atn);
  atn->callback([&] {
    exit_code = run_appendix_tnorm(q ? std::vector<std::int64_t>{q} : parse_prime_list(chain_text), output);
  });

  auto* atr = appendix->add_subcommand("trace", "Trace identity Tr(T*T e_q) = |X_q|/|L_q|");
  atr->add_option("--q", q, "Single prime");
  add_chain_opt(atr);
  add_output(atr);
  atr->callback([&] {
    exit_code = run_appendix_trace(q ? std::vector<std::int64_t>{q} : parse_prime_list(chain_text), output);
  });

  auto* agap = appendix->add_subcommand("gap", "Isolated eigenvalue 2 of r = s + t");
  agap->add_option("--q", q, "Chain prime q")->required();
  agap->add_option("--standin", standin, "Stand-in representation: trivial or perm:R");
  agap->add_option("--dense-cap", dense_cap, "Dense eigensolver cap");
  agap->add_option("--tol-eig", tol_eig, "Eigensolver tolerance")->check(CLI::PositiveNumber);
  add_output(agap);
  agap->callback([&] { exit_code = run_appendix_gap(q, standin, dense_cap, tol_eig, output); });

  auto* aproj = appendix->add_subcommand("projection", "Spectral projection at 2 and its normalized trace");
  aproj->add_option("--q", q, "Chain prime q")->required();
  aproj->add_option("--standin", standin, "Stand-in representation: trivial or perm:R");
  aproj->add_option("--dense-cap", dense_cap, "Dense eigensolver cap");
  aproj->add_option("--tol-eig", tol_eig, "Eigensolver tolerance")->check(CLI::PositiveNumber);
  add_output(aproj);
  aproj->callback([&] { exit_code = run_appendix_projection(q, standin, dense_cap, tol_eig, output); });

  // baseline compare
  auto* baseline = app.add_subcommand("baseline", "Baseline management");
  auto* bcomp = baseline->add_subcommand("compare", "Compare a gap report against a committed baseline");
  bcomp->add_option("--report", report_path, "JSON report produced by gap sl2")->required();
  bcomp->add_option("--baseline", baseline_path, "Committed baseline JSON")->required();
  bcomp->add_option("--tol", baseline_tol, "Regression tolerance")->check(CLI::PositiveNumber);
  add_output(bcomp);
  bcomp->callback([&] { exit_code = run_baseline_compare(report_path, baseline_path, baseline_tol, output); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const consistency_error& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
