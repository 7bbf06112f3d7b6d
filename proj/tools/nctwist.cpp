// Batch command-line front end: loads a triple document, runs one of the
// verification or transformation commands, and emits a JSON report with a
// stable field order. Exit codes: 0 all checks passed / run completed,
// 1 condition violations found, 2 input or usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nctwist/breaking.hpp"
#include "nctwist/fluct.hpp"
#include "nctwist/gauge.hpp"
#include "nctwist/models.hpp"
#include "nctwist/rng.hpp"
#include "nctwist/serialize.hpp"

namespace {

using nctwist::CMatrix;
using ojson = nlohmann::ordered_json;

ojson condition_rows(const nctwist::ConditionReport& report) {
  ojson rows = ojson::array();
  for (const auto& c : report.conditions)
    rows.push_back(ojson{{"name", c.name},
                         {"residual", c.residual},
                         {"threshold", c.threshold},
                         {"pass", c.pass},
                         {"required", c.required}});
  return rows;
}

ojson sign_json(const nctwist::SignEstimate& s) {
  return ojson{{"value", s.value},
               {"residual_pos", s.residual_pos},
               {"residual_neg", s.residual_neg},
               {"applicable", s.applicable}};
}

ojson signs_json(const nctwist::TripleSigns& s) {
  ojson alpha1 = ojson::array(), alpha2 = ojson::array();
  for (const auto& a : s.alpha1) alpha1.push_back(sign_json(a));
  for (const auto& a : s.alpha2) alpha2.push_back(sign_json(a));
  return ojson{{"epsilon", sign_json(s.epsilon)},
               {"epsilon_prime", sign_json(s.epsilon_prime)},
               {"epsilon_second", sign_json(s.epsilon_second)},
               {"alpha1", std::move(alpha1)},
               {"alpha2", std::move(alpha2)},
               {"mildly_twisted", s.mildly_twisted()}};
}

ojson signature_json(const nctwist::StructureSignature& sig) {
  ojson blocks = ojson::array();
  for (const auto& b : sig.blocks)
    blocks.push_back(ojson{{"field", std::string(1, b.field ? b.field : '?')},
                           {"k", b.k},
                           {"real_dim", b.real_dim}});
  return ojson{{"label", sig.to_string()},
               {"blocks", std::move(blocks)},
               {"real_dim", sig.real_dim},
               {"commutative", sig.commutative},
               {"recognized", sig.recognized}};
}

ojson break_json(const nctwist::BreakReport& r) {
  return ojson{{"surviving_real_dim", r.surviving.dim()},
               {"iterations", r.iterations},
               {"is_subalgebra", r.is_subalgebra},
               {"closure_residual", r.closure_residual},
               {"max_residual", r.max_residual},
               {"signature", signature_json(r.signature)}};
}

ojson matrix_json(const CMatrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(ojson::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

nctwist::OneForm random_form(const nctwist::TwistedTriple& t, int pairs, std::uint64_t seed,
                             bool symmetrize) {
  auto coeffs = nctwist::random_generator_pairs(t.algebra, pairs, seed);
  return nctwist::build_one_form(t.algebra, coeffs, symmetrize);
}

void emit(const ojson& report, const std::string& out_path, bool also_stdout) {
  std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    out << text;
  }
  if (also_stdout || out_path.empty()) std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite twisted spectral triples: verification, fluctuation, gauge\n"
               "transformation, and first-order breaking analysis."};
  app.require_subcommand(1);

  std::string in_path, out_path;
  std::uint64_t seed = 7;
  double rtol = -1.0, atol = -1.0;
  int pairs = 2;
  bool symmetrize = false;
  std::string ansatz_name = "signed-diagonal";
  std::string decomposition = "file";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--in", in_path, "Input triple document (JSON)")->required();
    cmd->add_option("--out", out_path, "Output file");
    cmd->add_option("--seed", seed, "Random seed (default 7)");
    cmd->add_option("--rtol", rtol, "Relative tolerance override")->check(CLI::PositiveNumber);
    cmd->add_option("--atol", atol, "Absolute tolerance override")->check(CLI::PositiveNumber);
  };

  CLI::App* cmd_check = app.add_subcommand("check", "Verify all defining conditions");
  add_common(cmd_check);

  CLI::App* cmd_fluct = app.add_subcommand("fluctuate", "Apply a seeded random inner fluctuation");
  add_common(cmd_fluct);
  cmd_fluct->add_option("--pairs", pairs, "Number of generator pairs in the one-form (default 2)")
      ->check(CLI::PositiveNumber);
  cmd_fluct->add_flag("--symmetrize", symmetrize, "Symmetrize the one-form (omega = omega^*)");

  CLI::App* cmd_gauge = app.add_subcommand("gauge", "Gauge-transform a seeded random potential");
  add_common(cmd_gauge);
  cmd_gauge->add_option("--pairs", pairs, "Number of generator pairs in the one-form (default 2)")
      ->check(CLI::PositiveNumber);

  CLI::App* cmd_break = app.add_subcommand("break", "First-order subalgebra breaking analysis");
  add_common(cmd_break);
  cmd_break->add_option("--decomposition", decomposition,
                        "Dirac splitting: file, none, two or three (default file)");

  CLI::App* cmd_search = app.add_subcommand("search", "Twist search over a structured ansatz");
  add_common(cmd_search);
  cmd_search->add_option("--ansatz", ansatz_name,
                         "identity, signed-diagonal or signed-block-permutation");
  cmd_search->add_option("--decomposition", decomposition,
                         "Dirac splitting: file, none, two or three (default file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nctwist::Tolerance tol;
    if (rtol > 0) tol.rtol = rtol;
    if (atol > 0) tol.atol = atol;

    nctwist::TwistedTriple triple = nctwist::load_triple_file(in_path);
    if (decomposition != "file") triple = nctwist::decompose_dirac(triple, decomposition);

    ojson report;
    report["schema"] = nctwist::kReportSchema;
    report["command"] = app.get_subcommands().front()->get_name();
    report["input"] = in_path;
    report["seed"] = seed;
    report["tolerance"] = ojson{{"atol", tol.atol}, {"rtol", tol.rtol}};
    report["triple"] = ojson{{"name", triple.name},
                             {"dim", triple.dim()},
                             {"components", triple.components.size()}};
    bool pass = true;

    if (cmd_check->parsed()) {
      nctwist::ConditionReport cr = nctwist::verify_axioms(triple, tol);
      report["conditions"] = condition_rows(cr);
      report["signs"] = signs_json(cr.signs);
      report["pass"] = cr.pass;
      pass = cr.pass;
      emit(report, out_path, false);
    } else if (cmd_fluct->parsed()) {
      nctwist::OneForm omega = random_form(triple, pairs, seed, symmetrize);
      nctwist::TwistedTriple fluctuated = nctwist::fluctuate(triple, omega);
      nctwist::ConditionReport cr = nctwist::verify_axioms(fluctuated, tol);
      report["pairs"] = pairs;
      report["symmetrize"] = symmetrize;
      report["conditions"] = condition_rows(cr);
      report["signs"] = signs_json(cr.signs);
      report["pass"] = cr.pass;
      pass = cr.pass;
      if (!out_path.empty()) nctwist::save_triple_file(fluctuated, out_path);
      emit(report, "", true);
    } else if (cmd_gauge->parsed()) {
      nctwist::OneForm omega = random_form(triple, pairs, seed, true);
      CMatrix u = nctwist::random_unitary(triple.algebra, seed);
      nctwist::TwistedTriple transformed = nctwist::transform_dirac(triple, omega, u);

      ojson rows = ojson::array();
      bool ok = true;
      for (std::size_t l = 0; l < triple.components.size(); ++l) {
        nctwist::ConditionReport vw = nctwist::verify_vw(triple, u, l, tol);
        for (const auto& c : vw.conditions)
          rows.push_back(ojson{{"name", c.name + "_" + std::to_string(l)},
                               {"residual", c.residual},
                               {"threshold", c.threshold},
                               {"pass", c.pass},
                               {"required", c.required}});
        ok = ok && vw.pass;
      }
      nctwist::TwistedTriple conjugated =
          nctwist::conjugate_dirac(nctwist::fluctuate(triple, omega), u);
      double transport = (conjugated.dirac() - transformed.dirac()).norm();
      double thr = tol.threshold(conjugated.dirac().norm(), transformed.dirac().norm());
      rows.push_back(ojson{{"name", "gauge_transport_consistency"},
                           {"residual", transport},
                           {"threshold", thr},
                           {"pass", transport <= thr},
                           {"required", true}});
      ok = ok && transport <= thr;
      report["pairs"] = pairs;
      report["conditions"] = std::move(rows);
      report["pass"] = ok;
      pass = ok;
      if (!out_path.empty()) nctwist::save_triple_file(transformed, out_path);
      emit(report, "", true);
    } else if (cmd_break->parsed()) {
      nctwist::BreakReport br = nctwist::breaking_fixed_point(triple);
      report["decomposition"] = decomposition;
      report["result"] = break_json(br);
      report["pass"] = br.is_subalgebra;
      pass = br.is_subalgebra;
      emit(report, out_path, false);
    } else if (cmd_search->parsed()) {
      nctwist::TwistAnsatz ansatz = nctwist::TwistAnsatz::named(ansatz_name);
      std::vector<nctwist::SearchResult> results = nctwist::search_twists(triple, ansatz);
      ojson items = ojson::array();
      bool ok = true;
      for (const auto& r : results) {
        ojson twists = ojson::array();
        for (const CMatrix& nu : r.twists) twists.push_back(matrix_json(nu));
        items.push_back(ojson{{"surviving_real_dim", r.report.surviving.dim()},
                              {"epsilon_prime", r.epsilon_prime},
                              {"result", break_json(r.report)},
                              {"twists", std::move(twists)}});
        ok = ok && r.report.is_subalgebra;
      }
      report["ansatz"] = ansatz_name;
      report["decomposition"] = decomposition;
      report["candidates_evaluated"] = results.size();
      report["results"] = std::move(items);
      report["pass"] = ok;
      pass = ok;
      emit(report, out_path, false);
    }

    return pass ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
