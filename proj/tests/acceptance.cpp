// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// selected criterion fails. Run a single criterion with --criterion N.
//
// Known red: criterion 8 demands interior unitarity of the truncated
// position configuration at 1e-8, which is mathematically impossible for
// the half-line overlap matrix pinned by criterion 1 (its entries are the
// matrix elements of sgn(q) and decay only algebraically, so the truncated
// block's row norms are short of 1 by a few percent at any feasible
// dimension; unitarizing the block shifts F by that same amount and breaks
// criterion 1). The measured residual is printed with the failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "tmsvbell/bell.hpp"
#include "tmsvbell/correlations.hpp"
#include "tmsvbell/fock.hpp"
#include "tmsvbell/pseudospin.hpp"
#include "tmsvbell/rng.hpp"

using namespace tmsvbell;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}

TmsvState state_for(double z) {
  return tmsv_state(SqueezeParam(z), truncation_for(SqueezeParam(z)));
}

// --- C1: closed-form reproduction over 200 points on [0, 2] ----------------
Outcome criterion1() {
  double worst_number = 0.0, worst_position = 0.0;
  bool dominance = true;
  for (const double z : linspace(0.0, 2.0, 200)) {
    const TmsvState s = state_for(z);
    const int hd = s.dim() / 2;
    const double f_num = f_direct(s, number_config(hd), number_config(hd)).f;
    const PseudospinConfig pos = position_config(hd);
    const double f_pos = f_direct(s, pos, pos).f;
    worst_number = std::max(worst_number, std::abs(f_num - std::tanh(2.0 * z)));
    worst_position = std::max(
        worst_position,
        std::abs(f_pos - (2.0 / std::numbers::pi) * std::atan(std::sinh(2.0 * z))));
    if (z > 0.0 && f_num < f_pos) dominance = false;
  }
  std::ostringstream d;
  d << "max |F_number - tanh 2z| = " << worst_number << " (tol 1e-9), "
    << "max |F_position - (2/pi) arctan sinh 2z| = " << worst_position
    << " (tol 1e-6), number >= position at every z > 0: "
    << (dominance ? "yes" : "NO");
  return {worst_number < 1e-9 && worst_position < 1e-6 && dominance, d.str()};
}

// --- C2: tanh(2z) bound over seeded random unitaries -----------------------
Outcome criterion2() {
  std::ostringstream d;
  bool pass = true;
  for (const double z : {0.4, 0.8, 1.2}) {
    const ReducedDensity rho = reduced_density(state_for(z));
    const double bound = std::tanh(2.0 * z);
    double best = 0.0;
    bool bound_ok = true;
    try {
      best = random_unitary_search(rho, 1000, 20240810, true).best_f;
    } catch (const Error&) {
      bound_ok = false;  // the search throws when the bound is exceeded
    }
    const double identity_gap = std::abs(best - bound);
    const bool ok = bound_ok && best <= bound + 1e-9 && identity_gap <= 1e-12;
    pass = pass && ok;
    d << "z=" << z << ": best=" << best << " bound=" << bound
      << " |identity gap|=" << identity_gap << (ok ? " ok; " : " FAIL; ");
  }
  return {pass, d.str()};
}

// --- C3: orientational optimum, both optimizers, three configs -------------
Outcome criterion3() {
  bool pass = true;
  double worst_agree = 0.0, worst_formula = 0.0;
  int k = 0;
  for (const double z : {0.25, 0.5, 1.0}) {
    const TmsvState s = state_for(z);
    const int hd = s.dim() / 2;
    for (const PseudospinConfig& cfg :
         {number_config(hd), position_config(hd), alt_phase_config(hd)}) {
      const OperatorSet set = operator_set(cfg);
      const CorrelationTensor tensor = correlation_tensor(s, set, set);
      const BellOutcome hm = horodecki_max(tensor);
      const BellOutcome ds = direct_search(tensor, 16, 31415 + (k++));
      const double f = tensor.k(0, 0);
      const double formula = 2.0 * std::sqrt(1.0 + f * f);
      worst_agree = std::max(worst_agree, std::abs(hm.value - ds.value));
      worst_formula = std::max(worst_formula, std::abs(hm.value - formula));
      pass = pass && std::abs(hm.value - ds.value) < 1e-8 &&
             std::abs(hm.value - formula) < 1e-8;
    }
  }
  std::ostringstream d;
  d << "max |horodecki - direct_search| = " << worst_agree
    << " (tol 1e-8), max |horodecki - 2 sqrt(1+F^2)| = " << worst_formula;
  return {pass, d.str()};
}

// --- C4: Cirel'son ceiling and its asymptotic approach ----------------------
Outcome criterion4() {
  const double ceiling = 2.0 * std::sqrt(2.0);
  double global_max = 0.0;
  auto bell_at = [](double z, const std::string& which) {
    const TmsvState s = state_for(z);
    const int hd = s.dim() / 2;
    PseudospinConfig cfg = which == "number" ? number_config(hd)
                          : which == "position" ? position_config(hd)
                                                : alt_phase_config(hd);
    return horodecki_max(correlation_tensor(s, cfg, cfg)).value;
  };
  for (const double z : linspace(0.0, 3.0, 61)) {
    global_max = std::max(global_max, bell_at(z, "number"));
    global_max = std::max(global_max, bell_at(z, "alt-phase"));
  }
  for (const double z : linspace(0.0, 3.0, 13))
    global_max = std::max(global_max, bell_at(z, "position"));
  const double number_at_cap = bell_at(3.0, "number");
  const bool pass = global_max <= ceiling + 1e-9 &&
                    number_at_cap >= ceiling - 1e-4;
  std::ostringstream d;
  d << "max Bell over configs and z <= 3: " << global_max << " (ceiling "
    << ceiling << "), number config at z=3: " << number_at_cap
    << " (needs >= ceiling - 1e-4)";
  return {pass, d.str()};
}

// --- C5: non-monotonicity of the alt-phase correlation ---------------------
Outcome criterion5() {
  const NonmonotonicityReport rep =
      nonmonotonicity_certificate(linspace(0.05, 3.0, 300));
  const double zmax = rep.rows[rep.argmax].zeta;
  const bool location_ok = std::abs(rep.max_f - 1.0 / std::sqrt(2.0)) < 1e-3 &&
                           std::abs(zmax - 0.5731078) < 0.02;
  const bool pass = rep.passed && location_ok && rep.edge_f < 0.02;
  std::ostringstream d;
  d << "max F = " << rep.max_f << " at z = " << zmax
    << " (dense-scan oracle: 0.70710678 at 0.5731), F(3.0) = " << rep.edge_f
    << " (< 0.02), positive=" << rep.positive
    << " interior-max=" << rep.interior_max << " edge-drop=" << rep.edge_drop
    << " entropy-increasing=" << rep.entropy_increasing;
  return {pass, d.str()};
}

// --- C6: route agreement ----------------------------------------------------
Outcome criterion6() {
  const TmsvState s = state_for(0.8);
  const ReducedDensity rho = reduced_density(s);
  const int hd = s.dim() / 2;
  Rng rng(606);
  double worst_pair = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    PseudospinConfig c1, c2;
    c1.u = haar_unitary(hd, rng);
    c2.u = haar_unitary(hd, rng);
    worst_pair = std::max(
        worst_pair, std::abs(f_direct(s, c1, c2).f - f_trace(rho, c1, c2).f));
  }
  double worst_integral = 0.0;
  for (const double z : {0.25, 0.5, 1.0, 2.0}) {
    const double f = f_position_integral(SqueezeParam(z));
    const double closed =
        (2.0 / std::numbers::pi) * std::atan(std::sinh(2.0 * z));
    worst_integral = std::max(worst_integral, std::abs(f - closed));
  }
  std::ostringstream d;
  d << "max |f_direct - f_trace| over 100 random configs = " << worst_pair
    << " (tol 1e-12), max |integral - arctan form| = " << worst_integral
    << " (tol 1e-6)";
  return {worst_pair < 1e-12 && worst_integral < 1e-6, d.str()};
}

// --- C7: state-construction oracle ------------------------------------------
Outcome criterion7() {
  bool pass = true;
  std::ostringstream d;
  for (const double z : {0.25, 0.5, 1.0}) {
    const FockTruncation tr{32, 1e-12};
    const TmsvState s = tmsv_state(SqueezeParam(z), tr);
    const double overlap = schmidt_overlap(squeeze_oracle(SqueezeParam(z), tr), s);
    const bool ok = overlap >= 1.0 - 1e-8;
    pass = pass && ok;
    d << "z=" << z << ": overlap deficit=" << 1.0 - overlap
      << " (squared: " << 1.0 - overlap * overlap << ")"
      << (ok ? "; " : " FAIL; ");
  }
  for (const double z : {0.25, 0.5, 1.0}) {
    const ReducedDensity rho = reduced_density(state_for(z));
    const double err = std::abs(rho.purity() - 1.0 / std::cosh(2.0 * z));
    pass = pass && err < 1e-10;
    d << "purity err(z=" << z << ")=" << err << "; ";
  }
  return {pass, d.str()};
}

// --- C8: operator algebra suite ---------------------------------------------
Outcome criterion8() {
  std::ostringstream d;
  const int hd = 32;  // 64 levels
  bool pass = true;

  for (const auto& [name, cfg] :
       {std::pair{std::string("number"), number_config(hd)},
        std::pair{std::string("alt-phase"), alt_phase_config(hd)}}) {
    const AlgebraReport rep = verify_su2(operator_set(cfg), 1e-12);
    pass = pass && rep.passed;
    d << name << ": squares=" << rep.max_square_residual
      << " commutators=" << rep.max_commutator_residual
      << " projectors=" << rep.projector_residual << " (tol 1e-12)"
      << (rep.passed ? "; " : " FAIL; ");
  }

  const PositionBuild build =
      position_build(hd, QuadratureSpec::for_levels(2 * hd));
  const bool gram_ok = build.gram_residual < 1e-10;
  const AlgebraReport rep = verify_su2(operator_set(build.config), 1e-8);
  const bool truncation_ok =
      rep.max_square_residual < kPositionUnitarityTol &&
      rep.max_commutator_residual < 2.0 * kPositionUnitarityTol &&
      rep.projector_residual < kPositionUnitarityTol;
  d << "position: quadrature gram=" << build.gram_residual
    << " (tol 1e-10), squares=" << rep.max_square_residual
    << " commutators=" << rep.max_commutator_residual
    << " (declared truncation bounds 0.35/0.70); ";

  const bool literal_unitarity = rep.unitarity_residual < 1e-8;
  d << "position interior unitarity residual=" << rep.unitarity_residual
    << " vs literal 1e-8: "
    << (literal_unitarity
            ? "ok"
            : "FAIL [structural: the half-line overlap block of sgn(q) has "
              "algebraically decaying entries, so the truncated block is "
              "non-unitary at the percent level at any feasible dimension; "
              "the unitarized block would shift F by the same amount and "
              "break the closed-form criterion]");

  pass = pass && gram_ok && truncation_ok && literal_unitarity;
  return {pass, d.str()};
}

// --- C9: CLI determinism ------------------------------------------------------
struct CliRun {
  int code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const char* cli = std::getenv("TMSVBELL_CLI");
  if (!cli) return {-1, "TMSVBELL_CLI not set"};
  const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  return {WEXITSTATUS(pclose(pipe)), out};
}

Outcome criterion9() {
  const std::vector<std::string> commands = {
      "sweep --zeta-min 0 --zeta-max 1.5 --steps 31 --configs "
      "number,position,alt-phase",
      "bell --zeta 0.5 --configs number --seed 7",
      "verify --zeta 0.5 --dim 32",
      "optimize --zeta 0.8 --family random-unitary --trials 200 --seed 42",
      "optimize --zeta 0.5 --family diagonal-phase",
  };
  bool pass = true;
  std::ostringstream d;
  for (const std::string& cmd : commands) {
    const CliRun a = run_cli(cmd);
    const CliRun b = run_cli(cmd);
    const bool ok = a.code >= 0 && a.code == b.code && a.out == b.out &&
                    !a.out.empty();
    pass = pass && ok;
    d << "'" << cmd.substr(0, cmd.find(' ')) << "' "
      << (ok ? "byte-identical" : "MISMATCH") << "; ";
  }

  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("tmsvbell_acc_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path csv = dir / "sweep.csv";
  const std::string filecmd =
      "sweep --zeta-min 0 --zeta-max 1 --steps 11 --configs number --out " +
      csv.string();
  std::string first, second;
  if (run_cli(filecmd).code == 0) {
    std::ifstream f(csv, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    first = ss.str();
  }
  if (run_cli(filecmd).code == 0) {
    std::ifstream f(csv, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    second = ss.str();
  }
  const bool file_ok = !first.empty() && first == second &&
                       fs::exists(dir / "sweep.csv.manifest.json");
  pass = pass && file_ok;
  d << "--out file " << (file_ok ? "byte-identical with manifest sidecar"
                                 : "MISMATCH");
  fs::remove_all(dir);
  return {pass, d.str()};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "closed-form reproduction over [0, 2]", criterion1},
    {2, "tanh(2 zeta) bound certification", criterion2},
    {3, "orientational optimum (eigenvalue vs search)", criterion3},
    {4, "Cirel'son ceiling and asymptotic approach", criterion4},
    {5, "alt-phase non-monotonicity", criterion5},
    {6, "route agreement", criterion6},
    {7, "state-construction oracle", criterion7},
    {8, "operator algebra suite", criterion8},
    {9, "CLI determinism", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }

  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    const Outcome out = c.fn();
    std::printf("[%s] C%d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id,
                c.title, out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
