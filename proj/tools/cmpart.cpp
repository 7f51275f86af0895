#include "cmpart/brandt.hpp"
#include "cmpart/cm_trace.hpp"
#include "cmpart/heegner.hpp"
#include "cmpart/modpoly.hpp"
#include "cmpart/partition.hpp"
#include "cmpart/qseries.hpp"
#include "cmpart/ss_reduce.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

using namespace cmpart;
using ojson = nlohmann::ordered_json;

namespace {

struct Options {
  bool json = false;
  long bits = 0;
  long terms = 0;
  std::string cache;
  bool strict_wa = false;
  long n_max = 1000;
};

std::string s(long v) { return std::to_string(v); }

ojson fq2_json(const Fq2::E& e) { return ojson::array({s(e.a), s(e.b)}); }

ojson rat_list(const std::vector<Rat>& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(str(x));
  return a;
}

ojson int_list(const std::vector<Int>& v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(str(x));
  return a;
}

void emit(const Options& o, const ojson& j, const std::string& human) {
  if (o.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << human;
}

// An elementary upper bound for p(n): exp(pi sqrt(2n/3)).
Int partition_bound(long n) {
  long double b = std::ceil(std::exp(3.14159265358979323846L * std::sqrt(2.0L * n / 3.0L)));
  Int r;
  mpz_set_d(r.get_mpz_t(), static_cast<double>(b));
  return r + 1;
}

long residue_from_pairing(const DotProductVerdict& d, long delta) {
  // p(n) = -<u, v_P> / delta mod ell
  Fq2 K(d.ell);
  Fq2::E v = K.neg(K.mul(d.pairing, K.inv(K.make(delta))));
  return v.a;
}

int cmd_compute(const Options& o, long n, long ell_opt) {
  if (n < 1) throw InvalidInput("compute needs n >= 1");
  Discriminant d = discriminant_for(n);
  if (ell_opt) {
    if (ell_opt < 5 || !is_prime(ell_opt)) throw InvalidInput("--ell must be a prime >= 5");
    if (kronecker(Int(d.delta), Int(ell_opt)) != -1)
      throw InvalidInput("ell = " + s(ell_opt) + " is not inert for delta = " + s(d.delta));
  }
  Int oracle = euler_p(n);
  TraceResult tr = trace(n, o.bits);

  // Inert primes where two CM classes share a supersingular point give no well-defined fiber
  // values; auto-selection skips them (an explicit --ell is always used).
  Int bound = partition_bound(n), crt = 0, m = 1;
  ojson routes = ojson::array(), skipped = ojson::array();
  std::vector<long> used;
  bool routes_ok = true;
  std::string diag;
  long next = 5;
  bool first = true;
  while (m <= bound) {
    long ell = first && ell_opt ? ell_opt : auto_inert_prime(n, next);
    next = ell + 1;
    if (ell > 200) throw ConsistencyFailure("no usable inert primes below 200 for the Brandt route");
    bool forced = first && ell_opt;
    first = false;
    ReductionReport rep = fiber_match(n, ell);
    if (!rep.values_well_defined && !forced) {
      skipped.push_back({{"ell", s(ell)}, {"reason", "CM classes collide at a supersingular point"}});
      continue;
    }
    TraceVerdict ss = verify_ss_trace(rep);
    DotProductVerdict dot = verify_dot_product(rep, brandt_data(ell, 6, 35));
    ojson route{{"ell", s(ell)},
                {"pairing", fq2_json(dot.pairing)},
                {"p_mod_ell", s(dot.p_mod_ell)},
                {"verdict_ss_trace", ss.holds},
                {"verdict_dot_product", dot.holds},
                {"values_well_defined", rep.values_well_defined}};
    used.push_back(ell);
    if (!dot.holds) diag += "dot product fails at ell = " + s(ell) + "; ";
    if (!ss.holds) diag += "supersingular trace fails at ell = " + s(ell) + "; ";
    routes_ok = routes_ok && ss.holds && dot.holds;
    if (!dot.pairing_rational) {
      route["residue"] = nullptr;
      routes.push_back(route);
      continue;
    }
    long r = residue_from_pairing(dot, d.delta);
    route["residue"] = s(r);
    routes.push_back(route);
    // crt = crt + m * ((r - crt) / m mod ell)
    Int t = Int(r) - crt, mi;
    mpz_invert(mi.get_mpz_t(), Int(m % ell).get_mpz_t(), Int(ell).get_mpz_t());
    t = t * mi;
    mpz_fdiv_r_ui(t.get_mpz_t(), t.get_mpz_t(), ell);
    crt += m * t;
    m *= ell;
  }

  long gl = used.front();
  BrandtData g = brandt_data(gl, 1, 13);
  std::vector<Rat> gv = gross_vector(g.classes, d.delta);
  std::vector<long> ms;
  for (long k = 2; ms.size() < 3; ++k)
    if (std::gcd(k, gl) == 1) ms.push_back(k);
  std::vector<EigenCheck> ec = eigen_checks(g.mats, gv, ms);
  bool gross_ok = true;
  ojson checks = ojson::array();
  for (const auto& c : ec) {
    gross_ok = gross_ok && c.eigen;
    checks.push_back({{"m", s(c.m)}, {"eigen", c.eigen}, {"eigenvalue", c.eigen ? str(c.eigenvalue) : ""}});
  }

  bool agree = tr.p_of_n == oracle && crt == oracle && routes_ok;
  if (tr.p_of_n != oracle) diag += "CM trace gives " + str(tr.p_of_n) + "; ";
  if (crt != oracle) diag += "Brandt route gives " + str(crt) + " mod " + str(m) + "; ";

  ojson j;
  j["n"] = s(n);
  j["delta"] = s(d.delta);
  j["p_oracle"] = str(oracle);
  j["trace"] = str(tr.exact_trace);
  j["p_cm_trace"] = str(tr.p_of_n);
  j["bits_used"] = s(tr.bits_used);
  j["routes"] = routes;
  j["skipped"] = skipped;
  j["crt"] = {{"modulus", str(m)}, {"value", str(crt)}};
  j["gross"] = {{"ell", s(gl)}, {"vector", rat_list(gv)}, {"checks", checks}, {"eigen", gross_ok}};
  j["agree"] = agree;
  if (!diag.empty()) j["diagnostic"] = diag;

  std::string h = "n = " + s(n) + ", delta = " + s(d.delta) + "\n";
  h += "  oracle      p(n) = " + str(oracle) + "\n";
  h += "  CM trace    " + str(tr.exact_trace) + " -> p(n) = " + str(tr.p_of_n) + "\n";
  for (const auto& r : skipped) h += "  Brandt      ell = " + r["ell"].get<std::string>() + " skipped: " +
                                     r["reason"].get<std::string>() + "\n";
  for (const auto& r : routes)
    h += "  Brandt      p(n) = " + (r["residue"].is_null() ? std::string("?") : r["residue"].get<std::string>()) +
         " mod " + r["ell"].get<std::string>() + (r["verdict_dot_product"].get<bool>() ? "" : "  (dot product FAILED)") +
         "\n";
  h += "  CRT         p(n) = " + str(crt) + " mod " + str(m) + "\n";
  h += "  Gross vector at ell = " + s(gl) + ":";
  for (const auto& x : gv) h += " " + str(x);
  h += gross_ok ? "  (Hecke eigenvector" : "  (not a Hecke eigenvector";
  h += " for m =";
  for (long k : ms) h += " " + s(k);
  h += ")\n";
  h += agree ? "  all routes agree\n" : "  DISAGREEMENT: " + diag + "\n";
  emit(o, j, h);
  return agree ? 0 : static_cast<int>(Exit::consistency);
}

int cmd_classpoly(const Options& o, long n) {
  if (n < 1) throw InvalidInput("classpoly needs n >= 1");
  ClassPolynomial cp = class_polynomial(n, o.bits);
  ojson j;
  j["n"] = s(n);
  j["delta"] = s(cp.delta);
  j["h"] = s(cp.h);
  j["H"] = rat_list(cp.H);
  j["H_scaled"] = int_list(cp.H_scaled);
  j["bits_used"] = s(cp.bits_used);
  std::string h = "H_" + s(n) + " (ascending):";
  for (const auto& c : cp.H) h += " " + str(c);
  h += "\n" + s(-cp.delta) + " H_" + s(n) + " scaled (ascending):";
  for (const auto& c : cp.H_scaled) h += " " + str(c);
  emit(o, j, h + "\n");
  return 0;
}

int cmd_reduce(const Options& o, long n, long ell) {
  if (n < 1) throw InvalidInput("reduce needs n >= 1");
  if (ell < 5 || !is_prime(ell)) throw InvalidInput("ell must be a prime >= 5");
  Discriminant d = discriminant_for(n);
  long k = kronecker(Int(d.delta), Int(ell));
  if (k == 1) {
    ReducedClassPolynomial rc = reduce_class_polynomial(n, ell);
    ojson j{{"n", s(n)}, {"ell", s(ell)}, {"delta", s(d.delta)}, {"kronecker", "1"},
            {"factorization_text", rc.text()}};
    emit(o, j, "mod " + s(ell) + ": " + rc.text() + "  (ell splits; no supersingular data)\n");
    return 0;
  }
  if (k == 0) {
    RamifiedReport rr = ramified_grouping_check(n, ell);
    ojson j = ojson::parse(report_to_json(rr.report, nullptr, nullptr));
    j["roots_supersingular"] = rr.roots_supersingular;
    j["trace_valuation"] = s(rr.trace_valuation);
    j["p_valuation"] = s(rr.p_valuation);
    j["p_divisible"] = rr.p_divisible;
    j["fibers_divisible"] = rr.fibers_divisible;
    std::string h = "mod " + s(ell) + ": " + rr.report.reduced.text() + "\n";
    h += "  roots supersingular: " + std::string(rr.roots_supersingular ? "yes" : "no") + "\n";
    h += "  v_ell(p(n)) = " + s(rr.p_valuation) + ", v_ell(trace) = " + s(rr.trace_valuation) + "\n";
    h += "  fiber counts divisible by ell: " + std::string(rr.fibers_divisible ? "yes" : "no") + "\n";
    emit(o, j, h);
    return rr.roots_supersingular && rr.p_divisible ? 0 : static_cast<int>(Exit::consistency);
  }
  ReductionReport rep = fiber_match(n, ell);
  TraceVerdict ss = verify_ss_trace(rep);
  DotProductVerdict dot = verify_dot_product(rep, brandt_data(ell, 6, 35));
  ojson j = ojson::parse(report_to_json(rep, &ss, &dot));
  Fq2 K(ell);
  std::string h = "mod " + s(ell) + ": " + rep.reduced.text() + "\n";
  h += "  supersingular points of X0(6): " + s(static_cast<long>(rep.points.size())) + ", fiber sum " +
       s(rep.fiber_sum()) + " / h = " + s(rep.h) + "\n";
  for (const auto& f : rep.fibers)
    if (f.h)
      h += "    t = " + K.to_string(rep.points[f.point].t) + "  h = " + s(f.h) + "  P~ = " + K.to_string(f.p_tilde) + "\n";
  h += "  values well defined: " + std::string(rep.values_well_defined ? "yes" : "no") + "\n";
  h += "  supersingular trace: p(n) = " + s(ss.p_mod_ell) + ", sum = " + K.to_string(ss.rhs) + " -> " +
       (ss.holds ? "holds" : "FAILS") + " (class-wise sum " + K.to_string(ss.classwise_rhs) + ")\n";
  h += "  dot product: <u, v_P> = " + K.to_string(dot.pairing) + " -> " + (dot.holds ? "holds" : "FAILS") + "\n";
  if (!dot.diagnostic.empty()) h += "    " + dot.diagnostic + "\n";
  emit(o, j, h);
  return ss.holds && dot.holds ? 0 : static_cast<int>(Exit::consistency);
}

int cmd_brandt(const Options& o, long ell, std::vector<long> ms, long level) {
  if (ell < 5 || !is_prime(ell)) throw InvalidInput("ell must be a prime >= 5");
  if (level != 1 && level != 6) throw InvalidInput("--level must be 1 or 6");
  if (ms.empty())
    for (long m = 1; m <= 20; ++m) ms.push_back(m);
  long m_max = 1;
  for (long m : ms) {
    if (m < 1) throw InvalidInput("Brandt indices must be positive");
    m_max = std::max(m_max, m);
  }
  BrandtData b = brandt_data(ell, level, std::max(m_max, 20L));
  BrandtReport rep = check_brandt(b.classes, b.mats);
  ojson j;
  j["ell"] = s(ell);
  j["level"] = s(level);
  j["s"] = s(b.classes.s());
  j["mass"] = str(b.classes.mass);
  j["expected_mass"] = str(eichler_mass(ell, level));
  ojson w = ojson::array();
  for (long x : b.classes.weights) w.push_back(s(x));
  j["weights"] = w;
  ojson mats = ojson::object();
  std::string h = "ell = " + s(ell) + ", level = " + s(level) + ": s = " + s(b.classes.s()) + ", mass = " +
                  str(b.classes.mass) + "\n";
  for (long m : ms) {
    ojson rows = ojson::array();
    h += "B(" + s(m) + ") =\n";
    for (const auto& row : b.mats[m - 1].b) {
      rows.push_back(rat_list(row));
      h += " ";
      for (const auto& x : row) h += " " + str(x);
      h += "\n";
    }
    mats[s(m)] = rows;
  }
  j["brandt"] = mats;
  j["identity"] = rep.identity;
  j["symmetry"] = rep.symmetry;
  j["row_sums"] = rep.row_sums;
  j["hecke"] = rep.hecke;
  ojson f = ojson::array();
  for (const auto& x : rep.failures) f.push_back(x);
  j["failures"] = f;
  j["relations_checked"] = s(static_cast<long>(rep.relations_checked.size()));
  bool mass_ok = b.classes.mass == eichler_mass(ell, level);
  j["mass_ok"] = mass_ok;
  h += "checks: identity " + std::string(rep.identity ? "ok" : "FAIL") + ", symmetry " +
       (rep.symmetry ? "ok" : "FAIL") + ", row sums " + (rep.row_sums ? "ok" : "FAIL") + ", Hecke " +
       (rep.hecke ? "ok" : "FAIL") + " (" + s(static_cast<long>(rep.relations_checked.size())) + " relations), mass " +
       (mass_ok ? "ok" : "FAIL") + "\n";
  for (const auto& x : rep.failures) h += "  " + x + "\n";
  emit(o, j, h);
  return rep.ok() && mass_ok ? 0 : static_cast<int>(Exit::consistency);
}

int cmd_sweep(const Options& o, long ell, long jj) {
  if (ell != 5 && ell != 7 && ell != 11) throw InvalidInput("sweeps are defined for ell in {5, 7, 11}");
  if (jj < 1 || jj > 6) throw InvalidInput("j must be between 1 and 6");
  if (o.n_max < 0) throw InvalidInput("--n-max must be non-negative");
  SweepResult r = congruence_sweep(ell, static_cast<int>(jj), o.n_max);
  ojson c = ojson::array();
  for (long x : r.counterexamples) c.push_back(s(x));
  ojson j{{"ell", s(ell)},           {"j", s(jj)},      {"n_max", s(r.n_max)}, {"beta", s(r.beta)},
          {"modulus", str(r.modulus)}, {"counterexamples", c}, {"ok", r.ok()}};
  std::string h = "p(" + s(ell) + "^" + s(jj) + " n + " + s(r.beta) + ") = 0 mod " + str(r.modulus) +
                  " for 0 <= n <= " + s(r.n_max) + ": " +
                  (r.ok() ? "no counterexamples" : s(static_cast<long>(r.counterexamples.size())) + " counterexamples") +
                  "\n";
  emit(o, j, h);
  return r.ok() ? 0 : static_cast<int>(Exit::consistency);
}

int cmd_modeq(const Options& o, long ell, bool classical) {
  ModularPolynomial phi;
  ojson j;
  std::string h;
  bool ok = true;
  if (classical) {
    if (!is_prime(ell) || ell > 23) throw InvalidInput("classical modular polynomials are available for primes <= 23");
    phi = classical_modular_polynomial(ell, true, true);
    j["kind"] = "classical";
    j["kronecker_congruence"] = kronecker_congruence(phi);
    h = "Phi_" + s(ell) + ": degree " + s(phi.degree) + ", " + s(static_cast<long>(phi.coeffs.size())) +
        " nonzero coefficients\n";
  } else {
    if (ell != 5 && ell != 7 && ell != 11) throw InvalidInput("level 6 modular equations are available for 5, 7, 11");
    LevelModularEquation le = level6_modular_equation(ell);
    phi = le.phi;
    j["kind"] = "level6";
    j["a0_content"] = str(le.a0_content);
    j["a0_valuation"] = s(le.a0_valuation);
    h = "Phi^(6)_" + s(ell) + ": degree " + s(phi.degree) + ", monic " + (phi.monic() ? "yes" : "no") +
        ", certified to q^" + s(phi.certified_order) + "\n  content of A_0 = " + str(le.a0_content) +
        ", v_" + s(ell) + " = " + s(le.a0_valuation) + "\n";
    if (o.strict_wa) {
      ok = le.a0_valuation >= 1;
      j["strict_wa"] = ok;
      h += std::string("  strict check v_ell(content A_0) >= 1: ") + (ok ? "holds" : "FAILS") + "\n";
    }
  }
  j["ell"] = s(ell);
  j["degree"] = s(phi.degree);
  j["monic"] = phi.monic();
  j["certified_order"] = s(phi.certified_order);
  ojson co = ojson::array();
  for (const auto& [ij, c] : phi.coeffs) co.push_back({s(ij.first), s(ij.second), str(c)});
  j["coefficients"] = co;
  emit(o, j, h);
  return ok ? 0 : static_cast<int>(Exit::consistency);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition values from CM traces, supersingular reduction and Brandt matrices"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Emit JSON (all numbers as decimal strings)");
  app.add_option("--bits", o.bits, "Starting working precision in bits")->check(CLI::NonNegativeNumber);
  app.add_option("--terms", o.terms, "Fixed q-series truncation (the tail bound is still certified)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--cache-dir", o.cache, "Cache directory (default $CMPART_CACHE or ./cache)");

  long n = 0, ell = 0, jj = 1, level = 6;
  std::vector<long> ms;
  bool classical = false;

  auto* compute = app.add_subcommand("compute", "p(n) by the oracle, the CM trace and the Brandt route");
  compute->add_option("n", n)->required();
  compute->add_option("--ell", ell, "Inert prime for the Brandt route (default: smallest inert prime >= 5)");

  auto* classpoly = app.add_subcommand("classpoly", "Class polynomial of P at discriminant 1 - 24n");
  classpoly->add_option("n", n)->required();

  auto* reduce = app.add_subcommand("reduce", "Reduction of the class polynomial and supersingular verdicts");
  reduce->add_option("n", n)->required();
  reduce->add_option("ell", ell)->required();

  auto* brandt = app.add_subcommand("brandt", "Brandt matrices of the level-6 (or level-1) Eichler order");
  brandt->add_option("ell", ell)->required();
  brandt->add_option("m", ms, "Indices to print (default 1..20)");
  brandt->add_option("--level", level, "1 or 6");

  auto* sweep = app.add_subcommand("sweep", "Ramanujan-type congruence sweep p(ell^j n + beta) mod ell^j");
  sweep->add_option("ell", ell)->required();
  sweep->add_option("j", jj)->required();
  sweep->add_option("--n-max", o.n_max, "Largest n in the sweep");

  auto* modeq = app.add_subcommand("modeq", "Level-6 modular equation for ell in {5, 7, 11}");
  modeq->add_option("ell", ell)->required();
  modeq->add_flag("--strict-wa", o.strict_wa, "Require ell to divide the content of A_0");
  modeq->add_flag("--classical", classical, "Classical modular polynomial instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(Exit::usage);
  }

  try {
    if (!o.cache.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(o.cache, ec);
      if (ec || !std::filesystem::is_directory(o.cache))
        throw InvalidInput("cache directory " + o.cache + " is not usable");
      set_cache_dir(o.cache);
    }
    set_default_terms(o.terms);
    if (*compute) return cmd_compute(o, n, ell);
    if (*classpoly) return cmd_classpoly(o, n);
    if (*reduce) return cmd_reduce(o, n, ell);
    if (*brandt) return cmd_brandt(o, ell, ms, level);
    if (*sweep) return cmd_sweep(o, ell, jj);
    if (*modeq) return cmd_modeq(o, ell, classical);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(Exit::usage);
  } catch (const PrecisionFailure& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return static_cast<int>(Exit::precision);
  } catch (const ConsistencyFailure& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return static_cast<int>(Exit::consistency);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(Exit::consistency);
  }
  return 0;
}
