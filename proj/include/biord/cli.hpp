#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "biord/cone.hpp"
#include "biord/errors.hpp"
#include "biord/nonisolation.hpp"
#include "biord/oracle.hpp"
#include "biord/pl_map.hpp"
#include "biord/realization.hpp"
#include "biord/type_space.hpp"

namespace biord {

enum class Command { compare, cone, biinv, merge, noniso, type, separate, saturate, plot };

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;

/// Everything a run depends on. Numeric values stay as text until `run`
/// parses them, so malformed input is reported through the exit code.
struct RunConfig {
  Command command = Command::compare;
  std::string order = "magnus";  // magnus | realized | type:<alpha>
  std::vector<std::string> words;
  int radius = 3;
  int search_radius = 4;
  int audit_radius = 2;
  std::uint64_t seed = 7;
  std::uint64_t base_seed = 1;  // seed of the default merged Z * Z realization
  std::string eps = "1/10";
  std::string chain = "a;b;ab";
  std::string alpha = "3/2";
  std::string beta = "5/2";
  std::string window = "4,3,7,4";
  std::string w1 = "4,3,7,4";
  std::string w2 = "9,4,8,3";
  int aut_len = 3;
  std::int64_t bound = 24;
  int max_rounds = 3;
  bool printed_form = false;
  std::string realization;    // file; default is the merged Z * Z pair
  std::string realization_h;  // second file for merge
  std::string map;            // PL map text for plot
  std::string range = "-3,1";
  std::string out;
};

constexpr std::string_view to_string(Command c) {
  switch (c) {
    case Command::compare: return "compare";
    case Command::cone: return "cone";
    case Command::biinv: return "biinv";
    case Command::merge: return "merge";
    case Command::noniso: return "noniso";
    case Command::type: return "type";
    case Command::separate: return "separate";
    case Command::saturate: return "saturate";
    case Command::plot: return "plot";
  }
  return "?";
}

/// Command line reproducing the run, printed as the report header.
inline std::string config_header(const RunConfig& c) {
  std::ostringstream s;
  s << "# biord " << to_string(c.command);
  auto opt = [&](const char* flag, const std::string& v) { s << ' ' << flag << " '" << v << "'"; };
  switch (c.command) {
    case Command::compare:
      opt("--order", c.order);
      break;
    case Command::cone:
    case Command::biinv:
      opt("--order", c.order);
      s << " --radius " << c.radius;
      break;
    case Command::merge:
      s << " --radius " << c.radius << " --seed " << c.seed;
      opt("--eps", c.eps);
      break;
    case Command::noniso:
      opt("--chain", c.chain);
      s << " --search " << c.search_radius << " --audit " << c.audit_radius << " --seed " << c.seed;
      break;
    case Command::type:
      opt("--alpha", c.alpha);
      opt("--window", c.window);
      if (c.printed_form) s << " --printed";
      break;
    case Command::separate:
      opt("--alpha", c.alpha);
      opt("--beta", c.beta);
      opt("--w1", c.w1);
      opt("--w2", c.w2);
      s << " --aut-len " << c.aut_len << " --bound " << c.bound << " --rounds " << c.max_rounds;
      break;
    case Command::saturate:
      s << " --bound " << c.bound << " --rounds " << c.max_rounds;
      break;
    case Command::plot:
      opt("--map", c.map);
      opt("--range", c.range);
      break;
  }
  if (c.command == Command::compare || c.command == Command::cone || c.command == Command::biinv ||
      c.command == Command::noniso || c.command == Command::merge) {
    if (!c.realization.empty()) opt("--realization", c.realization);
    if (!c.realization_h.empty()) opt("--realization-h", c.realization_h);
    if (c.command != Command::merge) s << " --base-seed " << c.base_seed;
  }
  if (!c.out.empty()) opt("--out", c.out);
  for (const std::string& w : c.words) s << " '" << w << "'";
  return s.str();
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Realization load_realization(const RunConfig& c) {
  if (c.realization.empty()) return standard_free_product(c.base_seed);
  return parse_realization(read_file(c.realization));
}

inline OrderOracle make_order(const RunConfig& c) {
  if (c.order == "magnus") return magnus_oracle();
  if (c.order == "realized") return realized_oracle(load_realization(c));
  if (c.order.rfind("type:", 0) == 0) return type_alpha_oracle(parse_rational(c.order.substr(5)));
  throw ParseError("unknown order '" + c.order + "' (expected magnus, realized or type:<alpha>)");
}

inline std::vector<Word> parse_chain(const std::string& text) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = text.find(';', i);
    if (j == std::string::npos) j = text.size();
    out.push_back(parse_word(text.substr(i, j - i)));
    i = j + 1;
  }
  return out;
}

inline std::pair<Rational, Rational> parse_range(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("range must be 'lo,hi'");
  Rational lo = parse_rational(text.substr(0, comma));
  Rational hi = parse_rational(text.substr(comma + 1));
  if (!(lo < hi)) throw ParseError("range needs lo < hi");
  return {lo, hi};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

/// Breakpoints as exact CSV: one `x,y` row per breakpoint.
inline std::string plot_csv(const PLMap& m) {
  std::string s = "x,y\n";
  for (const PLPoint& p : m.points()) s += to_string(p.x) + "," + to_string(p.y) + "\n";
  return s;
}

/// SVG graph of m over [lo, hi] with the diagonal dashed.
inline std::string plot_svg(const PLMap& m, const Rational& lo, const Rational& hi) {
  std::vector<Rational> xs{lo};
  for (const PLPoint& p : m.points()) {
    if (p.x > lo && p.x < hi) xs.push_back(p.x);
  }
  xs.push_back(hi);
  std::vector<std::pair<double, double>> pts;
  double ymin = lo.get_d();
  double ymax = hi.get_d();
  for (const Rational& x : xs) {
    const double y = m.eval(x).get_d();
    pts.emplace_back(x.get_d(), y);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double size = 400;
  const double x0 = lo.get_d();
  const double x1 = hi.get_d();
  auto px = [&](double x) { return (x - x0) / (x1 - x0) * size; };
  auto py = [&](double y) { return size - (y - ymin) / (ymax - ymin) * size; };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  s << "<line x1=\"" << px(x0) << "\" y1=\"" << py(x0) << "\" x2=\"" << px(x1) << "\" y2=\"" << py(x1)
    << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
  s << "<polyline fill=\"none\" stroke=\"black\" points=\"";
  for (const auto& [x, y] : pts) s << px(x) << ',' << py(y) << ' ';
  s << "\"/>\n";
  for (const PLPoint& p : m.points()) {
    if (p.x < lo || p.x > hi) continue;
    s << "<circle cx=\"" << px(p.x.get_d()) << "\" cy=\"" << py(p.y.get_d()) << "\" r=\"3\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

namespace detail {

inline int run_checked(const RunConfig& c, std::ostream& os) {
  switch (c.command) {
    case Command::compare: {
      if (c.words.size() != 2) throw ParseError("compare takes two words");
      OrderOracle o = make_order(c);
      os << to_string(compare(o, parse_word(c.words[0]), parse_word(c.words[1]))) << "\n";
      return kExitPass;
    }
    case Command::cone: {
      if (c.radius < 0) throw ParseError("radius must be non-negative");
      OrderOracle o = make_order(c);
      std::vector<Word> cone = positive_cone_ball(o, c.radius);
      for (const Word& w : cone) os << format_word(w) << "\n";
      os << cone.size() << " positive words\n";
      return kExitPass;
    }
    case Command::biinv: {
      if (c.radius < 0) throw ParseError("radius must be non-negative");
      OrderOracle o = make_order(c);
      BiinvReport rep = check_biinvariance(o, c.radius);
      for (const BiinvViolation& v : rep.violations) os << format_violation(v) << "\n";
      os << rep.violations.size() << " violations / " << rep.words << " words (" << rep.triples << " triples)\n";
      return rep.ok() ? kExitPass : kExitFailure;
    }
    case Command::merge: {
      if (c.radius < 0) throw ParseError("radius must be non-negative");
      Rational eps = parse_rational(c.eps);
      Realization g = c.realization.empty() ? standard_z('a', Rational(0), Rational(1, 2), c.radius)
                                            : parse_realization(read_file(c.realization));
      Realization h = c.realization_h.empty() ? standard_z('b', Rational(0), Rational(1, 3), c.radius)
                                              : parse_realization(read_file(c.realization_h));
      MergeReport before = check_merging(g, h, c.radius);
      os << "violations before: " << before.violations.size() << "\n";
      MergeResult res = [&] {
        try {
          return merge(g, h, eps, c.radius, c.seed);
        } catch (const MergeFailed& e) {
          os << "merge failed: " << e.what() << "\n";
          throw;
        }
      }();
      os << "attempts: " << res.attempts << "\n";
      os << "conjugator: " << format_plmap(res.conjugator) << "\n";
      os << "norm: " << to_string(*pl_norm(res.conjugator)) << "\n";
      os << format_merge_report(res.report);
      os << "violations after: " << res.report.violations.size() << " at radius " << res.report.checked_radius << "\n";
      std::string text = format_realization(combine(g, res.merged));
      if (c.out.empty()) {
        os << text;
      } else {
        write_file(c.out, text);
        os << "wrote " << c.out << "\n";
      }
      return kExitPass;
    }
    case Command::noniso: {
      NonIsoInput in{load_realization(c), parse_chain(c.chain), c.search_radius, c.audit_radius, c.seed};
      NonIsoWitness w = nonisolation_witness(in);
      auto yes = [](bool b) { return b ? "yes" : "no"; };
      os << "chain:";
      for (const Word& f : w.chain) os << " [" << format_word(f) << "]";
      os << "\n";
      os << "f0: " << format_word(w.f0) << " (u = " << format_word(w.u_star) << ")\n";
      os << "t1: " << to_string(w.t1) << "\nt0: " << to_string(w.t0) << "\n";
      os << "f': " << format_word(w.fprime) << "\n";
      os << "t'_m: " << to_string(w.path.points.back()) << "\nt': " << to_string(w.t_prime) << "\n";
      os << "probe: " << format_word(w.probe.g) << " t'' = " << to_string(w.probe.t2)
         << " t''' = " << to_string(w.probe.t3) << "\n";
      os << "tau1: " << format_plmap(w.taus.tau1) << "\n";
      os << "tau2: " << format_plmap(w.taus.tau2) << "\n";
      os << "tau1': " << format_plmap(w.adjusted1->tau_prime) << "\n";
      os << "tau2': " << format_plmap(w.adjusted2->tau_prime) << "\n";
      os << "w+: " << format_word(w.w_plus) << "\nw-: " << format_word(w.w_minus) << "\n";
      os << "order1 w+ vs w-: " << to_string(w.verdict1) << "\n";
      os << "order2 w+ vs w-: " << to_string(w.verdict2) << "\n";
      os << "tau inequalities exact: " << yes(w.tau1_exact && w.tau2_exact)
         << ", after merging: " << yes(w.tau1_after_merge && w.tau2_after_merge) << "\n";
      os << "chain positive: " << yes(w.chain_positive1) << " / " << yes(w.chain_positive2) << "\n";
      os << "critical points stable: " << yes(w.critical_points_stable) << "\n";
      os << "biinvariance at radius " << c.audit_radius << ": " << w.biinv1.violations.size() << " / "
         << w.biinv2.violations.size() << " violations\n";
      os << "radius 3 words signed unlike the base order: " << w.differs1 << " / " << w.differs2 << "\n";
      for (int i = 1; i <= 2; ++i) {
        const OrderOracle& o = i == 1 ? w.order1() : w.order2();
        os << "cone" << i << ":";
        for (const Word& p : positive_cone_ball(o, c.audit_radius)) os << " [" << format_word(p) << "]";
        os << "\n";
      }
      os << (w.ok() ? "PASS" : "FAIL") << "\n";
      return w.ok() ? kExitPass : kExitFailure;
    }
    case Command::type: {
      Rational alpha = parse_rational(c.alpha);
      Window win = parse_window(c.window);
      OrderOracle o = type_alpha_oracle(alpha);
      for (const auto& [u, v] : window_inequalities(win, c.printed_form)) {
        Word q = v * invert(u);
        ConradValues cv = conrad_values(alpha, q);
        os << format_word(u) << " < " << format_word(v) << ": " << to_string(compare(o, u, v)) << " (phi " << cv.phi;
        if (cv.psi) os << ", psi " << to_string(*cv.psi);
        os << ")\n";
      }
      const bool in = in_window(o, win, c.printed_form);
      os << "in window: " << (in ? "yes" : "no") << "\n";
      return in ? kExitPass : kExitFailure;
    }
    case Command::separate: {
      SeparationReport rep = separation_evidence(parse_rational(c.alpha), parse_rational(c.beta), parse_window(c.w1),
                                                 parse_window(c.w2), c.aut_len, c.bound, {c.max_rounds, 200000});
      auto pf = [](bool b) { return b ? "PASS" : "FAIL"; };
      os << "membership: " << pf(rep.membership) << "\n";
      os << "orbits (" << rep.automorphisms << " automorphisms): " << pf(rep.orbits) << "\n";
      os << "disjoint windows: " << pf(rep.disjoint) << "\n";
      for (const Word& s : rep.seeds) os << "seed: " << format_word(s) << "\n";
      for (const DerivationStep& s : rep.certificate.derivation) os << "step: " << format_step(s) << "\n";
      if (rep.certificate.witness) os << "witness: " << format_word(*rep.certificate.witness) << "\n";
      for (const std::string& f : rep.failures) os << "failure: " << f << "\n";
      return rep.ok() ? kExitPass : kExitFailure;
    }
    case Command::saturate: {
      if (c.words.empty()) throw ParseError("saturate takes at least one seed word");
      std::vector<Word> seeds;
      for (const std::string& s : c.words) seeds.push_back(parse_word(s));
      ConeCertificate cert = cone_saturate(seeds, c.bound, {c.max_rounds, 200000});
      if (cert.status == ConeCertificate::Status::contradiction) {
        os << "contradiction: " << format_word(*cert.witness) << " and its inverse are both positive\n";
        for (const DerivationStep& s : cert.derivation) os << "step: " << format_step(s) << "\n";
      } else {
        os << "consistent up to length " << c.bound << (cert.complete ? " (closed)" : " (round limit reached)")
           << "\n";
      }
      os << "rounds: " << cert.rounds << ", words: " << cert.derived << "\n";
      return kExitPass;
    }
    case Command::plot: {
      PLMap m = parse_plmap(c.map.empty() ? "0;" : c.map);
      auto [lo, hi] = parse_range(c.range);
      std::string csv = plot_csv(m);
      if (c.out.empty()) {
        os << csv;
      } else {
        write_file(c.out + ".svg", plot_svg(m, lo, hi));
        write_file(c.out + ".csv", csv);
        os << "wrote " << c.out << ".svg and " << c.out << ".csv\n";
      }
      return kExitPass;
    }
  }
  return kExitInput;
}

}  // namespace detail

/// Executes one command, writing the replay header and report to `os`.
/// Returns 0 when every check passes, 1 on a mathematical failure and 2 on
/// malformed input.
inline int run(const RunConfig& c, std::ostream& os) {
  os << config_header(c) << "\n";
  try {
    return detail::run_checked(c, os);
  } catch (const ParseError& e) {
    os << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    os << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    os << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace biord
