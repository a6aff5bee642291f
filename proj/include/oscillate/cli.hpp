// Batch front-end: commands validate, normalize, reduce, carpet, bound,
// count, verify and report.  Each returns the process exit code.
#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "io.hpp"

namespace oscillate {

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string certificate;
  std::string report;
  std::string svg;
  std::string combination;
  std::string constants;
  long double tol = 1e-12L;
  std::uint64_t seed = 0x5eed;
  unsigned seeds = 3;
  unsigned jobs = 1;
  // count
  std::string center = "0";
  std::string inner = "0";
  std::string outer;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int spectral = 2;
inline constexpr int not_dominated = 3;
inline constexpr int tolerance = 4;
}  // namespace exit_code

namespace cli {

/// "2", "-1/3", "2i", "1+2i", "1/2-3/4i".
inline GaussianRational parse_gaussian_token(std::string s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw ParseError("combination", "empty entry");
  if (t.back() != 'i') return {oscillate::parse_rational(t), Rational(0)};
  t.pop_back();
  // split at the last sign that is not leading and not after an exponent mark
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  auto im_part = [](const std::string& u) -> Rational {
    if (u.empty() || u == "+") return 1;
    if (u == "-") return -1;
    return oscillate::parse_rational(u);
  };
  if (split == std::string::npos) return {Rational(0), im_part(t)};
  return {oscillate::parse_rational(t.substr(0, split)), im_part(t.substr(split))};
}

inline std::vector<GaussianRational> parse_combination(const std::string& text, std::size_t n) {
  std::vector<GaussianRational> c;
  if (text.empty()) {
    c.assign(n, GaussianRational(0));
    c[0] = GaussianRational(1);
    return c;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      c.push_back(parse_gaussian_token(tok));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("combination", e.what());
    }
  }
  if (c.size() != n)
    throw ParseError("combination", "expected " + std::to_string(n) + " entries, got " + std::to_string(c.size()));
  return c;
}

inline BoundConstants load_constants(const std::string& spec) {
  if (spec.empty()) return {};
  Json j;
  std::string trimmed = spec;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.erase(trimmed.begin());
  if (!trimmed.empty() && trimmed.front() == '{') {
    try {
      j = Json::parse(trimmed);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("constants", std::string("malformed JSON: ") + e.what());
    }
  } else {
    j = io::read_json_file(spec);
  }
  return io::parse_constants(j);
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << text;
    return;
  }
  std::ofstream f(cfg.output);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + cfg.output);
  f << text;
}

inline void emit_json(const RunConfig& cfg, const Json& j, std::ostream& out) { emit(cfg, j.dump(2) + "\n", out); }

inline FuchsianSystem load_system(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ParseError("--input", "a system file is required");
  return io::parse_system(io::read_json_file(cfg.input), cfg.input);
}

inline Json validation_json(const FuchsianSystem& s) {
  auto v = validate(s);
  auto sp = spectral_class_check(s);
  Json res = Json::array();
  for (const auto& r : sp.residues)
    res.push_back({{"index", r.index},
                   {"characteristic", io::poly(r.characteristic)},
                   {"real_spectrum", r.real_spectrum},
                   {"eigenvalues", io::root_disks(r.eigenvalues)}});
  Json zero = Json::array();
  for (auto i : v.zero_residues) zero.push_back(i);
  Json j = {{"schema", kSchema},        {"kind", "ValidationReport"}, {"valid", true},
            {"rank", v.n},              {"poles", v.m},               {"membership", v.membership()},
            {"zero_residues", zero},    {"spectral_class", sp.in_class}, {"residues", res}};
  if (sp.first_violation) j["first_violation"] = *sp.first_violation;
  return j;
}

inline Json error_json(const Error& e) {
  Json j = {{"schema", kSchema}, {"kind", "Error"}, {"error", to_string(e.code())}, {"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) j["field"] = pe->field();
  if (auto* ve = dynamic_cast<const ValidationError*>(&e)) {
    Json idx = Json::array();
    for (auto i : ve->indices()) idx.push_back(i);
    j["indices"] = idx;
    if (ve->defect().rows() > 0) j["defect"] = io::matrix(ve->defect());
  }
  return j;
}

/// Annulus inner < |t - center| < outer cut along the downward ray, or the
/// disk |t - center| < outer when inner == 0.
inline ComplexPath annulus_boundary(const Complex& c, long double inner, long double outer) {
  const long double pi = pi_value<long double>();
  if (inner <= 0) return {ArcSpec::circle(c, outer, true, -pi / 2)};
  return detail::slit_annulus(c, inner, outer, -pi / 2);
}

inline std::string svg_plan(const BoundCertificate& c, const ZeroCountReport* rep) {
  const long double R = to_long_double(c.plan.R_out) + 0.5L;
  const int size = 640;
  auto X = [&](long double x) { return static_cast<double>((x + R) / (2 * R) * size); };
  auto Y = [&](long double y) { return static_cast<double>((R - y) / (2 * R) * size); };
  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  for (std::size_t ri = 0; ri < c.plan.regions.size(); ++ri) {
    const auto& reg = c.plan.regions[ri];
    o << "<polyline fill=\"none\" stroke-width=\"1\" stroke=\"" << colors[ri % 6] << "\" points=\"";
    for (const auto& arc : reg.boundary)
      for (int k = 0; k <= 48; ++k) {
        Complex z = arc.point(static_cast<long double>(k) / 48);
        o << X(z.re) << "," << Y(z.im) << " ";
      }
    o << "\"><title>" << to_string(reg.kind) << " bound " << c.regions[ri].bound.get_str();
    if (rep && ri < rep->regions.size()) o << " count " << rep->regions[ri].max_count;
    o << "</title></polyline>\n";
  }
  for (const auto& p : c.normalized.finite_poles()) {
    Complex z = to_complex(p);
    o << "<circle cx=\"" << X(z.re) << "\" cy=\"" << Y(z.im) << "\" r=\"3\" fill=\"black\"/>\n";
  }
  for (const auto& d : c.v) {
    Complex z = d.approx();
    o << "<path d=\"M" << X(z.re) - 3 << "," << Y(z.im) - 3 << " l6,6 m-6,0 l6,-6\" stroke=\"red\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline std::string text_report(const BoundCertificate& c, const ZeroCountReport* rep) {
  std::ostringstream o;
  o << "system: rank " << c.input.n << ", " << c.input.m() << " poles\n";
  o << "operator: order " << c.op.order << (c.degenerate ? " (degenerate combination)" : "") << "\n";
  o << "  " << to_string(c.op) << "\n";
  o << "chart: R = " << to_string(c.plan.R) << ", outer circle " << to_string(c.plan.R_out) << "\n";
  o << "regions:\n";
  for (std::size_t i = 0; i < c.regions.size(); ++i) {
    const auto& r = c.regions[i];
    o << "  [" << i << "] " << to_string(r.kind);
    if (r.disk >= 0) o << " (pole disk " << r.disk << ")";
    o << ": bound " << r.bound.get_str();
    if (rep && i < rep->regions.size())
      o << ", counted " << rep->regions[i].max_count << (rep->regions[i].dominated ? "" : "  NOT DOMINATED");
    o << "\n";
  }
  o << "total bound: " << c.total.get_str() << "\n";
  for (const auto& s : c.symmetries) {
    o << "monodromy at pole disk " << s.disk << ":";
    for (const auto& e : s.eigenvalues)
      o << " " << static_cast<double>(e.center.re) << (e.center.im < 0 ? "-" : "+")
        << static_cast<double>(std::fabs(e.center.im)) << "i [" << to_string(e.status) << "]";
    o << "\n";
  }
  if (rep) o << "verification: " << (rep->all_dominated ? "all regions dominated" : "domination FAILED") << "\n";
  return o.str();
}

}  // namespace cli

// ---------------------------------------------------------------------------
// commands

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  auto s = cli::load_system(cfg);
  cli::emit_json(cfg, cli::validation_json(s), out);
  return exit_code::ok;
}

inline int cmd_normalize(const RunConfig& cfg, std::ostream& out) {
  auto s = cli::load_system(cfg);
  validate(s);
  auto [chart, ns] = normalize_chart(s);
  cli::emit_json(cfg, {{"schema", kSchema}, {"kind", "NormalizedChart"}, {"chart", io::chart(chart)},
                       {"system", io::system(ns)}}, out);
  return exit_code::ok;
}

inline int cmd_reduce(const RunConfig& cfg, std::ostream& out) {
  auto s = cli::load_system(cfg);
  validate(s);
  auto c = cli::parse_combination(cfg.combination, s.n);
  auto [op, tr] = derive_scalar(s, c);
  Json wedges = Json::array();
  for (const auto& w : tr.wedges) wedges.push_back(io::poly(w));
  cli::emit_json(cfg, {{"schema", kSchema},
                       {"kind", "ScalarOperator"},
                       {"combination", io::combination(c)},
                       {"operator", io::op(op)},
                       {"degenerate", tr.degenerate},
                       {"slope", io::enclosure(slope(op))},
                       {"wedges", wedges}},
                 out);
  return exit_code::ok;
}

inline int cmd_carpet(const RunConfig& cfg, std::ostream& out) {
  auto s = cli::load_system(cfg);
  validate(s);
  auto [chart, ns] = normalize_chart(s);
  Json j = {{"schema", kSchema},
            {"kind", "Carpet"},
            {"r_flat", io::enclosure(r_flat(s))},
            {"r_flat_unordered", io::enclosure(r_flat(s, PairConvention::Unordered))},
            {"r_flat_normalized", io::enclosure(r_flat(ns))},
            {"nu_default", io::rat(nu_default(s.n, s.m(), cli::load_constants(cfg.constants).nu_c))}};
  if (!ns.finite_indices().empty()) {
    try {
      j["r_sharp_normalized"] = io::enclosure(r_sharp(numerator_matrix(ns), pole_polynomial(ns)));
    } catch (const Error&) {
    }
  }
  cli::emit_json(cfg, j, out);
  return exit_code::ok;
}

inline int cmd_bound(const RunConfig& cfg, std::ostream& out) {
  auto s = cli::load_system(cfg);
  auto kc = cli::load_constants(cfg.constants);
  auto c = cli::parse_combination(cfg.combination, s.n);
  validate(s);
  try {
    auto cert = assemble_bound(s, c, kc);
    cli::emit_json(cfg, io::certificate(cert), out);
    return exit_code::ok;
  } catch (const SpectralClassError& e) {
    auto sp = spectral_class_check(s);
    const auto& r = sp.residues[e.residue_index()];
    cli::emit_json(cfg, {{"schema", kSchema},
                         {"kind", "Error"},
                         {"error", "SpectralClassViolation"},
                         {"message", e.what()},
                         {"residue", e.residue_index()},
                         {"characteristic", io::poly(r.characteristic)},
                         {"eigenvalues", io::root_disks(r.eigenvalues)}},
                   out);
    return exit_code::spectral;
  }
}

inline int cmd_count(const RunConfig& cfg, std::ostream& out) {
  auto s = cli::load_system(cfg);
  validate(s);
  auto c = cli::parse_combination(cfg.combination, s.n);
  if (cfg.outer.empty()) throw ParseError("--outer", "outer radius required");
  GaussianRational center = cli::parse_gaussian_token(cfg.center);
  long double inner = to_long_double(oscillate::parse_rational(cfg.inner));
  long double outer = to_long_double(oscillate::parse_rational(cfg.outer));
  if (!(outer > inner) || inner < 0) throw ParseError("--outer", "need 0 <= inner < outer");
  auto boundary = cli::annulus_boundary(to_complex(center), inner, outer);
  ArgumentOptions ao;
  ao.transport.tol = cfg.tol;
  std::mt19937_64 rng(cfg.seed);
  Json seeds = Json::array();
  long max_count = 0;
  for (unsigned k = 0; k < cfg.seeds; ++k) {
    SolutionSeed seed{detail::covector_of(c), detail::random_initial(rng, s.n)};
    auto z = count_zeros_region(s, seed, boundary, ao);
    max_count = std::max(max_count, z.count);
    Json init = Json::array();
    for (const auto& x : seed.initial) init.push_back(io::exact_cplx(x));
    seeds.push_back({{"count", z.count},
                     {"winding", io::measured(z.winding, z.margin)},
                     {"rel_error", static_cast<double>(z.trace.rel_error)},
                     {"initial", init}});
  }
  cli::emit_json(cfg, {{"schema", kSchema},
                       {"kind", "ZeroCount"},
                       {"combination", io::combination(c)},
                       {"boundary", io::path(boundary)},
                       {"max_count", max_count},
                       {"seeds", seeds}},
                 out);
  return exit_code::ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.certificate.empty()) throw ParseError("--certificate", "a certificate file is required");
  auto cert = io::parse_certificate(io::read_json_file(cfg.certificate));
  if (!cfg.input.empty()) {
    auto s = cli::load_system(cfg);
    if (io::system(s) != io::system(cert.input))
      throw ParseError("--input", "system differs from the certificate's input");
  }
  VerifyOptions vo;
  vo.seeds = cfg.seeds;
  vo.seed = cfg.seed;
  vo.tol = cfg.tol;
  auto rep = verify_certificate(cert, vo);
  cli::emit_json(cfg, io::report(rep), out);
  return rep.all_dominated ? exit_code::ok : exit_code::not_dominated;
}

inline int cmd_report(const RunConfig& cfg, std::ostream& out) {
  if (cfg.certificate.empty()) throw ParseError("--certificate", "a certificate file is required");
  auto cj = io::read_json_file(cfg.certificate);
  auto cert = io::parse_certificate(cj);
  // fields not needed for verification
  for (const auto& d : cj.at("zeros_a0"))
    cert.v.push_back({io::parse_gauss(d.at("center"), "zeros_a0.center"),
                      io::parse_rational(d.at("radius"), "zeros_a0.radius"), d.at("multiplicity").get<unsigned>()});
  cert.degenerate = cj.value("degenerate", false);
  std::optional<ZeroCountReport> rep;
  if (!cfg.report.empty()) {
    auto rj = io::read_json_file(cfg.report);
    ZeroCountReport r;
    for (const auto& x : rj.at("regions")) {
      RegionCount rc;
      rc.max_count = x.at("max_count").get<long>();
      rc.dominated = x.at("dominated").get<bool>();
      r.regions.push_back(rc);
    }
    r.all_dominated = rj.at("all_dominated").get<bool>();
    rep = r;
  }
  if (!cfg.svg.empty()) {
    std::ofstream f(cfg.svg);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + cfg.svg);
    f << cli::svg_plan(cert, rep ? &*rep : nullptr);
  }
  cli::emit(cfg, cli::text_report(cert, rep ? &*rep : nullptr), out);
  return exit_code::ok;
}

inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.tol <= 0) throw ParseError("--tol", "tolerance must be positive");
    if (cfg.jobs == 0) throw ParseError("--jobs", "at least one worker");
    if (cfg.command == "validate") return cmd_validate(cfg, out);
    if (cfg.command == "normalize") return cmd_normalize(cfg, out);
    if (cfg.command == "reduce") return cmd_reduce(cfg, out);
    if (cfg.command == "carpet") return cmd_carpet(cfg, out);
    if (cfg.command == "bound") return cmd_bound(cfg, out);
    if (cfg.command == "count") return cmd_count(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "report") return cmd_report(cfg, out);
    throw ParseError("command", "unknown command " + cfg.command);
  } catch (const Error& e) {
    err << cli::error_json(e).dump(2) << "\n";
    if (e.code() == ErrorCode::ToleranceUnreachable && cfg.command == "verify") return exit_code::tolerance;
    if (e.code() == ErrorCode::SpectralClassViolation) return exit_code::spectral;
    return exit_code::failure;
  } catch (const std::exception& e) {
    err << "{\"error\": \"InternalInconsistency\", \"message\": " << Json(std::string(e.what())).dump() << "}\n";
    return exit_code::failure;
  }
}

/// Parses argv with CLI11 and runs the selected command.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Zero bounds for Fuchsian systems on the Riemann sphere"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string tol_text = "1e-12";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input, "system JSON file");
    sub->add_option("--output,-o", cfg.output, "output file (default stdout)");
    sub->add_option("--combination,-c", cfg.combination, "coefficients c_1,...,c_n of y = c.x");
    sub->add_option("--tol", tol_text, "relative tolerance of the numerics");
    sub->add_option("--constants", cfg.constants, "constant overrides: JSON object or file");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--jobs", cfg.jobs, "worker cap");
  };
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"validate", "check a system and its spectral class"},
                      {"normalize", "move the poles into the normalized chart"},
                      {"reduce", "derive the scalar operator of a combination"},
                      {"carpet", "carpeting values of a system"},
                      {"bound", "assemble a zero-bound certificate"},
                      {"count", "count zeros of y in a disk or annulus"},
                      {"verify", "check a certificate against numeric zero counts"},
                      {"report", "summarize a certificate"}};
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    std::string name = s.name;
    if (name == "verify" || name == "report") sub->add_option("--certificate", cfg.certificate, "certificate JSON");
    if (name == "verify" || name == "count") sub->add_option("--seeds", cfg.seeds, "number of random solutions");
    if (name == "report") {
      sub->add_option("--report", cfg.report, "zero-count report JSON");
      sub->add_option("--svg", cfg.svg, "write the slit plan as SVG");
    }
    if (name == "count") {
      sub->add_option("--center", cfg.center, "center of the disk");
      sub->add_option("--inner", cfg.inner, "inner radius (0 for a disk)");
      sub->add_option("--outer", cfg.outer, "outer radius")->required();
    }
    sub->callback([&cfg, name]() { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_code::ok;
    }
    err << "{\"error\": \"ParseError\", \"message\": " << Json(std::string(e.what())).dump() << "}\n";
    return exit_code::failure;
  }
  try {
    cfg.tol = std::stold(tol_text);
  } catch (const std::exception&) {
    err << "{\"error\": \"ParseError\", \"field\": \"--tol\"}\n";
    return exit_code::failure;
  }
  return run_command(cfg, out, err);
}

}  // namespace oscillate
