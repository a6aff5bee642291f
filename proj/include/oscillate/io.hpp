// JSON for systems, operators, certificates and zero-count reports.
// Rationals are strings "p/q"; floats are emitted either as exact dyadic
// strings (geometry) or with an error radius.
#pragma once

#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "verify.hpp"

namespace oscillate {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "oscillate/1";

class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error(ErrorCode::ParseError, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

namespace io {

// ---------------------------------------------------------------------------
// scalars

inline Json rat(const Rational& q) { return to_string(q); }

inline Rational parse_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    try {
      return oscillate::parse_rational(s);
    } catch (const Error& e) {
      throw ParseError(where, e.what());
    }
  }
  if (j.is_number_float()) return rational_from_long_double(j.get<double>());
  throw ParseError(where, "expected a rational (integer or \"p/q\" string)");
}

inline Json gauss(const GaussianRational& z) { return {{"re", rat(z.re)}, {"im", rat(z.im)}}; }

inline GaussianRational parse_gauss(const Json& j, const std::string& where) {
  if (j.is_object()) {
    if (!j.contains("re")) throw ParseError(where, "missing \"re\"");
    Rational im = j.contains("im") ? parse_rational(j.at("im"), where + ".im") : Rational(0);
    return {parse_rational(j.at("re"), where + ".re"), im};
  }
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError(where, "complex as [re, im] needs two entries");
    return {parse_rational(j[0], where + "[0]"), parse_rational(j[1], where + "[1]")};
  }
  return {parse_rational(j, where), Rational(0)};
}

inline Json enclosure(const Enclosure& e) { return {{"lo", rat(e.lo)}, {"hi", rat(e.hi)}}; }

inline Enclosure parse_enclosure(const Json& j, const std::string& where) {
  return Enclosure(parse_rational(j.at("lo"), where + ".lo"), parse_rational(j.at("hi"), where + ".hi"));
}

/// Long double as its exact binary value.
inline Json exact_ld(long double x) { return to_string(rational_from_long_double(x)); }
inline long double parse_ld(const Json& j, const std::string& where) { return to_long_double(parse_rational(j, where)); }

inline Json exact_cplx(const Complex& z) { return {{"re", exact_ld(z.re)}, {"im", exact_ld(z.im)}}; }
inline Complex parse_cplx(const Json& j, const std::string& where) {
  return {parse_ld(j.at("re"), where + ".re"), parse_ld(j.at("im"), where + ".im")};
}

/// Measured value with its error radius.
inline Json measured(long double v, long double radius) {
  return {{"value", static_cast<double>(v)}, {"radius", static_cast<double>(radius)}};
}

inline Json integer(const Integer& z) { return z.get_str(); }
inline Integer parse_integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    Integer z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ParseError(where, "not an integer");
    return z;
  }
  throw ParseError(where, "expected an integer");
}

// ---------------------------------------------------------------------------
// algebra

inline Json point(const SpherePoint& p) { return p.infinite ? Json("inf") : gauss(p.value); }

inline SpherePoint parse_point(const Json& j, const std::string& where) {
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity"))
    return SpherePoint::infinity();
  return SpherePoint(parse_gauss(j, where));
}

inline Json matrix(const ExactMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(gauss(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline ExactMatrix parse_matrix(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) throw ParseError(where, "expected " + std::to_string(n) + " rows");
  ExactMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string wr = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n) throw ParseError(wr, "expected " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = parse_gauss(j[r][c], wr + "[" + std::to_string(c) + "]");
  }
  return m;
}

inline Json poly(const Poly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(gauss(c));
  return a;
}

inline Poly parse_poly(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "polynomial as a coefficient array, lowest degree first");
  std::vector<GaussianRational> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(parse_gauss(j[i], where + "[" + std::to_string(i) + "]"));
  return Poly(std::move(c));
}

inline Json system(const FuchsianSystem& s) {
  Json poles = Json::array(), residues = Json::array();
  for (const auto& p : s.poles) poles.push_back(point(p));
  for (const auto& a : s.residues) residues.push_back(matrix(a));
  return {{"schema", kSchema}, {"rank", s.n}, {"poles", poles}, {"residues", residues}};
}

inline FuchsianSystem parse_system(const Json& j, const std::string& where = "system") {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  if (j.contains("schema") && j.at("schema") != kSchema)
    throw ParseError(where + ".schema", "unsupported schema " + j.at("schema").dump());
  if (!j.contains("poles")) throw ParseError(where, "missing \"poles\"");
  if (!j.contains("residues")) throw ParseError(where, "missing \"residues\"");
  const Json& P = j.at("poles");
  const Json& A = j.at("residues");
  if (!P.is_array()) throw ParseError(where + ".poles", "expected an array");
  if (!A.is_array()) throw ParseError(where + ".residues", "expected an array");
  FuchsianSystem s;
  if (j.contains("rank")) {
    if (!j.at("rank").is_number_unsigned()) throw ParseError(where + ".rank", "expected a positive integer");
    s.n = j.at("rank").get<std::size_t>();
  } else if (!A.empty() && A[0].is_array()) {
    s.n = A[0].size();
  }
  for (std::size_t i = 0; i < P.size(); ++i) s.poles.push_back(parse_point(P[i], where + ".poles[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < A.size(); ++i)
    s.residues.push_back(parse_matrix(A[i], s.n, where + ".residues[" + std::to_string(i) + "]"));
  return s;
}

inline Json combination(const std::vector<GaussianRational>& c) {
  Json a = Json::array();
  for (const auto& z : c) a.push_back(gauss(z));
  return a;
}

inline std::vector<GaussianRational> parse_combination(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  std::vector<GaussianRational> c;
  for (std::size_t i = 0; i < j.size(); ++i) c.push_back(parse_gauss(j[i], where + "[" + std::to_string(i) + "]"));
  return c;
}

inline Json op(const ScalarOperator& o) {
  Json a = Json::array();
  for (const auto& p : o.a) a.push_back(poly(p));
  return {{"order", o.order}, {"a", a}, {"text", to_string(o)}};
}

inline ScalarOperator parse_op(const Json& j, const std::string& where) {
  ScalarOperator o;
  o.order = j.at("order").get<std::size_t>();
  const Json& a = j.at("a");
  for (std::size_t i = 0; i < a.size(); ++i) o.a.push_back(parse_poly(a[i], where + ".a[" + std::to_string(i) + "]"));
  if (o.a.size() != o.order + 1) throw ParseError(where, "order and coefficient count disagree");
  return o;
}

inline Json root_disks(const std::vector<RootDisk>& v) {
  Json a = Json::array();
  for (const auto& d : v)
    a.push_back({{"center", gauss(d.center)}, {"radius", rat(d.radius)}, {"multiplicity", d.multiplicity}});
  return a;
}

inline Json chart(const NormalizedChart& c) {
  Json j = {{"moebius", matrix(c.moebius)},
            {"scale", gauss(c.scale)},
            {"R", rat(c.R_bound)},
            {"min_distance", rat(c.min_distance)},
            {"identity", c.identity()}};
  if (c.has_chart_infinity) j["chart_infinity"] = gauss(c.chart_infinity);
  Json poles = Json::array();
  for (const auto& p : c.normalized_poles) poles.push_back(gauss(p));
  j["normalized_poles"] = poles;
  return j;
}

// ---------------------------------------------------------------------------
// numerics and geometry

inline Json arc(const ArcSpec& a) {
  switch (a.kind) {
    case ArcSpec::Kind::Segment: return {{"kind", "segment"}, {"from", exact_cplx(a.a)}, {"to", exact_cplx(a.b)}};
    case ArcSpec::Kind::Arc:
    case ArcSpec::Kind::Circle:
      return {{"kind", a.kind == ArcSpec::Kind::Arc ? "arc" : "circle"},
              {"center", exact_cplx(a.center)},
              {"radius", exact_ld(a.radius)},
              {"theta0", exact_ld(a.theta0)},
              {"theta1", exact_ld(a.theta1)}};
  }
  return {};
}

inline ArcSpec parse_arc(const Json& j, const std::string& where) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "segment") return ArcSpec::segment(parse_cplx(j.at("from"), where + ".from"), parse_cplx(j.at("to"), where + ".to"));
  ArcSpec a = ArcSpec::arc(parse_cplx(j.at("center"), where + ".center"), parse_ld(j.at("radius"), where + ".radius"),
                           parse_ld(j.at("theta0"), where + ".theta0"), parse_ld(j.at("theta1"), where + ".theta1"));
  if (kind == "circle") {
    // keep the exact closing of full turns
    a = ArcSpec::circle(a.center, a.radius, a.theta1 > a.theta0, a.theta0);
  } else if (kind != "arc") {
    throw ParseError(where + ".kind", "unknown arc kind " + kind);
  }
  return a;
}

inline Json path(const ComplexPath& p) {
  Json a = Json::array();
  for (const auto& s : p) a.push_back(arc(s));
  return a;
}

inline ComplexPath parse_path(const Json& j, const std::string& where) {
  ComplexPath p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(parse_arc(j[i], where + "[" + std::to_string(i) + "]"));
  return p;
}

inline Json eigen(const std::vector<EigenEnclosure>& v) {
  Json a = Json::array();
  for (const auto& e : v)
    a.push_back({{"center", {{"re", measured(e.center.re, e.radius)}, {"im", measured(e.center.im, e.radius)}}},
                 {"radius", static_cast<double>(e.radius)},
                 {"multiplicity", e.multiplicity},
                 {"modulus", {{"lo", static_cast<double>(e.modulus_lo)}, {"hi", static_cast<double>(e.modulus_hi)}}},
                 {"status", to_string(e.status)}});
  return a;
}

inline std::vector<EigenEnclosure> parse_eigen(const Json& j) {
  std::vector<EigenEnclosure> out;
  for (const auto& e : j) {
    EigenEnclosure x;
    x.center = {e.at("center").at("re").at("value").get<long double>(),
                e.at("center").at("im").at("value").get<long double>()};
    x.radius = e.at("radius").get<long double>();
    x.multiplicity = e.at("multiplicity").get<unsigned>();
    x.modulus_lo = e.at("modulus").at("lo").get<long double>();
    x.modulus_hi = e.at("modulus").at("hi").get<long double>();
    const std::string st = e.at("status").get<std::string>();
    x.status = st == "certified-unit"       ? UnitStatus::CertifiedUnit
               : st == "certified-non-unit" ? UnitStatus::CertifiedNonUnit
                                            : UnitStatus::Indeterminate;
    out.push_back(x);
  }
  return out;
}

inline Json var_arg(const VarArgBound& b) {
  Json beta = Json::array();
  for (const auto& x : b.beta) beta.push_back(rat(x));
  return {{"kind", b.kind},   {"arc", arc(b.arc)},           {"bound", rat(b.bound)},
          {"order", b.k},     {"slope", enclosure(b.slope)}, {"length", rat(b.length)},
          {"clearance", rat(b.clearance)}, {"R", rat(b.R)}, {"degree", b.d},
          {"A", rat(b.A)},    {"lower_a0", rat(b.lower_a0)}, {"beta", beta}};
}

inline Json constants(const BoundConstants& k) {
  return {{"c_vp", rat(k.c_vp)},
          {"nu_c", k.nu_c},
          {"clearance_factor", k.clearance_factor},
          {"axis_grid", k.axis_grid},
          {"chart_grid", k.chart_grid},
          {"disk_min", rat(k.disk_min)},
          {"disk_max", rat(k.disk_max)},
          {"slit_halfwidth", rat(k.slit_halfwidth)},
          {"double_carpet_c", rat(k.double_carpet_c)},
          {"bits", k.bits}};
}

/// Overrides on top of `base`; unknown keys are an error.
inline BoundConstants parse_constants(const Json& j, BoundConstants base = {}) {
  if (!j.is_object()) throw ParseError("constants", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const std::string w = "constants." + k;
    auto uint = [&]() {
      if (!it->is_number_unsigned()) throw ParseError(w, "expected a non-negative integer");
      return it->get<unsigned>();
    };
    if (k == "c_vp") base.c_vp = parse_rational(*it, w);
    else if (k == "nu_c") base.nu_c = uint();
    else if (k == "clearance_factor") base.clearance_factor = uint();
    else if (k == "axis_grid") base.axis_grid = uint();
    else if (k == "chart_grid") base.chart_grid = uint();
    else if (k == "disk_min") base.disk_min = parse_rational(*it, w);
    else if (k == "disk_max") base.disk_max = parse_rational(*it, w);
    else if (k == "slit_halfwidth") base.slit_halfwidth = parse_rational(*it, w);
    else if (k == "double_carpet_c") base.double_carpet_c = parse_rational(*it, w);
    else if (k == "bits") base.bits = uint();
    else throw ParseError(w, "unknown constant");
  }
  if (base.c_vp <= 0) throw ParseError("constants.c_vp", "must be positive");
  if (base.disk_min <= 0 || base.disk_min > base.disk_max || base.disk_max >= Rational(1, 2))
    throw ParseError("constants.disk_max", "need 0 < disk_min <= disk_max < 1/2");
  if (base.slit_halfwidth <= 0 || base.slit_halfwidth >= base.disk_min)
    throw ParseError("constants.slit_halfwidth", "need 0 < slit_halfwidth < disk_min");
  return base;
}

// ---------------------------------------------------------------------------
// certificate

inline Json plan(const SlitPlan& p) {
  Json disks = Json::array(), slits = Json::array(), regions = Json::array();
  for (const auto& d : p.disks)
    disks.push_back({{"pole", d.pole},
                     {"center", gauss(d.center)},
                     {"radius", rat(d.radius)},
                     {"inner_radius", rat(d.inner_radius)},
                     {"clearance", rat(d.clearance)},
                     {"ring", d.has_ring},
                     {"ring_angle", exact_ld(d.ring_angle)}});
  for (const auto& s : p.slits)
    slits.push_back({{"from", s.from}, {"to", s.to}, {"offset", rat(s.offset)}, {"segment", arc(s.segment())},
                     {"clearance", rat(s.clearance)}});
  for (const auto& r : p.regions)
    regions.push_back({{"kind", to_string(r.kind)}, {"disk", r.disk}, {"boundary", path(r.boundary)}});
  return {{"R", rat(p.R)},         {"R_out", rat(p.R_out)},         {"disks", disks},
          {"slits", slits},        {"regions", regions},            {"clearance", rat(p.clearance)},
          {"candidates", p.candidates}};
}

inline RegionKind parse_region_kind(const std::string& s, const std::string& where) {
  if (s == "middle") return RegionKind::Middle;
  if (s == "exterior") return RegionKind::Exterior;
  if (s == "ring") return RegionKind::Ring;
  if (s == "punctured-disk") return RegionKind::PuncturedDisk;
  throw ParseError(where, "unknown region kind " + s);
}

inline Json certificate(const BoundCertificate& c) {
  Json arcs = Json::array();
  for (const auto& b : c.arc_bounds) arcs.push_back(var_arg(b));
  Json regions = Json::array();
  for (const auto& r : c.regions) {
    Json idx = Json::array();
    for (auto i : r.arc_bounds) idx.push_back(i);
    Json jr = {{"region", r.region}, {"kind", to_string(r.kind)}, {"disk", r.disk}, {"bound", integer(r.bound)}};
    if (r.kind == RegionKind::PuncturedDisk) {
      jr["rule"] = "annulus";
      jr["order"] = r.order;
      jr["B"] = rat(r.B);
    } else {
      jr["rule"] = "argument";
      jr["arc_bounds"] = idx;
      jr["var_arg_sum"] = rat(r.var_arg_sum);
    }
    regions.push_back(jr);
  }
  Json sym = Json::array();
  for (const auto& s : c.symmetries)
    sym.push_back({{"disk", s.disk},
                   {"axis", {{"base", gauss(s.axis.base)}, {"direction", gauss(s.axis.direction)},
                             {"angle_over_pi", rat(s.axis.angle_over_pi)}}},
                   {"operator", op(s.op)},
                   {"real_on_axis", s.real_on_axis},
                   {"nu_axis", measured(s.nu_axis, 1e-15L * (1 + std::fabs(s.nu_axis)))},
                   {"carpet_control", s.carpet_control},
                   {"mirror_distance2", rat(s.mirror_distance2)},
                   {"zeros_a0", root_disks(s.v_axis_chart)},
                   {"outer", var_arg(s.outer)},
                   {"inner", var_arg(s.inner)},
                   {"monodromy", eigen(s.eigenvalues)},
                   {"monodromy_unit", s.monodromy_unit}});
  return {{"schema", kSchema},
          {"kind", "BoundCertificate"},
          {"input", system(c.input)},
          {"combination", combination(c.combination)},
          {"chart", chart(c.chart)},
          {"normalized", system(c.normalized)},
          {"operator", op(c.op)},
          {"degenerate", c.degenerate},
          {"slope", enclosure(c.slope)},
          {"zeros_a0", root_disks(c.v)},
          {"plan", plan(c.plan)},
          {"arc_bounds", arcs},
          {"regions", regions},
          {"symmetries", sym},
          {"total", integer(c.total)},
          {"log2_total", rat(c.log2_total)},
          {"r_flat", enclosure(c.carpet)},
          {"nu", rat(c.nu)},
          {"closed_form_holds", c.closed_form_holds},
          {"slope_bound_holds", c.slope_bound_holds},
          {"constants", constants(c.constants)},
          {"perturbation", c.perturbation}};
}

/// The parts of a certificate that verification uses: the systems, the
/// combination, the constants, the region boundaries and their bounds.
inline BoundCertificate parse_certificate(const Json& j) {
  if (!j.is_object()) throw ParseError("certificate", "expected an object");
  if (j.value("schema", "") != kSchema) throw ParseError("certificate.schema", "expected \"oscillate/1\"");
  if (j.value("kind", "") != "BoundCertificate") throw ParseError("certificate.kind", "not a BoundCertificate");
  BoundCertificate c;
  try {
    c.input = parse_system(j.at("input"), "certificate.input");
    c.normalized = parse_system(j.at("normalized"), "certificate.normalized");
    c.combination = parse_combination(j.at("combination"), "certificate.combination");
    c.constants = parse_constants(j.at("constants"));
    c.perturbation = j.at("perturbation").get<unsigned>();
    c.op = parse_op(j.at("operator"), "certificate.operator");
    c.order = c.op.order;
    c.total = parse_integer(j.at("total"), "certificate.total");
    const Json& P = j.at("plan");
    c.plan.R = parse_rational(P.at("R"), "certificate.plan.R");
    c.plan.R_out = parse_rational(P.at("R_out"), "certificate.plan.R_out");
    const Json& regs = P.at("regions");
    for (std::size_t i = 0; i < regs.size(); ++i) {
      const std::string w = "certificate.plan.regions[" + std::to_string(i) + "]";
      Region r;
      r.kind = parse_region_kind(regs[i].at("kind").get<std::string>(), w + ".kind");
      r.disk = regs[i].at("disk").get<long>();
      r.boundary = parse_path(regs[i].at("boundary"), w + ".boundary");
      c.plan.regions.push_back(std::move(r));
    }
    const Json& rb = j.at("regions");
    if (rb.size() != c.plan.regions.size()) throw ParseError("certificate.regions", "region count differs from the plan");
    for (std::size_t i = 0; i < rb.size(); ++i) {
      const std::string w = "certificate.regions[" + std::to_string(i) + "]";
      RegionBound b;
      b.region = i;
      b.kind = parse_region_kind(rb[i].at("kind").get<std::string>(), w + ".kind");
      b.disk = rb[i].at("disk").get<long>();
      b.bound = parse_integer(rb[i].at("bound"), w + ".bound");
      c.regions.push_back(std::move(b));
    }
    for (const auto& s : j.at("symmetries")) {
      PoleSymmetry ps;
      ps.disk = s.at("disk").get<std::size_t>();
      ps.eigenvalues = parse_eigen(s.at("monodromy"));
      ps.monodromy_unit = s.at("monodromy_unit").get<bool>();
      c.symmetries.push_back(std::move(ps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("certificate", e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// zero-count report

inline Json report(const ZeroCountReport& r) {
  Json regions = Json::array();
  for (const auto& rc : r.regions) {
    Json seeds = Json::array();
    for (const auto& s : rc.seeds) {
      Json init = Json::array();
      for (const auto& z : s.initial) init.push_back(exact_cplx(z));
      seeds.push_back({{"count", s.count},
                       {"winding", measured(s.winding, s.margin)},
                       {"rel_error", static_cast<double>(s.rel_error)},
                       {"precision_bits", s.precision_bits},
                       {"samples", s.samples},
                       {"initial", init}});
    }
    regions.push_back({{"region", rc.region},
                       {"kind", to_string(rc.kind)},
                       {"disk", rc.disk},
                       {"bound", integer(rc.bound)},
                       {"perturbation", rc.perturbation},
                       {"max_count", rc.max_count},
                       {"dominated", rc.dominated},
                       {"seeds", seeds}});
  }
  Json mono = Json::array();
  for (const auto& m : r.monodromy) mono.push_back(eigen(m));
  return {{"schema", kSchema},
          {"kind", "ZeroCountReport"},
          {"regions", regions},
          {"total_bound", integer(r.total_bound)},
          {"total_max_count", r.total_max_count},
          {"all_dominated", r.all_dominated},
          {"seeds", r.options.seeds},
          {"seed", r.options.seed},
          {"tol", static_cast<double>(r.options.tol)},
          {"monodromy", mono}};
}

// ---------------------------------------------------------------------------
// files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace io
}  // namespace oscillate
