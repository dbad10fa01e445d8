#include "chab/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chab {

namespace {

using nlohmann::json;

Rat parse_rat(const json& j, const std::string& where) {
  if (!j.is_string()) raise(ErrorCode::kBadInput, where + ": expected a rational string");
  const std::string s = j.get<std::string>();
  try {
    Rat r(s);
    if (boost::multiprecision::denominator(r) == 0)
      raise(ErrorCode::kBadInput, where + ": zero denominator");
    return r;
  } catch (const std::exception&) {
    raise(ErrorCode::kBadInput, where + ": cannot parse rational '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  std::string s = boost::multiprecision::numerator(r).str();
  if (boost::multiprecision::denominator(r) != 1)
    s += "/" + boost::multiprecision::denominator(r).str();
  return s;
}

Poly<Rat> parse_poly(const json& j, const std::string& where) {
  if (!j.is_array()) raise(ErrorCode::kBadInput, where + ": expected an array");
  Poly<Rat> p{RatCtx{}};
  for (std::size_t i = 0; i < j.size(); ++i)
    p.c.push_back(parse_rat(j[i], where + "[" + std::to_string(i) + "]"));
  p.trim();
  return p;
}

json poly_to_json(const Poly<Rat>& p) {
  json a = json::array();
  for (const auto& c : p.c) a.push_back(rat_to_string(c));
  return a;
}

Dyadic parse_dyadic(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() ||
      !j[1].is_number_integer())
    raise(ErrorCode::kBadInput, where + ": expected [mantissa, exponent]");
  return Dyadic(Int(j[0].get<std::string>()), j[1].get<long>());
}

json dyadic_to_json(const Dyadic& d) {
  return json::array({d.mantissa().str(), d.exponent()});
}

std::vector<std::vector<int>> parse_exponents(const json& j, const std::string& where) {
  std::vector<std::vector<int>> out;
  for (const auto& row : j) {
    std::vector<int> v;
    for (const auto& e : row) {
      if (!e.is_number_integer())
        raise(ErrorCode::kBadInput, where + ": exponent entries must be integers");
      v.push_back(e.get<int>());
    }
    out.push_back(std::move(v));
  }
  return out;
}

json exponents_to_json(const std::vector<std::vector<int>>& v) {
  json a = json::array();
  for (const auto& row : v) {
    json r = json::array();
    for (int e : row) r.push_back(e);
    a.push_back(r);
  }
  return a;
}

std::vector<EtaleFactorSpec> parse_factorization(const json& j) {
  if (!j.is_array() || j.empty())
    raise(ErrorCode::kBadInput, "local_factorization: expected a nonempty array");
  std::vector<EtaleFactorSpec> out;
  for (const auto& fj : j) {
    EtaleFactorSpec spec;
    const auto& fd = fj.at("field");
    spec.field.residue_degree = fd.at("residue_degree").get<int>();
    for (const auto& coeff : fd.at("eisenstein")) {
      std::vector<Int> v;
      for (const auto& e : coeff) v.push_back(Int(e.get<std::string>()));
      spec.field.eisenstein.push_back(std::move(v));
    }
    for (const auto& c : fj.at("poly")) spec.poly.push_back(parse_rat(c, "factor poly"));
    for (const auto& c : fj.at("root")) spec.root.push_back(parse_dyadic(c, "root"));
    spec.newton_refine = fj.value("newton_refine", true);
    const auto& cj = fj.at("certificate");
    spec.certificate.kind = cj.at("kind").get<std::string>();
    if (cj.contains("shift")) spec.certificate.shift = Int(cj["shift"].get<std::string>());
    out.push_back(std::move(spec));
  }
  return out;
}

json factorization_to_json(const std::vector<EtaleFactorSpec>& specs) {
  json a = json::array();
  for (const auto& spec : specs) {
    json fj;
    fj["field"]["residue_degree"] = spec.field.residue_degree;
    json eis = json::array();
    for (const auto& coeff : spec.field.eisenstein) {
      json c = json::array();
      for (const auto& e : coeff) c.push_back(e.str());
      eis.push_back(c);
    }
    fj["field"]["eisenstein"] = eis;
    json pj = json::array();
    for (const auto& c : spec.poly) pj.push_back(rat_to_string(c));
    fj["poly"] = pj;
    json rj = json::array();
    for (const auto& d : spec.root) rj.push_back(dyadic_to_json(d));
    fj["root"] = rj;
    fj["newton_refine"] = spec.newton_refine;
    fj["certificate"]["kind"] = spec.certificate.kind;
    if (spec.certificate.kind == "eisenstein_shift")
      fj["certificate"]["shift"] = spec.certificate.shift.str();
    a.push_back(fj);
  }
  return a;
}

SelmerInput parse_selmer(const json& j) {
  SelmerInput s;
  for (const auto& b : j.at("base_elements")) s.base_elements.push_back(parse_poly(b, "base"));
  s.generators = parse_exponents(j.at("generators"), "generators");
  if (j.contains("lattice_generators"))
    s.lattice_generators = parse_exponents(j["lattice_generators"], "lattice");
  if (j.contains("curve_subset"))
    s.curve_subset = parse_exponents(j["curve_subset"], "curve_subset");
  s.claimed_dim = j.value("claimed_dim", 0L);
  if (j.contains("provenance")) {
    const auto& p = j["provenance"];
    s.provenance.tool = p.value("tool", std::string{});
    s.provenance.grh = p.value("grh", false);
    s.provenance.class_number_odd = p.value("class_number_odd", false);
    s.provenance.class_number_grh = p.value("class_number_grh", false);
    s.provenance.notes = p.value("notes", std::string{});
    if (p.contains("sigma"))
      for (const auto& e : p["sigma"]) s.provenance.sigma.push_back(e.get<std::string>());
  }
  return s;
}

json selmer_to_json(const SelmerInput& s) {
  json j;
  json base = json::array();
  for (const auto& b : s.base_elements) base.push_back(poly_to_json(b));
  j["base_elements"] = base;
  j["generators"] = exponents_to_json(s.generators);
  if (s.lattice_generators) j["lattice_generators"] = exponents_to_json(*s.lattice_generators);
  if (s.curve_subset) j["curve_subset"] = exponents_to_json(*s.curve_subset);
  if (s.claimed_dim) j["claimed_dim"] = s.claimed_dim;
  j["provenance"]["tool"] = s.provenance.tool;
  j["provenance"]["grh"] = s.provenance.grh;
  j["provenance"]["class_number_odd"] = s.provenance.class_number_odd;
  j["provenance"]["class_number_grh"] = s.provenance.class_number_grh;
  j["provenance"]["notes"] = s.provenance.notes;
  json sig = json::array();
  for (const auto& e : s.provenance.sigma) sig.push_back(e);
  j["provenance"]["sigma"] = sig;
  return j;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kBadInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::kBadInput, "cannot write " + path);
  out << text;
}

CertificationProblem problem_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kBadInput, std::string("json parse error: ") + e.what());
  }
  if (j.value("schema", std::string{}) != "chab.problem/1")
    raise(ErrorCode::kBadInput, "expected schema chab.problem/1");
  CertificationProblem prob;
  try {
    prob.f_input = parse_poly(j.at("curve").at("f"), "curve.f");
    if (j["curve"].contains("witness")) {
      GoodReductionWitness W;
      W.h = parse_poly(j["curve"]["witness"].at("h"), "witness.h");
      W.k = parse_poly(j["curve"]["witness"].at("k"), "witness.k");
      prob.witness = std::move(W);
    }
    prob.factorization = parse_factorization(j.at("local_factorization"));
    prob.selmer = parse_selmer(j.at("selmer"));
    if (j.contains("torsion_2primary"))
      for (const auto& t : j["torsion_2primary"]) {
        TorsionPoint T;
        T.a = parse_poly(t.at("a"), "torsion.a");
        T.b = parse_poly(t.at("b"), "torsion.b");
        T.order = t.at("order").get<long>();
        prob.torsion_2primary.push_back(std::move(T));
      }
    for (const auto& p : j.at("known_points")) {
      KnownPoint kp;
      if (p.value("infinity", false)) {
        kp.infinity = true;
      } else {
        kp.x = parse_rat(p.at("x"), "known_points.x");
        kp.y = parse_rat(p.at("y"), "known_points.y");
      }
      prob.known_points.push_back(kp);
    }
    if (j.contains("odd_orders"))
      for (const auto& o : j["odd_orders"])
        prob.odd_orders.push_back(
            {o.at("point").get<std::size_t>(), o.at("order").get<long>()});
    prob.options.precision_digits = j.value("precision", 0L);
    if (j.contains("options")) {
      const auto& o = j["options"];
      if (o.contains("twist")) prob.options.twist = parse_rat(o["twist"], "twist");
      prob.options.depth_cap = o.value("depth_cap", 0L);
      prob.options.refinement_cap = o.value("refinement_cap", 8L);
      prob.options.strict = o.value("strict", false);
      prob.options.integral_disks_only = o.value("integral_disks_only", false);
      prob.options.threads = o.value("threads", 1);
      prob.options.scope_note = o.value("scope_note", std::string{});
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::kBadInput, std::string("problem document: ") + e.what());
  }
  return prob;
}

CertificationProblem load_problem(const std::string& path) {
  return problem_from_json_text(read_file(path));
}

std::string problem_to_json_text(const CertificationProblem& prob) {
  json j;
  j["schema"] = "chab.problem/1";
  j["curve"]["f"] = poly_to_json(prob.f_input);
  if (prob.witness) {
    j["curve"]["witness"]["h"] = poly_to_json(prob.witness->h);
    j["curve"]["witness"]["k"] = poly_to_json(prob.witness->k);
  }
  j["local_factorization"] = factorization_to_json(prob.factorization);
  j["selmer"] = selmer_to_json(prob.selmer);
  if (!prob.torsion_2primary.empty()) {
    json tj = json::array();
    for (const auto& t : prob.torsion_2primary) {
      json e;
      e["a"] = poly_to_json(t.a);
      e["b"] = poly_to_json(t.b);
      e["order"] = t.order;
      tj.push_back(e);
    }
    j["torsion_2primary"] = tj;
  }
  json kp = json::array();
  for (const auto& p : prob.known_points) {
    json e;
    if (p.infinity) {
      e["infinity"] = true;
    } else {
      e["x"] = rat_to_string(p.x);
      e["y"] = rat_to_string(p.y);
    }
    kp.push_back(e);
  }
  j["known_points"] = kp;
  if (!prob.odd_orders.empty()) {
    json oj = json::array();
    for (const auto& o : prob.odd_orders) {
      json e;
      e["point"] = o.point_index;
      e["order"] = o.order;
      oj.push_back(e);
    }
    j["odd_orders"] = oj;
  }
  if (prob.options.precision_digits) j["precision"] = prob.options.precision_digits;
  j["options"]["twist"] = rat_to_string(prob.options.twist);
  j["options"]["depth_cap"] = prob.options.depth_cap;
  j["options"]["refinement_cap"] = prob.options.refinement_cap;
  j["options"]["strict"] = prob.options.strict;
  j["options"]["integral_disks_only"] = prob.options.integral_disks_only;
  j["options"]["threads"] = prob.options.threads;
  if (!prob.options.scope_note.empty())
    j["options"]["scope_note"] = prob.options.scope_note;
  return j.dump(2) + "\n";
}

std::string problem_fingerprint(const CertificationProblem& prob) {
  // the fingerprint ignores run-shape options that cannot change results
  CertificationProblem canon = prob;
  canon.options.threads = 1;
  return fnv_hex(fnv1a(problem_to_json_text(canon)));
}

std::string certificate_to_json_text(const Certificate& cert,
                                     const std::string& fingerprint) {
  json j;
  j["schema"] = "chab.certificate/1";
  j["problem_fingerprint"] = fingerprint;
  j["verdict"]["status"] = cert.verdict;
  if (cert.verdict == "FAIL") {
    j["verdict"]["step"] = cert.fail_step;
    j["verdict"]["reason"] = cert.fail_reason;
  } else {
    json pts = json::array();
    for (const auto& p : cert.points) {
      json e;
      if (p.infinity) {
        e["infinity"] = true;
      } else {
        e["x"] = rat_to_string(p.x);
        e["y"] = rat_to_string(p.y);
      }
      pts.push_back(e);
    }
    j["verdict"]["points"] = pts;
  }
  json dj = json::array();
  for (const auto& d : cert.disks) {
    json e;
    e["disk"] = d.disk_id;
    e["part"] = d.part;
    e["status"] = d.status;
    if (d.known_point) e["known_point"] = *d.known_point;
    json cl = json::array();
    for (const auto& c : d.classes) cl.push_back(c);
    e["classes"] = cl;
    if (!d.method.empty()) e["method"] = d.method;
    if (d.certified_stratum >= 0) e["certified_stratum"] = d.certified_stratum;
    json au = json::array();
    for (const auto& a : d.audit) au.push_back(a);
    e["audit"] = au;
    dj.push_back(e);
  }
  j["disks"] = dj;
  for (const auto& [k, v] : cert.environment) j["environment"][k] = v;
  for (const auto& [k, v] : cert.metadata) j["metadata"][k] = v;
  json gc = json::array();
  for (const auto& g : cert.generator_classes) gc.push_back(g);
  j["generator_classes"] = gc;
  json tc = json::array();
  for (const auto& t : cert.torsion_classes) tc.push_back(t);
  j["torsion_classes"] = tc;
  return j.dump(2) + "\n";
}

SelmerFixture selmer_fixture_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kBadInput, std::string("json parse error: ") + e.what());
  }
  if (j.value("schema", std::string{}) != "chab.selmer/1")
    raise(ErrorCode::kBadInput, "expected schema chab.selmer/1");
  SelmerFixture f;
  f.p = j.at("p").get<int>();
  f.kind = j.at("kind").get<std::string>();
  f.selmer = parse_selmer(j.at("selmer"));
  return f;
}

SelmerFixture load_selmer_fixture(const std::string& path) {
  return selmer_fixture_from_json_text(read_file(path));
}

ComputeDoc compute_doc_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kBadInput, std::string("json parse error: ") + e.what());
  }
  if (j.value("schema", std::string{}) != "chab.compute/1")
    raise(ErrorCode::kBadInput, "expected schema chab.compute/1");
  ComputeDoc doc;
  doc.f_input = parse_poly(j.at("curve").at("f"), "curve.f");
  if (j["curve"].contains("witness")) {
    GoodReductionWitness W;
    W.h = parse_poly(j["curve"]["witness"].at("h"), "witness.h");
    W.k = parse_poly(j["curve"]["witness"].at("k"), "witness.k");
    doc.witness = std::move(W);
  }
  doc.factorization = parse_factorization(j.at("local_factorization"));
  if (j.contains("twist")) doc.twist = parse_rat(j["twist"], "twist");
  if (j.contains("twist_multiplier"))
    doc.twist_multiplier = parse_rat(j["twist_multiplier"], "twist_multiplier");
  doc.precision_digits = j.value("precision", 0L);
  doc.point_a = parse_poly(j.at("point").at("a"), "point.a");
  doc.point_b = parse_poly(j.at("point").at("b"), "point.b");
  return doc;
}

ComputeDoc load_compute_doc(const std::string& path) {
  return compute_doc_from_json_text(read_file(path));
}

}  // namespace chab
