#include "maslov/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace maslov {

namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& what) {
  throw std::invalid_argument(origin + ": " + path + ": " + what);
}

const Json& member(const Json& o, const char* key, const std::string& origin,
                   const std::string& path) {
  auto it = o.find(key);
  if (it == o.end())
    fail(origin, path, std::string("missing required field '") + key + "'");
  return *it;
}

long int_member(const Json& o, const char* key, const std::string& origin,
                const std::string& path) {
  const Json& j = member(o, key, origin, path);
  if (!j.is_number_integer())
    fail(origin, path + "." + key, "expected an integer");
  return j.get<long>();
}

std::string string_member(const Json& o, const char* key,
                          const std::string& origin, const std::string& path) {
  const Json& j = member(o, key, origin, path);
  if (!j.is_string()) fail(origin, path + "." + key, "expected a string");
  return j.get<std::string>();
}

double number_field(const Json& j, const std::string& origin,
                    const std::string& path) {
  if (!j.is_number()) fail(origin, path, "expected a number");
  return j.get<double>();
}

AngleOverPi decode_angle(const Json& j, const std::string& origin,
                         const std::string& path) {
  if (!j.is_object()) fail(origin, path, "expected an angle object");
  std::string kind = string_member(j, "kind", origin, path);
  try {
    if (kind == "rational")
      return AngleOverPi::from_rational(int_member(j, "num", origin, path),
                                        int_member(j, "den", origin, path));
    if (kind == "quadratic") {
      Rational a = make_rational(int_member(j, "a_num", origin, path),
                                 int_member(j, "a_den", origin, path));
      Rational b = make_rational(int_member(j, "b_num", origin, path),
                                 int_member(j, "b_den", origin, path));
      Integer d(int_member(j, "d", origin, path));
      return AngleOverPi::from_quadratic(QuadraticNumber(a, b, d));
    }
    if (kind == "float") {
      const Json& v = member(j, "value", origin, path);
      return AngleOverPi::from_float(number_field(v, origin, path + ".value"));
    }
  } catch (const std::invalid_argument& e) {
    fail(origin, path, e.what());
  }
  fail(origin, path, "unknown angle kind '" + kind + "'");
}

std::vector<AngleOverPi> decode_angles(const Json& o, const char* key,
                                       const std::string& origin,
                                       const std::string& path) {
  const Json& j = member(o, key, origin, path);
  if (!j.is_array())
    fail(origin, path + "." + key, "expected an array of angles");
  std::vector<AngleOverPi> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(decode_angle(j[i], origin, path + "." + key + "[" +
                                               std::to_string(i) + "]"));
  return out;
}

GeodesicRecord decode_record(const Json& g, bool* waiver,
                             const std::string& origin,
                             const std::string& path) {
  if (!g.is_object()) fail(origin, path, "expected a geodesic object");
  GeodesicRecord rec;
  rec.name = string_member(g, "name", origin, path);
  rec.lifts = g.contains("lifts") ? int_member(g, "lifts", origin, path) : 1;
  rec.seed.i1 = int_member(g, "initial_index", origin, path);
  rec.seed.nu1 = int_member(g, "initial_nullity", origin, path);

  const Json& d = member(g, "decomposition", origin, path);
  const std::string dpath = path + ".decomposition";
  if (!d.is_object()) fail(origin, dpath, "expected an object");
  Decomposition& dec = rec.seed.d;
  dec.p_minus = static_cast<int>(int_member(d, "p_minus", origin, dpath));
  dec.p_zero = static_cast<int>(int_member(d, "p_zero", origin, dpath));
  dec.p_plus = static_cast<int>(int_member(d, "p_plus", origin, dpath));
  dec.q_minus = static_cast<int>(int_member(d, "q_minus", origin, dpath));
  dec.q_zero = static_cast<int>(int_member(d, "q_zero", origin, dpath));
  dec.q_plus = static_cast<int>(int_member(d, "q_plus", origin, dpath));
  dec.rotations = decode_angles(d, "rotations", origin, dpath);
  dec.nontrivial_n2 = decode_angles(d, "nontrivial_n2", origin, dpath);
  dec.trivial_n2 = decode_angles(d, "trivial_n2", origin, dpath);
  dec.residual_order =
      static_cast<int>(int_member(d, "residual_order", origin, dpath));

  if (g.contains("length"))
    rec.length = number_field(g["length"], origin, path + ".length");
  if (g.contains("energy"))
    rec.energy = number_field(g["energy"], origin, path + ".energy");

  if (g.contains("k_table")) {
    const Json& kt = g["k_table"];
    const std::string kpath = path + ".k_table";
    if (!kt.is_object()) fail(origin, kpath, "expected an object keyed by m");
    for (auto it = kt.begin(); it != kt.end(); ++it) {
      const std::string& key = it.key();
      long m = 0;
      auto res = std::from_chars(key.data(), key.data() + key.size(), m);
      if (res.ec != std::errc() || res.ptr != key.data() + key.size())
        fail(origin, kpath, "key '" + key + "' is not an iterate number");
      if (!it.value().is_array())
        fail(origin, kpath + "." + key, "expected an array of dimensions");
      std::vector<long> row;
      for (size_t i = 0; i < it.value().size(); ++i) {
        const Json& e = it.value()[i];
        if (!e.is_number_integer())
          fail(origin, kpath + "." + key, "expected integer dimensions");
        row.push_back(e.get<long>());
      }
      rec.k_table[m] = std::move(row);
    }
  }

  *waiver = false;
  if (g.contains("pinching_waiver")) {
    const Json& w = g["pinching_waiver"];
    if (!w.is_boolean())
      fail(origin, path + ".pinching_waiver", "expected a boolean");
    *waiver = w.get<bool>();
  }

  // The energy relation gets its own diagnostic before the general record
  // validation, so the audit label reaches the caller.
  if (rec.length && rec.energy) {
    double want = std::sqrt(2.0 * *rec.energy);
    if (std::fabs(*rec.length - want) > 1e-9) {
      std::ostringstream os;
      os << "length " << *rec.length << " disagrees with sqrt(2*energy) = "
         << want << "; the energy relation (4.62) binds them";
      fail(origin, path, os.str());
    }
  }

  try {
    rec.validate();
  } catch (const std::invalid_argument& e) {
    fail(origin, path, e.what());
  }
  return rec;
}

Json encode_angle(const AngleOverPi& a) {
  Json j;
  switch (a.kind()) {
    case AngleKind::rational: {
      const Rational& r = a.rational();
      j["kind"] = "rational";
      j["num"] = r.get_num().get_si();
      j["den"] = r.get_den().get_si();
      break;
    }
    case AngleKind::quadratic: {
      const QuadraticNumber& q = a.exact();
      j["kind"] = "quadratic";
      j["a_num"] = q.rational_part().get_num().get_si();
      j["a_den"] = q.rational_part().get_den().get_si();
      j["b_num"] = q.root_coefficient().get_num().get_si();
      j["b_den"] = q.root_coefficient().get_den().get_si();
      j["d"] = q.radicand().get_si();
      break;
    }
    case AngleKind::floating:
      j["kind"] = "float";
      j["value"] = a.value();
      break;
  }
  return j;
}

Json encode_angles(const std::vector<AngleOverPi>& v) {
  Json j = Json::array();
  for (const AngleOverPi& a : v) j.push_back(encode_angle(a));
  return j;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

void Scenario::validate() const {
  if (n < 2) throw std::invalid_argument("dimension must be at least 2");
  if (lambda && !(*lambda >= 1.0))
    throw std::invalid_argument("reversibility must be at least 1");
  if (records.empty())
    throw std::invalid_argument("a scenario needs at least one geodesic record");
  if (!waivers.empty() && waivers.size() != records.size())
    throw std::invalid_argument("waiver flags must align with the records");
  std::set<std::string> names;
  for (const GeodesicRecord& rec : records) {
    if (rec.name.empty())
      throw std::invalid_argument("every record needs a name");
    if (!names.insert(rec.name).second)
      throw std::invalid_argument("duplicate record name " + rec.name);
    rec.validate();
  }
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(origin + ": " + e.what());
  }
  if (!root.is_object()) fail(origin, "$", "expected a top-level object");
  long version = int_member(root, "schema_version", origin, "$");
  if (version != 1)
    fail(origin, "$.schema_version",
         "unsupported schema_version " + std::to_string(version));

  Scenario s;
  s.n = static_cast<int>(int_member(root, "n", origin, "$"));
  if (root.contains("lambda"))
    s.lambda = number_field(root["lambda"], origin, "$.lambda");

  const Json& gs = member(root, "geodesics", origin, "$");
  if (!gs.is_array()) fail(origin, "$.geodesics", "expected an array");
  for (size_t i = 0; i < gs.size(); ++i) {
    bool waiver = false;
    s.records.push_back(decode_record(
        gs[i], &waiver, origin, "$.geodesics[" + std::to_string(i) + "]"));
    s.waivers.push_back(waiver ? 1 : 0);
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(origin, "$", e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  Json root;
  root["schema_version"] = 1;
  root["n"] = s.n;
  if (s.lambda) root["lambda"] = *s.lambda;
  Json gs = Json::array();
  for (size_t i = 0; i < s.records.size(); ++i) {
    const GeodesicRecord& rec = s.records[i];
    Json g;
    g["name"] = rec.name;
    g["lifts"] = rec.lifts;
    g["initial_index"] = rec.seed.i1;
    g["initial_nullity"] = rec.seed.nu1;
    const Decomposition& d = rec.seed.d;
    Json dj;
    dj["p_minus"] = d.p_minus;
    dj["p_zero"] = d.p_zero;
    dj["p_plus"] = d.p_plus;
    dj["q_minus"] = d.q_minus;
    dj["q_zero"] = d.q_zero;
    dj["q_plus"] = d.q_plus;
    dj["rotations"] = encode_angles(d.rotations);
    dj["nontrivial_n2"] = encode_angles(d.nontrivial_n2);
    dj["trivial_n2"] = encode_angles(d.trivial_n2);
    dj["residual_order"] = d.residual_order;
    g["decomposition"] = std::move(dj);
    if (rec.length) g["length"] = *rec.length;
    if (rec.energy) g["energy"] = *rec.energy;
    if (!rec.k_table.empty()) {
      Json kt;
      for (const auto& [m, row] : rec.k_table) kt[std::to_string(m)] = row;
      g["k_table"] = std::move(kt);
    }
    if (s.waived(i)) g["pinching_waiver"] = true;
    gs.push_back(std::move(g));
  }
  root["geodesics"] = std::move(gs);
  return root.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out << serialize_scenario(s);
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string Finding::to_string() const {
  const char* kind_word = kind == FindingKind::violation ? "violation"
                          : kind == FindingKind::info    ? "note"
                                                         : "data-gap";
  std::string out = std::string(kind_word) + " [" + label + "] (" +
                    (record.empty() ? "scenario" : record) + ") " + message;
  return out;
}

const std::vector<std::string>& audit_labels() {
  static const std::vector<std::string> labels = {
      "2.13",         "2.18",         "2.19",          "2.6",
      "3.23",         "3.24",         "3.25",          "3.26",
      "3.27",         "3.28",         "3.29",          "3.30",
      "3.32",         "4.102",        "4.11",          "4.12",
      "4.13",         "4.14",         "4.2",           "4.3",
      "4.61",         "4.62",         "case-2.4",      "lemma-4.1",
      "lemma-4.3-i",  "lemma-4.3-ii", "lemma-4.3-iii", "lemma-4.3-iv",
      "lemma-4.3-v",  "rad5-lemma-2",
  };
  return labels;
}

bool PinchingReport::clean() const {
  for (const Finding& f : findings)
    if (f.kind == FindingKind::violation) return false;
  return true;
}

PinchingReport validate_pinching(const Scenario& s, long m_max) {
  s.validate();
  if (m_max < 1) throw std::invalid_argument("m_max must be positive");
  PinchingReport rep;
  const long bound = s.n - 1;
  for (size_t j = 0; j < s.records.size(); ++j) {
    const GeodesicRecord& rec = s.records[j];
    if (s.waived(j)) {
      rep.findings.push_back({FindingKind::info, "4.2", rec.name,
                              "pinching checks waived for this record"});
      continue;
    }
    if (rec.seed.i1 < bound) {
      rep.findings.push_back(
          {FindingKind::violation, "4.2", rec.name,
           "initial index " + std::to_string(rec.seed.i1) +
               " sits below the pinching bound n - 1 = " +
               std::to_string(bound)});
    }
    bool above = false;
    std::string shown;
    try {
      QuadraticNumber ih = mean_index(rec.seed);
      above = ih.compare(QuadraticNumber(Rational(bound))) > 0;
      shown = ih.to_string();
    } catch (const std::invalid_argument&) {
      double ih = mean_index_float(rec.seed);
      above = ih > static_cast<double>(bound);
      shown = format_double(ih);
    }
    if (!above) {
      rep.findings.push_back({FindingKind::violation, "rad5-lemma-2", rec.name,
                              "mean index " + shown +
                                  " does not exceed n - 1 = " +
                                  std::to_string(bound)});
    }
    const long floor_gap = rec.seed.i1 - rec.seed.d.elliptic_height() / 2;
    try {
      long prev_i = index_iterate(rec.seed, 1);
      for (long m = 1; m <= m_max; ++m) {
        long next_i = index_iterate(rec.seed, m + 1);
        long gap = next_i - prev_i - nullity_iterate(rec.seed, m);
        if (gap < floor_gap) {
          rep.findings.push_back(
              {FindingKind::violation, "4.3", rec.name,
               "index gap " + std::to_string(gap) + " at m = " +
                   std::to_string(m) + " falls below i(c) - e/2 = " +
                   std::to_string(floor_gap)});
          break;
        }
        prev_i = next_i;
      }
    } catch (const std::runtime_error& e) {
      rep.findings.push_back(
          {FindingKind::data_gap, "4.3", rec.name,
           std::string("gap scan stopped: ") + e.what()});
    }
  }
  return rep;
}

CandidateClassification classify_candidate(const GeodesicRecord& rec, int n) {
  const Decomposition& d = rec.seed.d;
  CandidateClassification c;
  c.record = rec.name;
  c.elliptic = d.elliptic_height() == 2 * (n - 1);
  c.forbidden_blocks_absent =
      d.p_minus == 0 && d.q_plus == 0 && d.nontrivial_n2.empty();
  c.trivial_twists_rational = true;
  for (const AngleOverPi& a : d.trivial_n2)
    if (a.kind() != AngleKind::rational) c.trivial_twists_rational = false;
  c.irrational_rotation = false;
  for (const AngleOverPi& a : d.rotations)
    if (a.kind() != AngleKind::rational) c.irrational_rotation = true;
  try {
    long period = analytic_period(rec.seed);
    long i = index_iterate(rec.seed, period);
    long nu = nullity_iterate(rec.seed, period);
    c.end_module_nonzero = critical_module_dims(rec, period, i + nu) > 0;
  } catch (const std::exception&) {
    c.end_module_nonzero.reset();
  }
  return c;
}

bool ReplayReport::clean() const {
  for (const Finding& f : findings)
    if (f.kind == FindingKind::violation) return false;
  return true;
}

long witness_iterate(const IndexSeed& seed, long M, long T, int chi) {
  try {
    QuadraticNumber ihat = mean_index(seed);
    QuadraticNumber ratio =
        QuadraticNumber(Rational(T)) / (QuadraticNumber(Rational(M)) * ihat);
    Integer m = (ratio.floor() + chi) * M;
    if (!m.fits_slong_p())
      throw std::runtime_error("witness iterate does not fit a long");
    return m.get_si();
  } catch (const std::invalid_argument&) {
    double ihat = mean_index_float(seed);
    return (static_cast<long>(std::floor(static_cast<double>(T) /
                                         (static_cast<double>(M) * ihat))) +
            chi) *
           M;
  }
}

long first_return(const TorusVector& v, const Vertex& chi, double epsilon,
                  long grid, long t_bound) {
  long bound = std::min<long>(t_bound, 4096);
  for (;;) {
    try {
      return search_T(v, chi, epsilon, grid, bound).front();
    } catch (const std::runtime_error&) {
      if (bound == t_bound) throw;
      bound = bound > t_bound / 2 ? t_bound : 2 * bound;
    }
  }
}

namespace {

// One searched vertex with everything the audit derives from it.
struct JumpHit {
  long T = 0;
  Vertex vertex;
  std::vector<long> m;
  JumpCertificate cert;
  std::vector<std::string> candidates;
};

std::string join(const std::vector<long>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

// search_T scans its whole bound, so ask for doubling prefixes until one
// holds a hit; the total work stays within twice the first-hit position.
}  // namespace

ReplayReport replay(const Scenario& s, const ReplayOptions& opt) {
  s.validate();
  if (!(opt.epsilon > 0.0) || opt.t_bound < 1 || opt.relation_bound < 1 ||
      opt.grid < 1 || opt.window < 1)
    throw std::invalid_argument("replay options must be positive");

  ReplayReport rep;
  const int n = s.n;
  const long ell = n - 1;

  PinchingReport pin = validate_pinching(s, opt.window);
  rep.findings.insert(rep.findings.end(), pin.findings.begin(),
                      pin.findings.end());

  // A rotation paired with nothing but a circle-free part leaves the jump
  // iterate's nullity out of step with both index parities, and the paired
  // geodesic argument excludes it.
  if (n == 3) {
    for (const GeodesicRecord& rec : s.records) {
      const Decomposition& d = rec.seed.d;
      bool pattern = d.rotation_count() == 1 && d.residual_order > 0 &&
                     d.p_minus + d.p_zero + d.p_plus + d.q_minus + d.q_zero +
                             d.q_plus ==
                         0 &&
                     d.nontrivial_n2.empty() && d.trivial_n2.empty();
      if (pattern) {
        FindingKind kind = s.records.size() == 2 ? FindingKind::violation
                                                 : FindingKind::info;
        rep.findings.push_back(
            {kind, "case-2.4", rec.name,
             "pairs a rotation with a circle-free part; in a two-geodesic "
             "system this combination cannot appear"});
      }
    }
  }

  std::vector<IndexSeed> seeds;
  seeds.reserve(s.records.size());
  for (const GeodesicRecord& rec : s.records) seeds.push_back(rec.seed);

  long M = 1;
  TorusVector v;
  TangentSpace ts;
  std::vector<Vertex> vertices;
  try {
    Integer big(minimal_angle_modulus(seeds));
    for (const GeodesicRecord& rec : s.records) {
      try {
        big = lcm(big, Integer(analytic_period(rec.seed)));
      } catch (const std::runtime_error&) {
        // The probe can break down on floating angles; the plain angle
        // modulus stays valid.
      }
    }
    if (!big.fits_slong_p())
      throw std::invalid_argument("angle modulus does not fit a long");
    M = big.get_si();
    v = build_vector(seeds, M);
    ts = tangent_space(v, opt.relation_bound);
    vertices = admissible_set_sample(v, ts);
  } catch (const std::invalid_argument& e) {
    rep.findings.push_back({FindingKind::data_gap, "3.32", "",
                            std::string("return-time stage unavailable: ") +
                                e.what()});
    rep.jump.detail = e.what();
    return rep;
  }
  if (ts.bound_exceeded)
    rep.findings.push_back(
        {FindingKind::info, "3.32", "",
         "integer relation scan hit the entry bound; the vertex sample may "
         "be too generous"});
  if (vertices.empty()) {
    rep.findings.push_back({FindingKind::data_gap, "3.32", "",
                            "no admissible vertex was found"});
    rep.jump.detail = "no admissible vertex";
    return rep;
  }

  // Only a fully elliptic record can reach the candidate level
  // 2T + (n-1), so without one there is no point trying further vertices.
  bool any_elliptic = false;
  for (const GeodesicRecord& rec : s.records)
    if (rec.seed.d.elliptic_height() == 2 * (n - 1)) any_elliptic = true;

  std::optional<JumpHit> chosen;
  std::optional<JumpHit> first;
  std::string last_miss;
  int tried = 0;
  for (const Vertex& vx : vertices) {
    ++tried;
    JumpHit h;
    try {
      h.T = first_return(v, vx, opt.epsilon, opt.grid, opt.t_bound);
    } catch (const std::runtime_error& e) {
      last_miss = e.what();
      continue;
    }
    h.vertex = vx;
    for (size_t j = 0; j < seeds.size(); ++j)
      h.m.push_back(
          witness_iterate(seeds[j], M, h.T, vx.chi[static_cast<int>(j)]));
    h.cert = certify(seeds, M, h.T, h.m, vx, opt.epsilon);
    for (size_t j = 0; j < s.records.size(); ++j) {
      try {
        long i2 = index_iterate(seeds[j], 2 * h.m[j]);
        long nu2 = nullity_iterate(seeds[j], 2 * h.m[j]);
        if (i2 + nu2 == 2 * h.T + ell)
          h.candidates.push_back(s.records[j].name);
      } catch (const std::runtime_error&) {
        // Floating breakdown surfaces later in the bound stage.
      }
    }
    if (!first) first = h;
    if (!h.candidates.empty()) {
      chosen = h;
      break;
    }
    if (!any_elliptic) break;
  }
  rep.jump.vertices_tried = tried;
  rep.jump.M = M;
  if (!first) {
    rep.findings.push_back(
        {FindingKind::data_gap, "3.32", "",
         "no return time within the bound realizes any sampled vertex (" +
             last_miss + ")"});
    rep.jump.detail = last_miss;
    return rep;
  }

  const JumpHit& hit = chosen ? *chosen : *first;
  rep.jump.found = true;
  rep.jump.T = hit.T;
  rep.jump.m = hit.m;
  rep.jump.vertex = hit.vertex;
  rep.jump.certificate = hit.cert;
  rep.jump.detail = "vertex " + hit.vertex.to_string();
  rep.findings.push_back(
      {FindingKind::info, "3.30", "",
       "common return at T = " + std::to_string(hit.T) + " with modulus M = " +
           std::to_string(M) + " and witnesses m = [" + join(hit.m) + "]"});

  static const std::pair<bool JumpChecks::*, const char*> kCheckLabels[] = {
      {&JumpChecks::m_consistent, "3.30"}, {&JumpChecks::nu_before, "3.23"},
      {&JumpChecks::nu_after, "3.24"},     {&JumpChecks::sum_before, "3.25"},
      {&JumpChecks::index_after, "3.26"},  {&JumpChecks::even_lower, "3.27"},
      {&JumpChecks::even_upper, "3.28"},   {&JumpChecks::angles_close, "3.29"},
  };
  for (size_t j = 0; j < hit.cert.checks.size(); ++j) {
    for (const auto& [field, label] : kCheckLabels) {
      if (!(hit.cert.checks[j].*field))
        rep.findings.push_back(
            {FindingKind::violation, label, s.records[j].name,
             "certificate check failed at the witness iterate"});
    }
  }

  for (size_t j = 0; j < s.records.size(); ++j) {
    const std::string& name = s.records[j].name;
    const long mj = hit.m[j];
    try {
      long i2 = index_iterate(seeds[j], 2 * mj);
      long nu2 = nullity_iterate(seeds[j], 2 * mj);
      if (i2 < 2 * hit.T - ell)
        rep.findings.push_back(
            {FindingKind::violation, "4.11", name,
             "index " + std::to_string(i2) + " at iterate " +
                 std::to_string(2 * mj) + " falls below 2N - (n-1) = " +
                 std::to_string(2 * hit.T - ell)});
      if (i2 + nu2 > 2 * hit.T + ell)
        rep.findings.push_back(
            {FindingKind::violation, "4.12", name,
             "index plus nullity " + std::to_string(i2 + nu2) +
                 " at iterate " + std::to_string(2 * mj) +
                 " exceeds 2N + (n-1) = " + std::to_string(2 * hit.T + ell)});
      for (long m = 1; m < 2 * mj; ++m) {
        long sum = index_iterate(seeds[j], m) + nullity_iterate(seeds[j], m);
        if (sum > 2 * hit.T) {
          rep.findings.push_back(
              {FindingKind::violation, "4.13", name,
               "index plus nullity " + std::to_string(sum) + " at iterate " +
                   std::to_string(m) + " exceeds 2N = " +
                   std::to_string(2 * hit.T)});
          break;
        }
      }
      for (long d = 1; d <= opt.window; ++d) {
        long i = index_iterate(seeds[j], 2 * mj + d);
        if (i < 2 * hit.T + ell) {
          rep.findings.push_back(
              {FindingKind::violation, "4.14", name,
               "index " + std::to_string(i) + " at iterate " +
                   std::to_string(2 * mj + d) +
                   " falls below 2N + (n-1) = " +
                   std::to_string(2 * hit.T + ell)});
          break;
        }
      }
    } catch (const std::runtime_error& e) {
      rep.findings.push_back({FindingKind::data_gap, "4.11", name,
                              std::string("bound stage stopped: ") + e.what()});
    }
  }

  rep.candidates = hit.candidates;
  if (rep.candidates.empty()) {
    rep.findings.push_back(
        {FindingKind::violation, "lemma-4.1", "",
         "no record attains index plus nullity 2N + (n-1) = " +
             std::to_string(2 * hit.T + ell) + " at its doubled witness"});
  } else {
    rep.findings.push_back({FindingKind::info, "lemma-4.1", "",
                            "candidate records: " + join(rep.candidates)});
  }

  for (const std::string& name : rep.candidates) {
    size_t j = 0;
    while (j < s.records.size() && s.records[j].name != name) ++j;
    CandidateClassification cls = classify_candidate(s.records[j], n);
    if (!cls.elliptic)
      rep.findings.push_back(
          {FindingKind::violation, "lemma-4.3-i", name,
           "a jump candidate must carry full unit-circle multiplicity 2n-2"});
    if (!cls.forbidden_blocks_absent)
      rep.findings.push_back(
          {FindingKind::violation, "lemma-4.3-ii", name,
           "a jump candidate admits no positive-shear blocks at 1 or -1 and "
           "no nontrivial twists"});
    if (!cls.trivial_twists_rational)
      rep.findings.push_back(
          {FindingKind::violation, "lemma-4.3-iii", name,
           "every trivial twist angle of a jump candidate must be rational"});
    if (cls.end_module_nonzero.has_value()) {
      if (!*cls.end_module_nonzero)
        rep.findings.push_back(
            {FindingKind::violation, "lemma-4.3-iv", name,
             "the top local module at the analytic period vanishes"});
    } else {
      rep.findings.push_back(
          {FindingKind::data_gap, "lemma-4.3-iv", name,
           "no local-module row at the analytic period; top-module check "
           "skipped"});
    }
    if (!cls.irrational_rotation)
      rep.findings.push_back(
          {FindingKind::violation, "lemma-4.3-v", name,
           "a jump candidate must carry a rotation with irrational ratio"});
    rep.classifications.push_back(std::move(cls));
  }

  const long q_max = 2 * hit.T + n - 2;
  std::vector<long> caps;
  caps.reserve(hit.m.size());
  for (long mj : hit.m) caps.push_back(2 * mj);
  try {
    rep.table = assemble_table(s.records, caps, n, q_max);
  } catch (const std::runtime_error& e) {
    rep.findings.push_back({FindingKind::data_gap, "2.6", "", e.what()});
  }
  if (rep.table) {
    rep.morse = morse_inequality_check(*rep.table);
    if (!rep.morse->ok) {
      const bool rank = rep.morse->detail.find("rank") != std::string::npos;
      rep.findings.push_back({FindingKind::violation, rank ? "2.19" : "2.18",
                              "", rep.morse->detail});
    }
    const long top = 2 * hit.T;
    const long got = rep.table->critical[top];
    const long want = rep.table->betti_row[top];
    if (got < want)
      rep.findings.push_back(
          {FindingKind::violation, "4.102", "",
           "assembled count M_q = " + std::to_string(got) +
               " at the top degree q = 2N = " + std::to_string(top) +
               " falls below b_q = " + std::to_string(want)});
  }

  try {
    QuadraticNumber residual = mean_index_identity(s.records, n);
    rep.identity_residual = residual;
    if (residual.is_zero())
      rep.findings.push_back({FindingKind::info, "2.13", "",
                              "the mean index identity closes exactly"});
    else
      rep.findings.push_back(
          {FindingKind::violation, "2.13", "",
           "the mean index identity misses by " + residual.to_string()});
  } catch (const std::exception& e) {
    rep.findings.push_back({FindingKind::data_gap, "2.13", "", e.what()});
  }

  bool any_metric = false;
  for (const GeodesicRecord& rec : s.records)
    if (rec.length || rec.energy) any_metric = true;
  if (any_metric) {
    try {
      ResonanceReport rr = resonance_check(s.records);
      rep.findings.push_back({rr.ok ? FindingKind::info
                                    : FindingKind::violation,
                              "4.61", "", rr.detail});
    } catch (const std::runtime_error& e) {
      rep.findings.push_back({FindingKind::data_gap, "4.61", "", e.what()});
    }
  }

  rep.complete = rep.jump.found && rep.morse.has_value();
  return rep;
}

}  // namespace maslov
