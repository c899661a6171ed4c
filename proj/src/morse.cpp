#include "maslov/morse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace maslov {

namespace {

long to_long_checked(const Integer& z, const char* what) {
  if (!z.fits_slong_p())
    throw std::overflow_error(std::string(what) + " exceeds the machine range");
  return z.get_si();
}

// Row of local-module dimensions for a degenerate iterate, read modulo the
// analytic period. nu is the nullity of the m-th iterate, already known to
// be positive.
const std::vector<long>& degenerate_row(const GeodesicRecord& rec, long m,
                                        long nu) {
  const long period = analytic_period(rec.seed);
  const long rep = (m - 1) % period + 1;
  auto it = rec.k_table.find(rep);
  if (it == rec.k_table.end()) {
    std::ostringstream os;
    os << "insufficient data: record " << rec.name
       << " has no local-module row for iterate " << m << " (representative "
       << rep << " of period " << period << ")";
    throw std::runtime_error(os.str());
  }
  if (static_cast<long>(it->second.size()) != nu + 1) {
    std::ostringstream os;
    os << "record " << rec.name << ": local-module row at iterate " << rep
       << " has " << it->second.size() << " entries, expected " << nu + 1;
    throw std::runtime_error(os.str());
  }
  return it->second;
}

bool even_parity(long a) { return (a & 1L) == 0; }

}  // namespace

void GeodesicRecord::validate() const {
  seed.validate();
  if (lifts < 1)
    throw std::invalid_argument("record " + name +
                                ": at least one lift is required");
  if (length && *length <= 0.0)
    throw std::invalid_argument("record " + name + ": length must be positive");
  if (energy && *energy <= 0.0)
    throw std::invalid_argument("record " + name + ": energy must be positive");
  if (length && energy &&
      std::fabs(*length - std::sqrt(2.0 * *energy)) > 1e-9)
    throw std::invalid_argument(
        "record " + name +
        ": length and energy disagree beyond the 1e-9 tolerance");

  const long period = analytic_period(seed);
  for (const auto& [m, row] : k_table) {
    std::ostringstream at;
    at << "record " << name << ": local-module row at iterate " << m;
    if (m < 1 || m > period) {
      std::ostringstream os;
      os << at.str() << " lies outside one analytic period of " << period;
      throw std::invalid_argument(os.str());
    }
    const long nu = nullity_iterate(seed, m);
    if (nu == 0)
      throw std::invalid_argument(at.str() +
                                  ", but that iterate is nondegenerate");
    if (static_cast<long>(row.size()) != nu + 1) {
      std::ostringstream os;
      os << at.str() << " has " << row.size() << " entries, expected "
         << nu + 1;
      throw std::invalid_argument(os.str());
    }
    for (long v : row)
      if (v < 0)
        throw std::invalid_argument(at.str() +
                                    " carries a negative dimension");
    if (row.front() > 1 || row.back() > 1)
      throw std::invalid_argument(
          at.str() + " must have 0/1-valued entries at the ends");
    long rest_front = 0, rest_back = 0;
    for (std::size_t j = 1; j < row.size(); ++j) rest_front += row[j];
    for (std::size_t j = 0; j + 1 < row.size(); ++j) rest_back += row[j];
    if (row.front() == 1 && rest_front != 0)
      throw std::invalid_argument(
          at.str() + ": a 1 at the bottom end excludes every other entry");
    if (row.back() == 1 && rest_back != 0)
      throw std::invalid_argument(
          at.str() + ": a 1 at the top end excludes every other entry");
  }
}

double GeodesicRecord::geometric_length() const {
  if (length) return *length;
  if (energy) return std::sqrt(2.0 * *energy);
  throw std::runtime_error("insufficient data: record " + name +
                           " carries neither length nor energy");
}

long analytic_period(const IndexSeed& s) {
  Integer t = 1;
  const std::vector<AngleOverPi>* lists[3] = {&s.d.rotations,
                                              &s.d.nontrivial_n2,
                                              &s.d.trivial_n2};
  for (const auto* list : lists)
    for (const auto& a : *list) {
      if (a.kind() != AngleKind::rational) continue;
      Rational half = a.rational() / 2;
      t = lcm(t, 2 * Integer(half.get_den()));
    }
  if (s.d.q_minus + s.d.q_zero + s.d.q_plus > 0) t = lcm(t, Integer(2));
  long period = to_long_checked(t, "analytic period");
  // The index shift over one period has constant parity in the base point;
  // doubling restores evenness when a circle-free seed drifts by an odd step.
  if (!even_parity(index_iterate(s, 1 + period) - index_iterate(s, 1)))
    period *= 2;
  return period;
}

long betti(int n, long q) {
  if (n < 2)
    throw std::invalid_argument("sphere dimension must be at least 2");
  if (q < 0) return 0;
  long out = 0;
  const long a = n - 1;
  if (n % 2 == 1) {
    // coefficients of t^a / (1 - t^2) + t^{2a} / (1 - t^a)
    if (q >= a && (q - a) % 2 == 0) ++out;
    if (q >= 2 * a && (q - 2 * a) % a == 0) ++out;
  } else {
    // coefficients of t^a / (1 - t^2) + t^{a + d} / (1 - t^d), d = 2n - 2
    const long d = 2 * static_cast<long>(n) - 2;
    if (q >= a && (q - a) % 2 == 0) ++out;
    if (q >= a + d && (q - a - d) % d == 0) ++out;
  }
  return out;
}

long betti_alternating_sum(int n, long N) {
  if (N < 0) throw std::invalid_argument("iterate bound must be nonnegative");
  long acc = 0;
  const long top = 2 * N + n - 2;
  for (long q = 0; q <= top; ++q)
    acc += ((q & 1L) ? -1 : 1) * betti(n, q);
  return acc;
}

long critical_module_dims(const GeodesicRecord& rec, long m, long q) {
  if (m < 1) throw std::invalid_argument("iteration count must be positive");
  const long nu = nullity_iterate(rec.seed, m);
  const long im = index_iterate(rec.seed, m);
  if (nu == 0)
    return (even_parity(im - rec.seed.i1) && q == im) ? 1 : 0;
  const long j = q - im;
  if (j < 0 || j > nu) return 0;
  return degenerate_row(rec, m, nu)[static_cast<std::size_t>(j)];
}

long euler_chi(const GeodesicRecord& rec, long m) {
  if (m < 1) throw std::invalid_argument("iteration count must be positive");
  const long nu = nullity_iterate(rec.seed, m);
  const long im = index_iterate(rec.seed, m);
  const long sign = even_parity(im) ? 1 : -1;
  if (nu == 0) return even_parity(im - rec.seed.i1) ? sign : 0;
  const std::vector<long>& row = degenerate_row(rec, m, nu);
  long acc = 0;
  for (std::size_t l = 0; l < row.size(); ++l)
    acc += ((l & 1U) ? -1 : 1) * row[l];
  return sign * acc;
}

Rational average_chi(const GeodesicRecord& rec) {
  rec.validate();
  const long period = analytic_period(rec.seed);
  Rational sum = 0;
  for (long m = 1; m <= period; ++m) sum += euler_chi(rec, m);
  return sum / Rational(period);
}

QuadraticNumber mean_index_identity(const std::vector<GeodesicRecord>& recs,
                                    int n) {
  if (n < 2)
    throw std::invalid_argument("sphere dimension must be at least 2");
  if (recs.empty())
    throw std::invalid_argument("the identity needs at least one record");
  QuadraticNumber acc{Rational(0)};
  for (const auto& rec : recs) {
    rec.validate();
    QuadraticNumber ihat = mean_index(rec.seed);
    if (ihat.sign() <= 0)
      throw std::invalid_argument("record " + rec.name +
                                  ": mean index must be positive");
    Rational weight = Rational(rec.lifts) * average_chi(rec);
    acc = acc + QuadraticNumber(weight) / ihat;
  }
  const Rational constant = (n % 2 == 0)
                                ? make_rational(-n, 2 * n - 2)
                                : make_rational(n + 1, 2 * n - 2);
  return acc - QuadraticNumber(constant);
}

void MorseTable::validate() const {
  if (critical.empty() || critical.size() != betti_row.size())
    throw std::invalid_argument(
        "a Morse table needs matching nonempty rank and Betti rows");
  for (long v : critical)
    if (v < 0) throw std::invalid_argument("negative rank in a Morse table");
  for (long v : betti_row)
    if (v < 0)
      throw std::invalid_argument("negative Betti number in a Morse table");
}

MorseTable assemble_table(const std::vector<GeodesicRecord>& recs,
                          const std::vector<long>& m_caps, int n, long q_max) {
  if (recs.size() != m_caps.size())
    throw std::invalid_argument("one iterate cap per record is required");
  if (q_max < 0)
    throw std::invalid_argument("the top degree must be nonnegative");
  MorseTable t;
  t.critical.assign(static_cast<std::size_t>(q_max) + 1, 0);
  t.betti_row.resize(static_cast<std::size_t>(q_max) + 1);
  for (long q = 0; q <= q_max; ++q)
    t.betti_row[static_cast<std::size_t>(q)] = betti(n, q);
  for (std::size_t j = 0; j < recs.size(); ++j) {
    recs[j].validate();
    if (m_caps[j] < 0)
      throw std::invalid_argument("iterate caps must be nonnegative");
    for (long m = 1; m <= m_caps[j]; ++m) {
      const long im = index_iterate(recs[j].seed, m);
      if (im > q_max) continue;  // local modules live in [i, i + nu]
      const long nu = nullity_iterate(recs[j].seed, m);
      const long lo = std::max(im, 0L);
      const long hi = std::min(q_max, im + nu);
      for (long q = lo; q <= hi; ++q)
        t.critical[static_cast<std::size_t>(q)] +=
            recs[j].lifts * critical_module_dims(recs[j], m, q);
    }
  }
  return t;
}

MorseCheck morse_inequality_check(const MorseTable& t) {
  t.validate();
  MorseCheck out;
  const long top = t.q_max();
  out.pointwise_slack.resize(static_cast<std::size_t>(top) + 1);
  out.alternating_slack.resize(static_cast<std::size_t>(top) + 1);
  long prev = 0;  // alternating slack one degree down
  for (long q = 0; q <= top; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    const long diff = t.critical[uq] - t.betti_row[uq];
    const long alt = diff - prev;
    out.pointwise_slack[uq] = diff;
    out.alternating_slack[uq] = alt;
    if (out.ok && (diff < 0 || alt < 0)) {
      out.ok = false;
      out.first_violation = q;
      std::ostringstream os;
      if (diff < 0)
        os << "rank inequality fails at degree " << q << ": " << t.critical[uq]
           << " < " << t.betti_row[uq];
      else
        os << "alternating sum inequality fails at degree " << q
           << ": slack " << alt;
      out.detail = os.str();
    }
    prev = alt;
  }
  if (out.ok) out.detail = "all degrees pass";
  return out;
}

ResonanceReport resonance_check(const std::vector<GeodesicRecord>& recs,
                                double tol) {
  if (recs.empty())
    throw std::invalid_argument("the resonance check needs records");
  if (!(tol > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  ResonanceReport rep;
  for (const auto& rec : recs) {
    rec.validate();
    rep.ratios.push_back(mean_index_float(rec.seed) /
                         rec.geometric_length());
  }
  const auto [lo, hi] = std::minmax_element(rep.ratios.begin(),
                                            rep.ratios.end());
  double sum = 0.0;
  for (double r : rep.ratios) sum += r;
  rep.common = sum / static_cast<double>(rep.ratios.size());
  rep.ok = (*hi - *lo) <= tol * std::max(1.0, std::fabs(*hi));
  std::ostringstream os;
  if (rep.ok) {
    os << "common mean-index-to-length ratio " << rep.common;
  } else {
    os << "ratios disagree:";
    for (double r : rep.ratios) os << ' ' << r;
  }
  rep.detail = os.str();
  return rep;
}

}  // namespace maslov
