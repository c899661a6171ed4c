#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/jump.hpp"
#include "maslov/morse.hpp"

namespace maslov {

// A batch audit input: the sphere dimension, an optional reversibility
// constant, and the geodesic records under test. Waivers align with records
// and exempt a record from the pinching findings (never from structural
// validation).
struct Scenario {
  int n = 2;
  std::optional<double> lambda;  // reversibility, >= 1 when present
  std::vector<GeodesicRecord> records;
  std::vector<char> waivers;

  bool waived(size_t j) const {
    return j < waivers.size() && waivers[j] != 0;
  }

  // Structural invariants only: dimension, reversibility range, distinct
  // record names, per-record validity. Pinching is a report, not an error.
  void validate() const;
};

// Parses the versioned JSON schema. Schema problems name the offending
// field; invariant problems carry the violated invariant. The origin string
// prefixes every diagnostic.
Scenario parse_scenario(const std::string& text,
                        const std::string& origin = "<memory>");
Scenario load_scenario(const std::string& path);

// Canonical serialization: sorted keys, two-space indent, optional fields
// omitted when absent, trailing newline. Files in this form round-trip
// byte for byte through load/save.
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

enum class FindingKind { violation, info, data_gap };

// One audit observation. The label is the step the finding instantiates and
// always comes from audit_labels(); record is empty for scenario-level
// findings.
struct Finding {
  FindingKind kind = FindingKind::info;
  std::string label;
  std::string record;
  std::string message;

  std::string to_string() const;
};

// The closed vocabulary of step labels reports may cite.
const std::vector<std::string>& audit_labels();

struct PinchingReport {
  std::vector<Finding> findings;
  bool clean() const;
};

// Flags records whose initial index sits below n-1, whose mean index fails
// to exceed n-1, or whose index gaps fall under the pinched lower bound over
// m = 1..m_max. Waived records are noted, not flagged. Findings only.
PinchingReport validate_pinching(const Scenario& s, long m_max = 100);

// Block-data classification of a common-jump candidate: fully elliptic end
// matrix, absence of the blocks whose splitting data forbids candidacy,
// rational trivial-twist angles, a nonzero top local module at the analytic
// period (when row data allows the check), and an irrational rotation.
struct CandidateClassification {
  std::string record;
  bool elliptic = false;
  bool forbidden_blocks_absent = false;
  bool trivial_twists_rational = false;
  std::optional<bool> end_module_nonzero;
  bool irrational_rotation = false;
};

CandidateClassification classify_candidate(const GeodesicRecord& rec, int n);

// Outcome of the return-time stage: the angle modulus, the common time T,
// one witness iterate per record, the realized vertex, and the identity
// certificate evaluated at those witnesses.
struct JumpOutcome {
  bool found = false;
  long M = 1;
  long T = 0;
  std::vector<long> m;
  Vertex vertex;
  std::optional<JumpCertificate> certificate;
  int vertices_tried = 0;
  std::string detail;
};

// Witness iterate of one seed at return time T with angle modulus M and
// vertex bit chi: m = (floor(T / (M * mean index)) + chi) * M, computed
// exactly whenever the mean index is exact.
long witness_iterate(const IndexSeed& seed, long M, long T, int chi);

// First return time at the vertex: the least T <= t_bound with grid | T and
// every fractional part within epsilon of its chi bit. Scans a doubling
// sequence of bounds so the cost tracks the hit, not t_bound; rethrows the
// final near-miss when the full bound comes back empty.
long first_return(const TorusVector& v, const Vertex& chi, double epsilon,
                  long grid, long t_bound);

struct ReplayOptions {
  double epsilon = 1e-3;
  long t_bound = 1000000;
  long relation_bound = 1000;
  long grid = 1;      // required divisor of the return time
  long window = 100;  // horizon for the unbounded-m checks
};

// Full audit result. complete means the pipeline reached the accounting
// stage; a failed return-time search leaves a partial report with the
// findings gathered so far.
struct ReplayReport {
  std::vector<Finding> findings;
  JumpOutcome jump;
  std::vector<std::string> candidates;
  std::vector<CandidateClassification> classifications;
  std::optional<MorseTable> table;
  std::optional<MorseCheck> morse;
  std::optional<QuadraticNumber> identity_residual;
  bool complete = false;

  bool clean() const;
};

// Runs the audit: pinching findings, the structural rotation-with-residual
// scan, the common return-time search with its certificate, the two-sided
// index bounds at the doubled witnesses, candidate extraction and
// classification, the assembled critical-module table against the loop-space
// Betti numbers (with the dedicated top-degree count), the mean index
// identity, and the resonance check when metric data is present.
ReplayReport replay(const Scenario& s, const ReplayOptions& opt = {});

}  // namespace maslov
