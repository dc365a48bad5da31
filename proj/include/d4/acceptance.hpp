#pragma once

#include <string>
#include <vector>

namespace d4 {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool degraded = false;
  double seconds = 0;
  std::string summary;
  std::vector<std::string> details;
};

struct AcceptanceOptions {
  std::string eta_path;  // empty: the default data file
  int samples = 100;     // random tuples per family for criterion 1
};

CriterionResult criterion_fusion_witnesses(const AcceptanceOptions& o);
CriterionResult criterion_partition_audit(const AcceptanceOptions& o);
CriterionResult criterion_closed_forms(const AcceptanceOptions& o);
CriterionResult criterion_projective_table(const AcceptanceOptions& o);
CriterionResult criterion_weyl_hc(const AcceptanceOptions& o);
CriterionResult criterion_dl(const AcceptanceOptions& o);
CriterionResult criterion_solver(const AcceptanceOptions& o);

// Criteria 1..7 in order; ids lists the ones to run (all when empty).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o, const std::vector<int>& ids = {});
std::string format_line(const CriterionResult& r);

}  // namespace d4
