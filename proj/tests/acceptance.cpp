#include <iostream>

#include "CLI11.hpp"
#include "d4/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-7"};
  d4::AcceptanceOptions o;
  std::vector<int> ids;
  bool quiet = false;
  app.add_option("--eta", o.eta_path, "eta table (JSON)");
  app.add_option("--samples", o.samples, "random tuples per family for criterion 1")->check(CLI::PositiveNumber);
  app.add_option("--only", ids, "criteria to run")->check(CLI::Range(1, 7));
  app.add_flag("--quiet", quiet, "omit details");
  CLI11_PARSE(app, argc, argv);

  bool ok = true;
  for (int id = 1; id <= 7; ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    const auto results = d4::run_acceptance(o, {id});
    for (const auto& r : results) {
      std::cout << d4::format_line(r) << "\n";
      if (!quiet)
        for (const auto& d : r.details) std::cout << "    " << d << "\n";
      std::cout.flush();
      ok &= r.pass;
    }
  }
  return ok ? 0 : 1;
}
