#pragma once
// verification suites over an instance and the report document the CLI writes
#include <string>
#include <vector>

#include "dginj/presentation.hpp"
#include "dginj/report.hpp"

namespace dginj {

struct SuiteOptions {
    uint64_t seed = 1;
    int samples = 4;
    int floor = 6;     // resolution depth behind injective-dimension certificates
    int max_dim = 24;  // cap on the algebra; sampled modules stay below min(max_dim, 12)
};

struct Instance {
    std::string id;
    std::string spec;  // generator spec, empty for file input
    AlgPtr algebra;
    std::vector<NamedModule> modules;  // extra modules from a file
};
Instance make_instance(const std::string& spec, Field f, int max_dim = 24);
Instance file_instance(const std::string& path, int max_dim = 24);

// validate injdim inj-membership coho-rhom thm-eqv cat-char bass-papp local-cohomology
// local-duality endo determinism; "all" runs them in this order
const std::vector<std::string>& suite_names();
Report run_suite(const std::string& name, const Instance& I, const SuiteOptions& o);

// {"schema", "suite", "options", "status", "counts", "instances": [...]}, instances in input order
json suite_document(const std::string& name, const std::vector<Instance>& insts, const SuiteOptions& o);

}  // namespace dginj
