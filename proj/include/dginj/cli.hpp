#pragma once
// the dginj command line, callable in-process
#include <ostream>
#include <string>
#include <vector>

#include "dginj/report.hpp"

namespace dginj {

// 0: no check failed, 1: some check failed, 2: usage or input error
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int exit_code(const json& doc);

}  // namespace dginj
