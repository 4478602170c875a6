#pragma once
// pass/fail/undecided records with witnesses
#include <string>
#include <vector>

#include "json.hpp"

namespace dginj {

using json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Undecided, NotApplicable };
const char* status_name(Status s);

struct Check {
    std::string name;
    Status status = Status::Pass;
    json witness;
};

struct Report {
    std::string name;
    std::vector<Check> checks;

    explicit Report(std::string n = "") : name(std::move(n)) {}

    // returns ok so callers can chain early exits
    bool add(const std::string& check, bool ok, json witness = json::object());
    void undecided(const std::string& check, json witness = json::object());
    void not_applicable(const std::string& check, json witness = json::object());
    void merge(const Report& sub, const std::string& prefix = "");

    bool ok() const;  // no failures (undecided is fine)
    int count(Status s) const;
    const Check* first_failure() const;
    json to_json() const;
};

}  // namespace dginj
