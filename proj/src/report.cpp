#include "dginj/report.hpp"

namespace dginj {

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Undecided: return "undecided";
        case Status::NotApplicable: return "n/a";
    }
    return "?";
}

bool Report::add(const std::string& check, bool ok, json witness) {
    checks.push_back({check, ok ? Status::Pass : Status::Fail, std::move(witness)});
    return ok;
}

void Report::undecided(const std::string& check, json witness) {
    checks.push_back({check, Status::Undecided, std::move(witness)});
}

void Report::not_applicable(const std::string& check, json witness) {
    checks.push_back({check, Status::NotApplicable, std::move(witness)});
}

void Report::merge(const Report& sub, const std::string& prefix) {
    for (const auto& c : sub.checks) checks.push_back({prefix.empty() ? c.name : prefix + "/" + c.name, c.status, c.witness});
}

bool Report::ok() const { return count(Status::Fail) == 0; }

int Report::count(Status s) const {
    int n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
}

const Check* Report::first_failure() const {
    for (const auto& c : checks)
        if (c.status == Status::Fail) return &c;
    return nullptr;
}

json Report::to_json() const {
    json j;
    j["name"] = name;
    j["status"] = ok() ? (count(Status::Undecided) ? "undecided" : "pass") : "fail";
    j["counts"] = {{"pass", count(Status::Pass)}, {"fail", count(Status::Fail)}, {"undecided", count(Status::Undecided)}, {"n/a", count(Status::NotApplicable)}};
    json arr = json::array();
    for (const auto& c : checks) {
        json e;
        e["check"] = c.name;
        e["status"] = status_name(c.status);
        if (!c.witness.empty()) e["witness"] = c.witness;
        arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    return j;
}

}  // namespace dginj
