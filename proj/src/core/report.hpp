#ifndef OPTW_REPORT_HPP
#define OPTW_REPORT_HPP

#include <string>
#include <vector>

namespace optw {

enum class CheckStatus { pass, fail, unresolved };

const char* to_string(CheckStatus s);

// One row of a workbench report. `anchor` names the definition, rule, or
// theorem the check verifies; `witness` is a path written under the witness
// directory when the check produced a reusable artifact.
struct Record {
    std::string name;
    std::string anchor;
    std::string digest;
    std::string value;
    CheckStatus status = CheckStatus::pass;
    std::string witness = "-";
};

struct Report {
    std::string command;
    uint64_t seed = 0;
    std::string input;
    std::vector<Record> records;

    void add(Record r) { records.push_back(std::move(r)); }
    void sort_records(); // deterministic order by name
    // 0 all pass, 1 any fail, 2 unresolved without fail
    int exit_code() const;
    std::string render(const std::string& format) const; // text | tsv | json
};

std::string fmt_double(double v);
std::string fnv_digest(const std::string& payload);

} // namespace optw

#endif
