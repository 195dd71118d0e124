#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "rng.hpp"

namespace optw {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::unresolved: return "unresolved";
    }
    return "?";
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fnv_digest(const std::string& payload) {
    uint64_t h = Rng::fnv1a(payload);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void Report::sort_records() {
    std::stable_sort(records.begin(), records.end(),
                     [](const Record& a, const Record& b) { return a.name < b.name; });
}

int Report::exit_code() const {
    bool unresolved = false;
    for (const auto& r : records) {
        if (r.status == CheckStatus::fail) return 1;
        if (r.status == CheckStatus::unresolved) unresolved = true;
    }
    return unresolved ? 2 : 0;
}

std::string Report::render(const std::string& format) const {
    if (format == "json") {
        nlohmann::ordered_json out;
        out["command"] = command;
        out["input"] = input;
        out["seed"] = seed;
        out["records"] = nlohmann::ordered_json::array();
        for (const auto& r : records) {
            nlohmann::ordered_json rec;
            rec["name"] = r.name;
            rec["anchor"] = r.anchor;
            rec["digest"] = r.digest;
            rec["status"] = to_string(r.status);
            rec["value"] = r.value;
            rec["witness"] = r.witness;
            out["records"].push_back(std::move(rec));
        }
        out["exit_code"] = exit_code();
        return out.dump(2) + "\n";
    }
    if (format == "tsv") {
        std::ostringstream os;
        os << "name\tanchor\tdigest\tstatus\tvalue\twitness\n";
        for (const auto& r : records)
            os << r.name << '\t' << r.anchor << '\t' << r.digest << '\t'
               << to_string(r.status) << '\t' << r.value << '\t' << r.witness << '\n';
        return os.str();
    }

    std::ostringstream os;
    os << "== " << command << " " << input << " (seed " << seed << ")\n";
    size_t wname = 4;
    for (const auto& r : records) wname = std::max(wname, r.name.size());
    int npass = 0, nfail = 0, nunres = 0;
    for (const auto& r : records) {
        os << "[" << to_string(r.status) << "]";
        os << std::string(r.status == CheckStatus::pass ? 7 : (r.status == CheckStatus::fail ? 7 : 1), ' ');
        os << r.name << std::string(wname - r.name.size() + 2, ' ');
        os << r.value;
        if (!r.anchor.empty()) os << "   {" << r.anchor << "}";
        if (r.witness != "-") os << "   -> " << r.witness;
        os << '\n';
        if (r.status == CheckStatus::pass) ++npass;
        else if (r.status == CheckStatus::fail) ++nfail;
        else ++nunres;
    }
    os << npass << " pass, " << nfail << " fail, " << nunres << " unresolved\n";
    return os.str();
}

} // namespace optw
