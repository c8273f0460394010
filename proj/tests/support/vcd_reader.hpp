#pragma once

// Minimal VCD reader used to cross-check the writer. Shares no code with it.

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vendsim::test {

struct VcdSignal {
    std::string name;
    unsigned width = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> changes; // (time, value)

    std::uint64_t at(std::uint64_t t) const {
        std::uint64_t v = 0;
        bool any = false;
        for (const auto& [time, value] : changes) {
            if (time > t)
                break;
            v = value;
            any = true;
        }
        if (!any)
            throw std::runtime_error("signal " + name + " has no value at time " +
                                     std::to_string(t));
        return v;
    }
};

struct VcdFile {
    std::string timescale;
    std::string scope;
    std::map<std::string, VcdSignal> by_name;
    std::vector<std::uint64_t> timestamps;

    const VcdSignal& operator[](const std::string& name) const { return by_name.at(name); }
};

inline VcdFile read_vcd(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    VcdFile file;
    std::map<std::string, std::string> code_to_name;
    std::uint64_t now = 0;

    auto skip_to_end = [&](std::string* collect) {
        std::string t;
        while (in >> t && t != "$end")
            if (collect)
                *collect += (collect->empty() ? "" : " ") + t;
    };
    auto parse_bits = [](const std::string& bits) {
        std::uint64_t v = 0;
        for (char c : bits) {
            if (c != '0' && c != '1')
                throw std::runtime_error("non-binary digit in " + bits);
            v = (v << 1) | static_cast<std::uint64_t>(c - '0');
        }
        return v;
    };
    auto record = [&](const std::string& code, std::uint64_t v) {
        auto it = code_to_name.find(code);
        if (it == code_to_name.end())
            throw std::runtime_error("change for undeclared code " + code);
        file.by_name[it->second].changes.emplace_back(now, v);
    };

    bool in_header = true;
    while (in >> tok) {
        if (in_header) {
            if (tok == "$var") {
                std::string type, width, code, name;
                in >> type >> width >> code >> name;
                skip_to_end(nullptr);
                if (code_to_name.count(code))
                    throw std::runtime_error("duplicate identifier code " + code);
                code_to_name[code] = name;
                file.by_name[name] = {name, static_cast<unsigned>(std::stoul(width)), {}};
            } else if (tok == "$timescale") {
                skip_to_end(&file.timescale);
            } else if (tok == "$scope") {
                std::string kind;
                in >> kind >> file.scope;
                skip_to_end(nullptr);
            } else if (tok == "$enddefinitions") {
                skip_to_end(nullptr);
                in_header = false;
            } else if (tok.front() == '$') {
                skip_to_end(nullptr);
            } else {
                throw std::runtime_error("unexpected header token " + tok);
            }
            continue;
        }
        if (tok == "$dumpvars" || tok == "$end")
            continue;
        if (tok.front() == '#') {
            const auto t = std::stoull(tok.substr(1));
            if (!file.timestamps.empty() && t <= file.timestamps.back())
                throw std::runtime_error("timestamps not increasing");
            now = t;
            file.timestamps.push_back(t);
        } else if (tok.front() == 'b' || tok.front() == 'B') {
            std::string code;
            in >> code;
            record(code, parse_bits(tok.substr(1)));
        } else if (tok.front() == '0' || tok.front() == '1') {
            record(tok.substr(1), static_cast<std::uint64_t>(tok.front() - '0'));
        } else {
            throw std::runtime_error("unexpected body token " + tok);
        }
    }
    return file;
}

} // namespace vendsim::test
