#include "xxchain/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace xxchain {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* parity_name(Parity p) {
    switch (p) {
    case Parity::symmetric: return "symmetric";
    case Parity::antisymmetric: return "antisymmetric";
    default: return "none";
    }
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot open output file: " + path);
    return out;
}
} // namespace

void write_timeseries_csv(const std::string& path,
                          const std::vector<const TransferRecord*>& records) {
    auto out = open_out(path);
    out << "t,site,concurrence\n";
    for (const TransferRecord* rec : records)
        for (Eigen::Index k = 0; k < rec->times.size(); ++k)
            out << format_double(rec->times[k]) << ',' << rec->receiver << ','
                << format_double(rec->concurrence[k]) << '\n';
}

void write_profile_csv(const std::string& path, const std::map<int, double>& profile) {
    auto out = open_out(path);
    out << "site,concurrence\n";
    for (const auto& [site, c] : profile)
        out << site << ',' << format_double(c) << '\n';
}

void write_map_csv(const std::string& path, const SiteTimeMap& map) {
    auto out = open_out(path);
    out << "t,site,concurrence\n";
    for (Eigen::Index i = 0; i < map.c.rows(); ++i) {
        const int site = map.window_first + static_cast<int>(i);
        for (Eigen::Index k = 0; k < map.times.size(); ++k)
            out << format_double(map.times[k]) << ',' << site << ','
                << format_double(map.c(i, k)) << '\n';
    }
}

void write_inset_csv(const std::string& path,
                     const std::vector<std::pair<int, double>>& series) {
    auto out = open_out(path);
    out << "d,concurrence\n";
    for (const auto& [d, c] : series) out << d << ',' << format_double(c) << '\n';
}

void write_gap_csv(const std::string& path,
                   const std::vector<std::pair<int, double>>& series) {
    auto out = open_out(path);
    out << "d,e21\n";
    for (const auto& [d, e] : series) out << d << ',' << format_double(e) << '\n';
}

nlohmann::ordered_json bound_states_json(double omega0, const DefectConfig& defects,
                                         const std::vector<BoundState>& states) {
    nlohmann::ordered_json j;
    j["omega0"] = omega0;
    j["l1"] = defects.l1;
    j["l2"] = defects.l2;
    j["alpha1"] = defects.alpha1;
    j["alpha2"] = defects.alpha2;
    j["states"] = nlohmann::ordered_json::array();
    for (const auto& s : states) {
        nlohmann::ordered_json e;
        e["energy"] = s.energy;
        e["x_loc"] = s.x_loc;
        e["xi"] = s.xi;
        e["k1"] = s.k1;
        e["k2"] = s.k2;
        e["parity"] = parity_name(s.parity);
        j["states"].push_back(e);
    }
    return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace xxchain
