#include "longclass/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "longclass/errors.hpp"

namespace longclass {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

namespace {

double parse_number(const std::string& s, long line_no, const std::string& column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("load_long_csv: non-numeric cell '" + s + "' at line " +
                        std::to_string(line_no) + ", column '" + column + "'");
    }
}

} // namespace

LongitudinalDataset load_long_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_long_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("load_long_csv: empty file '" + path + "'");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "subject" || header[1] != "group" ||
        header[2] != "time")
        throw DataError("load_long_csv: header must be subject,group,time,<var1>,...");
    const int p = static_cast<int>(header.size()) - 3;
    std::vector<std::string> var_names(header.begin() + 3, header.end());

    struct SubjectRows {
        int group = -1;
        std::map<int, std::vector<double>> by_time;
    };
    std::vector<std::string> subject_order;
    std::map<std::string, SubjectRows> subjects;
    int max_time = 0;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (static_cast<int>(f.size()) != p + 3)
            throw DataError("load_long_csv: line " + std::to_string(line_no) + " has " +
                            std::to_string(f.size()) + " fields, expected " +
                            std::to_string(p + 3));
        const std::string& id = f[0];
        const double group_val = parse_number(f[1], line_no, "group");
        if (group_val != 0.0 && group_val != 1.0)
            throw DataError("load_long_csv: group must be 0 or 1 (subject '" + id + "', line " +
                            std::to_string(line_no) + ")");
        const double time_val = parse_number(f[2], line_no, "time");
        const int time = static_cast<int>(time_val);
        if (time_val != time || time < 1)
            throw DataError("load_long_csv: time must be a positive integer (line " +
                            std::to_string(line_no) + ")");
        auto [it, inserted] = subjects.try_emplace(id);
        if (inserted) subject_order.push_back(id);
        SubjectRows& sr = it->second;
        const int group = static_cast<int>(group_val);
        if (sr.group >= 0 && sr.group != group)
            throw DataError("load_long_csv: subject '" + id + "' has inconsistent group labels");
        sr.group = group;
        if (sr.by_time.count(time))
            throw DataError("load_long_csv: subject '" + id + "' has duplicate time " +
                            std::to_string(time));
        std::vector<double> vals(p);
        for (int l = 0; l < p; ++l) vals[l] = parse_number(f[3 + l], line_no, var_names[l]);
        sr.by_time.emplace(time, std::move(vals));
        max_time = std::max(max_time, time);
    }
    if (subject_order.empty()) throw DataError("load_long_csv: no data rows in '" + path + "'");
    const int t = max_time;

    // completeness: every subject needs times 1..t exactly once
    std::string missing;
    for (const std::string& id : subject_order) {
        const SubjectRows& sr = subjects[id];
        for (int k = 1; k <= t; ++k) {
            if (!sr.by_time.count(k)) {
                if (!missing.empty()) missing += "; ";
                missing += "subject '" + id + "' missing time " + std::to_string(k);
            }
        }
    }
    if (!missing.empty()) throw DataError("load_long_csv: incomplete panel: " + missing);

    const int n = static_cast<int>(subject_order.size());
    Matrix values(n, static_cast<Eigen::Index>(p) * t);
    std::vector<int> labels(n);
    for (int j = 0; j < n; ++j) {
        const SubjectRows& sr = subjects[subject_order[j]];
        labels[j] = sr.group;
        for (int k = 0; k < t; ++k) {
            const std::vector<double>& vals = sr.by_time.at(k + 1);
            for (int l = 0; l < p; ++l) values(j, static_cast<Eigen::Index>(k) * p + l) = vals[l];
        }
    }
    return make_dataset(std::move(values), std::move(labels), p, t, std::move(var_names));
}

void save_long_csv(const LongitudinalDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("save_long_csv: cannot write '" + path + "'");
    out << "subject,group,time";
    for (const std::string& name : ds.variable_names) out << ',' << name;
    out << '\n';
    for (int j = 0; j < ds.n(); ++j)
        for (int k = 0; k < ds.t; ++k) {
            out << (j + 1) << ',' << ds.labels[j] << ',' << (k + 1);
            for (int l = 0; l < ds.p; ++l) out << ',' << format_g6(ds.value(j, l, k));
            out << '\n';
        }
}

std::string format_g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("write_csv: cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

} // namespace longclass
