#include "leray/norm_series.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace leray {

int NormSeries::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

double NormSeries::value(std::size_t row, const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw std::out_of_range("NormSeries: no column named " + name);
    return rows.at(row).at(static_cast<std::size_t>(c));
}

void NormSeries::append(double time, const std::vector<double>& vals) {
    if (vals.size() != names.size())
        throw std::invalid_argument("NormSeries: row width does not match columns");
    if (!t.empty() && !(time > t.back()))
        throw std::invalid_argument("NormSeries: times must be strictly increasing");
    for (double v : vals)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("NormSeries: norms must be finite and >= 0");
    t.push_back(time);
    rows.push_back(vals);
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::string NormSeries::to_csv() const {
    std::string out = "t";
    for (const std::string& n : names) out += "," + n;
    out += "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += fmt(t[i]);
        for (double v : rows[i]) out += "," + fmt(v);
        out += "\n";
    }
    return out;
}

NormSeries NormSeries::from_csv(std::istream& is) {
    NormSeries s;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("NormSeries: empty CSV");
    std::stringstream hdr(line);
    std::string cell;
    bool first = true;
    while (std::getline(hdr, cell, ',')) {
        if (first) {
            if (cell != "t") throw std::runtime_error("NormSeries: first column must be t");
            first = false;
        } else {
            s.names.push_back(cell);
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::vector<double> vals;
        double time = 0.0;
        bool lead = true;
        while (std::getline(row, cell, ',')) {
            const double v = std::stod(cell);
            if (lead) {
                time = v;
                lead = false;
            } else {
                vals.push_back(v);
            }
        }
        s.append(time, vals);
    }
    return s;
}

}  // namespace leray
