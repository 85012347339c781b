#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leray {

/// Time-stamped table of named norms. Times are strictly increasing; the
/// CSV form is `t,<column names...>` with full-precision doubles.
struct NormSeries {
    std::vector<std::string> names;
    std::vector<double> t;
    std::vector<std::vector<double>> rows;
    std::string provenance;

    int column(const std::string& name) const;
    bool has(const std::string& name) const { return column(name) >= 0; }
    double value(std::size_t row, const std::string& name) const;
    void append(double time, const std::vector<double>& vals);
    std::size_t size() const { return t.size(); }

    std::string to_csv() const;
    static NormSeries from_csv(std::istream& is);
};

}  // namespace leray
