// Pass/fail reporting shared by the verification suites.  Report files are
// comma-separated with header `check,quantity,value,tolerance,pass` and end
// with a `status=<pass|fail>` line; numbers carry 9 significant digits.

#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qglevy {

struct CheckLine {
    std::string check;     // suite or group name
    std::string quantity;  // what was measured
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline std::string format_number(double x) {
    std::ostringstream os;
    os << std::setprecision(9) << x;
    return os.str();
}

class Report {
  public:
    void add(std::string check, std::string quantity, double value, double tolerance, bool pass) {
        lines_.push_back({std::move(check), std::move(quantity), value, tolerance, pass});
    }
    // residual-style check: passes when value <= tolerance
    void add_residual(std::string check, std::string quantity, double value, double tolerance) {
        bool ok = value <= tolerance;
        add(std::move(check), std::move(quantity), value, tolerance, ok);
    }
    // lower-bound check: passes when value >= bound
    void add_lower_bound(std::string check, std::string quantity, double value, double bound) {
        add(std::move(check), std::move(quantity), value, bound, value >= bound);
    }
    void merge(const Report& other) {
        lines_.insert(lines_.end(), other.lines_.begin(), other.lines_.end());
    }

    const std::vector<CheckLine>& lines() const { return lines_; }
    bool all_pass() const {
        for (const auto& l : lines_)
            if (!l.pass) return false;
        return true;
    }
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& l : lines_)
            if (!l.pass) out.push_back(l.check + "/" + l.quantity);
        return out;
    }

    void write_csv(std::ostream& os) const {
        os << "check,quantity,value,tolerance,pass\n";
        for (const auto& l : lines_)
            os << l.check << "," << l.quantity << "," << format_number(l.value) << ","
               << format_number(l.tolerance) << "," << (l.pass ? "pass" : "fail") << "\n";
        os << "status=" << (all_pass() ? "pass" : "fail") << "\n";
    }

  private:
    std::vector<CheckLine> lines_;
};

}  // namespace qglevy
