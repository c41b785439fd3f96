#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fairshield/shield.hpp"
#include "fairshield/simkit.hpp"

namespace fairshield {

/// Decimal formatting with 12 significant digits; NaN (an undefined fairness
/// value) renders as an empty field.
inline std::string fmt12(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_trace_csv(std::ostream& os, const std::vector<StepRecord>& records) {
    os << "t,group,x,y,z,m,nu\n";
    for (const auto& r : records) {
        os << r.t << ',';
        if (r.group) os << group_char(*r.group);
        os << ',' << r.x << ',' << r.y << ',' << r.z << ',' << fmt12(r.m) << ',' << fmt12(r.nu) << '\n';
    }
}

inline void write_ensemble_csv(std::ostream& os, const EnsembleSummary& s) {
    os << "t,q025,mean,q975,cum_violations_mean,cum_violations_sd,cost_mean\n";
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        os << s.times[i] << ',' << fmt12(s.fair_q025[i]) << ',' << fmt12(s.fair_mean[i]) << ','
           << fmt12(s.fair_q975[i]) << ',' << fmt12(s.cum_viol_mean[i]) << ',' << fmt12(s.cum_viol_sd[i]) << ','
           << fmt12(s.cost_mean[i]) << '\n';
    }
}

inline void write_comparison_csv(std::ostream& os, const Comparison& c) {
    os << "label,final_fairness_mean,p_hat,e_hat,interventions_mean\n";
    for (const auto& row : c.rows) {
        os << row.label << ',' << fmt12(row.final_fairness_mean) << ',' << fmt12(row.p_hat) << ','
           << fmt12(row.e_hat) << ',' << fmt12(row.interventions_mean) << '\n';
    }
}

} // namespace fairshield
