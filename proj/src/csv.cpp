#include "sac/csv.hpp"

#include <charconv>
#include <cmath>

namespace sac {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

void write_errors_csv(std::ostream& os, const StudyResult& result) {
    os << "scheme,law,delta,mean_steps,rms_error,cpu_seconds,divergent_samples\n";
    for (const auto& r : result.rows) {
        os << to_string(r.scheme) << ',' << r.law << ',' << format_double(r.delta) << ',' << format_double(r.mean_steps)
           << ',' << format_double(r.rms_error) << ',' << format_double(r.cpu_seconds) << ',' << r.divergent_samples
           << '\n';
    }
}

void write_slopes_csv(std::ostream& os, const std::vector<SlopeRow>& slopes) {
    os << "scheme,law,slope,intercept,r_squared\n";
    for (const auto& s : slopes) {
        os << to_string(s.scheme) << ',' << s.law << ',' << format_double(s.fit.slope) << ','
           << format_double(s.fit.intercept) << ',' << format_double(s.fit.r_squared) << '\n';
    }
}

void write_trace_csv(std::ostream& os, const TraceResult& trace, std::uint32_t path) {
    os << "path,step,t,tau,branch,norm_l2,norm_sup,norm_F\n";
    for (std::size_t m = 0; m < trace.records.size(); ++m) {
        const auto& r = trace.records[m];
        os << path << ',' << m << ',' << format_double(r.t) << ',' << format_double(r.tau) << ',' << to_string(r.branch)
           << ',' << format_double(r.norm_l2) << ',' << format_double(r.norm_sup) << ',' << format_double(r.norm_drift)
           << '\n';
    }
}

void write_spatial_csv(std::ostream& os, const SpatialResult& result) {
    os << "modes,reference_modes,delta,rms_error,cpu_seconds,divergent_samples\n";
    for (const auto& r : result.rows) {
        os << r.modes << ',' << result.reference_modes << ',' << format_double(result.delta) << ','
           << format_double(r.rms_error) << ',' << format_double(r.cpu_seconds) << ',' << r.divergent_samples << '\n';
    }
}

}  // namespace sac
