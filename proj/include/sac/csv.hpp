#ifndef SAC_CSV_HPP
#define SAC_CSV_HPP

#include <ostream>
#include <string>

#include "sac/experiments.hpp"

namespace sac {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v);

void write_errors_csv(std::ostream& os, const StudyResult& result);
void write_slopes_csv(std::ostream& os, const std::vector<SlopeRow>& slopes);
void write_trace_csv(std::ostream& os, const TraceResult& trace, std::uint32_t path);
void write_spatial_csv(std::ostream& os, const SpatialResult& result);

}  // namespace sac

#endif  // SAC_CSV_HPP
