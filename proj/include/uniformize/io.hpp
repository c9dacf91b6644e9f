#pragma once

#include <string>

#include "json.hpp"
#include "uniformize/conformal.hpp"

namespace uniformize::io {

/// Writes via a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// i,j,x,y,value over available interior nodes, row-major.
std::string grid_function_csv(const GridFunction& u);

/// Parses grid_function_csv output back onto `domain`; nodes missing from
/// the file become the puncture (at most one).
GridFunction parse_grid_function_csv(DomainPtr domain, const std::string& text);

/// i,j,x,y,re,im over interior nodes.
std::string complex_field_csv(const ComplexField& f);

nlohmann::json domain_metadata(const GridDomain& d);

/// P5, one byte per node, top row first: 0 exterior, 128 boundary-adjacent,
/// 255 interior.
std::string mask_pgm(const GridDomain& d);

/// P5 rendering of interior values with gray = round(255 (v - lo)/(hi - lo));
/// other nodes are 0. Returns the mapping.
std::string values_pgm(const GridDomain& d, const std::vector<double>& values, double lo, double hi);

/// loop_id,x,y in traversal order.
std::string loops_csv(const GridDomain& d);

}  // namespace uniformize::io
