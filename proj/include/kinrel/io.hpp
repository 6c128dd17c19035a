#ifndef KINREL_IO_HPP
#define KINREL_IO_HPP

// Model documents, parameter ranges and the remaining CSV writers.
//
// Model document:
//   {"flux": {"kind": "cubic" | "scaled_cubic" | "polynomial",
//             "K": .., "C": .., "coeffs": [..]},
//    "b": [..], "c1": [..], "c2": [..], "domain": [lo, hi]}
// Coefficient arrays are in ascending degree and default to [1]; the domain
// defaults to [-10, 10].  For "scaled_cubic" the flux is K u^3 and c1 is
// multiplied by C.

#include <iosfwd>
#include <string>
#include <vector>

#include "kinrel/diffusion_limit.hpp"
#include "kinrel/errors.hpp"
#include "kinrel/kinetics.hpp"
#include "kinrel/model.hpp"

namespace kinrel {

/// Parses a model document.  Structural problems raise ConfigError; models
/// violating FluxModel invariants (e.g. b <= 0) raise ModelError.
FluxModel parse_model(const std::string& text);
FluxModel load_model(const std::string& path);

/// "start:stop:count" (count >= 0, endpoints included) or a single number.
std::vector<double> parse_range(const std::string& text);

void write_csv(std::ostream& out, const DiffusiveProfile& profile);
/// u_minus,alpha,isolated,lo,hi,lo_closed,hi_closed; isolated is empty when absent.
void write_shock_set_csv(std::ostream& out, const std::vector<double>& u_minus,
                         const std::vector<double>& alpha, const std::vector<ShockSet>& sets);
/// u_minus,lo,hi with one row per closed piece.
void write_diffusive_set_csv(std::ostream& out, const std::vector<double>& u_minus,
                             const std::vector<DiffusiveShockSet>& sets);

}  // namespace kinrel

#endif  // KINREL_IO_HPP
