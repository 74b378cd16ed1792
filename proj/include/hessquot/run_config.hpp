#pragma once

#include "hessquot/domain_geometry.hpp"
#include "hessquot/expression.hpp"
#include "hessquot/pde_solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace hessquot {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One solve described as data: problem indices, domain, expression strings
/// for f and phi, mode, grid size, solver overrides.
struct RunConfig {
    int n = 2, k = 2, l = 0;
    nlohmann::json domain_spec = {{"kind", "disk"}, {"radius", 1.0}};
    std::string f_text = "1";
    std::string phi_text = "0";
    std::string mode = "robin";  // or "classical"
    int grid_radial = 64;
    int grid_angular = 128;
    SolverConfig solver;
    std::uint64_t seed = 7;
    std::optional<std::string> reference_text;  // exact solution, when known
    std::string output_dir = "out";

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    /// Full validation: indices, domain, expression parses, mode constraints
    /// (classical requires a strictly convex domain; ball solves require
    /// axisymmetric data, verified by sampling).
    void validate() const;

    Domain make_domain() const;
    HessianPair pair() const { return HessianPair(k, l, n); }
    ScalarField make_field(const std::string& text) const;
};

}  // namespace hessquot
