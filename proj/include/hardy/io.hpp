#pragma once

// CSV and JSON serialization. Numbers in CSV use 17 significant digits;
// infinite critical exponents are written as the string "inf".

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hardy/estimates.hpp"
#include "hardy/exponents.hpp"
#include "hardy/format.hpp"
#include "hardy/phase.hpp"
#include "hardy/regions.hpp"
#include "hardy/stability.hpp"

namespace hardy {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes atomically enough for our purposes (truncate + write); throws IoError.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Finite doubles as numbers; non-finite as "inf", "-inf" or "nan".
json number(double x);
json to_json(const Exponent& e);
json to_json(const Parameters& params);
json to_json(const DerivedConstants& c);
json to_json(const EquilibriumReport& e);
json to_json(const RadialBump& b);
json to_json(const QuadraticFormReport& q);
json to_json(const SearchResult& s);
json to_json(const EstimateReport& r);
json to_json(const AnnulusReport& r);
json to_json(const PohozaevReport& r);
json to_json(const EnergyBalance& e);

/// Columns mu,p,label,detail, row-major with p outer.
std::string sweep_csv(const SweepResult& result);
/// Columns mu,p_c,p_minus,p_plus,upper; empty fields where a curve is undefined.
std::string curves_csv(const SweepResult& result);
json sweep_json(const SweepResult& result);

/// Columns t,w,v.
std::string trajectory_csv(const Trajectory& traj);
/// Columns r,u,du_dr.
std::string radial_csv(const RadialSolution& sol);

}  // namespace hardy
