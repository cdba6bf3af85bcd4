#pragma once

// Instance files, built-in fixtures, the seeded random harness and the
// command dispatcher behind the sheafcoh executable.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sheafcoh/site.hpp"
#include "sheafcoh/uct.hpp"

namespace sheafcoh::cli {

using Json = nlohmann::ordered_json;

struct Instance {
  std::string name;
  site::Poset poset;
  site::Sheaf sheaf;
  std::optional<abgroup::FpAbGroup> coefficients;
  std::optional<chains::FreeComplex> perfect_complex;
  std::optional<site::MonotoneMap> map;
};

/// Throws InputError on malformed input, unknown keys or invalid data.
Instance parse_instance(const Json& j);
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::string& path);
Json serialize_instance(const Instance& inst);
std::string dump(const Json& j);

Json serialize_group(const abgroup::FpAbGroup& g);
abgroup::FpAbGroup parse_group(const Json& j, const std::string& where);
Json serialize_matrix(const IntMatrix& m);
IntMatrix parse_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& where);

/// 4-point circle: minima a, b below maxima c, d.
site::Poset pc4();
/// PC4 plus two maxima p, q above a, b, c, d.
site::Poset ss6();
/// Named fixture with a constant sheaf Z/stalk (0 = Z) and optional coefficients.
Instance fixture(const std::string& name, long long stalk = 0, std::optional<long long> coefficients = std::nullopt);

enum class Which { kTheorem1, kLes, kUct, kCorollary2, kCorollary2Split, kCorollary3, kProjection, kAll };
Which parse_which(const std::string& s);
const char* to_string(Which w);

struct VerifyRequest {
  Which which = Which::kAll;
  std::optional<int> rmax;
  bool wrong_oracle = false;
};

/// Throws InputError if a block required by the chosen check is missing.
uct::VerificationReport verify_instance(const Instance& inst, const VerifyRequest& req);

/// degree -> invariant factors of H^r(X, F) for r in [0, height].
uct::DegreeTable cohomology_table(const Instance& inst);

struct RandomParams {
  std::size_t max_elements = 5;
  site::SheafParams sheaf;
};

/// Seeded random instance; also keeps the recipe used to build it.
struct RandomInstance {
  site::Poset poset;
  site::SheafRecipe recipe;
  std::vector<int> coefficient_orders;
  chains::FreeComplex perfect_complex;
  site::Poset target;
  std::vector<std::size_t> assignment;

  Instance build(const std::string& name) const;
};

RandomInstance random_instance(std::uint64_t seed, const RandomParams& params);
/// Greedy shrinking while the predicate keeps failing.
RandomInstance minimize(const RandomInstance& failing, const std::function<bool(const Instance&)>& still_fails);

struct RandomRequest {
  std::uint64_t seed = 1;
  std::size_t count = 10;
  std::size_t max_elements = 5;
  Which which = Which::kAll;
  std::optional<int> rmax;
  bool wrong_oracle = false;
};

struct RandomOutcome {
  Json report;
  std::vector<std::pair<std::size_t, Json>> failing;  // (index, minimized instance)
  bool passed = true;
};

RandomOutcome run_random(const RandomRequest& req);

/// Full command line front end; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sheafcoh::cli
