#pragma once

#include "gqm/commlength.hpp"
#include "gqm/group_json.hpp"
#include "gqm/quasimorphisms.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gqm {

/// A shipped example: a context, elements of interest, search and LP settings,
/// quasimorphism certificates and (for finite quotients) a section.
struct Fixture {
  std::string name;
  GroupContext ctx;
  std::vector<Element> elements;
  SearchConfig search;
  std::vector<long long> scl_powers;
  std::vector<std::size_t> lp_radii;
  std::vector<long long> lp_powers;
  std::vector<Quasimorphism> qms;
  std::map<Element, Element, ElementLess> section;
};

Fixture fixture_from_json(const Json& j);
Fixture load_fixture(const std::string& path);
/// Every *.json in `dir`, ordered by file name.
std::vector<Fixture> load_fixtures(const std::string& dir);

struct Bound {
  std::string source;
  Rational value;
};

/// Two-sided scl_{G,N} bounds for x: Bavard bounds from the fixture's certified
/// quasimorphisms, search bounds min cl(x^n)/n and LP bounds (||x^n||' + 1)/(4n).
struct SclBounds {
  std::vector<Bound> lower;
  std::vector<Bound> upper;
  /// Powers and radii whose LP was infeasible.
  std::vector<std::string> infeasible;

  Rational best_lower() const;
  std::optional<Rational> best_upper() const;
  bool consistent() const;
};

SclBounds scl_bounds(const Fixture& f, const Element& x, bool with_lp = true);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Runs acceptance criteria 1..11 (or only `only`). Exceptions inside a
/// criterion are reported as failures.
std::vector<CriterionResult> run_acceptance(const std::string& fixture_dir, std::uint64_t seed = 1,
                                            std::optional<int> only = std::nullopt);

std::string format_result_line(const CriterionResult& r);

}  // namespace gqm
