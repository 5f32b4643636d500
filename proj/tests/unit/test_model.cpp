#include <doctest.h>

#include <cmath>
#include <set>

#include "nwt/model.hpp"
#include "nwt/rng.hpp"

using namespace nwt;

namespace {

// Two species, one decay reaction; the smallest well-formed system.
MembraneSystem decay_system() {
  MembraneSystem sys;
  sys.compartments.push_back({"cell", 1e-15, -1});
  sys.alphabet.push_back({"A", 0, 100, {}});
  sys.alphabet.push_back({"B", 0, 0, {}});
  sys.reactions.push_back({"R1", {0}, {1}, 0.5, 0.0});
  return sys;
}

}  // namespace

TEST_CASE("discrete_constant is the identity for first-order reactions") {
  CHECK(discrete_constant(0.5, 1e-15, 1) == 0.5);
  // Order one leaves any rate untouched, whatever the volume.
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    const double k = std::exp((rng.uniform01() - 0.5) * 40.0);
    const double v = std::exp((rng.uniform01() - 0.5) * 80.0);
    CHECK(discrete_constant(k, v, 1) == k);
  }
}

TEST_CASE("discrete_constant divides by volume and Avogadro powers") {
  CHECK(discrete_constant(1.0, 1.0, 2) ==
        doctest::Approx(1.0 / 6.0221415e23).epsilon(1e-14));

  // Trimolecular case, checked against an independently multiplied divisor.
  const double divisor = (1e-15 * 1e-15) * (6.0221415e23 * 6.0221415e23);
  CHECK(discrete_constant(2.0, 1e-15, 3) ==
        doctest::Approx(2.0 / divisor).epsilon(1e-14));
}

TEST_CASE("discrete_constant rejects bad input") {
  CHECK_THROWS_AS(discrete_constant(0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(discrete_constant(-1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(discrete_constant(1.0, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(discrete_constant(1.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(discrete_constant(1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("concentration_to_count rounds to nearest molecule") {
  CHECK(concentration_to_count(0.0, 1e-15) == 0);
  CHECK(concentration_to_count(0.0, 1.0) == 0);

  // One molecule's worth of concentration converts back to exactly one.
  const double v = 1e-15;
  const double one = 1.0 / (v * kAvogadro);
  CHECK(concentration_to_count(one, v) == 1);

  // 1 nM in a femtoliter: 0.6022... molecules rounds up to one.
  CHECK(concentration_to_count(1e-9, 1e-15) == 1);

  CHECK_THROWS_AS(concentration_to_count(-1e-9, 1e-15), std::invalid_argument);
}

TEST_CASE("count -> concentration -> count is the identity") {
  Rng rng(7);
  const double v = 1e-15;
  for (int i = 0; i < 500; ++i) {
    const auto n = static_cast<std::int64_t>(rng.uniform_below(1000000000000ull));
    const double conc = static_cast<double>(n) / (v * kAvogadro);
    CHECK(concentration_to_count(conc, v) == n);
  }
}

TEST_CASE("validate accepts a well-formed system") {
  MembraneSystem sys = decay_system();
  CHECK(validate(sys).empty());
  finalize(sys);
  CHECK(validate(sys).empty());
  CHECK(sys.reactions[0].const_discrete == 0.5);
}

TEST_CASE("validate flags arity violations with a decomposition hint") {
  MembraneSystem sys = decay_system();
  sys.reactions[0].reactants = {0, 0, 1, 1};
  const auto report = validate(sys);
  REQUIRE(report.size() == 1);
  CHECK(report[0].subject == "R1");
  CHECK(report[0].message.find("decompose") != std::string::npos);
}

TEST_CASE("validate flags each broken invariant") {
  SUBCASE("unresolvable species reference") {
    MembraneSystem sys = decay_system();
    sys.reactions[0].products = {7};
    const auto report = validate(sys);
    REQUIRE(report.size() == 1);
    CHECK(report[0].subject == "R1");
    CHECK(report[0].message.find("resolve") != std::string::npos);
  }
  SUBCASE("non-positive volume") {
    MembraneSystem sys = decay_system();
    sys.compartments[0].volume_liters = 0.0;
    CHECK(!validate(sys).empty());
  }
  SUBCASE("two roots") {
    MembraneSystem sys = decay_system();
    sys.compartments.push_back({"outer", 1e-12, -1});
    CHECK(!validate(sys).empty());
  }
  SUBCASE("parent cycle") {
    MembraneSystem sys = decay_system();
    sys.compartments.push_back({"inner", 1e-16, 2});
    sys.compartments.push_back({"deepest", 1e-17, 1});
    CHECK(!validate(sys).empty());
  }
  SUBCASE("negative count") {
    MembraneSystem sys = decay_system();
    sys.alphabet[0].initial_count = -1;
    CHECK(!validate(sys).empty());
  }
  SUBCASE("duplicate species in compartment") {
    MembraneSystem sys = decay_system();
    sys.alphabet.push_back({"A", 0, 5, {}});
    CHECK(!validate(sys).empty());
  }
  SUBCASE("duplicate reaction id") {
    MembraneSystem sys = decay_system();
    sys.reactions.push_back(sys.reactions[0]);
    CHECK(!validate(sys).empty());
  }
  SUBCASE("non-positive rate") {
    MembraneSystem sys = decay_system();
    sys.reactions[0].k_conc = 0.0;
    CHECK(!validate(sys).empty());
  }
  SUBCASE("zero reactants") {
    MembraneSystem sys = decay_system();
    sys.reactions[0].reactants.clear();
    CHECK(!validate(sys).empty());
  }
  SUBCASE("four products") {
    MembraneSystem sys = decay_system();
    sys.reactions[0].products = {1, 1, 1, 1};
    CHECK(!validate(sys).empty());
  }
  SUBCASE("index out of sync") {
    MembraneSystem sys = decay_system();
    finalize(sys);
    sys.alphabet[1].consuming_reactions = {0};  // B consumes nothing
    CHECK(!validate(sys).empty());
  }
}

TEST_CASE("build_reaction_index lists consumers exactly once") {
  MembraneSystem sys;
  sys.compartments.push_back({"cell", 1e-15, -1});
  sys.alphabet.push_back({"A", 0, 10, {}});
  sys.alphabet.push_back({"B", 0, 10, {}});
  sys.alphabet.push_back({"C", 0, 0, {}});
  sys.reactions.push_back({"RA1", {0}, {1}, 1.0, 0.0});      // A -> B
  sys.reactions.push_back({"RA2", {0}, {2}, 1.0, 0.0});      // A -> C
  sys.reactions.push_back({"RAB", {0, 1}, {2}, 1.0, 0.0});   // A + B -> C
  sys.reactions.push_back({"RAA", {0, 0}, {1}, 1.0, 0.0});   // A + A -> B
  build_reaction_index(sys);

  CHECK(sys.alphabet[0].consuming_reactions == std::vector<int>{0, 1, 2, 3});
  CHECK(sys.alphabet[1].consuming_reactions == std::vector<int>{2});
  CHECK(sys.alphabet[2].consuming_reactions.empty());
}

TEST_CASE("reaction index matches a brute-force cross-scan on random systems") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    MembraneSystem sys;
    sys.compartments.push_back({"cell", 1e-15, -1});
    const int nspec = 2 + static_cast<int>(rng.uniform_below(8));
    for (int s = 0; s < nspec; ++s) {
      sys.alphabet.push_back({"S" + std::to_string(s), 0,
                              static_cast<std::int64_t>(rng.uniform_below(20)), {}});
    }
    const int nreac = 1 + static_cast<int>(rng.uniform_below(12));
    for (int r = 0; r < nreac; ++r) {
      Reaction rx;
      rx.id = "R" + std::to_string(r);
      const int order = 1 + static_cast<int>(rng.uniform_below(3));
      for (int i = 0; i < order; ++i) {
        rx.reactants.push_back(static_cast<int>(rng.uniform_below(nspec)));
      }
      const int nprod = static_cast<int>(rng.uniform_below(4));
      for (int i = 0; i < nprod; ++i) {
        rx.products.push_back(static_cast<int>(rng.uniform_below(nspec)));
      }
      rx.k_conc = 1.0;
      sys.reactions.push_back(std::move(rx));
    }
    build_reaction_index(sys);

    // s is a reactant of r exactly when r is listed as a consumer of s.
    for (int s = 0; s < nspec; ++s) {
      const auto& listed = sys.alphabet[s].consuming_reactions;
      const std::set<int> have(listed.begin(), listed.end());
      CHECK(have.size() == listed.size());
      for (int r = 0; r < nreac; ++r) {
        const auto& slots = sys.reactions[r].reactants;
        const bool uses = std::count(slots.begin(), slots.end(), s) > 0;
        CHECK(uses == (have.count(r) > 0));
      }
    }
    CHECK(validate(sys).empty());
  }
}
