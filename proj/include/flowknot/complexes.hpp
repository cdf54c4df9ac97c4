#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace flowknot {

using BigInt = boost::multiprecision::cpp_int;
using Json = nlohmann::ordered_json;

// Free graded chain complex over Z with a distinguished basis. Generators keep
// their insertion order so every downstream report is deterministic. The
// boundary of a generator must live exactly one grading below it and may only
// mention declared generators; both are enforced at construction time.
class GradedChainComplex {
 public:
  void add_generator(const std::string& id, int grading);
  void set_boundary(const std::string& id,
                    const std::vector<std::pair<std::string, long long>>& terms);

  std::size_t size() const { return gradings_.size(); }
  bool has_generator(const std::string& id) const { return index_.count(id) > 0; }
  std::size_t index_of(const std::string& id) const;
  const std::string& id_of(std::size_t i) const { return ids_[i]; }
  int grading_of(std::size_t i) const { return gradings_[i]; }
  const std::vector<std::pair<std::size_t, long long>>& boundary_of(std::size_t i) const {
    return boundary_[i];
  }

  std::vector<int> gradings_present() const;
  std::vector<std::size_t> generators_at(int grading) const;

  // Matrix of d restricted to grading g, mapping C_g -> C_{g-1}.
  // Rows are indexed by generators at g-1, columns by generators at g.
  std::vector<std::vector<BigInt>> boundary_matrix(int g) const;

  long long euler_characteristic() const;

 private:
  std::vector<std::string> ids_;
  std::vector<int> gradings_;
  std::vector<std::vector<std::pair<std::size_t, long long>>> boundary_;
  std::map<std::string, std::size_t> index_;
};

struct HomologyGroup {
  long long betti = 0;
  std::vector<long long> torsion;  // orders >= 2, each dividing the next
  bool operator==(const HomologyGroup&) const = default;
};

struct HomologyTable {
  std::map<int, HomologyGroup> groups;

  long long total_rank() const;
  long long euler_characteristic() const;
  HomologyTable shifted(int d) const;
  // Gradings whose group is zero do not affect equality.
  bool same_as(const HomologyTable& other) const;
};

// Diagonal of the Smith normal form of an integer matrix: the nonzero
// invariant factors d1 | d2 | ... | dr, all positive, r = rank. Pivots are
// chosen of minimal absolute value to tame coefficient growth.
std::vector<BigInt> smith_normal_form(std::vector<std::vector<BigInt>> m);

// Rank of an integer matrix reduced mod 2.
long long rank_gf2(const std::vector<std::vector<BigInt>>& m);

// True iff the composite d o d vanishes (over Z, or mod 2 when modulus == 2).
bool verify_d_squared(const GradedChainComplex& c);
bool verify_d_squared_mod2(const GradedChainComplex& c);

// Homology over Z: betti number and torsion orders per grading.
// Throws std::invalid_argument unless d^2 = 0.
HomologyTable homology(const GradedChainComplex& c);

// Dimensions over the field with two elements (no torsion). The complex is
// read mod 2; d^2 must vanish mod 2.
HomologyTable homology_gf2(const GradedChainComplex& c);

Json to_json(const GradedChainComplex& c);
GradedChainComplex complex_from_json(const Json& j);
Json to_json(const HomologyTable& t);

}  // namespace flowknot
