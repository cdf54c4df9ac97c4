#include "flowknot/complexes.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace flowknot {

void GradedChainComplex::add_generator(const std::string& id, int grading) {
  if (index_.count(id))
    throw std::invalid_argument("duplicate generator id: " + id);
  index_[id] = ids_.size();
  ids_.push_back(id);
  gradings_.push_back(grading);
  boundary_.emplace_back();
}

std::size_t GradedChainComplex::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw std::invalid_argument("unknown generator id: " + id);
  return it->second;
}

void GradedChainComplex::set_boundary(
    const std::string& id, const std::vector<std::pair<std::string, long long>>& terms) {
  std::size_t src = index_of(id);
  std::map<std::size_t, long long> acc;
  for (const auto& [tid, coeff] : terms) {
    std::size_t tgt = index_of(tid);
    if (gradings_[tgt] != gradings_[src] - 1)
      throw std::invalid_argument("boundary of " + id + " does not drop grading by 1 at " + tid);
    acc[tgt] += coeff;
  }
  std::vector<std::pair<std::size_t, long long>> out;
  for (const auto& [tgt, coeff] : acc)
    if (coeff != 0) out.emplace_back(tgt, coeff);
  boundary_[src] = std::move(out);
}

std::vector<int> GradedChainComplex::gradings_present() const {
  std::set<int> s(gradings_.begin(), gradings_.end());
  return std::vector<int>(s.begin(), s.end());
}

std::vector<std::size_t> GradedChainComplex::generators_at(int grading) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gradings_.size(); ++i)
    if (gradings_[i] == grading) out.push_back(i);
  return out;
}

std::vector<std::vector<BigInt>> GradedChainComplex::boundary_matrix(int g) const {
  std::vector<std::size_t> cols = generators_at(g);
  std::vector<std::size_t> rows = generators_at(g - 1);
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
  std::vector<std::vector<BigInt>> m(rows.size(), std::vector<BigInt>(cols.size(), 0));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [tgt, coeff] : boundary_[cols[c]])
      m[row_of.at(tgt)][c] = coeff;
  return m;
}

long long GradedChainComplex::euler_characteristic() const {
  long long chi = 0;
  for (int g : gradings_) chi += (g % 2 == 0) ? 1 : -1;
  return chi;
}

long long HomologyTable::total_rank() const {
  long long r = 0;
  for (const auto& [g, grp] : groups) r += grp.betti;
  return r;
}

long long HomologyTable::euler_characteristic() const {
  long long chi = 0;
  for (const auto& [g, grp] : groups) chi += (g % 2 == 0) ? grp.betti : -grp.betti;
  return chi;
}

HomologyTable HomologyTable::shifted(int d) const {
  HomologyTable out;
  for (const auto& [g, grp] : groups) out.groups[g + d] = grp;
  return out;
}

bool HomologyTable::same_as(const HomologyTable& other) const {
  auto nonzero = [](const HomologyTable& t) {
    std::map<int, HomologyGroup> m;
    for (const auto& [g, grp] : t.groups)
      if (grp.betti != 0 || !grp.torsion.empty()) m[g] = grp;
    return m;
  };
  return nonzero(*this) == nonzero(other);
}

namespace {

BigInt big_abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

// Locate the nonzero entry of minimal absolute value in the submatrix
// starting at (t, t). Returns false if the submatrix is zero.
bool find_pivot(const std::vector<std::vector<BigInt>>& m, std::size_t t,
                std::size_t& pi, std::size_t& pj) {
  bool found = false;
  BigInt best = 0;
  for (std::size_t i = t; i < m.size(); ++i)
    for (std::size_t j = t; j < m[i].size(); ++j) {
      if (m[i][j] == 0) continue;
      BigInt a = big_abs(m[i][j]);
      if (!found || a < best) {
        best = a;
        pi = i;
        pj = j;
        found = true;
      }
    }
  return found;
}

}  // namespace

std::vector<BigInt> smith_normal_form(std::vector<std::vector<BigInt>> m) {
  std::vector<BigInt> divisors;
  if (m.empty() || m[0].empty()) return divisors;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (auto& r : m)
    if (r.size() != cols) throw std::invalid_argument("ragged matrix");

  std::size_t t = 0;
  while (t < rows && t < cols) {
    std::size_t pi, pj;
    if (!find_pivot(m, t, pi, pj)) break;
    std::swap(m[t], m[pi]);
    if (pj != t)
      for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pj]);

    bool clean = true;
    for (std::size_t i = t + 1; i < rows; ++i) {
      if (m[i][t] == 0) continue;
      BigInt q = m[i][t] / m[t][t];
      for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
      if (m[i][t] != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (m[t][j] == 0) continue;
      BigInt q = m[t][j] / m[t][t];
      for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
      if (m[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders appeared; re-pick the pivot

    // Pivot must divide the rest of the submatrix for the divisor chain.
    bool divides = true;
    for (std::size_t i = t + 1; i < rows && divides; ++i)
      for (std::size_t j = t + 1; j < cols && divides; ++j)
        if (m[i][j] % m[t][t] != 0) {
          for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
          divides = false;
        }
    if (!divides) continue;

    divisors.push_back(big_abs(m[t][t]));
    ++t;
  }
  return divisors;
}

long long rank_gf2(const std::vector<std::vector<BigInt>>& m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(rows, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (m[i][j] % 2 != 0) bits[i][j / 64] ^= (std::uint64_t(1) << (j % 64));

  long long rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && !(bits[sel][col / 64] >> (col % 64) & 1)) ++sel;
    if (sel == rows) continue;
    std::swap(bits[sel], bits[row]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row) continue;
      if (bits[i][col / 64] >> (col % 64) & 1)
        for (std::size_t w = 0; w < words; ++w) bits[i][w] ^= bits[row][w];
    }
    ++row;
    ++rank;
  }
  return rank;
}

namespace {

bool d_squared_vanishes(const GradedChainComplex& c, int modulus) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::map<std::size_t, long long> acc;
    for (const auto& [mid, a] : c.boundary_of(i))
      for (const auto& [tgt, b] : c.boundary_of(mid)) acc[tgt] += a * b;
    for (const auto& [tgt, v] : acc) {
      long long r = modulus ? v % modulus : v;
      if (r != 0) return false;
    }
  }
  return true;
}

}  // namespace

bool verify_d_squared(const GradedChainComplex& c) { return d_squared_vanishes(c, 0); }
bool verify_d_squared_mod2(const GradedChainComplex& c) { return d_squared_vanishes(c, 2); }

HomologyTable homology(const GradedChainComplex& c) {
  if (!verify_d_squared(c))
    throw std::invalid_argument("homology of a complex with d^2 != 0");
  HomologyTable table;
  for (int g : c.gradings_present()) {
    long long n_g = static_cast<long long>(c.generators_at(g).size());
    std::vector<BigInt> out = smith_normal_form(c.boundary_matrix(g));
    std::vector<BigInt> in = smith_normal_form(c.boundary_matrix(g + 1));
    HomologyGroup grp;
    grp.betti = n_g - static_cast<long long>(out.size()) - static_cast<long long>(in.size());
    for (const BigInt& d : in)
      if (d > 1) grp.torsion.push_back(d.convert_to<long long>());
    table.groups[g] = grp;
  }
  return table;
}

HomologyTable homology_gf2(const GradedChainComplex& c) {
  if (!verify_d_squared_mod2(c))
    throw std::invalid_argument("homology of a complex with d^2 != 0 mod 2");
  HomologyTable table;
  for (int g : c.gradings_present()) {
    long long n_g = static_cast<long long>(c.generators_at(g).size());
    long long out = rank_gf2(c.boundary_matrix(g));
    long long in = rank_gf2(c.boundary_matrix(g + 1));
    table.groups[g] = HomologyGroup{n_g - out - in, {}};
  }
  return table;
}

Json to_json(const GradedChainComplex& c) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i)
    gens.push_back({{"id", c.id_of(i)}, {"grading", c.grading_of(i)}});
  Json boundary = Json::object();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.boundary_of(i).empty()) continue;
    Json terms = Json::array();
    for (const auto& [tgt, coeff] : c.boundary_of(i))
      terms.push_back(Json::array({c.id_of(tgt), coeff}));
    boundary[c.id_of(i)] = terms;
  }
  return Json{{"generators", gens}, {"boundary", boundary}};
}

GradedChainComplex complex_from_json(const Json& j) {
  GradedChainComplex c;
  for (const auto& g : j.at("generators"))
    c.add_generator(g.at("id").get<std::string>(), g.at("grading").get<int>());
  if (j.contains("boundary"))
    for (const auto& [id, terms] : j.at("boundary").items()) {
      std::vector<std::pair<std::string, long long>> v;
      for (const auto& t : terms)
        v.emplace_back(t.at(0).get<std::string>(), t.at(1).get<long long>());
      c.set_boundary(id, v);
    }
  return c;
}

Json to_json(const HomologyTable& t) {
  Json out = Json::object();
  for (const auto& [g, grp] : t.groups)
    out[std::to_string(g)] = Json{{"betti", grp.betti}, {"torsion", grp.torsion}};
  return out;
}

}  // namespace flowknot
