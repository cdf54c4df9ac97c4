// flowknot: cube-of-resolutions and grid-diagram calculators with flow
// category layers on top. Subcommands: khovanov, flowcat, grid, gridflow.
#include <bit>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "flowknot/flowcat.hpp"
#include "flowknot/gridflow.hpp"
#include "flowknot/khovanov.hpp"

using namespace flowknot;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_homology(std::ostream& out, const HomologyTable& t, const std::string& indent) {
  for (const auto& [g, grp] : t.groups) {
    if (grp.betti == 0 && grp.torsion.empty()) continue;
    out << indent << "H_" << g << " = ";
    bool first = true;
    if (grp.betti > 0) {
      out << "Z";
      if (grp.betti > 1) out << "^" << grp.betti;
      first = false;
    }
    for (long long d : grp.torsion) {
      if (!first) out << " + ";
      out << "Z/" << d;
      first = false;
    }
    if (first) out << "0";
    out << "\n";
  }
  out << indent << "total rank " << t.total_rank() << "\n";
}

std::string bits_of(unsigned v, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1) s[i] = '1';
  return s;
}

int cmd_khovanov(const std::string& path, bool json_out) {
  kh::LinkDiagram d = kh::parse_pd(slurp(path));
  kh::CubeModel cube = kh::build_cube(d);
  bool d2 = verify_d_squared(cube.cx);
  HomologyTable h = d2 ? homology(cube.cx) : HomologyTable{};
  auto ladybugs = kh::detect_ladybugs(d);

  Json per_vertex = Json::object();
  for (unsigned v = 0; v < (1u << d.n()); ++v)
    per_vertex[bits_of(v, d.n())] = std::size_t(1) << cube.res[v].circles.size();

  if (json_out) {
    Json gens = Json::array();
    for (std::size_t i = 0; i < cube.gens.size(); ++i)
      gens.push_back({{"id", cube.gens[i].id},
                      {"grading", cube.cx.grading_of(i)},
                      {"q", kh::quantum_grading(cube, static_cast<int>(i))}});
    Json faces = Json::array();
    for (const auto& f : ladybugs)
      faces.push_back(
          {{"crossings", Json::array({f.ci, f.cj})}, {"corner", bits_of(f.corner, d.n())}});
    Json out{{"schema", 1},
             {"command", "khovanov"},
             {"crossings", d.n()},
             {"unknots", d.unknots},
             {"generators", cube.gens.size()},
             {"generators_per_vertex", per_vertex},
             {"d_squared", d2},
             {"homology", to_json(h)},
             {"ladybug_faces", faces},
             {"generator_list", gens}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "diagram: " << d.n() << " crossings, " << d.unknots << " extra unknots\n";
    std::cout << "generators: " << cube.gens.size() << "\n";
    std::cout << "d^2 = 0: " << (d2 ? "yes" : "NO") << "\n";
    if (d2) {
      std::cout << "homology:\n";
      print_homology(std::cout, h, "  ");
    }
    std::cout << "ladybug faces: " << ladybugs.size() << "\n";
    for (const auto& f : ladybugs)
      std::cout << "  crossings (" << f.ci << "," << f.cj << ") at corner "
                << bits_of(f.corner, d.n()) << "\n";
  }
  return d2 ? 0 : 1;
}

int cmd_flowcat(const std::string& path, int hypercube, const std::string& policy, int shift,
                bool json_out) {
  fc::FlowCategory cat;
  if (hypercube > 0) {
    cat = fc::hypercube_category(hypercube);
  } else {
    kh::LinkDiagram d = kh::parse_pd(slurp(path));
    cat = fc::ls_category(
        d, policy == "left" ? fc::LadybugPolicy::left : fc::LadybugPolicy::right);
  }
  bool coherent1 = fc::check_boundary_coherence(cat, 1);
  bool coherent2 = fc::check_boundary_coherence(cat, 2);

  Json cycles = Json::array();
  for (const auto& [key, polys] : cat.polygons) {
    Json lengths = Json::array();
    for (const auto& p : polys) lengths.push_back(p.vertices.size());
    cycles.push_back({{"from", cat.objects[key.first].id},
                      {"to", cat.objects[key.second].id},
                      {"lengths", lengths}});
  }
  fc::CWData cw = fc::cjs_realize(cat, shift);
  HomologyTable cw_h = homology(fc::cw_complex(cw));

  if (json_out) {
    Json out{{"schema", 1},
             {"command", "flowcat"},
             {"policy", policy},
             {"shift", shift},
             {"coherence", Json{{"dim1", coherent1}, {"dim2", coherent2}}},
             {"cycles", cycles},
             {"cw_homology", to_json(cw_h)},
             {"category", fc::to_json(cat)}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "objects: " << cat.objects.size() << ", points: " << cat.points.size() << "\n";
    std::cout << "coherence: dim1 " << (coherent1 ? "ok" : "FAIL") << ", dim2 "
              << (coherent2 ? "ok" : "FAIL") << "\n";
    for (const auto& [key, polys] : cat.polygons) {
      std::cout << "Mod(" << cat.objects[key.first].id << ", " << cat.objects[key.second].id
                << ") boundary cycles:";
      for (const auto& p : polys) std::cout << " " << p.vertices.size();
      std::cout << "\n";
    }
    std::cout << "cw homology (cells shifted by " << shift << "):\n";
    print_homology(std::cout, cw_h, "  ");
  }
  return (coherent1 && coherent2) ? 0 : 1;
}

int cmd_grid(const std::string& path, const std::string& coeff, int cd_mu_max, bool json_out) {
  grid::GridDiagram g = grid::parse_grid(slurp(path));
  bool integral = coeff == "int";

  grid::SignAssignmentGrid signs;
  std::string sign_status = "not needed";
  GradedChainComplex cx;
  bool d2 = false;
  if (integral) {
    signs = grid::solve_sign_assignment(g);
    sign_status = "solved (" + std::to_string(signs.signs.size()) + " rectangles)";
    cx = grid::tilde_complex(g, grid::Coeff::integral, &signs);
    d2 = verify_d_squared(cx);
  } else {
    cx = grid::tilde_complex(g, grid::Coeff::gf2);
    d2 = verify_d_squared_mod2(cx);
  }
  HomologyTable h;
  if (d2)
    h = integral ? homology(cx) : homology_gf2(cx);

  // relative (M, A) census of the generators
  grid::Gradings gr = grid::relative_gradings(g);
  std::map<std::pair<int, int>, int> ma_counts;
  for (std::size_t s = 0; s < gr.maslov.size(); ++s) ++ma_counts[{gr.maslov[s], gr.alexander[s]}];

  Json cd;
  if (cd_mu_max > 0) {
    if (g.n > 3) throw std::runtime_error("the obstruction complex is desk scale: n <= 3");
    cd = to_json(gridflow::cd_homology(g, cd_mu_max));
  }

  if (json_out) {
    Json ma = Json::array();
    for (const auto& [key, count] : ma_counts)
      ma.push_back({{"maslov", key.first}, {"alexander", key.second}, {"states", count}});
    Json out{{"schema", 1},        {"command", "grid"},
             {"coeff", coeff},     {"n", g.n},
             {"states", cx.size()}, {"d_squared", d2},
             {"sign_assignment", sign_status}, {"homology", to_json(h)},
             {"state_gradings", ma}};
    if (cd_mu_max > 0) out["cd_homology"] = cd;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "grid size " << g.n << ", " << cx.size() << " states\n";
    std::cout << "coefficients: " << (integral ? "Z" : "GF(2)") << ", sign assignment "
              << sign_status << "\n";
    std::cout << "d^2 = 0: " << (d2 ? "yes" : "NO") << "\n";
    if (d2) {
      std::cout << "tilde homology (relative Maslov grading):\n";
      print_homology(std::cout, h, "  ");
    }
    if (cd_mu_max > 0) std::cout << "obstruction complex homology: " << cd.dump() << "\n";
  }
  return d2 ? 0 : 1;
}

int cmd_gridflow(const std::string& path, int mu_max, bool json_out) {
  grid::GridDiagram g = grid::parse_grid(slurp(path));

  Json strips = Json::array();
  for (const auto& p : gridflow::pair_strips(g))
    strips.push_back({{"o_column", p.o_column}, {"h_row", p.h_row}, {"v_col", p.v_col}});

  bool census = g.n <= 4;
  std::map<int, long long> domains_per_mu;
  std::map<int, long long> decs_per_mu;
  std::map<std::string, long long> shapes;
  if (census) {
    auto states = grid::enumerate_states(g);
    for (const auto& x : states)
      for (const auto& y : states)
        for (const auto& d : gridflow::enumerate_positive_domains(g, x, y, mu_max)) {
          int mu = grid::maslov_index(g, d);
          ++domains_per_mu[mu];
          decs_per_mu[mu] += static_cast<long long>(gridflow::decompositions(g, d).size());
          if (mu >= 1 && mu <= 3) {
            gridflow::ModuliShape shape = gridflow::moduli_shape(g, d);
            switch (shape.kind) {
              case gridflow::ModuliShape::point: ++shapes["point"]; break;
              case gridflow::ModuliShape::interval: ++shapes["interval"]; break;
              case gridflow::ModuliShape::polygon:
                ++shapes["polygon_" + std::to_string(shape.vertex_count())];
                break;
              default: ++shapes["outside_catalog"];
            }
          }
        }
  }

  bool d2 = true;
  Json cd;
  if (g.n <= 3) {
    grid::SignAssignmentGrid signs = grid::solve_sign_assignment(g);
    gridflow::ObstructionComplex oc = gridflow::obstruction_complex(g, mu_max, signs);
    d2 = verify_d_squared(oc.cx);
    if (d2 && mu_max >= 2) cd = to_json(gridflow::cd_homology(g, mu_max));
  }

  if (json_out) {
    Json out{{"schema", 1}, {"command", "gridflow"}, {"n", g.n}, {"mu_max", mu_max},
             {"strip_pairs", strips}};
    if (census) {
      Json dpm = Json::object(), cpm = Json::object(), sh = Json::object();
      for (const auto& [mu, c] : domains_per_mu) dpm[std::to_string(mu)] = c;
      for (const auto& [mu, c] : decs_per_mu) cpm[std::to_string(mu)] = c;
      for (const auto& [k, c] : shapes) sh[k] = c;
      out["domains_per_mu"] = dpm;
      out["decompositions_per_mu"] = cpm;
      out["moduli_shapes"] = sh;
    } else {
      out["census"] = "skipped (n > 4)";
    }
    if (g.n <= 3) {
      out["cd_d_squared"] = d2;
      out["cd_homology"] = cd;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "grid size " << g.n << ", strip pairs keyed by O markings: " << strips.size()
              << "\n";
    for (const auto& s : strips)
      std::cout << "  O in column " << s["o_column"] << ": H strip row " << s["h_row"]
                << " with V strip column " << s["v_col"] << "\n";
    if (census) {
      std::cout << "positive domains by Maslov index (all state pairs, mu <= " << mu_max
                << "):\n";
      for (const auto& [mu, c] : domains_per_mu)
        std::cout << "  mu " << mu << ": " << c << " domains, " << decs_per_mu[mu]
                  << " decompositions\n";
      std::cout << "moduli shapes:";
      for (const auto& [k, c] : shapes) std::cout << " " << k << "=" << c;
      std::cout << "\n";
    } else {
      std::cout << "census skipped (n > 4)\n";
    }
    if (g.n <= 3) {
      std::cout << "obstruction complex d^2 = 0: " << (d2 ? "yes" : "NO") << "\n";
      if (d2) std::cout << "cd homology: " << cd.dump() << "\n";
    }
  }
  return d2 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial Khovanov and grid flow category calculator"};
  app.require_subcommand(1);

  std::string path;
  bool json_out = false;
  std::string policy = "right";
  std::string coeff = "gf2";
  int mu_max = 3;
  int shift = 2;
  int hypercube = 0;
  int cd_mu_max = 0;

  auto* kh_cmd = app.add_subcommand("khovanov", "cube of resolutions and Khovanov homology");
  kh_cmd->add_option("pdfile", path, "PD code file")->required();
  kh_cmd->add_flag("--json", json_out, "machine readable output");

  auto* fc_cmd = app.add_subcommand("flowcat", "framed flow category of a diagram");
  fc_cmd->add_option("pdfile", path, "PD code file");
  fc_cmd->add_option("--hypercube", hypercube, "use the cube flow category of this dimension");
  fc_cmd->add_option("--policy", policy, "ladybug policy: right or left")
      ->check(CLI::IsMember({"right", "left"}));
  fc_cmd->add_option("--shift", shift, "cell dimension shift for the realization");
  fc_cmd->add_flag("--json", json_out, "machine readable output");

  auto* grid_cmd = app.add_subcommand("grid", "grid states and tilde homology");
  grid_cmd->add_option("gridfile", path, "grid file")->required();
  grid_cmd->add_option("--coeff", coeff, "gf2 or int")->check(CLI::IsMember({"gf2", "int"}));
  grid_cmd->add_option("--cd-mu-max", cd_mu_max, "also report obstruction homology (n <= 3)");
  grid_cmd->add_flag("--json", json_out, "machine readable output");

  auto* gf_cmd = app.add_subcommand("gridflow", "domain census, strips and obstruction complex");
  gf_cmd->add_subcommand("report", "full report")->fallthrough();
  gf_cmd->add_option("gridfile", path, "grid file")->required();
  gf_cmd->add_option("--mu-max", mu_max, "Maslov index cutoff")->check(CLI::Range(1, 4));
  gf_cmd->add_flag("--json", json_out, "machine readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kh_cmd->parsed()) return cmd_khovanov(path, json_out);
    if (fc_cmd->parsed()) {
      if (hypercube == 0 && path.empty())
        throw std::runtime_error("flowcat needs a PD file or --hypercube N");
      return cmd_flowcat(path, hypercube, policy, shift, json_out);
    }
    if (grid_cmd->parsed()) return cmd_grid(path, coeff, cd_mu_max, json_out);
    if (gf_cmd->parsed()) return cmd_gridflow(path, mu_max, json_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
