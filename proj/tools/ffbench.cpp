#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ffbench/binary_cap.hpp"
#include "ffbench/cap_geometry.hpp"
#include "ffbench/error.hpp"
#include "ffbench/ivg.hpp"
#include "ffbench/quasicap.hpp"
#include "ffbench/roots.hpp"
#include "ffbench/serialize.hpp"
#include "ffbench/wall_forge.hpp"

using namespace ffbench;

namespace {

enum Exit { kOk = 0, kFailed = 1, kBudget = 2, kParse = 3, kInconsistent = 4 };

bool verbose = false;

void log(const std::string& msg) {
  if (verbose) std::cerr << msg << "\n";
}

void emit(const std::string& out, const std::string& body) {
  if (out.empty() || out == "-") {
    std::cout << body;
  } else {
    write_file(out, body);
    log("wrote " + out);
  }
}

void emit(const std::string& out, const Json& j) { emit(out, j.dump(2) + "\n"); }

Rational rational_arg(const std::string& s) { return Rational::parse(s); }

Json load(const std::string& path) { return parse_json(read_file(path)); }

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::BudgetExceeded:
      return kBudget;
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::EmptyInput:
    case ErrorKind::BadOrder:
    case ErrorKind::DegenerateTarget:
    case ErrorKind::OutOfDomain:
    case ErrorKind::MissingParent:
      return kParse;
    case ErrorKind::Inconsistent:
      return kInconsistent;
    default:
      return kFailed;
  }
}

VertexCap vertex_cap_of(const Json& j) {
  if (j.contains("runs")) return vertex_cap_from_json(j);
  return lower_to_vertex_cap(scale_to_integers(box_cap_from_json(j)));
}

std::string detect(const Json& j) {
  if (j.contains("vertices")) return "wall";
  if (j.contains("runs")) return "vertexcap";
  if (j.contains("boxes")) return "boxcap";
  if (j.contains("nodes")) return "bincap";
  throw Error(ErrorKind::ParseError, "cannot tell what kind of file this is");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact workbench for first-fit lower-bound certificates on interval graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("-v,--verbose", verbose, "progress on standard error");

  std::string out;
  unsigned jobs = 1;

  // build
  auto* build = app.add_subcommand("build", "construct a wall, cap or quasicap");
  build->require_subcommand(1);
  std::size_t tower_i = 0;
  std::size_t budget = kDefaultTowerBudget;
  auto* b_tower = build->add_subcommand("tower", "tower wall T_i");
  b_tower->add_option("--i", tower_i)->required();
  b_tower->add_option("--budget", budget, "vertex budget");
  b_tower->add_option("--out", out);
  std::size_t clique_k = 1;
  auto* b_clique = build->add_subcommand("clique", "k overlapping intervals");
  b_clique->add_option("--k", clique_k)->required();
  b_clique->add_option("--out", out);
  std::string cs_r;
  bool lower = false;
  auto* b_cs = build->add_subcommand("cs4cap", "the 4-cap from the gap step at r = 4");
  b_cs->add_option("--r", cs_r, "override r, e.g. to watch it fail");
  b_cs->add_flag("--lower", lower, "emit the integer vertex cap instead");
  b_cs->add_option("--out", out);
  std::string qc_r;
  auto* b_qc = build->add_subcommand("initialqc", "initial quasicap with key height 1");
  b_qc->add_option("--r", qc_r)->required();
  b_qc->add_option("--out", out);

  // expand
  std::string cap_path;
  std::size_t expand_k = 0;
  std::size_t max_vertices = ExpansionBudget{}.max_vertices;
  auto* expand = app.add_subcommand("expand", "turn a cap into a wall of clique size k");
  expand->add_option("cap", cap_path, "BoxCap or VertexCap JSON")->required();
  expand->add_option("--k", expand_k)->required();
  expand->add_option("--budget", max_vertices, "vertex budget");
  expand->add_option("--jobs", jobs);
  expand->add_option("--out", out);

  // firstfit
  std::string family_path;
  std::string order_path;
  auto* ff = app.add_subcommand("firstfit", "color a family in a given order");
  ff->add_option("family", family_path, "Wall JSON; colors are ignored")->required();
  ff->add_option("--order", order_path, "one vertex id per line; default is id order");
  ff->add_option("--out", out);

  // verify
  std::vector<std::string> verify_args;
  std::string ratio;
  auto* verify = app.add_subcommand("verify", "check a wall, box cap, vertex cap or binary cap");
  verify->add_option("args", verify_args, "[wall|boxcap|vertexcap|bincap] file")->required()->expected(1, 2);
  verify->add_option("--ratio", ratio, "required colors / clique size for walls");
  verify->add_option("--out", out);

  // sequence
  std::string s_r;
  std::string s_theta;
  std::string s_delta;
  std::size_t terms = 20;
  std::string format = "csv";
  auto* seq = app.add_subcommand("sequence", "dump the outer strand u_0, u_1, ...");
  seq->add_option("--r", s_r)->required();
  seq->add_option("--theta", s_theta)->required();
  seq->add_option("--delta", s_delta)->required();
  seq->add_option("--terms", terms);
  seq->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  seq->add_option("--out", out);

  // certify
  std::string c_r;
  std::string delta0 = "1";
  std::string delta_min = "1/1048576";
  std::size_t cutoff = kDefaultCutoff;
  std::size_t bit_budget = kDefaultBitBudget;
  std::size_t box_budget = kDefaultBoxBudget;
  std::string cap_out;
  auto* cert = app.add_subcommand("certify", "find a gap-closing recipe for r");
  cert->add_option("--r", c_r)->required();
  cert->add_option("--delta0", delta0);
  cert->add_option("--delta-min", delta_min);
  cert->add_option("--cutoff", cutoff);
  cert->add_option("--bit-budget", bit_budget);
  cert->add_option("--box-budget", box_budget);
  cert->add_option("--cap-out", cap_out, "also execute the recipe and write the cap");
  cert->add_option("--jobs", jobs);
  cert->add_option("--out", out);

  // analyze
  std::vector<std::string> a_r;
  std::vector<std::string> a_theta;
  std::string eps = "1/100000000";
  std::string an_format = "json";
  auto* an = app.add_subcommand("analyze", "discriminant, roots and margin of the characteristic cubic");
  an->add_option("--r", a_r, "one or more values")->required();
  an->add_option("--theta", a_theta, "one or more values")->required();
  an->add_option("--eps", eps);
  an->add_option("--format", an_format)->check(CLI::IsMember({"csv", "json"}));
  an->add_option("--out", out);

  // refute
  std::string bincap_path;
  bool corpus = false;
  auto* ref = app.add_subcommand("refute", "witness that a binary cap at r = 5 is impossible");
  ref->add_option("bincap", bincap_path, "BinaryCap JSON");
  ref->add_flag("--corpus", corpus, "run the built-in exhaustive corpus instead");
  ref->add_option("--jobs", jobs);
  ref->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*b_tower) {
      emit(out, to_json(tower_wall(tower_i, budget)));
    } else if (*b_clique) {
      emit(out, to_json(clique_wall(clique_k)));
    } else if (*b_cs) {
      BoxCap cap = build_cs_4cap();
      if (!cs_r.empty()) cap.r = rational_arg(cs_r);
      if (lower) {
        emit(out, to_json(lower_to_vertex_cap(scale_to_integers(cap))));
      } else {
        emit(out, to_json(cap));
      }
    } else if (*b_qc) {
      emit(out, to_json(initial_quasicap(rational_arg(qc_r))));
    } else if (*expand) {
      const VertexCap cap = vertex_cap_of(load(cap_path));
      const Wall w = cap_to_wall(cap, expand_k, {max_vertices, jobs > 1});
      log("expanded to " + std::to_string(w.size()) + " vertices, " + std::to_string(distinct_colors(w.colors)) +
          " colors");
      emit(out, to_json(w));
    } else if (*ff) {
      Wall w = wall_from_json(load(family_path));
      std::vector<std::size_t> order;
      if (order_path.empty()) {
        for (std::size_t v = 0; v < w.size(); ++v) order.push_back(v);
      } else {
        order = order_from_text(read_file(order_path));
      }
      w.colors = first_fit(w.family, order);
      w.declared_ratio = Rational(1);
      std::cerr << "first-fit colors: " << distinct_colors(w.colors) << "\n";
      emit(out, to_json(w));
    } else if (*verify) {
      const std::string path = verify_args.back();
      const Json j = load(path);
      const std::string kind = verify_args.size() == 2 ? verify_args.front() : detect(j);
      bool ok = false;
      if (kind == "wall") {
        Wall w = wall_from_json(j);
        if (!ratio.empty()) w.declared_ratio = rational_arg(ratio);
        const WallReport rep = verify_wall(w);
        ok = rep.ok();
        emit(out, to_json(rep));
      } else if (kind == "boxcap") {
        const CapReport rep = j.contains("quasicap") ? verify_quasicap(quasicap_from_json(j))
                                                     : verify_box_cap(box_cap_from_json(j));
        ok = rep.ok();
        emit(out, to_json(rep));
      } else if (kind == "vertexcap") {
        const CapReport rep = verify_vertex_cap(vertex_cap_from_json(j));
        ok = rep.ok();
        emit(out, to_json(rep));
      } else if (kind == "bincap") {
        const RelationReport rep = check_relations(binary_cap_from_json(j));
        ok = rep.ok();
        emit(out, to_json(rep));
      } else {
        throw Error(ErrorKind::ParseError, "unknown kind '" + kind + "'");
      }
      return ok ? kOk : kFailed;
    } else if (*seq) {
      const StrandParams p{rational_arg(s_r), rational_arg(s_theta), rational_arg(s_delta)};
      const auto u = strand_sequence(p, std::max<std::size_t>(terms, 3));
      const StopResult stop = find_stop(p);
      const char* names[] = {"Stopped", "Diverged", "PatternBroken"};
      std::cerr << names[static_cast<int>(stop.kind)] << "(" << stop.n << ")\n";
      if (format == "json") {
        Json arr = Json::array();
        for (const Rational& x : u) arr.push_back(x.str());
        emit(out, Json{{"r", p.r.str()},
                       {"theta", p.theta.str()},
                       {"delta", p.delta.str()},
                       {"stop", {{"kind", names[static_cast<int>(stop.kind)]}, {"N", stop.n}}},
                       {"terms", arr}});
      } else {
        emit(out, strand_csv(u));
      }
    } else if (*cert) {
      CertifyOptions o;
      o.delta0 = rational_arg(delta0);
      o.delta_min = rational_arg(delta_min);
      o.cutoff = cutoff;
      o.bit_budget = bit_budget;
      o.box_budget = box_budget;
      o.geometric = !cap_out.empty();
      o.jobs = jobs;
      const Certification c = certify_r(rational_arg(c_r), o);
      for (const RecipeStep& s : c.recipe.steps) {
        log("theta " + s.theta.str() + " delta " + s.delta.str() + " stops at N = " + std::to_string(s.N));
      }
      emit(out, to_json(c.recipe));
      if (c.cap) {
        write_file(cap_out, to_json(*c.cap).dump(2) + "\n");
        log("cap with " + std::to_string(c.cap->cap.boxes.size()) + " boxes written to " + cap_out);
      }
    } else if (*an) {
      const Rational e = rational_arg(eps);
      std::vector<AnalysisReport> reps;
      for (const std::string& r : a_r) {
        for (const std::string& t : a_theta) reps.push_back(analyze(rational_arg(r), rational_arg(t), e));
      }
      if (an_format == "csv") {
        std::string body = analysis_csv_header();
        for (const auto& rep : reps) body += analysis_csv_row(rep);
        emit(out, body);
      } else if (reps.size() == 1) {
        emit(out, to_json(reps.front()));
      } else {
        Json arr = Json::array();
        for (const auto& rep : reps) arr.push_back(to_json(rep));
        emit(out, arr);
      }
    } else if (*ref) {
      if (corpus) {
        const CorpusStats st = refute_corpus(refuter_corpus(), jobs);
        emit(out, Json{{"instances", st.instances},
                       {"refuted_by_relations", st.by_relations},
                       {"refuted_by_chain", st.by_chain},
                       {"inconsistent", st.inconsistent},
                       {"invalid_witnesses", st.invalid_witness},
                       {"longest_chain", st.max_chain}});
        if (st.inconsistent > 0) return kInconsistent;
        return st.invalid_witness == 0 ? kOk : kFailed;
      }
      if (bincap_path.empty()) throw Error(ErrorKind::InvalidArgument, "refute needs a file or --corpus");
      const BinaryCap cap = binary_cap_from_json(load(bincap_path));
      const RefutationWitness w = refute_five(cap);
      if (w.failure) {
        log("chain ends at '" + w.failure->word + "': kappa " + w.failure->actual.str() + ", needs " +
            (w.failure->strict ? "> " : ">= ") + w.failure->required.str());
      } else {
        log(std::to_string(w.relations.size()) + " relation violations");
      }
      emit(out, to_json(w));
    }
  } catch (const Error& e) {
    std::cerr << "ffbench: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "ffbench: " << e.what() << "\n";
    return kInconsistent;
  }
  return kOk;
}
