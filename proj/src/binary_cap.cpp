#include "ffbench/binary_cap.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <thread>

#include "ffbench/error.hpp"

namespace ffbench {

bool BinaryCap::present(const Word& w) const { return kappa(w).sign() > 0; }

Rational BinaryCap::kappa(const Word& w) const {
  auto it = nodes.find(w);
  return it == nodes.end() ? Rational(0) : it->second.kappa;
}

void BinaryCap::set(const Word& w, Rational k, Rational t) { nodes[w] = {w, std::move(k), std::move(t)}; }

namespace {

Rational tau_of(const BinaryCap& cap, const Word& w) {
  auto it = cap.nodes.find(w);
  return it == cap.nodes.end() ? Rational(0) : it->second.tau;
}

Word parent_of(const Word& w) { return w.substr(0, w.size() - 1); }

}  // namespace

DerivedQuantities derive_quantities(const BinaryCap& cap) {
  for (const auto& [w, node] : cap.nodes) {
    if (w.find_first_not_of("HL") != Word::npos) throw Error(ErrorKind::InvalidArgument, "bad word '" + w + "'");
    if (node.kappa.sign() < 0) throw Error(ErrorKind::InvalidArgument, "negative kappa at '" + w + "'");
  }
  if (!cap.present("")) throw Error(ErrorKind::MissingParent, "top box has kappa 0");
  DerivedQuantities q;
  q[""] = {Rational(0), Rational(0)};
  // Shortlex order visits every parent before its children.
  for (const auto& [w, node] : cap.nodes) {
    if (node.kappa.sign() == 0) continue;
    if (!w.empty() && !cap.present(parent_of(w))) {
      throw Error(ErrorKind::MissingParent, "box '" + w + "' has no parent box");
    }
    const NodeQuantities v = q.at(w);
    q[w + "L"] = {v.beta + v.pi, node.kappa - v.pi};
    q[w + "H"] = {v.beta, node.kappa};
  }
  return q;
}

Rational low_child_tau(const BinaryCap& cap, const DerivedQuantities& q, const Word& v) {
  if (cap.present(v + "L")) return tau_of(cap, v + "L");
  const NodeQuantities& at = q.at(v);
  return cap.r * (at.beta + cap.kappa(v));
}

RelationReport check_relations(const BinaryCap& cap) {
  const DerivedQuantities q = derive_quantities(cap);
  RelationReport rep;
  auto need = [&](const Word& w, const char* rel, const Rational& lhs, const Rational& rhs) {
    if (lhs < rhs) rep.violations.push_back({w, rel, lhs, rhs});
  };
  if (tau_of(cap, "").sign() != 0) rep.violations.push_back({"", "Cap-lambda", tau_of(cap, ""), Rational(0)});
  for (const auto& [v, node] : cap.nodes) {
    if (node.kappa.sign() == 0) continue;
    const NodeQuantities& at = q.at(v);
    const Rational cone = cap.r * (at.beta + node.kappa);
    const Rational tau_low = low_child_tau(cap, q, v);
    // A missing child is not checked here; refute_five turns it into the failure.
    if (cap.present(v + "L")) {
      need(v, "L-kappa", cap.kappa(v + "L"), cone - tau_low);
      need(v, "L-kappa", cone - tau_low, Rational(0));
    }
    if (cap.present(v + "H")) {
      const Rational reach = tau_low - node.tau - node.kappa;
      need(v, "H-kappa", cap.kappa(v + "H"), reach);
      need(v, "H-kappa", reach, Rational(0));
      if (tau_of(cap, v + "H") != node.tau + node.kappa) {
        rep.violations.push_back({v, "H-tau", tau_of(cap, v + "H"), node.tau + node.kappa});
      }
    }
  }
  return rep;
}

BigInt fibonacci(unsigned n) {
  BigInt a = 0;
  BigInt b = 1;
  for (unsigned i = 0; i < n; ++i) {
    BigInt c = a + b;
    a = b;
    b = c;
  }
  return a;
}

namespace {

Rational fib(unsigned n) { return Rational(fibonacci(n)); }

HardLink make_link(const BinaryCap& cap, const DerivedQuantities& q, const Word& w, const Word& u, unsigned m) {
  const NodeQuantities& at = q.at(w);
  const Rational pi_u = q.at(u).pi;
  HardLink l;
  l.word = w;
  l.base = u;
  l.m = m;
  l.pi = at.pi;
  l.kappa = cap.kappa(w);
  l.h1_bound = Rational(2) * at.pi - pi_u * fib(m);
  l.tau = tau_of(cap, w);
  l.h2_bound = Rational(5) * at.beta + Rational(2) * at.pi + pi_u * fib(m + 1);
  l.fib_bound = pi_u * fib(m + 3);
  return l;
}

bool link_holds(const HardLink& l) {
  return l.pi.sign() >= 0 && l.kappa >= l.h1_bound && l.tau <= l.h2_bound && l.kappa >= l.fib_bound;
}

bool meets(const Rational& actual, const Rational& required, bool strict) {
  return strict ? required < actual : required <= actual;
}

}  // namespace

RefutationWitness refute_five(const BinaryCap& cap) {
  if (cap.r != Rational(5)) throw Error(ErrorKind::InvalidArgument, "refutation is for r = 5, got " + cap.r.str());
  RefutationWitness out;
  const RelationReport rel = check_relations(cap);
  if (!rel.ok()) {
    out.relations = rel.violations;
    return out;
  }
  const DerivedQuantities q = derive_quantities(cap);
  const std::size_t present =
      static_cast<std::size_t>(std::count_if(cap.nodes.begin(), cap.nodes.end(), [](const auto& kv) {
        return kv.second.kappa.sign() > 0;
      }));
  Word w;
  Word u;
  unsigned m = 0;
  out.chain.push_back(make_link(cap, q, w, u, m));
  if (!link_holds(out.chain.back())) throw Error(ErrorKind::Inconsistent, "top box is not 0-hard");
  for (std::size_t step = 0; step <= present; ++step) {
    const NodeQuantities& at = q.at(w);
    const Rational kappa = cap.kappa(w);
    Word next;
    Word next_u;
    unsigned next_m = 0;
    Rational required;
    bool strict = false;
    if (low_child_tau(cap, q, w) < Rational(5) * at.beta + Rational(3) * kappa + Rational(2) * at.pi) {
      next = w + "L";
      next_u = next;
      required = Rational(2) * q.at(next).pi;
      strict = true;
    } else {
      next = w + "H";
      next_u = u;
      next_m = m + 1;
      required = Rational(2) * q.at(next).pi - q.at(u).pi * fib(m + 1);
    }
    const Rational actual = cap.kappa(next);
    if (!meets(actual, required, strict)) {
      out.failure = ChainFailure{next, required, strict, actual};
      return out;
    }
    if (actual.sign() == 0) {
      throw Error(ErrorKind::Inconsistent, "required bound at '" + next + "' is not positive");
    }
    out.chain.push_back(make_link(cap, q, next, next_u, next_m));
    if (!link_holds(out.chain.back())) {
      throw Error(ErrorKind::Inconsistent, "box '" + next + "' fails the hardness conditions");
    }
    w = next;
    u = next_u;
    m = next_m;
  }
  throw Error(ErrorKind::Inconsistent, "hard chain outran the " + std::to_string(present) + " boxes");
}

std::vector<std::string> verify_witness(const BinaryCap& cap, const RefutationWitness& wit) {
  std::vector<std::string> errs;
  DerivedQuantities q;
  try {
    q = derive_quantities(cap);
  } catch (const Error& e) {
    return {e.what()};
  }
  if (wit.by_relations()) {
    const RelationReport rel = check_relations(cap);
    for (const RelationViolation& v : wit.relations) {
      const bool equality = v.relation == "H-tau" || v.relation == "Cap-lambda";
      if (equality ? v.lhs == v.rhs : v.rhs <= v.lhs) errs.push_back(v.relation + " at '" + v.word + "' holds");
      if (std::find(rel.violations.begin(), rel.violations.end(), v) == rel.violations.end()) {
        errs.push_back(v.relation + " at '" + v.word + "' is not reported for this cap");
      }
    }
    return errs;
  }
  if (cap.r != Rational(5)) errs.push_back("chain witness for r = " + cap.r.str());
  if (!check_relations(cap).ok()) errs.push_back("relations fail but the witness ignores them");
  if (wit.chain.empty() || !wit.chain.front().word.empty()) errs.push_back("chain must start at the top box");
  if (!wit.failure) errs.push_back("no failure node");
  for (std::size_t i = 0; i < wit.chain.size(); ++i) {
    const HardLink& l = wit.chain[i];
    const std::string at = "'" + l.word + "'";
    if (l.word != l.base + std::string(l.m, 'H')) errs.push_back(at + " is not its base followed by H^m");
    if (!q.count(l.word) || !q.count(l.base)) {
      errs.push_back(at + " lies outside the cap");
      continue;
    }
    if (!(make_link(cap, q, l.word, l.base, l.m) == l)) errs.push_back(at + " values disagree with the cap");
    if (!cap.present(l.word)) errs.push_back(at + " is absent");
    if (l.pi.sign() < 0) errs.push_back(at + " breaks H0");
    if (l.kappa < l.h1_bound) errs.push_back(at + " breaks H1");
    if (l.h2_bound < l.tau) errs.push_back(at + " breaks H2");
    if (l.kappa < l.fib_bound) errs.push_back(at + " breaks the Fibonacci bound");
    if (i > 0 && parent_of(l.word) != wit.chain[i - 1].word) errs.push_back(at + " does not extend the chain");
  }
  if (wit.failure && !wit.chain.empty()) {
    const ChainFailure& f = *wit.failure;
    const HardLink& last = wit.chain.back();
    if (f.word.empty() || parent_of(f.word) != last.word) {
      errs.push_back("failure '" + f.word + "' is not a child of the chain end");
      return errs;
    }
    const bool low = f.word.back() == 'L';
    const NodeQuantities& v = q.at(last.word);
    const bool branch_low =
        low_child_tau(cap, q, last.word) < Rational(5) * v.beta + Rational(3) * last.kappa + Rational(2) * v.pi;
    if (low != branch_low) errs.push_back("failure takes the wrong branch");
    const Rational required = low ? Rational(2) * q.at(f.word).pi
                                  : Rational(2) * q.at(f.word).pi - q.at(last.base).pi * fib(last.m + 1);
    if (f.required != required || f.strict != low) errs.push_back("failure bound disagrees with the cap");
    if (f.actual != cap.kappa(f.word)) errs.push_back("failure kappa disagrees with the cap");
    if (meets(f.actual, f.required, f.strict)) errs.push_back("failure bound is met");
  }
  return errs;
}

BinaryCap encode_binary(const BoxCap& cap) {
  BinaryCap out;
  out.r = cap.r;
  std::map<int, std::vector<const CapBox*>> kids;
  const CapBox* root = nullptr;
  for (const CapBox& b : cap.boxes) {
    if (b.supports) {
      kids[*b.supports].push_back(&b);
    } else if (root) {
      throw Error(ErrorKind::InvalidCap, "two top boxes");
    } else {
      root = &b;
    }
  }
  if (!root) throw Error(ErrorKind::InvalidCap, "no top box");
  std::vector<std::pair<const CapBox*, Word>> todo{{root, ""}};
  std::size_t seen = 0;
  while (!todo.empty()) {
    auto [box, word] = todo.back();
    todo.pop_back();
    ++seen;
    out.set(word, box->height, box->top);
    const auto& ch = kids[box->id];
    if (ch.size() > 2) throw Error(ErrorKind::InvalidCap, "box " + std::to_string(box->id) + " has 3+ supporters");
    if (ch.size() == 1) {
      todo.push_back({ch[0], word + (ch[0]->top == box->bottom() ? "H" : "L")});
    } else if (ch.size() == 2) {
      const CapBox* hi = nullptr;
      const CapBox* lo = nullptr;
      if (ch[0]->bottom() == ch[1]->top) {
        hi = ch[0];
        lo = ch[1];
      } else if (ch[1]->bottom() == ch[0]->top) {
        hi = ch[1];
        lo = ch[0];
      } else {
        throw Error(ErrorKind::InvalidCap, "supporters of box " + std::to_string(box->id) + " are not stacked");
      }
      todo.push_back({hi, word + "H"});
      todo.push_back({lo, word + "L"});
    }
  }
  if (seen != cap.boxes.size()) throw Error(ErrorKind::InvalidCap, "some boxes do not reach the top box");
  return out;
}

std::vector<std::vector<Word>> binary_shapes(unsigned depth) {
  // Shapes of the subtree rooted at `w`, as word lists.
  auto grow = [&](auto& self, const Word& w) -> std::vector<std::vector<Word>> {
    std::vector<std::vector<Word>> kids{{}};
    if (w.size() < depth) {
      std::vector<std::vector<Word>> lows{{}};
      std::vector<std::vector<Word>> highs{{}};
      for (auto& s : self(self, w + "L")) lows.push_back(std::move(s));
      for (auto& s : self(self, w + "H")) highs.push_back(std::move(s));
      kids.clear();
      for (const auto& l : lows) {
        for (const auto& h : highs) {
          std::vector<Word> both = l;
          both.insert(both.end(), h.begin(), h.end());
          kids.push_back(std::move(both));
        }
      }
    }
    for (auto& k : kids) k.insert(k.begin(), w);
    return kids;
  };
  auto shapes = grow(grow, "");
  for (auto& s : shapes) std::sort(s.begin(), s.end(), ShortLex{});
  return shapes;
}

namespace {

// tau follows the relations: H children sit on their parent, L children at one end of their
// feasible range, or just deep enough for L-kappa when the range is empty.
BinaryCap corpus_cap(const std::vector<Word>& shape, const std::vector<Rational>& kappa, bool high_end) {
  BinaryCap cap;
  cap.r = Rational(5);
  std::map<Word, Rational, ShortLex> k;
  for (std::size_t i = 0; i < shape.size(); ++i) k[shape[i]] = kappa[i];
  auto kap = [&](const Word& w) { return k.count(w) ? k.at(w) : Rational(0); };
  std::map<Word, NodeQuantities, ShortLex> q;
  q[""] = {Rational(0), Rational(0)};
  cap.set("", kap(""), Rational(0));
  for (const Word& v : shape) {
    const NodeQuantities at = q.at(v);
    const Rational kv = kap(v);
    const Rational tv = cap.nodes.at(v).tau;
    q[v + "L"] = {at.beta + at.pi, kv - at.pi};
    q[v + "H"] = {at.beta, kv};
    if (k.count(v + "H")) cap.set(v + "H", kap(v + "H"), tv + kv);
    if (k.count(v + "L")) {
      const Rational cone = cap.r * (at.beta + kv);
      const Rational lo = max(cone - kap(v + "L"), tv + kv);
      const Rational hi = min(cone, tv + kv + kap(v + "H"));
      const Rational tau = lo <= hi ? (high_end ? hi : lo) : cone - kap(v + "L");
      cap.set(v + "L", kap(v + "L"), tau);
    }
  }
  return cap;
}

}  // namespace

std::vector<BinaryCap> refuter_corpus() {
  const std::vector<Rational> choices{Rational(1, 2), Rational(1), Rational(2)};
  constexpr std::size_t kFullUpTo = 6;
  constexpr int kSamples = 30;
  std::vector<BinaryCap> out;
  const auto shapes = binary_shapes(3);
  for (std::size_t si = 0; si < shapes.size(); ++si) {
    const auto& shape = shapes[si];
    const std::size_t n = shape.size();
    std::vector<Rational> kappa(n);
    if (n <= kFullUpTo) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < n; ++i) total *= choices.size();
      for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i, c /= choices.size()) kappa[i] = choices[c % choices.size()];
        out.push_back(corpus_cap(shape, kappa, false));
        out.push_back(corpus_cap(shape, kappa, true));
      }
    } else {
      std::mt19937 rng(static_cast<std::uint32_t>(si));
      std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
      for (int s = 0; s < kSamples; ++s) {
        for (std::size_t i = 0; i < n; ++i) kappa[i] = choices[pick(rng)];
        out.push_back(corpus_cap(shape, kappa, rng() % 2 == 1));
      }
    }
  }
  return out;
}

CorpusStats refute_corpus(const std::vector<BinaryCap>& corpus, unsigned jobs) {
  struct Outcome {
    int kind = 0;  // 0 relations, 1 chain, 2 inconsistent
    bool valid = true;
    std::size_t chain = 0;
  };
  std::vector<Outcome> res(corpus.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < corpus.size(); i += step) {
      try {
        const RefutationWitness w = refute_five(corpus[i]);
        res[i].kind = w.by_relations() ? 0 : 1;
        res[i].chain = w.chain.size();
        res[i].valid = verify_witness(corpus[i], w).empty();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Inconsistent) throw;
        res[i].kind = 2;
      }
    }
  };
  const unsigned n = std::max(1u, jobs);
  if (n == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work, t, n);
    for (auto& t : pool) t.join();
  }
  CorpusStats st;
  st.instances = corpus.size();
  for (const Outcome& o : res) {
    if (o.kind == 0) ++st.by_relations;
    if (o.kind == 1) ++st.by_chain;
    if (o.kind == 2) ++st.inconsistent;
    if (!o.valid) ++st.invalid_witness;
    st.max_chain = std::max(st.max_chain, o.chain);
  }
  return st;
}

}  // namespace ffbench
