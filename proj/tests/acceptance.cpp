// Acceptance checks: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "causal_affects/corpus.hpp"
#include "causal_affects/embedding.hpp"
#include "causal_affects/inference_rules.hpp"
#include "causal_affects/io.hpp"
#include "causal_affects/loop_analysis.hpp"
#include "oracles.hpp"

using namespace causal_affects;

namespace {

std::string recipe_file(const std::string& recipe, const std::string& file) {
    return std::string(CAUSAL_AFFECTS_RECIPE_DIR) + "/" + recipe + "/" + file;
}

StructuralModel load_model(const std::string& recipe, const std::string& file = "model.json") {
    auto path = recipe_file(recipe, file);
    return io::model_from_json(io::read_json_file(path), path);
}

AffectsSet load_affects(const std::string& recipe) {
    auto path = recipe_file(recipe, "affects.json");
    return io::affects_from_json(io::read_json_file(path), path);
}

Poset load_poset(const std::string& recipe) {
    auto path = recipe_file(recipe, "poset.json");
    return io::poset_from_json(io::read_json_file(path), path);
}

Embedding load_embedding(const std::string& recipe, const AffectsSet& s, const Poset& p) {
    auto path = recipe_file(recipe, "embedding.json");
    return make_embedding(s, p, io::embedding_map_from_json(io::read_json_file(path), path));
}

void detail(const std::string& line) { std::printf("    %s\n", line.c_str()); }

class Criterion {
public:
    explicit Criterion(int number) : number_(number) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ok_ = false;
            detail("failed: " + what);
        }
    }
    bool ok() const { return ok_; }
    int number() const { return number_; }

private:
    int number_;
    bool ok_ = true;
};

struct RelText {
    std::vector<std::string> x, y, z, w;
};

AffectsRelation rel(const AffectsSet& u, const RelText& t) {
    return {u.set_of(t.x), u.set_of(t.y), u.set_of(t.z), u.set_of(t.w)};
}

std::set<AffectsRelation> present_set(const AffectsSet& s) {
    std::set<AffectsRelation> out;
    for (const auto& p : s.present) out.insert(p.rel);
    return out;
}

void one_time_pad(Criterion& c) {
    auto m = load_model("otp");
    auto s = enumerate_affects(m, {2, 2, 2, 2});
    std::vector<RelText> listed{{{"K"}, {"M", "M'"}},  {{"M"}, {"K", "M'"}},     {{"M", "K"}, {"M'"}},
                                {{"M"}, {"M'"}, {"K"}}, {{"M"}, {"M'"}, {}, {"K"}}, {{"M"}, {"K"}, {}, {"M'"}},
                                {{"K"}, {"M"}, {}, {"M'"}}};
    // The listing fixes the roles of M and K; the model is symmetric under swapping them.
    std::vector<RelText> mirrored{{{"K"}, {"M'"}, {"M"}}, {{"K"}, {"M'"}, {}, {"M"}}};
    std::set<AffectsRelation> expect;
    for (const auto& t : listed) expect.insert(rel(s, t));
    for (const auto& t : mirrored) expect.insert(rel(s, t));
    auto got = present_set(s);
    c.expect(got == expect, "present relations equal the listed relations closed under M <-> K");
    c.expect(s.is_absent(rel(s, {{"M"}, {"M'"}})), "M does not affect M'");
    c.expect(s.is_absent(rel(s, {{"K"}, {"M'"}})), "K does not affect M'");
    for (const auto& r : got) detail(s.format(r));
}

void jamming(Criterion& c) {
    auto s = enumerate_affects(load_model("jamming"), {2, 2, 2, 2});
    std::set<AffectsRelation> expect{rel(s, {{"B"}, {"A", "C"}}), rel(s, {{"B"}, {"C"}, {}, {"A"}}),
                                     rel(s, {{"B"}, {"A"}, {}, {"C"}})};
    c.expect(present_set(s) == expect, "complete affects set is {B -> AC, B -> C | A, B -> A | C}");
    detail(std::to_string(s.present.size()) + " present, " + std::to_string(s.absent.size()) + " absent");
}

void chain_with_cancelling_path(Criterion& c) {
    auto m = load_model("ex-iv4");
    AffectsEngine e(m);
    AffectsSet u;
    u.universe = e.universe();
    auto cd = rel(u, {{"C"}, {"D"}});
    c.expect(e.holds(cd), "C -> D holds");
    c.expect(!e.holds(rel(u, {{"B", "C"}, {"D"}})), "BC -> D does not hold");
    auto bdc = rel(u, {{"B"}, {"D"}, {"C"}});
    bool holds = e.holds(bdc);
    c.expect(holds, "B -> D | do(C) holds");
    if (holds) c.expect(e.classify(bdc).strongly_indecreasable, "B -> D | do(C) strongly indecreasable");

    // Only the do-relation and the absence: the cause of D by C must come from the witness.
    AffectsSet witness;
    witness.universe = u.universe;
    witness.present.push_back({bdc, {}});
    witness.absent.push_back(rel(u, {{"B"}, {"D"}}));
    DisjunctiveCause cd_cause{u.index_of("C"), bit(u.index_of("D"))};
    auto causes = infer_causes(witness);
    c.expect(std::find(causes.begin(), causes.end(), cd_cause) != causes.end(), "absence witness gives C ~> {D}");
    witness.absent.clear();
    causes = infer_causes(witness);
    c.expect(std::find(causes.begin(), causes.end(), cd_cause) == causes.end(), "no C ~> {D} without the witness");
    auto file = infer_causes(load_affects("ex-iv4"));
    c.expect(std::find(file.begin(), file.end(), cd_cause) != file.end(), "recipe affects set gives C ~> {D}");
}

void cyclic_model(Criterion& c) {
    auto m = load_model("hcl");
    auto d = solve_observed_distribution(m);
    bool uniform = d.size() == 4;
    for (const auto& p : d.probabilities()) uniform = uniform && p == Rational(1, 4);
    c.expect(uniform, "(X, Y) uniform on four values, hence independent");
    AffectsEngine e(m);
    c.expect(!e.holds({bit(0), bit(1), 0, 0}), "X does not affect Y");
    c.expect(!e.holds({bit(1), bit(0), 0, 0}), "Y does not affect X");
    bool raised = false;
    try {
        solve_observed_distribution(load_model("hcl", "inconsistent.json"));
    } catch (const Error& err) {
        raised = err.code() == ErrorCode::InconsistentModel;
    }
    c.expect(raised, "X = Y, Y = X xor 1 raises InconsistentModel");
}

CauseGraph loop_graph(const AffectsSet& s) { return build_loop_graph(build_potential_cause_graph(s, false).graph); }

void loop_graphs(Criterion& c) {
    c.expect(loop_graph(load_affects("noacl")).empty(), "noacl loop graph empty");

    auto a3 = load_affects("acl3");
    int e1 = a3.index_of("e1"), e2 = a3.index_of("e2");
    std::vector<IndexedArrow> two_cycle{{e1, e2, bit(e2)}, {e2, e1, bit(e1)}};
    std::sort(two_cycle.begin(), two_cycle.end());
    c.expect(loop_graph(a3).arrows == two_cycle, "acl3 loop graph is exactly e1 <-> e2");

    c.expect(!loop_graph(load_affects("acl6a")).empty(), "acl6a loop graph non-empty");

    auto a11 = load_affects("acl11");
    auto id = [&](const char* n) { return a11.index_of(n); };
    auto idx = [&](std::vector<std::string> n) { return a11.set_of(n); };
    // Arrows read off the loop graph figure, one family per relation.
    std::vector<IndexedArrow> expect{
        {id("A"), id("X"), idx({"X"})},      {id("X"), id("A"), idx({"A", "B"})}, {id("X"), id("B"), idx({"A", "B"})},
        {id("C"), id("A"), idx({"A", "B"})}, {id("C"), id("B"), idx({"A", "B"})}, {id("B"), id("C"), idx({"C", "D"})},
        {id("B"), id("D"), idx({"C", "D"})}, {id("B"), id("A"), idx({"A", "C"})}, {id("B"), id("C"), idx({"A", "C"})},
        {id("D"), id("A"), idx({"A", "C"})}, {id("D"), id("C"), idx({"A", "C"})}};
    std::sort(expect.begin(), expect.end());
    auto g = loop_graph(a11);
    c.expect(g.arrows == expect, "acl11 loop graph equals the transcribed arrow set");
    c.expect(!contains(g.nodes, id("E")), "acl11 loop graph excludes E");
    bool families_gone = true;
    for (const auto& a : g.arrows)
        if ((a.source == id("D") && a.index == idx({"B", "E"})) || (a.source == id("B") && a.index == idx({"E"})))
            families_gone = false;
    c.expect(families_gone, "acl11 loop graph drops the D -> BE and B -> E families");
    detail("acl11 loop graph: " + std::to_string(g.arrows.size()) + " arrows");
}

void loop_graph_vs_brute_force(Criterion& c) {
    std::mt19937_64 rng(seed_from_env());
    int samples = 1000, agree = 0, acyclic = 0;
    for (int i = 0; i < samples; ++i) {
        auto s = random_irreducible_affects(6, 5, rng);
        bool empty = loop_graph(s).empty();
        bool resolvable = oracle::has_acyclic_resolution(s);
        if (empty == resolvable) ++agree;
        if (resolvable) ++acyclic;
    }
    detail(std::to_string(agree) + "/" + std::to_string(samples) + " agree (" + std::to_string(acyclic) +
           " with an acyclic resolution)");
    c.expect(agree == samples, "loop-graph emptiness agrees with the brute-force resolution oracle");
}

std::vector<StructuralModel> corpus() { return deterministic_model_corpus(4, 2, seed_from_env()); }

void rule_soundness(Criterion& c, const std::vector<StructuralModel>& models) {
    EnumerationBounds bounds{4, 4, 4, 4};
    std::size_t violations = 0, instances = 0, bad_models = 0;
    std::map<std::string, std::size_t> per_rule;
    for (const auto& m : models) {
        auto r = verify_rules_on_model(m, bounds);
        violations += r.violations.size();
        for (const auto& v : r.violations) per_rule[v.rule]++;
        for (const auto& [rule, n] : r.instances) instances += n;
        if (!r.violations.empty()) ++bad_models;
    }
    detail(std::to_string(models.size()) + " models, " + std::to_string(instances) + " rule instances, " +
           std::to_string(violations) + " violations");
    for (const auto& [rule, n] : per_rule) detail(rule + ": " + std::to_string(n));
    c.expect(models.size() >= 1000, "corpus has at least 1000 models");
    c.expect(violations == 0, "no rule violations");

    std::size_t strict_models = 0;
    std::map<std::string, std::size_t> strict_rules;
    for (const auto& m : models) {
        AffectsEngine e(m, ContextPolicy::BothPositive);
        auto r = verify_rules_on_model(e, m, bounds);
        if (!r.violations.empty()) ++strict_models;
        for (const auto& v : r.violations) strict_rules[v.rule]++;
    }
    std::string summary;
    for (const auto& [rule, n] : strict_rules) summary += " " + rule + "=" + std::to_string(n);
    std::printf("[INFO] both-positive context policy: %zu of %zu models with violations%s\n", strict_models,
                models.size(), summary.c_str());
}

void discovery(Criterion& c, const std::vector<StructuralModel>& models) {
    std::size_t match = 0;
    for (const auto& m : models)
        if (discover_structure(m) == m.structure().edges()) ++match;
    detail(std::to_string(match) + "/" + std::to_string(models.size()) + " structures recovered");
    c.expect(match == models.size(), "every edge set recovered");
}

std::vector<Poset> posets_up_to(int n) {
    std::vector<Poset> out;
    for (int k = 1; k <= n; ++k)
        for (auto& p : enumerate_posets(k)) out.push_back(std::move(p));
    return out;
}

void embedding_suite(Criterion& c) {
    auto acl5 = load_affects("acl5");
    auto p5 = load_poset("acl5");
    SearchRequirements nd;
    nd.non_degenerate = true;
    auto found = search_embeddings(acl5, p5, nd);
    c.expect(!found.empty(), "acl5 has a non-degenerate compat-irreducible embedding on p,q < r < s");
    auto recipe = check_embedding(acl5, p5, load_embedding("acl5", acl5, p5), CompatMode::Irreducible);
    c.expect(recipe.compat && !recipe.degenerate, "acl5 recipe embedding compatible and non-degenerate");

    SearchRequirements stable;
    stable.support_stable = true;
    std::size_t posets = 0, hits = 0;
    for (const auto& p : posets_up_to(5)) {
        ++posets;
        hits += search_embeddings(acl5, p, stable).size();
    }
    detail(std::to_string(posets) + " posets with at most 5 elements, " + std::to_string(hits) +
           " support-stable embeddings of acl5");
    c.expect(hits == 0, "acl5 has no support-stable embedding on any poset with at most 5 elements");

    for (const char* name : {"acl7", "acl12"}) {
        auto s = load_affects(name);
        auto p = load_poset(name);
        auto r = check_embedding(s, p, load_embedding(name, s, p), CompatMode::Irreducible);
        c.expect(r.compat && r.support_stable && r.minimum_stable,
                 std::string(name) + " recipe embedding compatible, support-stable and minimum-stable");
    }
}

void weak_to_strong(Criterion& c, const std::vector<StructuralModel>& models) {
    std::vector<Poset> posets;
    std::size_t examined = 0;
    for (const auto& p : posets_up_to(5)) {
        ++examined;
        if (check_conical(p, 3).holds == true && check_location_symmetric(p, 3).holds == true) posets.push_back(p);
    }
    // Complete affects sets of the corpus models, one copy each.
    std::map<std::string, AffectsSet> sets;
    for (const auto& m : models) {
        if (m.structure().size() < 2) continue;
        auto s = enumerate_affects(m, {2, 2, 2, 2});
        sets.emplace(io::dump(io::affects_to_json(s)), std::move(s));
    }
    std::size_t nd_checked = 0, nd_bad = 0, any_checked = 0, any_bad = 0;
    for (const auto& [key, s] : sets) {
        int n = static_cast<int>(s.universe.size());
        for (const auto& p : posets) {
            SearchRequirements any;
            for (const auto& e : search_embeddings(s, p, any)) {
                auto r = check_embedding(s, p, e, CompatMode::Indecreasable);
                ++any_checked;
                if (!r.strong_indecreasable.compatible) ++any_bad;
                if (r.degenerate || p.size() < n) continue;
                ++nd_checked;
                if (!r.indecreasable.compatible) ++nd_bad;
            }
        }
    }
    detail(std::to_string(posets.size()) + " of " + std::to_string(examined) +
           " posets conical and location-symmetric (k = 3); " + std::to_string(sets.size()) + " affects sets");
    detail(std::to_string(nd_checked) + " non-degenerate compat-irreducible embeddings, " + std::to_string(nd_bad) +
           " not compat-indecreasable");
    detail(std::to_string(any_checked) + " compat-irreducible embeddings, " + std::to_string(any_bad) +
           " not compat-strong-indecreasable");
    c.expect(nd_bad == 0, "non-degenerate compat-irreducible implies compat-indecreasable");
    c.expect(any_bad == 0, "compat-irreducible implies compat-strong-indecreasable");
}

PointSet up_closure(const Poset& p, const PointSet& a) {
    PointSet m = p.empty_set();
    for (int i : to_indices(a)) m |= p.future(i);
    return m;
}

void poset_toolbox(Criterion& c) {
    std::size_t cases = 0, supp_min_bad = 0, jsl_posets = 0, jsl_bad = 0;
    for (const auto& p : posets_up_to(5)) {
        auto all = oracle::subsets(p, p.full_set());
        for (const auto& x : all) {
            if (x.none()) continue;
            PointSet f = oracle::support_future(p, x);
            PointSet mf = oracle::minimal(p, f);
            if (p.support_future(x) != f || p.minimal(f) != mf) ++supp_min_bad;
            for (const auto& a : all) {
                ++cases;
                PointSet m = up_closure(p, a);
                bool ok = oracle::minimal(p, m).is_subset_of(a) && a.is_subset_of(m);
                if (mf.is_subset_of(a)) ok = ok && f.is_subset_of(m);
                if (mf == a) ok = ok && f == m;
                if (f == m) ok = ok && mf.is_subset_of(a) && a.is_subset_of(f);
                if (!ok) ++supp_min_bad;
            }
        }
        if (classify_poset(p).join_semilattice.holds != true) continue;
        ++jsl_posets;
        for (const auto& x : all) {
            if (x.none()) continue;
            auto idx = to_indices(x);
            std::optional<int> j = idx[0];
            for (std::size_t k = 1; j && k < idx.size(); ++k) j = oracle::join(p, *j, idx[k]);
            if (!j || p.minimal(p.support_future(x)) != p.singleton(*j)) ++jsl_bad;
        }
    }
    detail(std::to_string(cases) + " support-minimum cases, " + std::to_string(supp_min_bad) + " failures");
    detail(std::to_string(jsl_posets) + " join-semilattices, " + std::to_string(jsl_bad) + " failures");
    c.expect(supp_min_bad == 0, "support-minimum inclusions on all posets with at most 5 elements");
    c.expect(jsl_bad == 0, "join-semilattice location property on all posets with at most 5 elements");

    auto non_lattice = Poset::create({"A", "B", "C", "D", "E", "F"}, {{"A", "B"},
                                                                     {"A", "C"},
                                                                     {"B", "D"},
                                                                     {"B", "E"},
                                                                     {"C", "D"},
                                                                     {"C", "E"},
                                                                     {"D", "F"},
                                                                     {"E", "F"}});
    auto lattice = Poset::create({"A", "B", "C", "D", "E", "F", "G", "H", "I"},
                                 {{"A", "B"}, {"A", "C"}, {"B", "G"}, {"G", "D"}, {"C", "I"}, {"I", "E"},
                                  {"H", "D"}, {"H", "E"}, {"B", "H"}, {"C", "H"}, {"D", "F"}, {"E", "F"}});
    c.expect(classify_poset(non_lattice).lattice.holds == false, "first Hasse example is not a lattice");
    c.expect(classify_poset(lattice).lattice.holds == true, "second Hasse example is a lattice");
    c.expect(lattice.join(lattice.index_of("B"), lattice.index_of("C")) == lattice.index_of("H"),
             "B join C = H in the lattice example");

    auto g11 = generate_minkowski_grid(GridDims::OnePlusOne, 4);
    std::size_t pairs = 0, unique = 0;
    for (int t1 = -1; t1 <= 1; ++t1)
        for (int x1 = -1; x1 <= 1; ++x1)
            for (int t2 = -1; t2 <= 1; ++t2)
                for (int x2 = -1; x2 <= 1; ++x2) {
                    if ((t1 + x1 + t2 + x2) % 2 != 0) continue;
                    int a = g11.index_of("(" + std::to_string(t1) + "," + std::to_string(x1) + ")");
                    int b = g11.index_of("(" + std::to_string(t2) + "," + std::to_string(x2) + ")");
                    ++pairs;
                    if (g11.minimal(g11.support_future(g11.points({a, b}))).count() == 1) ++unique;
                }
    detail("1+1 grid: " + std::to_string(unique) + "/" + std::to_string(pairs) +
           " interior pairs of equal parity with a unique earliest joint future point");
    c.expect(unique == pairs, "1+1 grid interior has unique joins");

    auto g21 = generate_minkowski_grid(GridDims::TwoPlusOne, 3);
    auto m = g21.minimal(g21.support_future(g21.points({g21.index_of("(0,1,0)"), g21.index_of("(0,0,1)")})));
    detail("2+1 grid: (0,1,0) and (0,0,1) have " + std::to_string(m.count()) + " minimal joint future points");
    c.expect(m.count() > 1, "2+1 grid joint future with more than one minimal point");
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    auto run = [&](int n, const std::string& title, const std::function<void(Criterion&)>& f) {
        Criterion c(n);
        auto start = std::chrono::steady_clock::now();
        std::printf("criterion %d: %s\n", n, title.c_str());
        try {
            f(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d (%.1f s)\n", c.ok() ? "PASS" : "FAIL", n, secs);
        std::fflush(stdout);
        results.push_back(c);
    };
    run(1, "one-time pad affects set", one_time_pad);
    run(2, "jamming affects set", jamming);
    run(3, "chain with a cancelling path", chain_with_cancelling_path);
    run(4, "cyclic model and inconsistent two-cycle", cyclic_model);
    run(5, "loop-graph recipes", loop_graphs);
    run(6, "loop graph against brute-force resolutions", loop_graph_vs_brute_force);
    auto models = corpus();
    run(7, "rule soundness on the deterministic corpus", [&](Criterion& c) { rule_soundness(c, models); });
    run(8, "structure discovery on the deterministic corpus", [&](Criterion& c) { discovery(c, models); });
    run(9, "embedding suite", embedding_suite);
    run(10, "compat-irreducible to compat-indecreasable on conical posets",
        [&](Criterion& c) { weak_to_strong(c, models); });
    run(11, "poset toolbox", poset_toolbox);
    std::size_t passed = std::count_if(results.begin(), results.end(), [](const Criterion& c) { return c.ok(); });
    std::printf("%zu/%zu criteria passed\n", passed, results.size());
    return passed == results.size() ? 0 : 1;
}
