#include "causal_affects/io.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace causal_affects::io {

namespace {

// A JSON value together with where it came from, for error messages.
class Reader {
public:
    Reader(const Json& j, std::string source, std::string path = "")
        : j_(&j), source_(std::move(source)), path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& problem) const {
        throw Error(ErrorCode::InvalidInput, source_ + ": " + (path_.empty() ? "/" : path_) + ": " + problem);
    }

    const Json& json() const { return *j_; }
    const std::string& source() const { return source_; }
    const std::string& path() const { return path_; }

    void expect_object() const {
        if (!j_->is_object()) fail("expected an object");
    }

    std::optional<Reader> find(const std::string& key) const {
        expect_object();
        auto it = j_->find(key);
        if (it == j_->end()) return std::nullopt;
        return Reader(*it, source_, path_ + "/" + key);
    }

    Reader at(const std::string& key) const {
        auto r = find(key);
        if (!r) fail("missing field \"" + key + "\"");
        return *r;
    }

    std::vector<Reader> items() const {
        if (!j_->is_array()) fail("expected an array");
        std::vector<Reader> out;
        for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], source_, path_ + "/" + std::to_string(i));
        return out;
    }

    void only_fields(std::initializer_list<const char*> allowed) const {
        expect_object();
        for (const auto& [key, value] : j_->items())
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
                fail("unknown field \"" + key + "\"");
    }

    std::string string() const {
        if (!j_->is_string()) fail("expected a string");
        return j_->get<std::string>();
    }

    int integer() const {
        if (!j_->is_number_integer()) fail("expected an integer");
        return j_->get<int>();
    }

    bool boolean() const {
        if (!j_->is_boolean()) fail("expected true or false");
        return j_->get<bool>();
    }

    Rational rational() const {
        if (j_->is_number_integer()) return Rational(j_->get<long>());
        if (!j_->is_string()) fail("expected an exact probability such as \"1/2\"");
        try {
            return parse_rational(j_->get<std::string>());
        } catch (const std::exception&) {
            fail("malformed rational \"" + j_->get<std::string>() + "\"");
        }
    }

    std::vector<std::string> strings() const {
        std::vector<std::string> out;
        for (const auto& r : items()) out.push_back(r.string());
        return out;
    }

    // Prefixes errors raised by later validation with this location.
    template <typename F>
    auto guard(F&& f) const {
        try {
            return f();
        } catch (const Error& e) {
            throw Error(e.code(), source_ + ": " + (path_.empty() ? "/" : path_) + ": " + e.what());
        }
    }

private:
    const Json* j_;
    std::string source_;
    std::string path_;
};

Json names_json(const std::vector<std::string>& names) { return Json(names); }

Json rational_json(const Rational& r) { return rational_to_string(r); }

std::string mechanism_kind_name(MechanismKind k) {
    switch (k) {
        case MechanismKind::Exogenous: return "exogenous";
        case MechanismKind::Deterministic: return "deterministic";
        case MechanismKind::Stochastic: return "stochastic";
    }
    return "?";
}

Json flag_json(const BoundedFlag& f, const Poset& p) {
    Json out;
    out["holds"] = f.holds ? Json(*f.holds) : Json(nullptr);
    Json ce = Json::array();
    for (const auto& s : f.counterexample) ce.push_back(point_set_to_json(p, s));
    out["counterexample"] = ce;
    return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(ErrorCode::InvalidInput, source + ": line " + std::to_string(line) + ": malformed JSON");
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

StructuralModel model_from_json(const Json& j, const std::string& source) {
    Reader root(j, source);
    root.only_fields({"nodes"});
    auto entries = root.at("nodes").items();
    std::vector<Node> nodes;
    for (const auto& e : entries) {
        e.only_fields({"name", "cardinality", "observed", "parents", "mechanism"});
        Node n;
        n.name = e.at("name").string();
        if (auto c = e.find("cardinality")) n.cardinality = c->integer();
        if (auto o = e.find("observed")) n.observed = o->boolean();
        nodes.push_back(n);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto parents = entries[i].find("parents");
        if (!parents) continue;
        for (const auto& p : parents->items()) {
            std::string name = p.string();
            auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.name == name; });
            if (it == nodes.end()) p.fail("unknown parent \"" + name + "\"");
            edges.emplace_back(static_cast<NodeId>(it - nodes.begin()), static_cast<NodeId>(i));
        }
    }
    CausalStructure structure = root.at("nodes").guard([&] { return CausalStructure::create(nodes, edges); });
    std::vector<Mechanism> mechs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Reader m = entries[i].at("mechanism");
        m.only_fields({"kind", "table"});
        Mechanism mech;
        std::string kind = m.at("kind").string();
        if (kind == "exogenous") mech.kind = MechanismKind::Exogenous;
        else if (kind == "deterministic") mech.kind = MechanismKind::Deterministic;
        else if (kind == "stochastic") mech.kind = MechanismKind::Stochastic;
        else m.at("kind").fail("kind must be exogenous, deterministic or stochastic");
        int card = nodes[i].cardinality;
        for (const auto& row : m.at("table").items()) {
            if (row.json().is_number_integer() && mech.kind == MechanismKind::Deterministic) {
                int v = row.integer();
                if (v < 0 || v >= card) row.fail("output value out of range");
                std::vector<Rational> r(card, Rational(0));
                r[v] = 1;
                mech.table.push_back(r);
                continue;
            }
            std::vector<Rational> r;
            for (const auto& p : row.items()) r.push_back(p.rational());
            mech.table.push_back(r);
        }
        mechs.push_back(mech);
    }
    return root.at("nodes").guard([&] { return StructuralModel::create(structure, mechs); });
}

Json model_to_json(const StructuralModel& model) {
    const auto& s = model.structure();
    Json nodes = Json::array();
    for (int i = 0; i < s.size(); ++i) {
        const Node& n = s.node(i);
        const Mechanism& m = model.mechanism(i);
        Json parents = Json::array();
        for (NodeId p : s.parent_list(i)) parents.push_back(s.node(p).name);
        Json table = Json::array();
        for (const auto& row : m.table) {
            if (m.kind == MechanismKind::Deterministic) {
                table.push_back(std::find(row.begin(), row.end(), Rational(1)) - row.begin());
                continue;
            }
            Json r = Json::array();
            for (const auto& p : row) r.push_back(rational_json(p));
            table.push_back(r);
        }
        nodes.push_back({{"name", n.name},
                         {"cardinality", n.cardinality},
                         {"observed", n.observed},
                         {"parents", parents},
                         {"mechanism", {{"kind", mechanism_kind_name(m.kind)}, {"table", table}}}});
    }
    return {{"nodes", nodes}};
}

namespace {

AffectsRelation read_relation(const AffectsSet& set, const Reader& r) {
    AffectsRelation rel;
    auto role = [&](const char* key, bool required) -> NodeSet {
        auto f = r.find(key);
        if (!f) {
            if (required) r.fail(std::string("missing field \"") + key + "\"");
            return 0;
        }
        return f->guard([&] { return set.set_of(f->strings()); });
    };
    rel.x = role("X", true);
    rel.y = role("Y", true);
    rel.z = role("Z", false);
    rel.w = role("W", false);
    r.guard([&] {
        check_relation(rel);
        return 0;
    });
    return rel;
}

}  // namespace

AffectsRelation relation_from_json(const AffectsSet& set, const Json& j, const std::string& source) {
    return read_relation(set, Reader(j, source));
}

AffectsSet affects_from_json(const Json& j, const std::string& source) {
    Reader root(j, source);
    root.only_fields({"nodes", "present", "absent"});
    AffectsSet set;
    std::vector<Reader> present, absent;
    if (auto p = root.find("present")) present = p->items();
    if (auto a = root.find("absent")) absent = a->items();
    if (auto n = root.find("nodes")) {
        set.universe = n->strings();
        std::set<std::string> distinct(set.universe.begin(), set.universe.end());
        if (distinct.size() != set.universe.size()) n->fail("duplicate node name");
        if (set.universe.size() > static_cast<std::size_t>(kMaxNodes)) n->fail("at most 64 nodes are supported");
    } else {
        for (const auto* list : {&present, &absent})
            for (const auto& r : *list)
                for (const char* key : {"X", "Y", "Z", "W"})
                    if (auto f = r.find(key))
                        for (const auto& name : f->strings())
                            if (std::find(set.universe.begin(), set.universe.end(), name) == set.universe.end())
                                set.universe.push_back(name);
        if (set.universe.size() > static_cast<std::size_t>(kMaxNodes)) root.fail("at most 64 nodes are supported");
    }
    for (const auto& r : present) {
        r.only_fields({"X", "Y", "Z", "W", "irreducible", "indecreasable", "strong"});
        PresentRelation p;
        p.rel = read_relation(set, r);
        if (auto f = r.find("irreducible")) p.flags.irreducible = f->boolean();
        if (auto f = r.find("indecreasable")) p.flags.indecreasable = f->boolean();
        if (auto f = r.find("strong")) p.flags.strong = f->boolean();
        if (set.find_present(p.rel)) r.fail("duplicate relation " + set.format(p.rel));
        set.present.push_back(p);
    }
    for (const auto& r : absent) {
        r.only_fields({"X", "Y", "Z", "W"});
        AffectsRelation a = read_relation(set, r);
        if (!set.is_absent(a)) set.absent.push_back(a);
    }
    root.guard([&] {
        set.normalize();
        return 0;
    });
    return set;
}

Json relation_to_json(const AffectsSet& set, const AffectsRelation& r) {
    return {{"X", names_json(set.names(r.x))},
            {"Y", names_json(set.names(r.y))},
            {"Z", names_json(set.names(r.z))},
            {"W", names_json(set.names(r.w))}};
}

Json affects_to_json(const AffectsSet& set) {
    Json present = Json::array();
    for (const auto& p : set.present) {
        Json e = relation_to_json(set, p.rel);
        if (p.flags.irreducible) e["irreducible"] = *p.flags.irreducible;
        if (p.flags.indecreasable) e["indecreasable"] = *p.flags.indecreasable;
        if (p.flags.strong) e["strong"] = *p.flags.strong;
        present.push_back(e);
    }
    Json absent = Json::array();
    for (const auto& a : set.absent) absent.push_back(relation_to_json(set, a));
    return {{"nodes", names_json(set.universe)}, {"present", present}, {"absent", absent}};
}

Poset poset_from_json(const Json& j, const std::string& source) {
    Reader root(j, source);
    root.only_fields({"elements", "relations"});
    std::vector<std::string> elements = root.at("elements").strings();
    std::vector<std::pair<std::string, std::string>> rel;
    if (auto r = root.find("relations")) {
        for (const auto& pair : r->items()) {
            auto ends = pair.strings();
            if (ends.size() != 2) pair.fail("a relation is a pair [lower, upper]");
            rel.emplace_back(ends[0], ends[1]);
        }
    }
    return root.guard([&] { return Poset::create(elements, rel); });
}

Json poset_to_json(const Poset& p) {
    Json rel = Json::array();
    for (auto [a, b] : p.relations()) rel.push_back({p.label(a), p.label(b)});
    return {{"elements", names_json(p.labels())}, {"relations", rel}};
}

std::map<std::string, std::string> embedding_map_from_json(const Json& j, const std::string& source) {
    Reader root(j, source);
    root.only_fields({"map"});
    Reader m = root.at("map");
    m.expect_object();
    std::map<std::string, std::string> out;
    for (const auto& [rv, value] : m.json().items()) out[rv] = Reader(value, source, m.path() + "/" + rv).string();
    return out;
}

Json embedding_to_json(const AffectsSet& set, const Poset& p, const Embedding& e) {
    Json m = Json::object();
    for (std::size_t i = 0; i < set.universe.size(); ++i) m[set.universe[i]] = p.label(e.point[i]);
    return {{"map", m}};
}

Json distribution_to_json(const StructuralModel& model, const JointDistribution& dist) {
    Json scope = Json::array();
    for (NodeId id : dist.scope()) scope.push_back(model.structure().node(id).name);
    Json rows = Json::array();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const Rational& p = dist.probabilities()[i];
        if (p == 0) continue;
        rows.push_back({{"values", dist.values(i)}, {"p", rational_json(p)}});
    }
    return {{"scope", scope}, {"support", rows}};
}

Json compatibility_to_json(const StructuralModel& model, const CompatibilityReport& rep) {
    const auto& s = model.structure();
    Json v = Json::array();
    for (const auto& q : rep.violations)
        v.push_back({{"x", s.names(q.x)}, {"y", s.names(q.y)}, {"z", s.names(q.z)}});
    return {{"holds", rep.holds}, {"cyclic", rep.cyclic}, {"violations", v}};
}

Json causes_to_json(const AffectsSet& set, const std::vector<DisjunctiveCause>& causes) {
    Json out = Json::array();
    for (const auto& c : causes) out.push_back({{"source", set.universe[c.source]}, {"targets", set.names(c.targets)}});
    return {{"causes", out}};
}

Json verification_to_json(const VerificationReport& rep) {
    AffectsSet fmt;
    fmt.universe = rep.universe;
    Json v = Json::array();
    for (const auto& x : rep.violations)
        v.push_back({{"rule", x.rule}, {"premise", fmt.format(x.premise)}, {"split", fmt.names(x.split)},
                     {"detail", x.detail}});
    return {{"universe", rep.universe}, {"violations", v}, {"instances", rep.instances}};
}

Json cause_graph_to_json(const CauseGraph& g) {
    AffectsSet fmt;
    fmt.universe = g.universe;
    Json arrows = Json::array();
    for (const auto& a : g.arrows)
        arrows.push_back(
            {{"source", g.universe[a.source]}, {"target", g.universe[a.target]}, {"index", fmt.names(a.index)}});
    return {{"nodes", fmt.names(g.nodes)}, {"arrows", arrows}};
}

Json acl_detection_to_json(const AffectsSet& set, const AclDetection& d) {
    Json out;
    out["acl_present"] = d.acl_present;
    out["agree"] = d.agree ? Json(*d.agree) : Json(nullptr);
    out["extended_verdict"] = d.extended_verdict;
    out["warnings"] = d.warnings;
    out["loop_graph"] = d.loop_graph ? cause_graph_to_json(*d.loop_graph) : Json(nullptr);
    if (d.oracle) {
        Json w = Json::array();
        for (auto [a, b] : d.oracle->witness) w.push_back({set.universe[a], set.universe[b]});
        out["oracle"] = {{"acyclic_resolution", d.oracle->acyclic_resolution},
                         {"witness", w},
                         {"visited", d.oracle->visited}};
    } else {
        out["oracle"] = nullptr;
    }
    return out;
}

Json chains_to_json(const AffectsSet& set, const ChainAnalysis& c) {
    Json chains = Json::array();
    for (const auto& ch : c.chains) {
        Json rels = Json::array();
        for (const auto& r : ch.relations) rels.push_back(set.format(r));
        chains.push_back(
            {{"relations", rels}, {"from", set.names(ch.from)}, {"to", set.names(ch.to)}, {"closed", ch.closed}});
    }
    Json classes = Json::array();
    for (const auto& m : c.classes) {
        Json w = Json::array();
        for (const auto& r : m.witness) w.push_back(set.format(r));
        classes.push_back({{"name", m.name}, {"witness", w}});
    }
    return {{"chains", chains}, {"truncated", c.truncated}, {"classes", classes}};
}

Json point_set_to_json(const Poset& p, const PointSet& s) {
    Json out = Json::array();
    for (int i : to_indices(s)) out.push_back(p.label(i));
    return out;
}

Json poset_classification_to_json(const Poset& p, const PosetClassification& c) {
    return {{"k", c.k},
            {"join_semilattice", flag_json(c.join_semilattice, p)},
            {"meet_semilattice", flag_json(c.meet_semilattice, p)},
            {"lattice", flag_json(c.lattice, p)},
            {"join_free", flag_json(c.join_free, p)},
            {"meet_free", flag_json(c.meet_free, p)},
            {"conical", flag_json(c.conical, p)},
            {"location_symmetric", flag_json(c.location_symmetric, p)},
            {"union_property", flag_json(c.union_property, p)}};
}

Json embedding_report_to_json(const AffectsSet& set, const EmbeddingReport& r) {
    auto verdict = [&](const ModeVerdict& v) {
        Json viol = Json::array();
        for (const auto& x : v.violations) viol.push_back(set.format(x));
        return Json{{"compatible", v.compatible}, {"violations", viol}};
    };
    Json meaningless = Json::array();
    for (const auto& x : r.meaningless) meaningless.push_back(set.format(x));
    return {{"mode", compat_mode_name(r.mode)},
            {"compat", r.compat},
            {"modes",
             {{"irreducible", verdict(r.irreducible)},
              {"strong-indecreasable", verdict(r.strong_indecreasable)},
              {"indecreasable", verdict(r.indecreasable)}}},
            {"support_stable", r.support_stable},
            {"minimum_stable", r.minimum_stable},
            {"degenerate", r.degenerate},
            {"trivial", r.trivial},
            {"meaningless", meaningless}};
}

}  // namespace causal_affects::io
