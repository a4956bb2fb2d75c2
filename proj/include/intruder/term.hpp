#pragma once

// Hash-consed first-order terms with an AC-canonical representation.
//
// Every Term is a handle onto a node owned by a process-wide intern table.
// Two terms are equal modulo associativity/commutativity exactly when their
// handles compare equal: AC nodes are flattened on construction and their
// argument multisets are kept sorted by a fixed structural order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <unordered_map>
#include <vector>

namespace intruder {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SymbolKind : std::uint8_t { Constructor, Equational };

struct SymbolInfo {
    std::string name;
    std::size_t arity;
    SymbolKind kind;
    bool ac;
};

/// Interned function symbol. Constructors are the five message constructors;
/// everything else belongs to some equational signature.
class Symbol {
public:
    Symbol() = default;

    const std::string& name() const { return info_->name; }
    std::size_t arity() const { return info_->arity; }
    bool is_constructor() const { return info_->kind == SymbolKind::Constructor; }
    bool is_ac() const { return info_->ac; }
    bool valid() const { return info_ != nullptr; }

    friend bool operator==(Symbol a, Symbol b) { return a.info_ == b.info_; }
    friend bool operator<(Symbol a, Symbol b) { return a.info_->name < b.info_->name; }

    /// Registers (or looks up) an equational symbol. Redeclaring a name with a
    /// different arity or AC flag is an error.
    static Symbol declare(std::string_view name, std::size_t arity, bool ac = false);
    static Symbol find(std::string_view name);  // invalid Symbol when unknown

    static Symbol pub();
    static Symbol sign();
    static Symbol blind();
    static Symbol pair();
    static Symbol enc();

    const SymbolInfo* info() const { return info_; }

private:
    explicit Symbol(const SymbolInfo* info) : info_(info) {}
    const SymbolInfo* info_ = nullptr;

    friend class detail_symbol_access;
};

enum class TermKind : std::uint8_t { Name, Var, App };

namespace detail {

struct Node {
    TermKind kind;
    const SymbolInfo* symbol;  // App only
    std::string id;            // Name/Var only
    std::vector<const Node*> args;
    std::size_t hash;
    std::uint32_t size;
    bool ground;
};

}  // namespace detail

class Term {
public:
    Term() = default;

    static Term name(std::string_view id);
    static Term var(std::string_view id);
    /// Builds f(args). AC symbols take exactly two arguments here and are
    /// flattened; use `ac` for an already-collected argument multiset.
    static Term app(Symbol f, std::vector<Term> args);
    /// Flattened AC application over one or more arguments. A single argument
    /// is returned unchanged.
    static Term ac(Symbol f, std::vector<Term> args);

    static Term pub(Term k) { return app(Symbol::pub(), {k}); }
    static Term sign(Term m, Term k) { return app(Symbol::sign(), {m, k}); }
    static Term blind(Term m, Term k) { return app(Symbol::blind(), {m, k}); }
    static Term pair(Term a, Term b) { return app(Symbol::pair(), {a, b}); }
    static Term enc(Term m, Term k) { return app(Symbol::enc(), {m, k}); }

    TermKind kind() const { return node_->kind; }
    bool is_name() const { return node_->kind == TermKind::Name; }
    bool is_var() const { return node_->kind == TermKind::Var; }
    bool is_app() const { return node_->kind == TermKind::App; }
    bool is_ground() const { return node_->ground; }
    bool valid() const { return node_ != nullptr; }

    /// Identifier of a name or variable.
    const std::string& id() const { return node_->id; }
    Symbol symbol() const;
    bool headed_by(Symbol f) const { return is_app() && node_->symbol == f.info(); }

    std::size_t arity() const { return node_->args.size(); }
    Term arg(std::size_t i) const { return Term(node_->args[i]); }
    std::vector<Term> args() const;

    /// Number of function symbols, names and variables, counting an n-ary AC
    /// node as n-1 binary symbol occurrences.
    std::size_t size() const { return node_->size; }
    std::size_t hash() const { return node_->hash; }

    friend bool operator==(Term a, Term b) { return a.node_ == b.node_; }
    friend bool operator!=(Term a, Term b) { return a.node_ != b.node_; }

    const detail::Node* node() const { return node_; }
    explicit Term(const detail::Node* n) : node_(n) {}

private:
    const detail::Node* node_ = nullptr;
};

/// Fixed total order: head kind (name < variable < constructor application <
/// equational application), then symbol or identifier, arity, and finally the
/// arguments lexicographically.
int compare(Term a, Term b);

struct TermLess {
    bool operator()(Term a, Term b) const { return compare(a, b) < 0; }
};

inline bool operator<(Term a, Term b) { return compare(a, b) < 0; }

}  // namespace intruder

template <>
struct std::hash<intruder::Term> {
    std::size_t operator()(intruder::Term t) const noexcept { return t.hash(); }
};

namespace intruder {

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable table;
        return table;
    }

    const SymbolInfo* get(std::string_view name, std::size_t arity, SymbolKind kind, bool ac) {
        std::lock_guard lock(mutex_);
        auto it = by_name_.find(std::string(name));
        if (it != by_name_.end()) {
            const SymbolInfo* s = it->second;
            if (s->arity != arity || s->kind != kind || s->ac != ac)
                throw Error("symbol '" + std::string(name) + "' redeclared with a different signature");
            return s;
        }
        const SymbolInfo* s = &storage_.emplace_back(SymbolInfo{std::string(name), arity, kind, ac});
        by_name_.emplace(s->name, s);
        return s;
    }

    const SymbolInfo* find(std::string_view name) {
        std::lock_guard lock(mutex_);
        auto it = by_name_.find(std::string(name));
        return it == by_name_.end() ? nullptr : it->second;
    }

private:
    SymbolTable() {
        for (auto [n, a] : {std::pair<const char*, std::size_t>{"pub", 1}, {"sign", 2}, {"blind", 2},
                            {"pair", 2}, {"enc", 2}}) {
            const SymbolInfo* s = &storage_.emplace_back(SymbolInfo{n, a, SymbolKind::Constructor, false});
            by_name_.emplace(s->name, s);
        }
        // Symbols of the built-in theories.
        for (auto [n, a, ac] : {std::tuple<const char*, std::size_t, bool>{"+", 2, true},
                                {"*", 2, true}, {"0", 0, false}, {"1", 0, false}, {"inv", 1, false}}) {
            const SymbolInfo* s = &storage_.emplace_back(SymbolInfo{n, a, SymbolKind::Equational, ac});
            by_name_.emplace(s->name, s);
        }
    }

    std::mutex mutex_;
    std::deque<SymbolInfo> storage_;
    std::unordered_map<std::string, const SymbolInfo*> by_name_;
};

struct NodeKey {
    TermKind kind;
    const SymbolInfo* symbol;
    std::string_view id;
    const std::vector<const Node*>* args;
};

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        std::size_t h = std::hash<int>{}(static_cast<int>(k.kind));
        h = mix(h, std::hash<const void*>{}(k.symbol));
        h = mix(h, std::hash<std::string_view>{}(k.id));
        for (const Node* a : *k.args) h = mix(h, std::hash<const void*>{}(a));
        return h;
    }
};

struct NodeKeyEq {
    bool operator()(const NodeKey& a, const NodeKey& b) const {
        return a.kind == b.kind && a.symbol == b.symbol && a.id == b.id && *a.args == *b.args;
    }
};

/// Process-wide intern table. Nodes live until process exit.
class TermTable {
public:
    static TermTable& instance() {
        static TermTable table;
        return table;
    }

    const Node* intern(TermKind kind, const SymbolInfo* symbol, std::string_view id,
                       std::vector<const Node*> args) {
        std::lock_guard lock(mutex_);
        NodeKey probe{kind, symbol, id, &args};
        if (auto it = index_.find(probe); it != index_.end()) return it->second;

        Node& n = nodes_.emplace_back();
        n.kind = kind;
        n.symbol = symbol;
        n.id = std::string(id);
        n.args = std::move(args);
        // Structural hash: stable across runs, independent of addresses.
        std::size_t h = std::hash<int>{}(static_cast<int>(kind));
        h = mix(h, std::hash<std::string_view>{}(symbol ? std::string_view(symbol->name) : n.id));
        std::uint32_t size = 1;
        bool ground = kind != TermKind::Var;
        for (const Node* a : n.args) {
            h = mix(h, a->hash);
            size += a->size;
            ground = ground && a->ground;
        }
        if (symbol && symbol->ac && n.args.size() > 2) size += static_cast<std::uint32_t>(n.args.size() - 2);
        n.hash = h;
        n.size = size;
        n.ground = ground;
        index_.emplace(NodeKey{n.kind, n.symbol, n.id, &n.args}, &n);
        return &n;
    }

    std::size_t node_count() {
        std::lock_guard lock(mutex_);
        return nodes_.size();
    }

private:
    std::mutex mutex_;
    std::deque<Node> nodes_;
    std::unordered_map<NodeKey, const Node*, NodeKeyHash, NodeKeyEq> index_;
};

inline int head_rank(const Node* n) {
    switch (n->kind) {
        case TermKind::Name: return 0;
        case TermKind::Var: return 1;
        case TermKind::App: return n->symbol->kind == SymbolKind::Constructor ? 2 : 3;
    }
    return 4;
}

inline int compare_nodes(const Node* a, const Node* b) {
    if (a == b) return 0;
    int ra = head_rank(a), rb = head_rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    if (a->kind != TermKind::App) return a->id.compare(b->id) < 0 ? -1 : (a->id == b->id ? 0 : 1);
    if (a->symbol != b->symbol) {
        int c = a->symbol->name.compare(b->symbol->name);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        int c = compare_nodes(a->args[i], b->args[i]);
        if (c != 0) return c;
    }
    return 0;
}

}  // namespace detail

inline Symbol Symbol::declare(std::string_view name, std::size_t arity, bool ac) {
    if (ac && arity != 2) throw Error("AC symbol '" + std::string(name) + "' must be binary");
    return Symbol(detail::SymbolTable::instance().get(name, arity, SymbolKind::Equational, ac));
}

inline Symbol Symbol::find(std::string_view name) {
    return Symbol(detail::SymbolTable::instance().find(name));
}

inline Symbol Symbol::pub() {
    static const Symbol s(detail::SymbolTable::instance().find("pub"));
    return s;
}
inline Symbol Symbol::sign() {
    static const Symbol s(detail::SymbolTable::instance().find("sign"));
    return s;
}
inline Symbol Symbol::blind() {
    static const Symbol s(detail::SymbolTable::instance().find("blind"));
    return s;
}
inline Symbol Symbol::pair() {
    static const Symbol s(detail::SymbolTable::instance().find("pair"));
    return s;
}
inline Symbol Symbol::enc() {
    static const Symbol s(detail::SymbolTable::instance().find("enc"));
    return s;
}

class detail_symbol_access {
public:
    static Symbol wrap(const SymbolInfo* s) { return Symbol(s); }
};

inline Symbol Term::symbol() const {
    return is_app() ? detail_symbol_access::wrap(node_->symbol) : Symbol();
}

inline std::vector<Term> Term::args() const {
    std::vector<Term> out;
    out.reserve(node_->args.size());
    for (const detail::Node* a : node_->args) out.emplace_back(a);
    return out;
}

inline int compare(Term a, Term b) { return detail::compare_nodes(a.node(), b.node()); }

inline Term Term::name(std::string_view id) {
    if (id.empty()) throw Error("empty name");
    return Term(detail::TermTable::instance().intern(TermKind::Name, nullptr, id, {}));
}

inline Term Term::var(std::string_view id) {
    if (id.empty()) throw Error("empty variable identifier");
    return Term(detail::TermTable::instance().intern(TermKind::Var, nullptr, id, {}));
}

inline Term Term::ac(Symbol f, std::vector<Term> args) {
    if (!f.is_ac()) throw Error("symbol '" + f.name() + "' is not AC");
    if (args.empty()) throw Error("AC application '" + f.name() + "' needs at least one argument");
    std::vector<Term> flat;
    flat.reserve(args.size());
    for (Term a : args) {
        if (!a.valid()) throw Error("invalid argument term");
        if (a.headed_by(f)) {
            for (const detail::Node* n : a.node()->args) flat.emplace_back(n);
        } else {
            flat.push_back(a);
        }
    }
    if (flat.size() == 1) return flat.front();
    std::sort(flat.begin(), flat.end(), TermLess{});
    std::vector<const detail::Node*> nodes;
    nodes.reserve(flat.size());
    for (Term t : flat) nodes.push_back(t.node());
    return Term(detail::TermTable::instance().intern(TermKind::App, f.info(), {}, std::move(nodes)));
}

inline Term Term::app(Symbol f, std::vector<Term> args) {
    if (!f.valid()) throw Error("invalid symbol");
    if (args.size() != f.arity())
        throw Error("arity violation: '" + f.name() + "' expects " + std::to_string(f.arity()) +
                    " argument(s), got " + std::to_string(args.size()));
    if (f.is_ac()) return ac(f, std::move(args));
    std::vector<const detail::Node*> nodes;
    nodes.reserve(args.size());
    for (Term t : args) {
        if (!t.valid()) throw Error("invalid argument term");
        nodes.push_back(t.node());
    }
    return Term(detail::TermTable::instance().intern(TermKind::App, f.info(), {}, std::move(nodes)));
}

/// Rebuilds an application node over new arguments, re-canonicalizing AC nodes.
inline Term rebuild(Term t, std::vector<Term> args) {
    Symbol f = t.symbol();
    return f.is_ac() ? Term::ac(f, std::move(args)) : Term::app(f, std::move(args));
}

inline Term canonicalize(Term t) {
    if (!t.is_app()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (Term a : t.args()) args.push_back(canonicalize(a));
    return rebuild(t, std::move(args));
}

inline bool equal_mod_ac(Term s, Term t) { return s == t; }

}  // namespace intruder
