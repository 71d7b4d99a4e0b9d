#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fraisse {

/// Elements of a finite structure are the dense indices 0..size-1.
using Elem = int;
using Tuple = std::vector<Elem>;

struct Symbol {
    std::string name;
    int arity = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }
    [[nodiscard]] std::size_t size() const { return symbols_.size(); }
    [[nodiscard]] const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
    [[nodiscard]] int max_arity() const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<Symbol> symbols_;
};

/// A finite relational structure. Relations are kept as sorted duplicate-free
/// tuple lists plus a dense membership table for small carriers.
class Structure {
public:
    Structure() = default;
    Structure(Signature sig, int size);

    [[nodiscard]] const Signature& signature() const { return sig_; }
    [[nodiscard]] int size() const { return size_; }
    [[nodiscard]] const std::vector<Tuple>& tuples(std::size_t symbol) const { return rels_[symbol]; }
    [[nodiscard]] std::size_t tuple_count() const;

    [[nodiscard]] bool holds(std::size_t symbol, std::span<const Elem> tuple) const;

    /// Adds a tuple; a no-op when already present. Throws std::invalid_argument
    /// on arity or range violations.
    void add(std::size_t symbol, Tuple tuple);
    void remove(std::size_t symbol, const Tuple& tuple);

    /// Substructure induced on `elems`, relabelled so elems[i] becomes i.
    [[nodiscard]] Structure induced(std::span<const Elem> elems) const;

    /// Same structure with `extra` fresh isolated points appended.
    [[nodiscard]] Structure with_extra(int extra) const;

    /// Lexicographically comparable serialization: size, then per symbol the
    /// tuple count followed by the sorted tuples.
    [[nodiscard]] std::vector<int> encoding() const;

    friend bool operator==(const Structure& a, const Structure& b) {
        return a.sig_ == b.sig_ && a.size_ == b.size_ && a.rels_ == b.rels_;
    }

private:
    [[nodiscard]] std::optional<std::size_t> dense_index(std::size_t symbol, std::span<const Elem> tuple) const;
    void rebuild_dense();

    Signature sig_;
    int size_ = 0;
    std::vector<std::vector<Tuple>> rels_;
    std::vector<std::vector<char>> dense_;
};

enum class MorphismKind { hom, embedding, iso };

[[nodiscard]] std::string_view to_string(MorphismKind kind);

/// A map between two structures. The structures themselves are not owned;
/// every operation that needs them takes them as arguments.
struct Morphism {
    std::vector<Elem> map;
    MorphismKind kind = MorphismKind::hom;

    [[nodiscard]] Elem operator()(Elem x) const { return map[static_cast<std::size_t>(x)]; }
    friend bool operator==(const Morphism&, const Morphism&) = default;
};

inline constexpr Elem kUnassigned = -1;

/// Search frontier: a partial assignment source -> target, kUnassigned where open.
struct PartialMap {
    std::vector<Elem> assigned;
    MorphismKind required_kind = MorphismKind::hom;
};

/// True when `map` is a morphism of `kind` from `a` to `b`.
[[nodiscard]] bool is_morphism(const Structure& a, const Structure& b, std::span<const Elem> map, MorphismKind kind);

/// (f after g): x -> f(g(x)).
[[nodiscard]] std::vector<Elem> compose(std::span<const Elem> f, std::span<const Elem> g);

[[nodiscard]] std::vector<Elem> identity_map(int n);

}  // namespace fraisse
