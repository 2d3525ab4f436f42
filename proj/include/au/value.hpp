#pragma once

// Semantic values of the set model and the chosen AU structure used to
// encode them.

#include <compare>
#include <string>
#include <vector>

namespace au {

class Value {
public:
    enum class Tag : unsigned char { Unit, Atom, Pair, Inl, Inr, List, Refl, Class, Tagged };

    Value() = default;

    static Value unit() { return Value(Tag::Unit); }
    static Value refl() { return Value(Tag::Refl); }
    static Value atom(std::string a) {
        Value v(Tag::Atom);
        v.text_ = std::move(a);
        return v;
    }
    static Value pair(Value a, Value b) {
        Value v(Tag::Pair);
        v.items_ = {std::move(a), std::move(b)};
        return v;
    }
    static Value inl(Value a) {
        Value v(Tag::Inl);
        v.items_ = {std::move(a)};
        return v;
    }
    static Value inr(Value a) {
        Value v(Tag::Inr);
        v.items_ = {std::move(a)};
        return v;
    }
    static Value list(std::vector<Value> xs) {
        Value v(Tag::List);
        v.items_ = std::move(xs);
        return v;
    }
    static Value cls(Value rep) {
        Value v(Tag::Class);
        v.items_ = {std::move(rep)};
        return v;
    }
    static Value tagged(std::string tag, Value inner) {
        Value v(Tag::Tagged);
        v.text_ = std::move(tag);
        v.items_ = {std::move(inner)};
        return v;
    }

    Tag tag() const { return tag_; }
    const std::string& text() const { return text_; }
    const std::vector<Value>& items() const { return items_; }
    const Value& at(std::size_t i) const { return items_.at(i); }
    std::size_t size() const;

    std::string str() const;

    friend std::strong_ordering operator<=>(const Value& a, const Value& b);
    friend bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

private:
    explicit Value(Tag t) : tag_(t) {}
    Tag tag_ = Tag::Unit;
    std::string text_;
    std::vector<Value> items_;
};

/// A chosen encoding of the AU structure on sets. The default is the
/// canonical one; each flag picks a different but isomorphic choice.
struct Structure {
    bool swapPairs = false;     // products stored as (b, a)
    bool swapSums = false;      // left/right injection tags exchanged
    bool reverseLists = false;  // list elements stored last-first
    std::string terminal;       // non-empty: terminal element is this atom
    std::string properTag;      // non-empty: proper carriers wrapped in this tag

    bool isCanonical() const {
        return !swapPairs && !swapSums && !reverseLists && terminal.empty() && properTag.empty();
    }

    Value unit() const;
    Value refl() const;
    Value pair(Value a, Value b) const;
    Value fst(const Value& p) const;
    Value snd(const Value& p) const;
    Value inl(Value a) const;
    Value inr(Value a) const;
    bool isInl(const Value& v) const;
    const Value& payload(const Value& v) const;
    Value list(std::vector<Value> xs) const;
    std::vector<Value> elems(const Value& v) const;
    Value cls(Value rep) const;
    const Value& rep(const Value& v) const;
    Value proper(Value carrierElem) const;
    Value unproper(const Value& v) const;

    friend bool operator==(const Structure&, const Structure&) = default;
};

}  // namespace au
