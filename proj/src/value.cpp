#include "au/value.hpp"

#include <algorithm>

#include "au/error.hpp"

namespace au {

std::size_t Value::size() const {
    std::size_t n = 1;
    for (const auto& v : items_) n += v.size();
    return n;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.tag_ != b.tag_) return a.tag_ <=> b.tag_;
    if (auto c = a.text_ <=> b.text_; c != 0) return c;
    if (a.items_.size() != b.items_.size()) return a.items_.size() <=> b.items_.size();
    for (std::size_t i = 0; i < a.items_.size(); ++i)
        if (auto c = a.items_[i] <=> b.items_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

std::string Value::str() const {
    switch (tag_) {
    case Tag::Unit: return "*";
    case Tag::Refl: return "refl";
    case Tag::Atom: return text_;
    case Tag::Pair: return "<" + items_[0].str() + "," + items_[1].str() + ">";
    case Tag::Inl: return "inl(" + items_[0].str() + ")";
    case Tag::Inr: return "inr(" + items_[0].str() + ")";
    case Tag::Class: return "[" + items_[0].str() + "]";
    case Tag::Tagged: return text_ + ":" + items_[0].str();
    case Tag::List: {
        std::string s = "[";
        for (std::size_t i = 0; i < items_.size(); ++i) s += (i ? " " : "") + items_[i].str();
        return s + "]";
    }
    }
    return "?";
}

namespace {
[[noreturn]] void malformed(const char* what, const Value& v) {
    throw ModelError(std::string("malformed value for ") + what + ": " + v.str());
}
}  // namespace

Value Structure::unit() const { return terminal.empty() ? Value::unit() : Value::atom(terminal); }
Value Structure::refl() const { return terminal.empty() ? Value::refl() : Value::atom(terminal); }

Value Structure::pair(Value a, Value b) const {
    return swapPairs ? Value::pair(std::move(b), std::move(a)) : Value::pair(std::move(a), std::move(b));
}
Value Structure::fst(const Value& p) const {
    if (p.tag() != Value::Tag::Pair) malformed("fst", p);
    return p.at(swapPairs ? 1 : 0);
}
Value Structure::snd(const Value& p) const {
    if (p.tag() != Value::Tag::Pair) malformed("snd", p);
    return p.at(swapPairs ? 0 : 1);
}
Value Structure::inl(Value a) const { return swapSums ? Value::inr(std::move(a)) : Value::inl(std::move(a)); }
Value Structure::inr(Value a) const { return swapSums ? Value::inl(std::move(a)) : Value::inr(std::move(a)); }
bool Structure::isInl(const Value& v) const {
    if (v.tag() != Value::Tag::Inl && v.tag() != Value::Tag::Inr) malformed("case", v);
    return (v.tag() == Value::Tag::Inl) != swapSums;
}
const Value& Structure::payload(const Value& v) const {
    if (v.tag() != Value::Tag::Inl && v.tag() != Value::Tag::Inr) malformed("case", v);
    return v.at(0);
}
Value Structure::list(std::vector<Value> xs) const {
    if (reverseLists) std::reverse(xs.begin(), xs.end());
    return Value::list(std::move(xs));
}
std::vector<Value> Structure::elems(const Value& v) const {
    if (v.tag() != Value::Tag::List) malformed("list", v);
    std::vector<Value> xs = v.items();
    if (reverseLists) std::reverse(xs.begin(), xs.end());
    return xs;
}
Value Structure::cls(Value rep) const { return Value::cls(std::move(rep)); }
const Value& Structure::rep(const Value& v) const {
    if (v.tag() != Value::Tag::Class) malformed("quotient", v);
    return v.at(0);
}
Value Structure::proper(Value carrierElem) const {
    return properTag.empty() ? carrierElem : Value::tagged(properTag, std::move(carrierElem));
}
Value Structure::unproper(const Value& v) const {
    if (properTag.empty()) return v;
    if (v.tag() != Value::Tag::Tagged || v.text() != properTag) malformed("proper carrier", v);
    return v.at(0);
}

}  // namespace au
