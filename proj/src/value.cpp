#include "eagerlog/value.hpp"

#include "eagerlog/error.hpp"

namespace eagerlog {

namespace {

inline std::size_t mix(std::size_t h, std::size_t v) {
    // boost::hash_combine constant, widened.
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

} // namespace

std::size_t ValueHash::operator()(const Value& v) const noexcept {
    if (const auto* i = std::get_if<IntLit>(&v)) return mix(0x51ed27, std::hash<std::int64_t>{}(i->value));
    const auto& c = std::get<Ctor>(v);
    std::size_t h = mix(0xc70f, std::hash<std::string>{}(c.symbol));
    for (ValueId a : c.args) h = mix(h, a.raw);
    return h;
}

Interner::Interner() = default;

ValueId Interner::intern(const Value& v) {
    if (const auto* c = std::get_if<Ctor>(&v)) {
        std::uint32_t n = next_.load(std::memory_order_acquire);
        for (ValueId a : c->args)
            if (!a.valid() || a.raw >= n) throw InternalError("intern: constructor argument is not an interned id");
    }
    std::size_t h = ValueHash{}(v);
    Shard& shard = shards_[h % kShards];
    std::lock_guard lock(shard.mu);
    if (auto it = shard.map.find(v); it != shard.map.end()) return it->second;
    std::uint32_t raw = next_.fetch_add(1, std::memory_order_acq_rel);
    if (raw == ValueId::kInvalid) throw InternalError("interner: id space exhausted");
    *values_.row_for_write(raw) = v;
    ValueId id{raw};
    shard.map.emplace(v, id);
    return id;
}

ValueId Interner::intern_ctor(std::string symbol, std::vector<ValueId> args) {
    return intern(Ctor{std::move(symbol), std::move(args)});
}

const Value& Interner::resolve(ValueId id) const {
    if (!id.valid() || id.raw >= next_.load(std::memory_order_acquire))
        throw InternalError("resolve: unknown value id " + std::to_string(id.raw));
    const Value* slot = values_.row(id.raw);
    if (slot == nullptr) throw InternalError("resolve: value storage missing for id " + std::to_string(id.raw));
    return *slot;
}

const std::int64_t* Interner::as_int(ValueId id) const {
    const auto* i = std::get_if<IntLit>(&resolve(id));
    return i == nullptr ? nullptr : &i->value;
}

std::string Interner::render(ValueId id) const {
    const Value& v = resolve(id);
    if (const auto* i = std::get_if<IntLit>(&v)) return std::to_string(i->value);
    const auto& c = std::get<Ctor>(v);
    std::string out = c.symbol;
    if (c.args.empty()) return out;
    out += '(';
    for (std::size_t k = 0; k < c.args.size(); ++k) {
        if (k != 0) out += ',';
        out += render(c.args[k]);
    }
    out += ')';
    return out;
}

std::strong_ordering Interner::compare(ValueId a, ValueId b) const {
    if (a == b) return std::strong_ordering::equal;
    const Value& va = resolve(a);
    const Value& vb = resolve(b);
    if (va.index() != vb.index()) return va.index() <=> vb.index();
    if (const auto* ia = std::get_if<IntLit>(&va)) return ia->value <=> std::get<IntLit>(vb).value;
    const auto& ca = std::get<Ctor>(va);
    const auto& cb = std::get<Ctor>(vb);
    if (auto c = ca.symbol <=> cb.symbol; c != 0) return c;
    if (auto c = ca.args.size() <=> cb.args.size(); c != 0) return c;
    for (std::size_t k = 0; k < ca.args.size(); ++k)
        if (auto c = compare(ca.args[k], cb.args[k]); c != 0) return c;
    return std::strong_ordering::equal;
}

} // namespace eagerlog
