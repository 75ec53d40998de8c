#pragma once

#include <memory>
#include <string>
#include <vector>

namespace abreach {

struct EnumDecl {
    std::string name;
    std::vector<std::string> constants;

    /// Position of `constant`, or -1.
    int index_of(const std::string& constant) const;
};

using EnumRef = std::shared_ptr<const EnumDecl>;

enum class SortKind { Index, Int, Enum, Array };

/// Flat sorts: arrays map Index to Enum or Int elements.
class Sort {
public:
    static Sort index() { return Sort(SortKind::Index); }
    static Sort integer() { return Sort(SortKind::Int); }
    static Sort enumeration(EnumRef decl);
    static Sort array_of(const Sort& element);

    SortKind kind() const { return kind_; }
    bool is_index() const { return kind_ == SortKind::Index; }
    bool is_int() const { return kind_ == SortKind::Int; }
    bool is_enum() const { return kind_ == SortKind::Enum; }
    bool is_array() const { return kind_ == SortKind::Array; }

    /// Element sort of an array sort.
    Sort element() const;
    /// Enum declaration of an Enum sort or of an array-of-Enum sort.
    const EnumRef& decl() const { return decl_; }

    std::string name() const;

    friend bool operator==(const Sort& a, const Sort& b);
    friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }

private:
    explicit Sort(SortKind k) : kind_(k) {}

    SortKind kind_;
    SortKind elem_ = SortKind::Int;
    EnumRef decl_;
};

} // namespace abreach
