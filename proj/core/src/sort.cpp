#include "abreach/sort.hpp"

#include "abreach/errors.hpp"

#include <algorithm>
#include <set>

namespace abreach {

int EnumDecl::index_of(const std::string& constant) const {
    auto it = std::find(constants.begin(), constants.end(), constant);
    return it == constants.end() ? -1 : static_cast<int>(it - constants.begin());
}

Sort Sort::enumeration(EnumRef decl) {
    if (!decl || decl->constants.empty()) { throw SortMismatch("enum sort without constants"); }
    std::set<std::string> seen(decl->constants.begin(), decl->constants.end());
    if (seen.size() != decl->constants.size()) { throw SortMismatch("duplicate constant in enum " + decl->name); }
    Sort s(SortKind::Enum);
    s.decl_ = std::move(decl);
    return s;
}

Sort Sort::array_of(const Sort& element) {
    if (!element.is_enum() && !element.is_int()) { throw SortMismatch("array elements must be enum or int"); }
    Sort s(SortKind::Array);
    s.elem_ = element.kind_;
    s.decl_ = element.decl_;
    return s;
}

Sort Sort::element() const {
    if (!is_array()) { throw SortMismatch(name() + " is not an array sort"); }
    if (elem_ == SortKind::Enum) { return enumeration(decl_); }
    return integer();
}

std::string Sort::name() const {
    switch (kind_) {
        case SortKind::Index: return "index";
        case SortKind::Int: return "int";
        case SortKind::Enum: return decl_->name;
        case SortKind::Array: return "(array index " + element().name() + ")";
    }
    return "?";
}

bool operator==(const Sort& a, const Sort& b) {
    if (a.kind_ != b.kind_) { return false; }
    if (a.kind_ == SortKind::Enum) { return a.decl_->name == b.decl_->name; }
    if (a.kind_ == SortKind::Array) {
        if (a.elem_ != b.elem_) { return false; }
        return a.elem_ != SortKind::Enum || a.decl_->name == b.decl_->name;
    }
    return true;
}

} // namespace abreach
