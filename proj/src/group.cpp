#include "clawmark/group.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

namespace clawmark {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Structural: return "structural error";
        case ErrorKind::Capacity: return "capacity error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Validation: return "validation error";
        case ErrorKind::InvalidMove: return "invalid move";
        case ErrorKind::InapplicableMove: return "inapplicable move";
        case ErrorKind::Precondition: return "precondition violation";
        case ErrorKind::ProgressFailure: return "progress failure";
        case ErrorKind::Internal: return "internal invariant violation";
    }
    return "error";
}

GroupSpec::GroupSpec(std::vector<int> factors) : factors_(std::move(factors)) {
    if (factors_.empty())
        fail(ErrorKind::Structural, "group needs at least one cyclic factor");
    long long order = 1;
    for (int m : factors_) {
        if (m < 2)
            fail(ErrorKind::Structural,
                 "cyclic factor must be >= 2, got " + std::to_string(m));
        order *= m;
        if (order > std::numeric_limits<ElemIdx>::max())
            fail(ErrorKind::Capacity,
                 "group order exceeds the element-index limit of " +
                     std::to_string(std::numeric_limits<ElemIdx>::max()));
    }
    order_ = static_cast<int>(order);
    strides_.assign(factors_.size(), 1);
    for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i)
        strides_[i] = strides_[i + 1] * factors_[i + 1];
}

GroupSpec GroupSpec::parse(std::string_view literal) {
    std::vector<int> factors;
    std::size_t pos = 0;
    while (pos < literal.size()) {
        char c = literal[pos];
        if (c != 'Z' && c != 'z')
            fail(ErrorKind::Parse,
                 "bad group literal '" + std::string(literal) + "': expected 'Z' at position " +
                     std::to_string(pos + 1));
        ++pos;
        int value = 0;
        auto [next, ec] = std::from_chars(literal.data() + pos, literal.data() + literal.size(), value);
        if (ec != std::errc{} || next == literal.data() + pos)
            fail(ErrorKind::Parse,
                 "bad group literal '" + std::string(literal) + "': expected a cyclic order after 'Z'");
        factors.push_back(value);
        pos = static_cast<std::size_t>(next - literal.data());
        if (pos == literal.size()) break;
        if (literal[pos] != 'x' && literal[pos] != 'X')
            fail(ErrorKind::Parse,
                 "bad group literal '" + std::string(literal) + "': expected 'x' at position " +
                     std::to_string(pos + 1));
        ++pos;
        if (pos == literal.size())
            fail(ErrorKind::Parse,
                 "bad group literal '" + std::string(literal) + "': trailing 'x'");
    }
    if (factors.empty())
        fail(ErrorKind::Parse, "empty group literal");
    return GroupSpec(std::move(factors));
}

std::string GroupSpec::literal() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out << 'x';
        out << 'Z' << factors_[i];
    }
    return out.str();
}

ElemIdx GroupSpec::add(ElemIdx a, ElemIdx b) const {
    int sum = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        int m = factors_[i];
        int s = strides_[i];
        int ra = (a / s) % m;
        int rb = (b / s) % m;
        int rs = ra + rb;
        if (rs >= m) rs -= m;
        sum += rs * s;
    }
    return static_cast<ElemIdx>(sum);
}

ElemIdx GroupSpec::neg(ElemIdx a) const {
    int result = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        int m = factors_[i];
        int s = strides_[i];
        int r = (a / s) % m;
        int rn = r == 0 ? 0 : m - r;
        result += rn * s;
    }
    return static_cast<ElemIdx>(result);
}

GroupElement GroupSpec::element_at(ElemIdx index) const {
    if (index >= order_)
        fail(ErrorKind::Structural,
             "element index " + std::to_string(index) + " out of range for " + literal());
    GroupElement element;
    element.residues.resize(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
        element.residues[i] = (index / strides_[i]) % factors_[i];
    return element;
}

ElemIdx GroupSpec::index_of(const GroupElement& element) const {
    if (element.residues.size() != factors_.size())
        fail(ErrorKind::Structural,
             "element has " + std::to_string(element.residues.size()) + " residues, group " +
                 literal() + " has " + std::to_string(factors_.size()) + " factors");
    int index = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        int r = element.residues[i];
        if (r < 0 || r >= factors_[i])
            fail(ErrorKind::Validation,
                 "residue " + std::to_string(r) + " out of range [0," +
                     std::to_string(factors_[i]) + ") in " + literal());
        index += r * strides_[i];
    }
    return static_cast<ElemIdx>(index);
}

std::string GroupSpec::format_element(ElemIdx index) const {
    GroupElement e = element_at(index);
    std::ostringstream out;
    for (std::size_t i = 0; i < e.residues.size(); ++i) {
        if (i) out << ',';
        out << e.residues[i];
    }
    return out.str();
}

ElemIdx GroupSpec::parse_element(std::string_view literal) const {
    GroupElement element;
    std::size_t pos = 0;
    while (true) {
        int value = 0;
        auto [next, ec] = std::from_chars(literal.data() + pos, literal.data() + literal.size(), value);
        if (ec != std::errc{} || next == literal.data() + pos)
            fail(ErrorKind::Parse,
                 "bad element literal '" + std::string(literal) + "' for " + this->literal());
        element.residues.push_back(value);
        pos = static_cast<std::size_t>(next - literal.data());
        if (pos == literal.size()) break;
        if (literal[pos] != ',')
            fail(ErrorKind::Parse,
                 "bad element literal '" + std::string(literal) + "': expected ',' at position " +
                     std::to_string(pos + 1));
        ++pos;
    }
    if (element.residues.size() != factors_.size())
        fail(ErrorKind::Parse,
             "element literal '" + std::string(literal) + "' has " +
                 std::to_string(element.residues.size()) + " residues, group " + this->literal() +
                 " needs " + std::to_string(factors_.size()));
    for (std::size_t i = 0; i < factors_.size(); ++i)
        if (element.residues[i] < 0 || element.residues[i] >= factors_[i])
            fail(ErrorKind::Parse,
                 "element literal '" + std::string(literal) + "': residue " +
                     std::to_string(element.residues[i]) + " out of range [0," +
                     std::to_string(factors_[i]) + ") in " + this->literal());
    return index_of(element);
}

GroupElement add(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
    return spec.element_at(spec.add(spec.index_of(a), spec.index_of(b)));
}

GroupElement neg(const GroupSpec& spec, const GroupElement& a) {
    return spec.element_at(spec.neg(spec.index_of(a)));
}

int element_index(const GroupSpec& spec, const GroupElement& a) {
    return spec.index_of(a);
}

GroupElement index_element(const GroupSpec& spec, int index) {
    if (index < 0 || index >= spec.order())
        fail(ErrorKind::Structural, "element index out of range");
    return spec.element_at(static_cast<ElemIdx>(index));
}

std::vector<GroupElement> enumerate_elements(const GroupSpec& spec) {
    std::vector<GroupElement> elements;
    elements.reserve(spec.order());
    for (int i = 0; i < spec.order(); ++i)
        elements.push_back(spec.element_at(static_cast<ElemIdx>(i)));
    return elements;
}

}  // namespace clawmark
