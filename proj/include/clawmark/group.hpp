#ifndef CLAWMARK_GROUP_HPP
#define CLAWMARK_GROUP_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clawmark/error.hpp"

namespace clawmark {

/// Index of a group element in the fixed mixed-radix enumeration, used as the
/// compact in-memory representation of an element everywhere downstream.
using ElemIdx = std::uint16_t;

/// A group element spelled out as one residue per cyclic factor.
struct GroupElement {
    std::vector<int> residues;

    bool operator==(const GroupElement& other) const = default;
};

/**
 * A finite abelian group presented as a product of cyclic factors Z_{m_1} x
 * ... x Z_{m_r}. Presentations are not normalized: Z4 and Z2xZ2 are distinct
 * specs. Elements are indexed in mixed-radix order with the first factor most
 * significant, which fixes the coordinate order of the ambient lattice.
 */
class GroupSpec {
public:
    explicit GroupSpec(std::vector<int> factors);

    /// Parses a group literal such as "Z2", "Z3", "Z2xZ2" (case-insensitive
    /// on the 'Z' and 'x').
    static GroupSpec parse(std::string_view literal);

    int order() const { return order_; }
    int rank() const { return static_cast<int>(factors_.size()); }
    const std::vector<int>& factors() const { return factors_; }
    std::string literal() const;

    static constexpr ElemIdx kZero = 0;

    ElemIdx add(ElemIdx a, ElemIdx b) const;
    ElemIdx neg(ElemIdx a) const;
    ElemIdx sub(ElemIdx a, ElemIdx b) const { return add(a, neg(b)); }

    GroupElement element_at(ElemIdx index) const;
    ElemIdx index_of(const GroupElement& element) const;

    /// Element literal: a single integer for one factor, comma-joined
    /// residues for several, e.g. "1" or "1,0".
    std::string format_element(ElemIdx index) const;
    ElemIdx parse_element(std::string_view literal) const;

    bool operator==(const GroupSpec& other) const { return factors_ == other.factors_; }

private:
    std::vector<int> factors_;
    std::vector<int> strides_;  // strides_[i] = product of factors after i
    int order_;
};

// Element-level operations mirroring the group law on residue vectors.
GroupElement add(const GroupSpec& spec, const GroupElement& a, const GroupElement& b);
GroupElement neg(const GroupSpec& spec, const GroupElement& a);
int element_index(const GroupSpec& spec, const GroupElement& a);
GroupElement index_element(const GroupSpec& spec, int index);

inline std::string format_element(const GroupSpec& spec, ElemIdx index) {
    return spec.format_element(index);
}
inline ElemIdx parse_element(const GroupSpec& spec, std::string_view literal) {
    return spec.parse_element(literal);
}

/// All |G| elements in index order, starting with zero.
std::vector<GroupElement> enumerate_elements(const GroupSpec& spec);

}  // namespace clawmark

#endif
