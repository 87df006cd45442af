#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ergo/rational.hpp"

namespace ergo {

enum class GroupKind { Zd, Finite, Heisenberg };

// Normal-form coordinates of a group element.
//  Zd:         the d integer coordinates.
//  Heisenberg: the triple (a, b, c) of x^a y^b z^c with [x,y] = z central.
//  Finite:     a single index into the multiplication table.
struct GroupElement {
    std::uint32_t model_tag = 0;
    std::vector<std::int64_t> coords;

    bool operator==(const GroupElement&) const = default;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const {
        std::size_t h = g.model_tag;
        for (std::int64_t c : g.coords)
            h = h * 1000003u + static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull;
        return h;
    }
};

class GroupModel {
public:
    static GroupModel zd(int d);
    static GroupModel heisenberg();
    // table[i][j] = index of g_i * g_j; index 0 must be the identity.
    static GroupModel finite(std::vector<std::vector<int>> table,
                             std::vector<int> generator_indices);

    GroupKind kind() const { return kind_; }
    std::uint32_t tag() const { return tag_; }
    int coord_size() const;
    std::size_t finite_size() const { return table_.size(); }

    GroupElement identity() const;
    GroupElement element(std::vector<std::int64_t> coords) const;
    const std::vector<GroupElement>& generators() const { return generators_; }
    // Words over generator indices (negative i-1 means inverse of generator i-1
    // is encoded as -(i+1)); each must evaluate to the identity.
    const std::vector<std::vector<int>>& relations() const { return relations_; }

    GroupElement multiply(const GroupElement& g, const GroupElement& h) const;
    GroupElement inverse(const GroupElement& g) const;

    // Normal-form word of g as (generator index, signed exponent) pairs.
    // Finite groups have no closed normal form; see ActionEvaluator.
    std::vector<std::pair<int, std::int64_t>> normal_form_word(const GroupElement& g) const;

private:
    GroupModel() = default;
    void check_same_model(const GroupElement& g) const;

    GroupKind kind_ = GroupKind::Zd;
    std::uint32_t tag_ = 0;
    int dim_ = 0; // Zd only
    std::vector<std::vector<int>> table_;
    std::vector<GroupElement> generators_;
    std::vector<std::vector<int>> relations_;
};

// Shipped Folner rules: Zd boxes [0,k)^d, Heisenberg box {0<=a,b<k, 0<=c<k^2},
// Finite F_k = G for all k. All three families are nested in k.
class FolnerFamily {
public:
    explicit FolnerFamily(std::shared_ptr<const GroupModel> model) : model_(std::move(model)) {}

    const GroupModel& model() const { return *model_; }
    std::shared_ptr<const GroupModel> model_ptr() const { return model_; }

    std::vector<GroupElement> set(std::size_t k) const;
    std::size_t size(std::size_t k) const;

    // |F_k delta F_k g| / |F_k|, exact.
    Rational defect(std::size_t k, const GroupElement& g) const;

private:
    std::shared_ptr<const GroupModel> model_;
};

} // namespace ergo
