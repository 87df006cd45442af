#include "ergo/group.hpp"

#include <atomic>
#include <stdexcept>
#include <unordered_set>

namespace ergo {

namespace {
std::uint32_t next_tag() {
    static std::atomic<std::uint32_t> counter{1};
    return counter.fetch_add(1);
}
} // namespace

GroupModel GroupModel::zd(int d) {
    if (d < 1) throw std::invalid_argument("zd: dimension must be >= 1");
    GroupModel m;
    m.kind_ = GroupKind::Zd;
    m.tag_ = next_tag();
    m.dim_ = d;
    for (int i = 0; i < d; ++i) {
        GroupElement e{m.tag_, std::vector<std::int64_t>(d, 0)};
        e.coords[i] = 1;
        m.generators_.push_back(std::move(e));
    }
    // commutators [e_i, e_j]
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            m.relations_.push_back({i + 1, j + 1, -(i + 1), -(j + 1)});
    return m;
}

GroupModel GroupModel::heisenberg() {
    GroupModel m;
    m.kind_ = GroupKind::Heisenberg;
    m.tag_ = next_tag();
    m.generators_ = {
        GroupElement{m.tag_, {1, 0, 0}}, // x
        GroupElement{m.tag_, {0, 1, 0}}, // y
        GroupElement{m.tag_, {0, 0, 1}}, // z
    };
    // [x,y] = z, z central
    m.relations_ = {
        {1, 2, -1, -2, -3},
        {1, 3, -1, -3},
        {2, 3, -2, -3},
    };
    return m;
}

GroupModel GroupModel::finite(std::vector<std::vector<int>> table,
                              std::vector<int> generator_indices) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw std::invalid_argument("finite: empty table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("finite: table not square");
        for (int v : row)
            if (v < 0 || v >= n) throw std::invalid_argument("finite: index out of range");
    }
    for (int j = 0; j < n; ++j)
        if (table[0][j] != j || table[j][0] != j)
            throw std::invalid_argument("finite: index 0 is not the identity");
    GroupModel m;
    m.kind_ = GroupKind::Finite;
    m.tag_ = next_tag();
    m.table_ = std::move(table);
    for (int gi : generator_indices) {
        if (gi < 0 || gi >= n) throw std::invalid_argument("finite: bad generator index");
        m.generators_.push_back(GroupElement{m.tag_, {gi}});
    }
    if (m.generators_.empty())
        throw std::invalid_argument("finite: need at least one generator");
    return m;
}

int GroupModel::coord_size() const {
    switch (kind_) {
    case GroupKind::Zd: return dim_;
    case GroupKind::Heisenberg: return 3;
    case GroupKind::Finite: return 1;
    }
    return 0;
}

GroupElement GroupModel::identity() const {
    return GroupElement{tag_, std::vector<std::int64_t>(coord_size(), 0)};
}

GroupElement GroupModel::element(std::vector<std::int64_t> coords) const {
    if (static_cast<int>(coords.size()) != coord_size())
        throw std::invalid_argument("element: wrong coordinate count");
    if (kind_ == GroupKind::Finite &&
        (coords[0] < 0 || coords[0] >= static_cast<std::int64_t>(table_.size())))
        throw std::invalid_argument("element: finite index out of range");
    return GroupElement{tag_, std::move(coords)};
}

void GroupModel::check_same_model(const GroupElement& g) const {
    if (g.model_tag != tag_) throw std::invalid_argument("group element from a different model");
}

GroupElement GroupModel::multiply(const GroupElement& g, const GroupElement& h) const {
    check_same_model(g);
    check_same_model(h);
    switch (kind_) {
    case GroupKind::Zd: {
        GroupElement r{tag_, g.coords};
        for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += h.coords[i];
        return r;
    }
    case GroupKind::Heisenberg: {
        // x^a y^b z^c corresponds to the 3x3 unitriangular matrix
        // [[1,a,c],[0,1,b],[0,0,1]]; product picks up a1*b2 in the corner.
        const auto a1 = g.coords[0], b1 = g.coords[1], c1 = g.coords[2];
        const auto a2 = h.coords[0], b2 = h.coords[1], c2 = h.coords[2];
        return GroupElement{tag_, {a1 + a2, b1 + b2, c1 + c2 + a1 * b2}};
    }
    case GroupKind::Finite:
        return GroupElement{tag_, {table_[g.coords[0]][h.coords[0]]}};
    }
    throw std::logic_error("unreachable");
}

GroupElement GroupModel::inverse(const GroupElement& g) const {
    check_same_model(g);
    switch (kind_) {
    case GroupKind::Zd: {
        GroupElement r{tag_, g.coords};
        for (auto& c : r.coords) c = -c;
        return r;
    }
    case GroupKind::Heisenberg: {
        const auto a = g.coords[0], b = g.coords[1], c = g.coords[2];
        return GroupElement{tag_, {-a, -b, a * b - c}};
    }
    case GroupKind::Finite: {
        const int i = static_cast<int>(g.coords[0]);
        for (std::size_t j = 0; j < table_.size(); ++j)
            if (table_[i][j] == 0) return GroupElement{tag_, {static_cast<std::int64_t>(j)}};
        throw std::logic_error("finite: no inverse found (table is not a group)");
    }
    }
    throw std::logic_error("unreachable");
}

std::vector<std::pair<int, std::int64_t>>
GroupModel::normal_form_word(const GroupElement& g) const {
    check_same_model(g);
    if (kind_ == GroupKind::Finite)
        throw std::logic_error("finite groups have no coordinate normal form word");
    std::vector<std::pair<int, std::int64_t>> word;
    for (std::size_t i = 0; i < g.coords.size(); ++i)
        if (g.coords[i] != 0) word.emplace_back(static_cast<int>(i), g.coords[i]);
    return word;
}

std::vector<GroupElement> FolnerFamily::set(std::size_t k) const {
    if (k == 0) throw std::invalid_argument("folner_set: k must be >= 1");
    const auto& m = *model_;
    std::vector<GroupElement> out;
    switch (m.kind()) {
    case GroupKind::Zd: {
        const int d = m.coord_size();
        std::vector<std::int64_t> c(d, 0);
        while (true) {
            out.push_back(GroupElement{m.tag(), c});
            int i = 0;
            for (; i < d; ++i) {
                if (++c[i] < static_cast<std::int64_t>(k)) break;
                c[i] = 0;
            }
            if (i == d) break;
        }
        break;
    }
    case GroupKind::Heisenberg: {
        const auto kk = static_cast<std::int64_t>(k);
        for (std::int64_t a = 0; a < kk; ++a)
            for (std::int64_t b = 0; b < kk; ++b)
                for (std::int64_t c = 0; c < kk * kk; ++c)
                    out.push_back(GroupElement{m.tag(), {a, b, c}});
        break;
    }
    case GroupKind::Finite:
        for (std::size_t i = 0; i < m.finite_size(); ++i)
            out.push_back(GroupElement{m.tag(), {static_cast<std::int64_t>(i)}});
        break;
    }
    return out;
}

std::size_t FolnerFamily::size(std::size_t k) const {
    if (k == 0) throw std::invalid_argument("folner_set: k must be >= 1");
    switch (model_->kind()) {
    case GroupKind::Zd: {
        std::size_t s = 1;
        for (int i = 0; i < model_->coord_size(); ++i) s *= k;
        return s;
    }
    case GroupKind::Heisenberg: return k * k * k * k;
    case GroupKind::Finite: return model_->finite_size();
    }
    return 0;
}

Rational FolnerFamily::defect(std::size_t k, const GroupElement& g) const {
    const auto fk = set(k);
    std::unordered_set<GroupElement, GroupElementHash> base(fk.begin(), fk.end());
    std::size_t intersection = 0;
    for (const auto& e : fk)
        if (base.count(model_->multiply(e, g))) ++intersection;
    // |F delta Fg| = |F| + |Fg| - 2|F cap Fg|, and |Fg| = |F|.
    const auto sym = 2 * (fk.size() - intersection);
    return Rational(static_cast<std::int64_t>(sym), static_cast<std::int64_t>(fk.size()));
}

} // namespace ergo
