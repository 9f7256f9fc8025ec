#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dse {

// Finite ordered set of decoration names. Positions in declaration order are
// the working integer ids; all tree and series code speaks ids, names only
// appear at the I/O boundary.
class IndexSet {
  public:
    IndexSet() = default;
    explicit IndexSet(std::vector<std::string> names) {
        for (auto& n : names) add(std::move(n));
    }

    int add(std::string name) {
        if (name.empty()) throw std::invalid_argument("empty index name");
        if (ids_.count(name)) throw std::invalid_argument("duplicate index name: " + name);
        int id = static_cast<int>(names_.size());
        ids_.emplace(name, id);
        names_.push_back(std::move(name));
        return id;
    }

    int size() const { return static_cast<int>(names_.size()); }

    // -1 when absent
    int find(std::string_view name) const {
        auto it = ids_.find(std::string(name));
        return it == ids_.end() ? -1 : it->second;
    }

    int require(std::string_view name) const {
        int id = find(name);
        if (id < 0) throw std::invalid_argument("unknown index: " + std::string(name));
        return id;
    }

    const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const IndexSet& o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
};

}  // namespace dse
