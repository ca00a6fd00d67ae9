#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace tlog {

// Interned string table. Ids are assigned in first-appearance order and are
// stable, so every downstream index is deterministic.
class Vocabulary {
   public:
    // Returns the id, interning the name if new.
    int32_t intern(const std::string& name);

    // Throws std::out_of_range naming the missing entry.
    int32_t id_of(const std::string& name) const;

    // -1 when absent.
    int32_t try_id(const std::string& name) const;

    const std::string& name_of(int32_t id) const;

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    // Closest names by edit distance, for error messages.
    std::vector<std::string> nearest(const std::string& query, std::size_t k = 3) const;

    bool operator==(const Vocabulary& o) const { return names_ == o.names_; }

   private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int32_t> index_;
};

}  // namespace tlog
