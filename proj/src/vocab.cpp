#include "tlog/vocab.hpp"

#include <algorithm>
#include <stdexcept>

namespace tlog {

int32_t Vocabulary::intern(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const int32_t id = static_cast<int32_t>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
}

int32_t Vocabulary::id_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown name: '" + name + "'");
    return it->second;
}

int32_t Vocabulary::try_id(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

const std::string& Vocabulary::name_of(int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= names_.size())
        throw std::out_of_range("vocabulary id " + std::to_string(id) + " out of range");
    return names_[static_cast<std::size_t>(id)];
}

namespace {
std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}
}  // namespace

std::vector<std::string> Vocabulary::nearest(const std::string& query, std::size_t k) const {
    std::vector<std::pair<std::size_t, std::string>> scored;
    scored.reserve(names_.size());
    for (const auto& n : names_) scored.emplace_back(edit_distance(query, n), n);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace tlog
