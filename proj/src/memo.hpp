#pragma once

// Memo table readable concurrently; insertions are idempotent since every
// value is a pure function of its key.

#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace unst::detail {

template <class Key, class Value, class Hash = std::hash<Key>>
class Memo {
public:
    template <class Compute>
    const Value& get(const Key& key, Compute&& compute)
    {
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(key);
            if (it != table_.end())
                return it->second;
        }
        Value v = compute();
        std::unique_lock lock(mutex_);
        return table_.try_emplace(key, std::move(v)).first->second;
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, Value, Hash> table_;
};

} // namespace unst::detail
