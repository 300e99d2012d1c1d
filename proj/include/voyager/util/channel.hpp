// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>

namespace voyager::util {

/// Unbounded multi-producer queue. pop() blocks until an item arrives or the channel closes.
template <typename T>
class Channel {
public:
    void push(T value)
    {
        {
            std::lock_guard lock(mu_);
            items_.push_back(std::move(value));
        }
        cv_.notify_all();
    }

    std::optional<T> pop()
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return !items_.empty() || closed_; });
        if (items_.empty())
            return std::nullopt;
        T v = std::move(items_.front());
        items_.pop_front();
        return v;
    }

    std::optional<T> try_pop()
    {
        std::lock_guard lock(mu_);
        if (items_.empty())
            return std::nullopt;
        T v = std::move(items_.front());
        items_.pop_front();
        return v;
    }

    void close()
    {
        {
            std::lock_guard lock(mu_);
            closed_ = true;
        }
        cv_.notify_all();
    }

    bool closed() const
    {
        std::lock_guard lock(mu_);
        return closed_;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        return items_.size();
    }

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<T> items_;
    bool closed_ = false;
};

} // namespace voyager::util
