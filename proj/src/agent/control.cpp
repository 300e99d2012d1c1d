// SPDX-License-Identifier: Apache-2.0
#include "voyager/agent/control.hpp"

namespace voyager::agent {

void LoopControl::pause()
{
    std::lock_guard lock(mu_);
    paused_ = true;
}

void LoopControl::resume()
{
    {
        std::lock_guard lock(mu_);
        paused_ = false;
    }
    cv_.notify_all();
}

bool LoopControl::paused() const
{
    std::lock_guard lock(mu_);
    return paused_;
}

bool LoopControl::wait_if_paused()
{
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !paused_ || stopped_; });
    return !stopped_;
}

void LoopControl::stop()
{
    {
        std::lock_guard lock(mu_);
        stopped_ = true;
    }
    cv_.notify_all();
}

bool LoopControl::stopped() const
{
    std::lock_guard lock(mu_);
    return stopped_;
}

std::optional<verifier::VerificationResult> LoopControl::await_critique()
{
    std::unique_lock lock(mu_);
    pending_ = true;
    critique_.reset();
    cv_.wait(lock, [&] { return critique_.has_value() || stopped_; });
    pending_ = false;
    auto out = std::move(critique_);
    critique_.reset();
    return out;
}

bool LoopControl::verification_pending() const
{
    std::lock_guard lock(mu_);
    return pending_ && !critique_;
}

bool LoopControl::offer_critique(verifier::VerificationResult verdict)
{
    {
        std::lock_guard lock(mu_);
        if (!pending_ || critique_)
            return false;
        if (verdict.success)
            verdict.critique.clear();
        else if (verdict.critique.empty())
            verdict.critique = "The task is not complete yet.";
        critique_ = std::move(verdict);
    }
    cv_.notify_all();
    return true;
}

void LoopControl::publish(nlohmann::json snapshot)
{
    std::lock_guard lock(mu_);
    snapshot_ = std::move(snapshot);
}

nlohmann::json LoopControl::snapshot() const
{
    std::lock_guard lock(mu_);
    return snapshot_;
}

} // namespace voyager::agent
