// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "voyager/verifier/verifier.hpp"

#include <json.hpp>

#include <condition_variable>
#include <mutex>
#include <optional>

namespace voyager::agent {

/// Cross-thread hooks between a running loop and the HTTP service: pause/resume,
/// human critiques, and the round-boundary snapshot.
class LoopControl {
public:
    void pause();
    void resume();
    bool paused() const;
    /// Blocks while paused. Returns false once stop() was called.
    bool wait_if_paused();

    void stop();
    bool stopped() const;

    /// Loop side: announce that a verdict is needed, then block for it. nullopt after stop().
    std::optional<verifier::VerificationResult> await_critique();
    bool verification_pending() const;
    /// Service side: false when no verification is pending or one was already delivered.
    bool offer_critique(verifier::VerificationResult verdict);

    void publish(nlohmann::json snapshot);
    nlohmann::json snapshot() const;

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    bool paused_ = false;
    bool stopped_ = false;
    bool pending_ = false;
    std::optional<verifier::VerificationResult> critique_;
    nlohmann::json snapshot_ = nlohmann::json::object();
};

} // namespace voyager::agent
