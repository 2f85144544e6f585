/*
 * Copyright (C) 2026 The logpath Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOGPATH_EMU_STACK_HPP
#define LOGPATH_EMU_STACK_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "logpath/graph.hpp"
#include "logpath/signature.hpp"

namespace logpath {

/// The emulated app-level call stack maintained during matching. The
/// bottom frame is the segment's callback method; pushes and pops are
/// driven by CallEnter/Return edge traversals. Each frame remembers the
/// node a Return edge must target (the unique flow successor of the
/// originating call site), which keeps interprocedural walks realizable.
class EmuStack {
public:
    struct Frame {
        ApiSignature method;
        /// Absent for the bottom (callback) frame.
        std::optional<NodeId> return_to;
        /// Record index when this frame was pushed. A frame may only be
        /// popped via a Return edge after at least one record matched
        /// inside it; record-free descents are elided from paths.
        size_t index_at_push = 0;
    };

    EmuStack() = default;
    explicit EmuStack(ApiSignature callback_method);

    void push(ApiSignature method, std::optional<NodeId> return_to,
              size_t index_at_push = 0);
    void push(Frame frame);
    Frame pop();

    size_t size() const { return frames_.size(); }
    bool empty() const { return frames_.empty(); }
    const Frame& top() const { return frames_.back(); }
    const Frame& at(size_t depth) const { return frames_[depth]; }
    const ApiSignature& method_at(size_t depth) const
    {
        return frames_[depth].method;
    }

    /// Order-sensitive digest of the frame methods; O(1) thanks to a
    /// rolling hash updated on push/pop.
    uint64_t digest() const
    {
        return hashes_.empty() ? 0x9e3779b97f4a7c15ull : hashes_.back();
    }

private:
    std::vector<Frame> frames_;
    std::vector<uint64_t> hashes_;

    void push_hash(const ApiSignature& method);
};

} // namespace logpath

#endif
